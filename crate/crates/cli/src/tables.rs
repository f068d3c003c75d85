//! Preset experiment grids with published reference coverages, used by the
//! `reproduce` subcommand for side-by-side comparisons.
//!
//! Coverage numbers are percentages at nominal 90/95/99 in method order
//! CV_C, CV_AR, CV_PZ, AM-PW, NW-PW unless a preset says otherwise.

use fdcv_core::sim::{DgpFamily, DgpSpec, Method};

pub const ALL_METHODS: [Method; 5] = [
    Method::CvC,
    Method::CvAr,
    Method::CvPz,
    Method::AmPw,
    Method::NwPw,
];

#[derive(Debug, Clone)]
pub struct ReferenceCell {
    pub label: String,
    pub family: DgpFamily,
    pub n: usize,
    pub c: f64,
    pub methods: Vec<Method>,
    /// Reference coverage per method at 90/95/99, in percent.
    pub reference: Vec<[f64; 3]>,
}

impl ReferenceCell {
    pub fn dgp(&self) -> DgpSpec {
        DgpSpec::new(self.family, self.n).expect("preset processes are valid")
    }
}

fn cell(
    label: &str,
    family: DgpFamily,
    n: usize,
    c: f64,
    methods: &[Method],
    reference: &[[f64; 3]],
) -> ReferenceCell {
    assert_eq!(methods.len(), reference.len());
    ReferenceCell {
        label: label.to_string(),
        family,
        n,
        c,
        methods: methods.to_vec(),
        reference: reference.to_vec(),
    }
}

const C_DEFAULT: f64 = 0.8;

/// Identifiers accepted by `reproduce --table`.
pub const TABLE_IDS: [&str; 8] = ["1", "2", "3", "4", "5", "6", "7", "c-study"];

pub fn describe(id: &str) -> &'static str {
    match id {
        "1" => "AR(1) coverage, phi in {0.1,...,0.95}, n in {50, 200}",
        "2" => "white-noise coverage, n in {50, 200}",
        "3" => "MA(1) coverage, psi in {-0.3, -0.5, -0.7}, n in {50, 200}",
        "4" => "MA(1) relative efficiency at 95% (derived from the table-3 runs)",
        "5" => "MA(2)/MA(3) coverage, n = 50",
        "6" => "MA(2)/MA(3) coverage, n = 200",
        "7" => "AR(2) coverage with coefficients (phi/2, phi/2), n in {50, 200}",
        "c-study" => "band exponent study: c in {0.2, 0.5, 0.8, 0.9} on AR(1) 0.9, n = 50",
        _ => "unknown table",
    }
}

pub fn table_cells(id: &str) -> Option<Vec<ReferenceCell>> {
    match id {
        "1" => Some(table1()),
        "2" => Some(table2()),
        "3" | "4" => Some(table3()),
        "5" => Some(table_maq(50)),
        "6" => Some(table_maq(200)),
        "7" => Some(table_ar2()),
        "c-study" => Some(c_study()),
        _ => None,
    }
}

fn table1() -> Vec<ReferenceCell> {
    let rows: [(f64, [[f64; 3]; 5], [[f64; 3]; 5]); 6] = [
        (
            0.1,
            [
                [86.7, 91.9, 97.4],
                [86.7, 91.9, 97.4],
                [87.2, 92.5, 97.8],
                [87.7, 93.1, 97.7],
                [85.3, 90.8, 96.4],
            ],
            [
                [87.3, 93.1, 98.3],
                [87.8, 93.3, 98.3],
                [86.9, 92.7, 98.4],
                [89.6, 94.8, 99.0],
                [88.4, 94.2, 98.8],
            ],
        ),
        (
            0.3,
            [
                [81.5, 88.7, 94.9],
                [82.1, 88.6, 94.6],
                [80.6, 87.9, 95.2],
                [86.5, 92.0, 97.2],
                [85.2, 90.6, 96.3],
            ],
            [
                [85.2, 91.3, 97.2],
                [87.3, 92.8, 97.8],
                [81.2, 88.0, 95.7],
                [89.6, 94.6, 98.9],
                [88.6, 94.1, 98.8],
            ],
        ),
        (
            0.5,
            [
                [79.1, 85.3, 92.8],
                [80.3, 86.2, 92.8],
                [76.3, 82.9, 91.6],
                [85.4, 90.6, 96.3],
                [84.4, 89.9, 95.7],
            ],
            [
                [84.7, 91.0, 96.7],
                [87.9, 93.1, 97.7],
                [77.3, 84.4, 92.9],
                [89.0, 94.1, 98.8],
                [88.5, 93.8, 98.7],
            ],
        ),
        (
            0.7,
            [
                [75.1, 81.8, 89.9],
                [79.2, 84.5, 90.9],
                [68.7, 76.7, 87.3],
                [82.7, 88.1, 94.3],
                [81.8, 87.5, 94.0],
            ],
            [
                [85.0, 90.5, 96.6],
                [87.5, 92.6, 97.6],
                [79.4, 85.8, 93.2],
                [88.0, 93.4, 98.3],
                [87.9, 92.9, 98.4],
            ],
        ),
        (
            0.9,
            [
                [70.8, 77.2, 84.7],
                [75.7, 81.5, 88.0],
                [46.6, 53.6, 66.7],
                [71.7, 77.6, 86.9],
                [71.1, 76.9, 86.5],
            ],
            [
                [84.1, 89.4, 94.8],
                [85.6, 90.8, 95.7],
                [67.2, 74.8, 86.2],
                [84.8, 89.6, 95.9],
                [84.7, 89.4, 95.9],
            ],
        ),
        (
            0.95,
            [
                [68.6, 74.4, 82.4],
                [73.2, 78.8, 85.7],
                [33.4, 39.8, 51.2],
                [62.7, 70.3, 79.5],
                [62.2, 69.9, 79.0],
            ],
            [
                [82.0, 87.3, 93.4],
                [82.8, 88.1, 94.1],
                [53.1, 60.4, 73.0],
                [79.9, 86.2, 92.9],
                [79.9, 86.0, 92.8],
            ],
        ),
    ];
    let mut cells = Vec::new();
    for (phi, n50, n200) in rows {
        for (n, reference) in [(50usize, n50), (200usize, n200)] {
            cells.push(cell(
                &format!("AR(1) phi = {phi}, n = {n}"),
                DgpFamily::Ar1 { phi },
                n,
                C_DEFAULT,
                &ALL_METHODS,
                &reference,
            ));
        }
    }
    cells
}

fn table2() -> Vec<ReferenceCell> {
    let n50: [[f64; 3]; 5] = [
        [88.8, 93.4, 98.3],
        [88.9, 93.5, 98.3],
        [89.7, 94.5, 98.8],
        [88.1, 93.1, 97.9],
        [85.5, 90.9, 96.4],
    ];
    let n200: [[f64; 3]; 5] = [
        [89.5, 94.6, 99.0],
        [89.7, 94.6, 99.1],
        [89.9, 94.9, 99.2],
        [89.7, 94.7, 99.0],
        [88.4, 94.1, 98.8],
    ];
    vec![
        cell(
            "white noise, n = 50",
            DgpFamily::WhiteNoise,
            50,
            C_DEFAULT,
            &ALL_METHODS,
            &n50,
        ),
        cell(
            "white noise, n = 200",
            DgpFamily::WhiteNoise,
            200,
            C_DEFAULT,
            &ALL_METHODS,
            &n200,
        ),
    ]
}

fn table3() -> Vec<ReferenceCell> {
    let rows: [(f64, [[f64; 3]; 5], [[f64; 3]; 5]); 3] = [
        (
            -0.3,
            [
                [92.0, 95.3, 98.4],
                [92.4, 95.5, 98.3],
                [95.2, 97.7, 99.5],
                [92.2, 95.9, 99.1],
                [86.0, 90.9, 96.4],
            ],
            [
                [90.2, 95.2, 99.1],
                [90.2, 95.2, 99.0],
                [96.0, 98.3, 99.8],
                [93.1, 97.0, 99.7],
                [89.4, 94.5, 98.9],
            ],
        ),
        (
            -0.5,
            [
                [92.0, 95.6, 98.7],
                [91.9, 95.4, 98.6],
                [97.2, 98.7, 99.7],
                [96.6, 98.5, 99.7],
                [84.7, 89.7, 95.3],
            ],
            [
                [91.7, 95.8, 99.1],
                [91.7, 95.8, 99.1],
                [97.0, 98.5, 99.8],
                [97.7, 99.4, 100.0],
                [89.4, 94.5, 98.6],
            ],
        ),
        (
            -0.7,
            [
                [95.8, 97.7, 99.3],
                [95.7, 97.7, 99.3],
                [99.2, 99.8, 100.0],
                [99.5, 99.9, 100.0],
                [85.5, 91.0, 95.4],
            ],
            [
                [94.8, 97.9, 99.7],
                [95.0, 98.0, 99.7],
                [98.4, 99.4, 100.0],
                [100.0, 100.0, 100.0],
                [87.5, 92.4, 96.6],
            ],
        ),
    ];
    let mut cells = Vec::new();
    for (psi, n50, n200) in rows {
        for (n, reference) in [(50usize, n50), (200usize, n200)] {
            cells.push(cell(
                &format!("MA(1) psi = {psi}, n = {n}"),
                DgpFamily::Ma1 { psi },
                n,
                C_DEFAULT,
                &ALL_METHODS,
                &reference,
            ));
        }
    }
    cells
}

/// Reference relative efficiencies for the MA(1) study at 95%:
/// (psi, n, [CV_C, AM-PW, NW-PW]).
pub const MA1_EFFICIENCY_REFERENCE: [(f64, usize, [f64; 3]); 6] = [
    (-0.3, 50, [1.00, 0.31, 0.05]),
    (-0.3, 200, [1.00, 0.08, 0.23]),
    (-0.5, 50, [1.00, 0.11, 0.09]),
    (-0.5, 200, [1.00, 0.09, 1.00]),
    (-0.7, 50, [1.00, 0.20, 0.64]),
    (-0.7, 200, [1.00, 0.00, 0.99]),
];

fn table_maq(n: usize) -> Vec<ReferenceCell> {
    type Block = [[f64; 3]; 5];
    // (alpha, beta, per-q blocks) with q = 2 then q = 3
    let rows: [(f64, f64, Block, Block); 4] = if n == 50 {
        [
            (
                0.0,
                -0.3,
                [
                    [93.2, 96.6, 99.0],
                    [93.2, 96.5, 99.0],
                    [96.7, 98.7, 99.8],
                    [97.2, 99.0, 99.8],
                    [86.1, 90.3, 95.5],
                ],
                [
                    [95.7, 97.7, 99.4],
                    [95.8, 97.7, 99.4],
                    [97.6, 99.2, 99.9],
                    [96.9, 98.8, 99.8],
                    [95.3, 97.8, 99.6],
                ],
            ),
            (
                -0.1,
                -0.3,
                [
                    [94.0, 96.9, 99.2],
                    [94.0, 96.7, 99.2],
                    [97.8, 99.2, 99.9],
                    [98.2, 99.4, 99.9],
                    [86.0, 90.5, 95.9],
                ],
                [
                    [96.8, 98.2, 99.4],
                    [96.5, 98.1, 99.4],
                    [99.0, 99.7, 99.9],
                    [98.7, 99.6, 99.9],
                    [96.4, 98.4, 99.7],
                ],
            ),
            (
                0.0,
                0.3,
                [
                    [83.3, 89.4, 95.6],
                    [83.7, 89.4, 95.9],
                    [83.4, 89.7, 96.1],
                    [78.5, 85.6, 93.7],
                    [81.7, 87.6, 95.0],
                ],
                [
                    [82.3, 89.1, 95.3],
                    [82.8, 89.6, 95.6],
                    [81.5, 88.6, 95.6],
                    [78.8, 86.0, 93.8],
                    [77.4, 84.4, 92.3],
                ],
            ),
            (
                0.1,
                0.3,
                [
                    [82.2, 88.5, 95.3],
                    [82.0, 88.5, 95.0],
                    [82.0, 88.7, 95.4],
                    [80.0, 86.7, 94.3],
                    [82.8, 88.3, 95.2],
                ],
                [
                    [81.2, 87.6, 94.2],
                    [81.5, 87.7, 94.4],
                    [80.2, 87.2, 94.3],
                    [76.8, 84.2, 92.4],
                    [76.2, 83.4, 92.0],
                ],
            ),
        ]
    } else {
        [
            (
                0.0,
                -0.3,
                [
                    [91.7, 95.9, 99.0],
                    [91.7, 95.8, 99.0],
                    [96.9, 98.8, 99.8],
                    [98.6, 99.7, 100.0],
                    [89.7, 94.3, 98.6],
                ],
                [
                    [93.4, 97.0, 99.4],
                    [93.3, 97.0, 99.4],
                    [97.5, 99.0, 99.9],
                    [98.6, 99.8, 100.0],
                    [89.8, 94.1, 98.5],
                ],
            ),
            (
                -0.1,
                -0.3,
                [
                    [92.4, 96.0, 99.1],
                    [92.2, 96.1, 99.1],
                    [97.7, 98.9, 99.9],
                    [99.4, 100.0, 100.0],
                    [89.7, 94.0, 98.4],
                ],
                [
                    [94.3, 97.5, 99.5],
                    [94.3, 97.5, 99.5],
                    [98.3, 99.3, 100.0],
                    [99.8, 100.0, 100.0],
                    [88.1, 92.9, 97.4],
                ],
            ),
            (
                0.0,
                0.3,
                [
                    [86.4, 91.9, 97.6],
                    [86.7, 92.0, 97.5],
                    [84.2, 90.1, 97.1],
                    [80.7, 87.8, 95.7],
                    [86.1, 91.8, 97.9],
                ],
                [
                    [87.8, 93.1, 98.0],
                    [88.6, 93.4, 98.1],
                    [85.1, 91.2, 97.6],
                    [81.0, 87.9, 95.9],
                    [85.2, 91.1, 97.6],
                ],
            ),
            (
                0.1,
                0.3,
                [
                    [85.7, 91.4, 97.3],
                    [86.4, 91.6, 97.4],
                    [82.0, 88.4, 96.1],
                    [81.9, 88.8, 96.3],
                    [86.3, 92.1, 98.1],
                ],
                [
                    [87.9, 93.4, 97.9],
                    [88.8, 93.7, 98.1],
                    [84.4, 90.7, 97.0],
                    [79.3, 86.0, 94.7],
                    [85.0, 91.1, 97.3],
                ],
            ),
        ]
    };
    let mut cells = Vec::new();
    for (alpha, beta, q2, q3) in rows {
        for (q, reference) in [(2usize, q2), (3usize, q3)] {
            cells.push(cell(
                &format!("MA({q}) alpha = {alpha}, beta = {beta}, n = {n}"),
                DgpFamily::Maq { alpha, beta, q },
                n,
                C_DEFAULT,
                &ALL_METHODS,
                &reference,
            ));
        }
    }
    cells
}

fn table_ar2() -> Vec<ReferenceCell> {
    let rows: [(f64, [[f64; 3]; 5], [[f64; 3]; 5]); 4] = [
        (
            0.3,
            [
                [80.3, 87.5, 94.2],
                [80.2, 87.1, 94.0],
                [79.4, 94.2, 94.4],
                [81.1, 87.2, 94.7],
                [81.2, 87.4, 94.7],
            ],
            [
                [84.6, 90.7, 96.8],
                [85.6, 91.3, 97.2],
                [80.4, 87.2, 95.3],
                [83.1, 89.8, 96.8],
                [85.5, 91.5, 97.7],
            ],
        ),
        (
            0.5,
            [
                [75.8, 82.5, 90.5],
                [76.4, 82.8, 90.6],
                [72.5, 80.2, 89.9],
                [74.0, 81.3, 90.0],
                [75.9, 83.1, 91.5],
            ],
            [
                [84.4, 90.5, 96.2],
                [85.7, 91.2, 96.7],
                [77.4, 84.0, 92.3],
                [77.5, 84.5, 93.3],
                [82.7, 89.1, 96.3],
            ],
        ),
        (
            0.7,
            [
                [71.4, 77.7, 86.8],
                [74.1, 79.6, 87.4],
                [61.9, 70.3, 81.9],
                [62.5, 70.6, 82.3],
                [66.9, 74.0, 85.1],
            ],
            [
                [84.5, 89.8, 95.8],
                [86.3, 91.1, 96.4],
                [77.4, 83.9, 92.7],
                [69.2, 77.9, 87.9],
                [77.0, 83.8, 92.8],
            ],
        ),
        (
            0.9,
            [
                [65.5, 71.4, 80.2],
                [68.3, 74.4, 82.5],
                [38.8, 44.9, 57.5],
                [42.0, 48.8, 60.5],
                [45.8, 53.0, 65.1],
            ],
            [
                [83.4, 88.4, 93.4],
                [84.3, 89.2, 94.4],
                [59.6, 67.6, 79.0],
                [53.5, 61.3, 73.2],
                [58.5, 66.3, 77.9],
            ],
        ),
    ];
    let mut cells = Vec::new();
    for (phi, n50, n200) in rows {
        for (n, reference) in [(50usize, n50), (200usize, n200)] {
            cells.push(cell(
                &format!("AR(2) (phi/2, phi/2), phi = {phi}, n = {n}"),
                DgpFamily::Ar2HalfPhi { phi },
                n,
                C_DEFAULT,
                &ALL_METHODS,
                &reference,
            ));
        }
    }
    cells
}

fn c_study() -> Vec<ReferenceCell> {
    let rows: [(f64, [[f64; 3]; 3]); 4] = [
        (
            0.2,
            [
                [59.9, 65.4, 74.5],
                [75.7, 80.6, 86.5],
                [44.6, 51.3, 64.3],
            ],
        ),
        (
            0.5,
            [
                [65.7, 71.8, 79.2],
                [75.4, 81.3, 88.5],
                [41.5, 47.6, 58.1],
            ],
        ),
        (
            0.8,
            [
                [70.8, 77.2, 84.7],
                [75.7, 81.5, 88.0],
                [46.6, 53.6, 66.7],
            ],
        ),
        (
            0.9,
            [
                [71.6, 77.8, 85.2],
                [77.2, 82.7, 89.4],
                [47.0, 54.2, 67.5],
            ],
        ),
    ];
    rows.iter()
        .map(|(c, reference)| {
            cell(
                &format!("AR(1) phi = 0.9, n = 50, c = {c}"),
                DgpFamily::Ar1 { phi: 0.9 },
                50,
                *c,
                &[Method::CvC, Method::CvAr, Method::CvPz],
                reference,
            )
        })
        .collect()
}
