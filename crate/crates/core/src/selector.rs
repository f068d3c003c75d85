//! Cross-validated selection of a spectral estimator and the resulting
//! HAC standard error.
//!
//! For a candidate f-hat and a band exponent c in (0, 1), the score is
//!
//! ```text
//! CV(f, c) = (1 / B) sum_{j=1}^{B} { [ log f^{-j}(w_j)
//!                                      - ( log I(w_j) + C ) ]^2 - pi^2/6 }
//! B = floor(n_tilde^c),   C = 0.577216... (Euler's constant)
//! ```
//!
//! where `f^{-j}` is the candidate refitted to the leave-one-out series
//! `x^{-j}` and `I` is the periodogram of the original series. Everything
//! entering the score is invariant under adding a constant to the data,
//! so selection never depends on the unknown mean. The selected candidate
//! is then refitted to the mean-corrected data, and the standard error of
//! the sample mean is `sqrt(2 pi f(0) / (n - 1))`.

use rayon::prelude::*;

use crate::error::{FdcvError, Result};
use crate::estimators::{fit_candidate, CandidateClass, CandidateSpec};
use crate::estimators::SpectralEstimator;
use crate::spectral::TimeSeries;

/// Euler's constant, the bias of `log` of a unit-mean exponential.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Band exponent used throughout unless a study overrides it.
pub const DEFAULT_CV_EXPONENT: f64 = 0.8;

/// Confidence levels reported with every selection.
pub const REPORTED_LEVELS: [f64; 3] = [0.90, 0.95, 0.99];

/// Which part of the candidate class competes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    All,
    ArOnly,
    ParzenOnly,
}

impl Restriction {
    fn admits(&self, spec: &CandidateSpec) -> bool {
        match self {
            Restriction::All => true,
            Restriction::ArOnly => spec.is_autoregressive(),
            Restriction::ParzenOnly => !spec.is_autoregressive(),
        }
    }
}

/// Cross-validation score of one candidate. A disqualified candidate
/// (a fit failure or a nonpositive leave-one-out estimate somewhere in the
/// band) carries an infinite score and stays in the list.
#[derive(Debug, Clone)]
pub struct CvScore {
    pub candidate: CandidateSpec,
    pub score: f64,
    pub band_size: usize,
    pub disqualified: bool,
}

/// A two-sided normal confidence interval for the mean.
#[derive(Debug, Clone, Copy)]
pub struct ConfidenceInterval {
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Outcome of a full selection run.
#[derive(Debug, Clone)]
pub struct FdcvResult {
    pub selected: SpectralEstimator,
    pub scores: Vec<CvScore>,
    pub mean: f64,
    /// Selected estimate of the spectral density at zero frequency.
    pub f0_hat: f64,
    /// `sqrt(2 pi f0_hat / (n - 1))`.
    pub se_hat: f64,
    pub intervals: Vec<ConfidenceInterval>,
}

/// Number of cross-validation terms, `floor(n_tilde^c)`.
pub fn band_size(n_tilde: usize, c: f64) -> usize {
    (n_tilde as f64).powf(c).floor() as usize
}

/// HAC standard error of the sample mean given `f(0)`.
pub fn hac_standard_error(f0_hat: f64, n: usize) -> Result<f64> {
    if !(f0_hat > 0.0) {
        return Err(FdcvError::NonPositiveDensity { value: f0_hat });
    }
    if n < 2 {
        return Err(FdcvError::SeriesTooShort { n, min: 2 });
    }
    Ok((2.0 * std::f64::consts::PI * f0_hat / (n as f64 - 1.0)).sqrt())
}

/// Score one candidate on a series.
///
/// The series is re-centered internally, which leaves the score unchanged
/// mathematically (every ingredient is shift-invariant) and keeps it
/// numerically stable under large offsets. Fourier ordinates that are
/// exactly zero are skipped with the divisor reduced; a series whose whole
/// band is zero is degenerate.
pub fn cv_score(candidate: CandidateSpec, series: &TimeSeries, c: f64) -> Result<CvScore> {
    if !(c > 0.0 && c < 1.0) {
        return Err(FdcvError::InvalidParameter(format!(
            "band exponent c must lie in (0, 1), got {c}"
        )));
    }
    let centered = TimeSeries::new(demean(series.values()))?;
    let band = band_size(centered.n_tilde(), c);
    let periodogram = centered.periodogram();

    enum Term {
        Value(f64),
        SkippedZeroOrdinate,
        Disqualified,
    }

    let terms: Vec<Result<Term>> = (1..=band)
        .into_par_iter()
        .map(|j| {
            let ordinate = periodogram.ordinate(j);
            if ordinate == 0.0 {
                return Ok(Term::SkippedZeroOrdinate);
            }
            let loo = centered.leave_one_out_series(j)?;
            let estimator = match fit_candidate(candidate, loo.values()) {
                Ok(e) => e,
                Err(_) => return Ok(Term::Disqualified),
            };
            let density = estimator.density(centered.frequency(j));
            if !(density > 0.0 && density.is_finite()) {
                // a nonpositive leave-one-out estimate has no logarithm
                return Ok(Term::Disqualified);
            }
            let residual = density.ln() - (ordinate.ln() + EULER_GAMMA);
            Ok(Term::Value(
                residual * residual - std::f64::consts::PI * std::f64::consts::PI / 6.0,
            ))
        })
        .collect();

    let mut sum = 0.0;
    let mut used = 0usize;
    for term in terms {
        match term? {
            Term::Value(t) => {
                sum += t;
                used += 1;
            }
            Term::SkippedZeroOrdinate => {}
            Term::Disqualified => {
                return Ok(CvScore {
                    candidate,
                    score: f64::INFINITY,
                    band_size: band,
                    disqualified: true,
                });
            }
        }
    }
    if used == 0 {
        return Err(FdcvError::DegenerateSeries {
            reason: "all periodogram ordinates in the band are zero",
        });
    }
    Ok(CvScore {
        candidate,
        score: sum / used as f64,
        band_size: band,
        disqualified: false,
    })
}

/// Score the whole class, in class order.
pub fn score_all(series: &TimeSeries, class: &CandidateClass, c: f64) -> Result<Vec<CvScore>> {
    class
        .candidates()
        .iter()
        .map(|&spec| cv_score(spec, series, c))
        .collect()
}

/// Minimal-score candidate among those admitted by the restriction.
/// Ties break toward the earlier candidate in class order.
pub fn select_from_scores(scores: &[CvScore], restriction: Restriction) -> Result<CandidateSpec> {
    let mut best: Option<(&CvScore, f64)> = None;
    for s in scores.iter().filter(|s| restriction.admits(&s.candidate)) {
        if s.disqualified {
            continue;
        }
        match best {
            Some((_, value)) if s.score >= value => {}
            _ => best = Some((s, s.score)),
        }
    }
    best.map(|(s, _)| s.candidate)
        .ok_or(FdcvError::AllCandidatesDisqualified)
}

/// Refit a candidate on the mean-corrected data and package the estimate.
pub fn estimate_with(series: &TimeSeries, candidate: CandidateSpec) -> Result<FdcvEstimate> {
    let centered = demean(series.values());
    let estimator = fit_candidate(candidate, &centered)?;
    let f0_hat = estimator.density(0.0);
    if !(f0_hat > 0.0) {
        return Err(FdcvError::NonPositiveDensity { value: f0_hat });
    }
    let n = series.len();
    let se_hat = hac_standard_error(f0_hat, n)?;
    Ok(FdcvEstimate {
        estimator,
        f0_hat,
        se_hat,
    })
}

/// A refitted estimator with its zero-frequency density and standard error.
#[derive(Debug, Clone)]
pub struct FdcvEstimate {
    pub estimator: SpectralEstimator,
    pub f0_hat: f64,
    pub se_hat: f64,
}

/// Full selection: score, pick the minimizer, refit on mean-corrected
/// data, and report `f(0)`, the standard error, and normal confidence
/// intervals at 90/95/99%.
pub fn select(
    series: &TimeSeries,
    class: &CandidateClass,
    c: f64,
    restriction: Restriction,
) -> Result<FdcvResult> {
    let scores = score_all(series, class, c)?;
    let chosen = select_from_scores(&scores, restriction)?;
    let estimate = estimate_with(series, chosen)?;
    let mean = series.mean();
    let intervals = REPORTED_LEVELS
        .iter()
        .map(|&level| {
            let z = normal_quantile(0.5 + level / 2.0);
            ConfidenceInterval {
                level,
                lower: mean - z * estimate.se_hat,
                upper: mean + z * estimate.se_hat,
            }
        })
        .collect();
    Ok(FdcvResult {
        selected: estimate.estimator,
        scores,
        mean,
        f0_hat: estimate.f0_hat,
        se_hat: estimate.se_hat,
        intervals,
    })
}

pub(crate) fn demean(values: &[f64]) -> Vec<f64> {
    crate::reml::demean(values)
}

/// Inverse standard normal CDF (Wichura's AS 241, double precision).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile needs p in (0, 1), got {p}");
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly(&SPLIT_A, r) / poly(&SPLIT_B, r);
    }
    let mut r = if q < 0.0 { p } else { 1.0 - p };
    r = (-r.ln()).sqrt();
    let value = if r <= 5.0 {
        let s = r - 1.6;
        poly(&TAIL_C, s) / poly(&TAIL_D, s)
    } else {
        let s = r - 5.0;
        poly(&FAR_E, s) / poly(&FAR_F, s)
    };
    if q < 0.0 {
        -value
    } else {
        value
    }
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

const SPLIT_A: [f64; 8] = [
    3.387_132_872_796_366_5e0,
    1.331_416_678_917_843_8e2,
    1.971_590_950_306_551_3e3,
    1.373_716_881_214_568_5e4,
    4.592_195_393_154_987e4,
    6.726_577_092_700_87e4,
    3.343_057_558_358_813e4,
    2.509_080_928_730_122_7e3,
];
const SPLIT_B: [f64; 8] = [
    1.0,
    4.231_333_070_160_091e1,
    6.871_870_074_920_579e2,
    5.394_196_021_424_751e3,
    2.121_379_430_415_176e4,
    3.930_789_580_009_271e4,
    2.872_904_573_589_9e4,
    5.226_495_278_852_545e3,
];
const TAIL_C: [f64; 8] = [
    1.423_437_110_749_683_5e0,
    4.630_337_846_156_546e0,
    5.769_497_221_460_691e0,
    3.647_848_324_763_204_5e0,
    1.270_458_252_452_368_4e0,
    2.417_807_251_774_506e-1,
    2.272_384_498_926_918_4e-2,
    7.745_450_142_783_414e-4,
];
const TAIL_D: [f64; 8] = [
    1.0,
    2.053_191_626_637_759e0,
    1.676_384_830_183_803_8e0,
    6.897_673_349_851e-1,
    1.481_039_764_274_800_8e-1,
    1.519_866_656_361_645_7e-2,
    5.475_938_084_995_345e-4,
    1.050_750_071_644_416_9e-9,
];
const FAR_E: [f64; 8] = [
    6.657_904_643_501_103e0,
    5.463_784_911_164_114e0,
    1.784_826_539_917_291_3e0,
    2.965_605_718_285_048_7e-1,
    2.653_218_952_657_612_4e-2,
    1.242_660_947_388_078_4e-3,
    2.711_555_568_743_487_6e-5,
    2.010_334_399_292_288_1e-7,
];
const FAR_F: [f64; 8] = [
    1.0,
    5.998_322_065_558_88e-1,
    1.369_298_809_227_358e-1,
    1.487_536_129_085_061_5e-2,
    7.868_691_311_456_132e-4,
    1.846_318_317_510_054_8e-5,
    1.421_511_758_316_446e-7,
    2.044_263_103_389_939_7e-15,
];
