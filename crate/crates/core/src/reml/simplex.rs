//! Plain Nelder-Mead simplex minimizer. Deterministic: ties in the vertex
//! ordering are broken by insertion index, and every step is a pure
//! function of the current simplex.

pub struct Outcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimize `f` starting at `start`, with an axis-aligned initial simplex
/// of the given edge length. Stops when the objective spread over the
/// simplex falls below `tol` or after `max_evals` evaluations.
pub fn minimize(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    step: f64,
    tol: f64,
    max_evals: usize,
) -> Outcome {
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let dim = start.len();
    assert!(dim >= 1);
    let mut evals = 0usize;
    let eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut points: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    points.push(start.to_vec());
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += step;
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| eval(p, &mut evals)).collect();

    let mut best_point = points[0].clone();
    let mut best_value = values[0];

    loop {
        // order vertices, stable in the original index for exact ties
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
        let lo = order[0];
        let hi = order[dim];
        let second_hi = order[dim - 1];

        if values[lo] < best_value {
            best_value = values[lo];
            best_point = points[lo].clone();
        }

        // objective spread alone can hit zero with vertices straddling the
        // minimum; require the simplex itself to have collapsed as well
        let spread = values[hi] - values[lo];
        let diameter = points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&points[lo])
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            })
            .fold(0.0f64, f64::max);
        if spread.abs() <= tol && diameter <= 1e-6 {
            return Outcome {
                point: points[lo].clone(),
                value: values[lo],
                evaluations: evals,
                converged: true,
            };
        }
        if evals >= max_evals {
            return Outcome {
                point: best_point,
                value: best_value,
                evaluations: evals,
                converged: false,
            };
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; dim];
        for (i, p) in points.iter().enumerate() {
            if i == hi {
                continue;
            }
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let blend = |alpha: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&points[hi])
                .map(|(c, w)| c + alpha * (c - w))
                .collect()
        };

        let reflected = blend(REFLECT);
        let reflected_value = eval(&reflected, &mut evals);

        if reflected_value < values[lo] {
            let expanded = blend(EXPAND);
            let expanded_value = eval(&expanded, &mut evals);
            if expanded_value < reflected_value {
                points[hi] = expanded;
                values[hi] = expanded_value;
            } else {
                points[hi] = reflected;
                values[hi] = reflected_value;
            }
        } else if reflected_value < values[second_hi] {
            points[hi] = reflected;
            values[hi] = reflected_value;
        } else {
            // contract toward the better of the worst vertex and reflection
            let (anchor_point, anchor_value) = if reflected_value < values[hi] {
                (reflected.clone(), reflected_value)
            } else {
                (points[hi].clone(), values[hi])
            };
            let contracted: Vec<f64> = centroid
                .iter()
                .zip(&anchor_point)
                .map(|(c, w)| c + CONTRACT * (w - c))
                .collect();
            let contracted_value = eval(&contracted, &mut evals);
            if contracted_value < anchor_value {
                points[hi] = contracted;
                values[hi] = contracted_value;
            } else {
                // shrink everything toward the best vertex
                let anchor = points[lo].clone();
                for i in 0..=dim {
                    if i == lo {
                        continue;
                    }
                    for (x, a) in points[i].iter_mut().zip(&anchor) {
                        *x = a + SHRINK * (*x - a);
                    }
                    values[i] = eval(&points[i].clone(), &mut evals);
                }
            }
        }
    }
}
