//! Restricted maximum likelihood for stationary AR(p) models.
//!
//! The restricted log-likelihood of `X` under an AR(p) model with scaled
//! covariance `Sigma_n` (autocovariances divided by sigma^2) is
//!
//! ```text
//! L = -(n-1)/2 log sigma^2
//!     + 1/2 log( |Sigma_n^{-1}| / (W' Sigma_n^{-1} W) )
//!     - 1/(2 sigma^2) { X' Sigma_n^{-1} X
//!                       - (X' Sigma_n^{-1} W)^2 / (W' Sigma_n^{-1} W) }
//! ```
//!
//! with `W = (1, ..., 1)'`. It is invariant under `X -> X + a W`, which is
//! what makes it the right autoregressive fit when the mean is unknown.
//!
//! Two solver calls give all three quadratic forms (`Sigma_n^{-1} X` and
//! `Sigma_n^{-1} W`), and the determinant term collapses to the partial
//! autocorrelations: `log |Sigma_n^{-1}| = sum_i i log(1 - pacf_i^2)`.
//! Profiling sigma^2 out analytically leaves a p-dimensional search over
//! the PACF box (-1, 1)^p, run in tanh-transformed coordinates with a
//! Nelder-Mead simplex started at the Burg estimate.

use crate::ar::{burg_fit, ArModel};
use crate::error::{FdcvError, Result};
use crate::toeplitz::{self, solve_pair, SolveOptions, ToeplitzOperator};

mod simplex;

/// Convergence tolerance on the objective spread of the simplex.
const OBJECTIVE_TOL: f64 = 1e-8;
/// Evaluation budget per parameter dimension.
const MAX_EVALS_PER_DIM: usize = 500;
/// |pacf| is clamped inside 1 - PACF_MARGIN at the end of a fit.
const PACF_MARGIN: f64 = 1e-6;
/// Fits with any |pacf| beyond 1 - BOUNDARY_BAND are flagged.
const BOUNDARY_BAND: f64 = 1e-4;

/// How the PACF search ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizerStatus {
    Converged,
    MaxEvals,
    /// Converged with some partial correlation within 1e-4 of the boundary;
    /// the fit is still returned (near-unit-root data lands here).
    BoundaryProximal,
}

/// A fitted model together with its restricted log-likelihood.
#[derive(Debug, Clone)]
pub struct RemlFit {
    pub model: ArModel,
    pub loglik: f64,
    pub status: OptimizerStatus,
}

struct Quadratics {
    /// X' S^{-1} X - (X' S^{-1} W)^2 / (W' S^{-1} W)
    q: f64,
    /// W' S^{-1} W
    wsw: f64,
}

/// Systems below this size solve faster by Durbin-Levinson than by PCG on
/// this workload (measured crossover; the conjugate gradient's FFT setup
/// dominates until the quadratic direct cost catches up).
const REML_LEVINSON_THRESHOLD: usize = 1024;

fn quadratics(data: &[f64], pacf: &[f64]) -> Result<Quadratics> {
    let n = data.len();
    // Q is exactly invariant under shifts of the data; computing it on the
    // centered series avoids the cancellation a large offset would cause
    let centered = demean(data);
    let unit = ArModel::from_pacf(pacf.to_vec(), 1.0)?;
    let op = ToeplitzOperator::new(unit.autocovariances(n - 1))?;
    let (xsx, xsw, wsw) = if n < REML_LEVINSON_THRESHOLD {
        // direct Durbin path: the three forms fall out of one recursion
        toeplitz::inverse_quadratic_forms(&op, &centered)?
    } else {
        let ones = vec![1.0; n];
        let options = SolveOptions {
            levinson_threshold: REML_LEVINSON_THRESHOLD,
            ..SolveOptions::default()
        };
        let (sx, sw) = solve_pair(&op, &centered, &ones, &options)?;
        let xsx = dot(&centered, &sx.solution);
        let xsw: f64 = sx.solution.iter().sum();
        let wsw: f64 = sw.solution.iter().sum();
        (xsx, xsw, wsw)
    };
    if !(wsw > 0.0) {
        return Err(FdcvError::SingularMinor { minor: n });
    }
    Ok(Quadratics {
        q: xsx - xsw * xsw / wsw,
        wsw,
    })
}

fn logdet_inverse_from_pacf(pacf: &[f64]) -> f64 {
    pacf.iter()
        .enumerate()
        .map(|(i, &k)| (i + 1) as f64 * (1.0 - k * k).ln())
        .sum()
}

fn validate_inputs(data: &[f64], pacf: &[f64]) -> Result<()> {
    let n = data.len();
    if n <= pacf.len() + 1 {
        return Err(FdcvError::InvalidParameter(format!(
            "need n > p + 1, got n = {n}, p = {}",
            pacf.len()
        )));
    }
    for (level, &k) in pacf.iter().enumerate() {
        if !(k.is_finite() && k.abs() < 1.0) {
            return Err(FdcvError::NonStationary {
                level: level + 1,
                value: k,
            });
        }
    }
    Ok(())
}

/// Restricted log-likelihood at the given PACF and innovation variance.
pub fn restricted_loglik(data: &[f64], pacf: &[f64], sigma2: f64) -> Result<f64> {
    validate_inputs(data, pacf)?;
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(FdcvError::InvalidParameter(format!(
            "sigma2 must be positive, got {sigma2}"
        )));
    }
    let n = data.len() as f64;
    let quad = quadratics(data, pacf)?;
    Ok(-0.5 * (n - 1.0) * sigma2.ln() + 0.5 * (logdet_inverse_from_pacf(pacf) - quad.wsw.ln())
        - quad.q / (2.0 * sigma2))
}

/// The sigma^2 that maximizes the restricted likelihood at a fixed PACF:
/// `Q(pacf) / (n - 1)`.
pub fn concentrated_sigma2(data: &[f64], pacf: &[f64]) -> Result<f64> {
    validate_inputs(data, pacf)?;
    let quad = quadratics(data, pacf)?;
    if !(quad.q > 0.0) {
        return Err(FdcvError::DegenerateSeries {
            reason: "non-positive residual quadratic form",
        });
    }
    Ok(quad.q / (data.len() as f64 - 1.0))
}

/// Concentrated objective: restricted log-likelihood with sigma^2 profiled
/// out. Equals `restricted_loglik(data, pacf, concentrated_sigma2(..))`.
fn concentrated_loglik(data: &[f64], pacf: &[f64]) -> Result<f64> {
    let n = data.len() as f64;
    let quad = quadratics(data, pacf)?;
    if !(quad.q > 0.0) {
        return Err(FdcvError::DegenerateSeries {
            reason: "non-positive residual quadratic form",
        });
    }
    let sigma2 = quad.q / (n - 1.0);
    Ok(-0.5 * (n - 1.0) * (sigma2.ln() + 1.0)
        + 0.5 * (logdet_inverse_from_pacf(pacf) - quad.wsw.ln()))
}

/// Maximize the restricted likelihood over stationary AR(p) models.
///
/// Order zero is the exact closed form (sample variance with divisor n-1).
/// Otherwise the search starts from the Burg PACF and runs Nelder-Mead on
/// tanh-transformed coordinates, so every iterate is stationary by
/// construction. The returned log-likelihood never falls below the value
/// at the starting point.
pub fn reml_fit(data: &[f64], order: usize) -> Result<RemlFit> {
    let n = data.len();
    if n <= 2 * (order + 1) {
        return Err(FdcvError::InvalidParameter(format!(
            "need n > 2(p + 1), got n = {n}, p = {order}"
        )));
    }
    // the objective is invariant under shifts; center once so the Burg
    // start (which is not shift-invariant) is canonical as well
    let data = demean(data);
    let data = data.as_slice();

    if order == 0 {
        let sigma2 = concentrated_sigma2(data, &[])?;
        let loglik = restricted_loglik(data, &[], sigma2)?;
        return Ok(RemlFit {
            model: ArModel::white_noise(sigma2)?,
            loglik,
            status: OptimizerStatus::Converged,
        });
    }

    let burg = burg_fit(data, order)?;
    let start_theta: Vec<f64> = burg
        .pacf()
        .iter()
        .map(|&k| k.clamp(-(1.0 - 1e-12), 1.0 - 1e-12).atanh())
        .collect();

    let objective = |theta: &[f64]| -> f64 {
        let pacf: Vec<f64> = theta.iter().map(|t| t.tanh()).collect();
        match concentrated_loglik(data, &pacf) {
            Ok(ll) => -ll,
            Err(_) => f64::INFINITY,
        }
    };
    let start_value = objective(&start_theta);
    if !start_value.is_finite() {
        return Err(FdcvError::OptimizerFailed {
            reason: "objective not finite at the Burg starting value",
            fallback: Box::new(burg),
        });
    }

    let outcome = simplex::minimize(
        &objective,
        &start_theta,
        0.25,
        OBJECTIVE_TOL,
        MAX_EVALS_PER_DIM * order,
    );
    if !outcome.value.is_finite() {
        return Err(FdcvError::OptimizerFailed {
            reason: "search never found a finite objective value",
            fallback: Box::new(burg),
        });
    }
    debug_assert!(outcome.evaluations <= MAX_EVALS_PER_DIM * order + 2 * order + 3);

    let mut pacf: Vec<f64> = outcome.point.iter().map(|t| t.tanh()).collect();
    for k in pacf.iter_mut() {
        *k = k.clamp(-(1.0 - PACF_MARGIN), 1.0 - PACF_MARGIN);
    }
    let sigma2 = concentrated_sigma2(data, &pacf)?;
    let loglik = restricted_loglik(data, &pacf, sigma2)?;
    let model = ArModel::from_pacf(pacf, sigma2)?;

    let boundary = model.pacf().iter().any(|k| k.abs() > 1.0 - BOUNDARY_BAND);
    let status = if boundary {
        OptimizerStatus::BoundaryProximal
    } else if outcome.converged {
        OptimizerStatus::Converged
    } else {
        OptimizerStatus::MaxEvals
    };
    debug_assert!(
        loglik >= -start_value - 1e-7,
        "optimizer regressed below the starting value"
    );
    Ok(RemlFit {
        model,
        loglik,
        status,
    })
}

pub(crate) fn demean(values: &[f64]) -> Vec<f64> {
    // anchor on the first value before averaging: for a series sitting on
    // a large offset the anchored differences are exact (the subtraction
    // of two same-magnitude numbers does not round), so adding a constant
    // to the input cannot leak representation noise into the output; the
    // second mean pass removes the residue the first leaves behind
    let n = values.len() as f64;
    let anchor = values[0];
    let mut out: Vec<f64> = values.iter().map(|v| v - anchor).collect();
    for _ in 0..2 {
        let mean = out.iter().sum::<f64>() / n;
        for v in out.iter_mut() {
            *v -= mean;
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
