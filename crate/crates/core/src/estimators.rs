//! Candidate spectral estimators under one evaluable interface.
//!
//! Two families make up the candidate class: restricted-likelihood AR
//! spectra of order 0..5 and Parzen lag-weights spectra with truncation
//! points 1..m(n), m(n) = floor(4 (n/100)^{2/9}).
//!
//! All spectra use the density normalization in which the long-run
//! variance is `2 pi f(0)`. The lag-weights estimate therefore carries a
//! 1/(2 pi) factor so both families are commensurable with the
//! periodogram inside one cross-validation criterion.

use crate::ar::ArModel;
use crate::error::{FdcvError, Result};
use crate::reml::reml_fit;
use crate::spectral::sample_autocovariance;

/// Identifier of a candidate in the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateSpec {
    /// Restricted-likelihood AR spectrum of the given order.
    RemlAr(usize),
    /// Parzen lag-weights spectrum with the given truncation point.
    ParzenLagWeights(usize),
}

impl CandidateSpec {
    pub fn is_autoregressive(&self) -> bool {
        matches!(self, CandidateSpec::RemlAr(_))
    }
}

impl std::fmt::Display for CandidateSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CandidateSpec::RemlAr(p) => write!(f, "AR({p})"),
            CandidateSpec::ParzenLagWeights(h) => write!(f, "PZ({h})"),
        }
    }
}

/// Largest Parzen truncation point used for a series of length n.
pub fn max_truncation(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// The ordered candidate class for a series of length n: AR orders 0..5,
/// then Parzen truncations 1..m(n).
#[derive(Debug, Clone)]
pub struct CandidateClass {
    candidates: Vec<CandidateSpec>,
    max_truncation: usize,
}

impl CandidateClass {
    pub fn for_length(n: usize) -> Self {
        let m = max_truncation(n);
        let mut candidates = Vec::with_capacity(6 + m);
        for p in 0..=5 {
            candidates.push(CandidateSpec::RemlAr(p));
        }
        for h in 1..=m {
            candidates.push(CandidateSpec::ParzenLagWeights(h));
        }
        CandidateClass {
            candidates,
            max_truncation: m,
        }
    }

    pub fn candidates(&self) -> &[CandidateSpec] {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn max_truncation(&self) -> usize {
        self.max_truncation
    }
}

/// The Parzen lag window:
/// `1 - 6x^2 + 6|x|^3` for |x| <= 1/2, `2(1 - |x|)^3` for 1/2 < |x| <= 1,
/// zero beyond.
pub fn parzen_kernel(x: f64) -> f64 {
    let a = x.abs();
    if a <= 0.5 {
        1.0 - 6.0 * a * a + 6.0 * a * a * a
    } else if a <= 1.0 {
        let b = 1.0 - a;
        2.0 * b * b * b
    } else {
        0.0
    }
}

/// Parzen lag-weights estimate of the spectral density at `omega`:
/// `(1 / 2 pi) sum_r w_h(r) c_hat_r cos(r omega)` with the window weights
/// of [`parzen_lag_weight`] (support up to lag 2h).
///
/// The input is used as-is; callers demean first. Values away from zero
/// frequency may be negative.
pub fn lag_weights_estimate(data: &[f64], truncation: usize, omega: f64) -> Result<f64> {
    let n = data.len();
    if truncation < 1 || truncation >= n {
        return Err(FdcvError::LagOutOfRange {
            lag: truncation,
            n,
        });
    }
    let acvf = sample_autocovariance(data, window_lags(truncation, n))?;
    Ok(lag_weights_from_acvf(&acvf, truncation, omega))
}

/// Largest lag with nonzero window weight, capped by the data length.
fn window_lags(truncation: usize, n: usize) -> usize {
    (2 * truncation - 1).max(1).min(n - 1)
}

/// Window weight at lag `r` for truncation point `h`.
///
/// The truncation point indexes the window by its breakpoint: the smooth
/// inner branch of the Parzen window covers lags up to h, the cubic
/// outer branch decays to zero at lag 2h. Weights at every interior lag
/// are strictly positive.
pub fn parzen_lag_weight(r: usize, truncation: usize) -> f64 {
    parzen_kernel(r as f64 / (2.0 * truncation as f64))
}

fn lag_weights_from_acvf(acvf: &[f64], truncation: usize, omega: f64) -> f64 {
    let max_lag = acvf.len() - 1;
    let mut s = acvf[0];
    for r in 1..=max_lag {
        s += 2.0 * parzen_lag_weight(r, truncation) * acvf[r] * (omega * r as f64).cos();
    }
    s / (2.0 * std::f64::consts::PI)
}

/// A fitted candidate, evaluable at any frequency in [0, pi].
#[derive(Debug, Clone)]
pub enum SpectralEstimator {
    RemlAr(ArModel),
    ParzenLagWeights { truncation: usize, acvf: Vec<f64> },
}

impl SpectralEstimator {
    pub fn spec(&self) -> CandidateSpec {
        match self {
            SpectralEstimator::RemlAr(model) => CandidateSpec::RemlAr(model.order()),
            SpectralEstimator::ParzenLagWeights { truncation, .. } => {
                CandidateSpec::ParzenLagWeights(*truncation)
            }
        }
    }

    /// Spectral density estimate at `omega`.
    pub fn density(&self, omega: f64) -> f64 {
        match self {
            SpectralEstimator::RemlAr(model) => model.spectrum(omega),
            SpectralEstimator::ParzenLagWeights { truncation, acvf } => {
                lag_weights_from_acvf(acvf, *truncation, omega)
            }
        }
    }
}

/// Fit one candidate to a data vector (demeaned by the caller; the
/// leave-one-out series used during selection already have mean zero).
/// Deterministic given the data.
pub fn fit_candidate(spec: CandidateSpec, data: &[f64]) -> Result<SpectralEstimator> {
    match spec {
        CandidateSpec::RemlAr(order) => {
            let fit = reml_fit(data, order)?;
            Ok(SpectralEstimator::RemlAr(fit.model))
        }
        CandidateSpec::ParzenLagWeights(truncation) => {
            let n = data.len();
            if truncation < 1 || truncation >= n {
                return Err(FdcvError::LagOutOfRange {
                    lag: truncation,
                    n,
                });
            }
            let acvf = sample_autocovariance(data, window_lags(truncation, n))?;
            Ok(SpectralEstimator::ParzenLagWeights { truncation, acvf })
        }
    }
}
