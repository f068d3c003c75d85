//! Long-run variance and HAC standard errors for the mean of a stationary
//! series, with the model/bandwidth choice made by frequency-domain
//! cross-validation over a mixed candidate class: restricted-maximum-
//! likelihood autoregressive spectra of order 0..5 and Parzen lag-weights
//! spectra with data-sized truncation points.
//!
//! The crate also ships the two classic prewhitened HAC estimators
//! (quadratic-spectral with the Andrews plug-in bandwidth, Bartlett with
//! the Newey-West automatic bandwidth) and a Monte Carlo harness that
//! measures confidence-interval coverage of all methods side by side.

pub mod ar;
pub mod baselines;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod reml;
pub mod selector;
pub mod sim;
pub mod spectral;
pub mod toeplitz;

pub use ar::{ar_to_pacf, burg_fit, pacf_to_ar, ArModel};
pub use baselines::{am_pw_estimate, nw_pw_estimate, BaselineMethod, BaselineResult};
pub use error::{FdcvError, Result};
pub use estimators::{
    fit_candidate, lag_weights_estimate, max_truncation, parzen_kernel, CandidateClass,
    CandidateSpec, SpectralEstimator,
};
pub use reml::{concentrated_sigma2, reml_fit, restricted_loglik, OptimizerStatus, RemlFit};
pub use selector::{
    cv_score, hac_standard_error, select, ConfidenceInterval, CvScore, FdcvResult, Restriction,
    DEFAULT_CV_EXPONENT,
};
pub use sim::{
    badness, relative_efficiency, run_experiment, simulate, true_long_run_variance,
    CoverageReport, DgpFamily, DgpSpec, ExperimentConfig, Method,
};
pub use spectral::{inverse_dft, sample_autocovariance, LeaveOneOutSeries, Periodogram, TimeSeries};
pub use toeplitz::{
    levinson_solve, pcg_solve, solve, solve_pair, tchan_preconditioner, CirculantPreconditioner,
    PcgReport, SolveOptions, ToeplitzOperator,
};
