//! Monte Carlo harness: data-generating processes, coverage experiments,
//! and the badness / relative-efficiency summaries.
//!
//! Replications draw from independent ChaCha8 streams keyed by the
//! replication index, so a report is reproducible bit for bit from its
//! seed and configuration regardless of thread schedule. AR processes
//! start from an exact draw of their stationary distribution (no burn-in);
//! MA processes only need q presample innovations.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::ar::ArModel;
use crate::baselines::{am_pw_estimate, nw_pw_estimate};
use crate::error::{FdcvError, Result};
use crate::estimators::{CandidateClass, CandidateSpec};
use crate::linalg;
use crate::selector::{
    estimate_with, normal_quantile, score_all, select_from_scores, Restriction,
};
use crate::spectral::TimeSeries;

const RNG_NAME: &str = "chacha8, one stream per replication";

/// Process family of a data-generating process; innovations are standard
/// normal throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DgpFamily {
    WhiteNoise,
    Ar1 { phi: f64 },
    Ma1 { psi: f64 },
    /// `X_t = e_t + alpha e_{t-1} + beta e_{t-q}`, q in {2, 3}.
    Maq { alpha: f64, beta: f64, q: usize },
    /// `X_t = (phi/2) X_{t-1} + (phi/2) X_{t-2} + e_t`.
    Ar2HalfPhi { phi: f64 },
}

/// A process family plus a sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DgpSpec {
    pub family: DgpFamily,
    pub n: usize,
}

impl DgpSpec {
    pub fn new(family: DgpFamily, n: usize) -> Result<Self> {
        let spec = DgpSpec { family, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 8 {
            return Err(FdcvError::SeriesTooShort {
                n: self.n,
                min: 8,
            });
        }
        match self.family {
            DgpFamily::WhiteNoise | DgpFamily::Ma1 { .. } => Ok(()),
            DgpFamily::Ar1 { phi } => {
                if phi.abs() < 1.0 {
                    Ok(())
                } else {
                    Err(FdcvError::NonStationary {
                        level: 1,
                        value: phi,
                    })
                }
            }
            DgpFamily::Maq { q, .. } => {
                if q == 2 || q == 3 {
                    Ok(())
                } else {
                    Err(FdcvError::InvalidParameter(format!(
                        "MA(q) supports q in {{2, 3}}, got {q}"
                    )))
                }
            }
            DgpFamily::Ar2HalfPhi { phi } => {
                ArModel::from_coefficients(vec![phi / 2.0, phi / 2.0], 1.0).map(|_| ())
            }
        }
    }

    /// AR coefficient vector, when the family is autoregressive.
    fn ar_coefficients(&self) -> Option<Vec<f64>> {
        match self.family {
            DgpFamily::Ar1 { phi } => Some(vec![phi]),
            DgpFamily::Ar2HalfPhi { phi } => Some(vec![phi / 2.0, phi / 2.0]),
            _ => None,
        }
    }

    /// True AR order, used for the order-recovery statistic.
    pub fn true_ar_order(&self) -> Option<usize> {
        match self.family {
            DgpFamily::Ar1 { .. } => Some(1),
            DgpFamily::Ar2HalfPhi { .. } => Some(2),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self.family {
            DgpFamily::WhiteNoise => "white noise".to_string(),
            DgpFamily::Ar1 { phi } => format!("AR(1), phi = {phi}"),
            DgpFamily::Ma1 { psi } => format!("MA(1), psi = {psi}"),
            DgpFamily::Maq { alpha, beta, q } => {
                format!("MA({q}), alpha = {alpha}, beta = {beta}")
            }
            DgpFamily::Ar2HalfPhi { phi } => {
                format!("AR(2), coefficients (phi/2, phi/2), phi = {phi}")
            }
        }
    }
}

/// Closed-form long-run variance `2 pi f(0)` of a process; errors when it
/// vanishes (the short-memory assumption fails there).
pub fn true_long_run_variance(spec: &DgpSpec) -> Result<f64> {
    spec.validate()?;
    let value = match spec.family {
        DgpFamily::WhiteNoise => 1.0,
        DgpFamily::Ar1 { phi } => 1.0 / ((1.0 - phi) * (1.0 - phi)),
        DgpFamily::Ma1 { psi } => (1.0 + psi) * (1.0 + psi),
        DgpFamily::Maq { alpha, beta, .. } => {
            let s = 1.0 + alpha + beta;
            s * s
        }
        DgpFamily::Ar2HalfPhi { phi } => 1.0 / ((1.0 - phi) * (1.0 - phi)),
    };
    if value == 0.0 {
        return Err(FdcvError::ZeroLongRunVariance);
    }
    Ok(value)
}

fn replication_rng(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

/// One simulated path, deterministic in (spec, seed). Equals replication 0
/// of an experiment run with the same seed.
pub fn simulate(spec: &DgpSpec, seed: u64) -> Result<Vec<f64>> {
    spec.validate()?;
    Ok(simulate_with_rng(spec, &mut replication_rng(seed, 0)))
}

fn simulate_with_rng(spec: &DgpSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = spec.n;
    let gauss = |rng: &mut ChaCha8Rng| -> f64 { rng.sample(StandardNormal) };
    match spec.family {
        DgpFamily::WhiteNoise => (0..n).map(|_| gauss(rng)).collect(),
        DgpFamily::Ma1 { psi } => {
            let mut prev = gauss(rng);
            (0..n)
                .map(|_| {
                    let e = gauss(rng);
                    let x = e + psi * prev;
                    prev = e;
                    x
                })
                .collect()
        }
        DgpFamily::Maq { alpha, beta, q } => {
            let mut window: Vec<f64> = (0..q).map(|_| gauss(rng)).collect();
            (0..n)
                .map(|_| {
                    let e = gauss(rng);
                    // window holds (e_{t-q}, ..., e_{t-1})
                    let x = e + alpha * window[q - 1] + beta * window[0];
                    window.remove(0);
                    window.push(e);
                    x
                })
                .collect()
        }
        DgpFamily::Ar1 { .. } | DgpFamily::Ar2HalfPhi { .. } => {
            let phi = spec.ar_coefficients().expect("AR family");
            simulate_ar_exact(&phi, n, rng)
        }
    }
}

/// Stationary AR(p) path: the first p values are an exact draw from the
/// stationary distribution via the Cholesky factor of their covariance.
fn simulate_ar_exact(phi: &[f64], n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let p = phi.len();
    let model = ArModel::from_coefficients(phi.to_vec(), 1.0).expect("validated upstream");
    let head_cov = linalg::toeplitz_dense(&model.autocovariances(p - 1));
    let chol = linalg::cholesky(&head_cov, p).expect("stationary covariance is SPD");
    let z: Vec<f64> = (0..p).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let mut x = vec![0.0; n.max(p)];
    for i in 0..p {
        let mut s = 0.0;
        for j in 0..=i {
            s += chol[i * p + j] * z[j];
        }
        x[i] = s;
    }
    for t in p..n {
        let mut s: f64 = rng.sample(StandardNormal);
        for (j, &c) in phi.iter().enumerate() {
            s += c * x[t - j - 1];
        }
        x[t] = s;
    }
    x.truncate(n);
    x
}

/// Coverage badness relative to the nominal 95% level, on the logit scale,
/// with undercoverage penalized twice:
/// `B(p) = 2 |logit(p) - logit(0.95)|` for p <= 0.95, unweighted above.
/// Degenerate coverages 0 and 1 map to infinity.
pub fn badness(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "coverage {p} outside [0, 1]");
    if p == 0.0 || p == 1.0 {
        return f64::INFINITY;
    }
    let logit = |v: f64| (v / (1.0 - v)).ln();
    let gap = (logit(p) - logit(0.95)).abs();
    if p <= 0.95 {
        2.0 * gap
    } else {
        gap
    }
}

/// Relative efficiencies of three coverages (ours, AM-PW, NW-PW):
/// `e_i = min_j B(p_j) / B(p_i)`, with exact coverage 1 mapped to 0.
pub fn relative_efficiency(coverages: [f64; 3]) -> [f64; 3] {
    let b: Vec<f64> = coverages.iter().map(|&p| badness(p)).collect();
    let min = b.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = if b[i].is_infinite() {
            0.0
        } else if b[i] == 0.0 {
            1.0
        } else if min.is_infinite() {
            0.0
        } else {
            min / b[i]
        };
    }
    out
}

/// Estimation methods the harness can run side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    /// Cross-validated choice over the combined candidate class.
    CvC,
    /// Cross-validation restricted to the AR candidates.
    CvAr,
    /// Cross-validation restricted to the Parzen candidates.
    CvPz,
    AmPw,
    NwPw,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::CvC,
        Method::CvAr,
        Method::CvPz,
        Method::AmPw,
        Method::NwPw,
    ];

    fn cv_restriction(&self) -> Option<Restriction> {
        match self {
            Method::CvC => Some(Restriction::All),
            Method::CvAr => Some(Restriction::ArOnly),
            Method::CvPz => Some(Restriction::ParzenOnly),
            _ => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Method::CvC => "CV_C",
            Method::CvAr => "CV_AR",
            Method::CvPz => "CV_PZ",
            Method::AmPw => "AM-PW",
            Method::NwPw => "NW-PW",
        };
        write!(f, "{name}")
    }
}

/// Full experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dgp: DgpSpec,
    pub methods: Vec<Method>,
    pub replications: usize,
    /// Nominal two-sided confidence levels, e.g. [0.90, 0.95, 0.99].
    pub levels: Vec<f64>,
    pub seed: u64,
    /// Band exponent of the cross-validation criterion.
    pub c: f64,
}

impl ExperimentConfig {
    pub fn new(dgp: DgpSpec, methods: Vec<Method>, replications: usize, seed: u64) -> Self {
        ExperimentConfig {
            dgp,
            methods,
            replications,
            levels: vec![0.90, 0.95, 0.99],
            seed,
            c: crate::selector::DEFAULT_CV_EXPONENT,
        }
    }

    fn validate(&self) -> Result<()> {
        self.dgp.validate()?;
        if self.replications == 0 {
            return Err(FdcvError::InvalidParameter(
                "need at least one replication".into(),
            ));
        }
        if self.methods.is_empty() {
            return Err(FdcvError::InvalidParameter("no methods requested".into()));
        }
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(FdcvError::InvalidParameter(format!(
                "band exponent c must lie in (0, 1), got {}",
                self.c
            )));
        }
        for &level in &self.levels {
            if !(level > 0.0 && level < 1.0) {
                return Err(FdcvError::InvalidParameter(format!(
                    "confidence level {level} outside (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// Per-method block of a coverage report.
#[derive(Debug, Clone, Serialize)]
pub struct MethodReport {
    pub method: Method,
    /// Empirical coverage per nominal level, aligned with `levels`.
    pub coverage: Vec<f64>,
    /// Replications where this method failed (excluded from its denominator).
    pub failures: usize,
}

/// Badness and relative efficiency of (CV_C, AM-PW, NW-PW) at 95%.
#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyReport {
    pub coverages: [f64; 3],
    pub badness: [f64; 3],
    pub efficiency: [f64; 3],
}

/// Candidate-selection statistics across replications.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionReport {
    /// Fraction of replications where the combined criterion picked an AR
    /// candidate.
    pub ar_win_rate: f64,
    pub parzen_win_rate: f64,
    /// True AR order of the process, when it has one.
    pub true_order: Option<usize>,
    /// Fraction of AR-restricted selections that hit the true order.
    pub true_order_rate: Option<f64>,
}

/// Aggregated experiment outcome; serializes to versioned JSON.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub schema_version: u32,
    pub dgp: String,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    pub c: f64,
    pub rng: String,
    pub levels: Vec<f64>,
    pub methods: Vec<MethodReport>,
    pub efficiency_at_95: Option<EfficiencyReport>,
    pub selection: Option<SelectionReport>,
}

impl CoverageReport {
    /// Coverage for a method at a nominal level, if both were run.
    pub fn coverage(&self, method: Method, level: f64) -> Option<f64> {
        let idx = self.levels.iter().position(|&l| (l - level).abs() < 1e-12)?;
        self.methods
            .iter()
            .find(|m| m.method == method)
            .map(|m| m.coverage[idx])
    }

    pub fn failures(&self, method: Method) -> Option<usize> {
        self.methods
            .iter()
            .find(|m| m.method == method)
            .map(|m| m.failures)
    }

    /// Aligned-text rendering: one row per method, one column per level.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} | n = {} | {} replications | seed {} | c = {}\n",
            self.dgp, self.n, self.replications, self.seed, self.c
        ));
        out.push_str(&format!("{:<8}", "method"));
        for level in &self.levels {
            out.push_str(&format!("{:>9}", format!("{:.0}%", level * 100.0)));
        }
        out.push_str(&format!("{:>10}\n", "failures"));
        for m in &self.methods {
            out.push_str(&format!("{:<8}", m.method.to_string()));
            for c in &m.coverage {
                out.push_str(&format!("{:>9.1}", c * 100.0));
            }
            out.push_str(&format!("{:>10}\n", m.failures));
        }
        if let Some(eff) = &self.efficiency_at_95 {
            out.push_str("relative efficiency at 95% (CV_C, AM-PW, NW-PW): ");
            out.push_str(&format!(
                "{:.2}, {:.2}, {:.2}\n",
                eff.efficiency[0], eff.efficiency[1], eff.efficiency[2]
            ));
        }
        if let Some(sel) = &self.selection {
            out.push_str(&format!(
                "AR candidate win rate: {:.1}%",
                sel.ar_win_rate * 100.0
            ));
            if let (Some(order), Some(rate)) = (sel.true_order, sel.true_order_rate) {
                out.push_str(&format!(
                    " | true order {} pick rate: {:.1}%",
                    order,
                    rate * 100.0
                ));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Default, Clone)]
struct ReplicationOutcome {
    /// Standard error per requested method; None marks a failure.
    se: Vec<Option<f64>>,
    mean: f64,
    cvc_pick: Option<CandidateSpec>,
    cvar_pick: Option<CandidateSpec>,
}

/// Run a coverage experiment: simulate, estimate with every method, count
/// interval hits of the true mean (zero), and attach the efficiency and
/// selection summaries.
pub fn run_experiment(config: &ExperimentConfig) -> Result<CoverageReport> {
    config.validate()?;
    let methods = &config.methods;
    let wants_cv = methods.iter().any(|m| m.cv_restriction().is_some());
    let wants_cvar = methods.contains(&Method::CvAr);

    let outcomes: Vec<ReplicationOutcome> = (0..config.replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replication_rng(config.seed, rep as u64);
            let x = simulate_with_rng(&config.dgp, &mut rng);
            replicate(&x, config, wants_cv, wants_cvar)
        })
        .collect();

    let z: Vec<f64> = config
        .levels
        .iter()
        .map(|&level| normal_quantile(0.5 + level / 2.0))
        .collect();

    let mut method_reports = Vec::with_capacity(methods.len());
    for (mi, &method) in methods.iter().enumerate() {
        let mut hits = vec![0usize; config.levels.len()];
        let mut failures = 0usize;
        for outcome in &outcomes {
            match outcome.se[mi] {
                Some(se) => {
                    for (li, &zq) in z.iter().enumerate() {
                        if outcome.mean.abs() <= zq * se {
                            hits[li] += 1;
                        }
                    }
                }
                None => failures += 1,
            }
        }
        let denom = (config.replications - failures).max(1) as f64;
        method_reports.push(MethodReport {
            method,
            coverage: hits.iter().map(|&h| h as f64 / denom).collect(),
            failures,
        });
    }

    let efficiency_at_95 = build_efficiency(&config.levels, &method_reports);
    let selection = build_selection(config, &outcomes, wants_cvar);

    Ok(CoverageReport {
        schema_version: 1,
        dgp: config.dgp.describe(),
        n: config.dgp.n,
        replications: config.replications,
        seed: config.seed,
        c: config.c,
        rng: RNG_NAME.to_string(),
        levels: config.levels.clone(),
        methods: method_reports,
        efficiency_at_95,
        selection,
    })
}

fn build_efficiency(levels: &[f64], reports: &[MethodReport]) -> Option<EfficiencyReport> {
    let idx = levels.iter().position(|&l| (l - 0.95).abs() < 1e-12)?;
    let pick = |m: Method| {
        reports
            .iter()
            .find(|r| r.method == m)
            .map(|r| r.coverage[idx])
    };
    let coverages = [pick(Method::CvC)?, pick(Method::AmPw)?, pick(Method::NwPw)?];
    let badness_values = [
        badness(coverages[0]),
        badness(coverages[1]),
        badness(coverages[2]),
    ];
    Some(EfficiencyReport {
        coverages,
        badness: badness_values,
        efficiency: relative_efficiency(coverages),
    })
}

fn build_selection(
    config: &ExperimentConfig,
    outcomes: &[ReplicationOutcome],
    wants_cvar: bool,
) -> Option<SelectionReport> {
    let picks: Vec<CandidateSpec> = outcomes.iter().filter_map(|o| o.cvc_pick).collect();
    if picks.is_empty() {
        return None;
    }
    let ar_wins = picks.iter().filter(|s| s.is_autoregressive()).count();
    let ar_win_rate = ar_wins as f64 / picks.len() as f64;
    let true_order = config.dgp.true_ar_order();
    let true_order_rate = if wants_cvar {
        true_order.map(|order| {
            let ar_picks: Vec<CandidateSpec> =
                outcomes.iter().filter_map(|o| o.cvar_pick).collect();
            let hits = ar_picks
                .iter()
                .filter(|s| **s == CandidateSpec::RemlAr(order))
                .count();
            if ar_picks.is_empty() {
                0.0
            } else {
                hits as f64 / ar_picks.len() as f64
            }
        })
    } else {
        None
    };
    Some(SelectionReport {
        ar_win_rate,
        parzen_win_rate: 1.0 - ar_win_rate,
        true_order,
        true_order_rate,
    })
}

fn replicate(
    x: &[f64],
    config: &ExperimentConfig,
    wants_cv: bool,
    wants_cvar: bool,
) -> ReplicationOutcome {
    let methods = &config.methods;
    let mut outcome = ReplicationOutcome {
        se: vec![None; methods.len()],
        mean: x.iter().sum::<f64>() / x.len() as f64,
        cvc_pick: None,
        cvar_pick: None,
    };

    let series = match TimeSeries::new(x.to_vec()) {
        Ok(s) => s,
        Err(_) => return outcome,
    };

    let scores = if wants_cv {
        let class = CandidateClass::for_length(series.len());
        score_all(&series, &class, config.c).ok()
    } else {
        None
    };
    let mut refit_cache: HashMap<CandidateSpec, Option<f64>> = HashMap::new();

    for (mi, method) in methods.iter().enumerate() {
        outcome.se[mi] = match method {
            Method::AmPw => am_pw_estimate(x).ok().map(|r| r.se_hat),
            Method::NwPw => nw_pw_estimate(x).ok().map(|r| r.se_hat),
            cv => {
                let restriction = cv.cv_restriction().expect("cv method");
                let Some(scores) = scores.as_ref() else {
                    continue;
                };
                match select_from_scores(scores, restriction) {
                    Ok(spec) => {
                        if *method == Method::CvC {
                            outcome.cvc_pick = Some(spec);
                        }
                        if *method == Method::CvAr {
                            outcome.cvar_pick = Some(spec);
                        }
                        *refit_cache.entry(spec).or_insert_with(|| {
                            estimate_with(&series, spec).ok().map(|e| e.se_hat)
                        })
                    }
                    Err(_) => None,
                }
            }
        };
    }
    // the AR-restricted pick is still interesting when CV_AR coverage was
    // not requested but the order statistic was
    if wants_cvar && outcome.cvar_pick.is_none() {
        if let Some(scores) = scores.as_ref() {
            outcome.cvar_pick = select_from_scores(scores, Restriction::ArOnly).ok();
        }
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lrv_closed_forms() {
        let ar = DgpSpec::new(DgpFamily::Ar1 { phi: 0.9 }, 50).unwrap();
        assert!((true_long_run_variance(&ar).unwrap() - 100.0).abs() < 1e-10);
        let ma = DgpSpec::new(DgpFamily::Ma1 { psi: -0.5 }, 50).unwrap();
        assert!((true_long_run_variance(&ma).unwrap() - 0.25).abs() < 1e-15);
        let maq = DgpSpec::new(
            DgpFamily::Maq {
                alpha: 0.1,
                beta: 0.3,
                q: 3,
            },
            50,
        )
        .unwrap();
        assert!((true_long_run_variance(&maq).unwrap() - 1.96).abs() < 1e-12);
        let wn = DgpSpec::new(DgpFamily::WhiteNoise, 64).unwrap();
        assert_eq!(true_long_run_variance(&wn).unwrap(), 1.0);
        let degenerate = DgpSpec::new(DgpFamily::Ma1 { psi: -1.0 }, 64).unwrap();
        assert!(matches!(
            true_long_run_variance(&degenerate),
            Err(FdcvError::ZeroLongRunVariance)
        ));
    }

    #[test]
    fn same_seed_reproduces_path() {
        let spec = DgpSpec::new(DgpFamily::Ar1 { phi: 0.7 }, 100).unwrap();
        let a = simulate(&spec, 99).unwrap();
        let b = simulate(&spec, 99).unwrap();
        assert_eq!(a, b);
        let c = simulate(&spec, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn white_noise_variance_is_one() {
        let spec = DgpSpec::new(DgpFamily::WhiteNoise, 1_000_000).unwrap();
        let x = simulate(&spec, 7).unwrap();
        let var = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        assert!((var - 1.0).abs() < 0.005, "variance {var}");
    }

    #[test]
    fn ar1_lag_one_autocorrelation() {
        let spec = DgpSpec::new(DgpFamily::Ar1 { phi: 0.9 }, 1_000_000).unwrap();
        let x = simulate(&spec, 13).unwrap();
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let u: Vec<f64> = x.iter().map(|v| v - mean).collect();
        let c0: f64 = u.iter().map(|v| v * v).sum();
        let c1: f64 = (1..u.len()).map(|t| u[t] * u[t - 1]).sum();
        assert!((c1 / c0 - 0.9).abs() < 0.005);
    }

    #[test]
    fn ma_families_match_their_variance() {
        // Var X = 1 + alpha^2 + beta^2 for the two-lump MA(q)
        let spec = DgpSpec::new(
            DgpFamily::Maq {
                alpha: 0.1,
                beta: 0.3,
                q: 2,
            },
            400_000,
        )
        .unwrap();
        let x = simulate(&spec, 3).unwrap();
        let var = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        assert!((var - 1.1).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn badness_examples() {
        assert_eq!(badness(0.95), 0.0);
        assert!((badness(0.909) - 1.2859).abs() < 1e-3);
        assert!((badness(0.959) - 0.2078).abs() < 1e-3);
        assert!(badness(1.0).is_infinite());
        assert!(badness(0.0).is_infinite());
    }

    #[test]
    fn efficiency_matches_published_cross_check() {
        let e = relative_efficiency([0.953, 0.959, 0.909]);
        assert!((e[0] - 1.00).abs() < 0.005);
        assert!(((e[1] * 100.0).round() / 100.0 - 0.31).abs() < 1e-12);
        assert!(((e[2] * 100.0).round() / 100.0 - 0.05).abs() < 1e-12);
    }

    #[test]
    fn efficiency_edge_cases() {
        let equal = relative_efficiency([0.93, 0.93, 0.93]);
        assert_eq!(equal, [1.0, 1.0, 1.0]);
        // exact nominal coverage has zero badness, so it wins outright and
        // every competitor's efficiency collapses; coverage 1.0 is zeroed
        let with_exact = relative_efficiency([0.95, 0.99, 1.0]);
        assert_eq!(with_exact[0], 1.0);
        assert!(with_exact[1] >= 0.0 && with_exact[1] < 0.05);
        assert_eq!(with_exact[2], 0.0);
    }

    #[test]
    fn experiment_is_reproducible_and_monotone() {
        let spec = DgpSpec::new(DgpFamily::Ar1 { phi: 0.5 }, 50).unwrap();
        let config = ExperimentConfig::new(
            spec,
            vec![Method::CvC, Method::AmPw, Method::NwPw],
            40,
            4242,
        );
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        for m in &a.methods {
            for w in m.coverage.windows(2) {
                assert!(w[0] <= w[1] + 1e-12, "coverage not monotone in level");
            }
        }
        assert!(a.efficiency_at_95.is_some());
        assert!(a.selection.is_some());
    }

    #[test]
    fn maq_is_rejected_for_bad_q() {
        assert!(DgpSpec::new(
            DgpFamily::Maq {
                alpha: 0.1,
                beta: 0.3,
                q: 4
            },
            50
        )
        .is_err());
        assert!(DgpSpec::new(DgpFamily::Ar1 { phi: 1.0 }, 50).is_err());
    }
}
