//! Autoregressive models: PACF parametrization, Burg estimation, theoretical
//! autocovariances, and the AR spectral density.
//!
//! A stationary AR(p) model `X_t = phi_1 X_{t-1} + ... + phi_p X_{t-p} + e_t`
//! is carried around both as coefficients and as the equivalent vector of
//! partial autocorrelations (phi_11, ..., phi_pp). The PACF form is the
//! convenient one for optimization: the stationarity region is exactly the
//! open box (-1, 1)^p, and the Durbin-Levinson recursion converts between
//! the two parametrizations losslessly.

use crate::error::{FdcvError, Result};
use crate::linalg;

/// A stationary AR(p) model with innovation variance `sigma2 > 0`.
///
/// `phi` and `pacf` are kept mutually consistent at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ArModel {
    phi: Vec<f64>,
    pacf: Vec<f64>,
    sigma2: f64,
}

impl ArModel {
    /// Build from partial autocorrelations, each strictly inside (-1, 1).
    pub fn from_pacf(pacf: Vec<f64>, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(FdcvError::InvalidParameter(format!(
                "innovation variance must be positive and finite, got {sigma2}"
            )));
        }
        let phi = pacf_to_ar(&pacf)?;
        Ok(ArModel { phi, pacf, sigma2 })
    }

    /// Build from coefficients; fails if the model is not stationary.
    pub fn from_coefficients(phi: Vec<f64>, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(FdcvError::InvalidParameter(format!(
                "innovation variance must be positive and finite, got {sigma2}"
            )));
        }
        let pacf = ar_to_pacf(&phi)?;
        Ok(ArModel { phi, pacf, sigma2 })
    }

    /// Order-zero (white noise) model.
    pub fn white_noise(sigma2: f64) -> Result<Self> {
        Self::from_pacf(Vec::new(), sigma2)
    }

    pub fn order(&self) -> usize {
        self.phi.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.phi
    }

    pub fn pacf(&self) -> &[f64] {
        &self.pacf
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Spectral density `f(w) = sigma2 / (2 pi |1 - sum_k phi_k e^{-iwk}|^2)`.
    ///
    /// Strictly positive and continuous for any stationary model: the
    /// characteristic polynomial has no roots on the unit circle.
    pub fn spectrum(&self, omega: f64) -> f64 {
        let mut re = 1.0;
        let mut im = 0.0;
        for (k, &phi) in self.phi.iter().enumerate() {
            let a = omega * (k + 1) as f64;
            re -= phi * a.cos();
            im += phi * a.sin();
        }
        self.sigma2 / (2.0 * std::f64::consts::PI * (re * re + im * im))
    }

    /// Theoretical autocovariances `c_0..c_{max_lag}`.
    ///
    /// The first p+1 values solve the Yule-Walker system; later lags follow
    /// the AR recursion `c_k = sum_j phi_j c_{k-j}`.
    pub fn autocovariances(&self, max_lag: usize) -> Vec<f64> {
        let p = self.order();
        if p == 0 {
            let mut acvf = vec![0.0; max_lag + 1];
            acvf[0] = self.sigma2;
            return acvf;
        }
        // (p+1) x (p+1) system in c_0..c_p:
        //   c_k - sum_j phi_j c_{|k-j|} = sigma2 * [k == 0]
        let m = p + 1;
        let mut a = vec![0.0; m * m];
        for k in 0..m {
            a[k * m + k] += 1.0;
            for (j, &phi) in self.phi.iter().enumerate() {
                let idx = k.abs_diff(j + 1);
                a[k * m + idx] -= phi;
            }
        }
        let mut rhs = vec![0.0; m];
        rhs[0] = self.sigma2;
        let head = linalg::lu_solve(a, m, rhs)
            .expect("Yule-Walker system is nonsingular for stationary models");
        let mut acvf = head;
        acvf.resize(max_lag + 1, 0.0);
        for k in m..=max_lag {
            let mut s = 0.0;
            for (j, &phi) in self.phi.iter().enumerate() {
                s += phi * acvf[k - j - 1];
            }
            acvf[k] = s;
        }
        acvf.truncate(max_lag + 1);
        acvf
    }
}

/// Durbin-Levinson: partial autocorrelations to AR coefficients.
///
/// `phi^{(k)}_j = phi^{(k-1)}_j - phi_kk * phi^{(k-1)}_{k-j}`; the result is
/// stationary for any input inside the open box.
pub fn pacf_to_ar(pacf: &[f64]) -> Result<Vec<f64>> {
    for (level, &k) in pacf.iter().enumerate() {
        if !(k.is_finite() && k.abs() < 1.0) {
            return Err(FdcvError::NonStationary {
                level: level + 1,
                value: k,
            });
        }
    }
    let mut phi: Vec<f64> = Vec::with_capacity(pacf.len());
    for (k, &kappa) in pacf.iter().enumerate() {
        // update phi^{(k-1)} -> phi^{(k)} in place
        let half = k / 2;
        for j in 0..half {
            let a = phi[j];
            let b = phi[k - 1 - j];
            phi[j] = a - kappa * b;
            phi[k - 1 - j] = b - kappa * a;
        }
        if k % 2 == 1 {
            phi[half] -= kappa * phi[half];
        }
        phi.push(kappa);
    }
    Ok(phi)
}

/// Inverse Durbin-Levinson: coefficients back to partial autocorrelations.
///
/// Fails with the offending level when an intermediate reflection
/// coefficient leaves (-1, 1), i.e. the input is not stationary.
pub fn ar_to_pacf(phi: &[f64]) -> Result<Vec<f64>> {
    let p = phi.len();
    let mut work = phi.to_vec();
    let mut pacf = vec![0.0; p];
    for k in (1..=p).rev() {
        let kappa = work[k - 1];
        if !(kappa.is_finite() && kappa.abs() < 1.0) {
            return Err(FdcvError::NonStationary {
                level: k,
                value: kappa,
            });
        }
        pacf[k - 1] = kappa;
        let denom = 1.0 - kappa * kappa;
        let half = (k - 1) / 2;
        for j in 0..half {
            let a = work[j];
            let b = work[k - 2 - j];
            work[j] = (a + kappa * b) / denom;
            work[k - 2 - j] = (b + kappa * a) / denom;
        }
        if (k - 1) % 2 == 1 {
            work[half] = (work[half] + kappa * work[half]) / denom;
        }
    }
    Ok(pacf)
}

/// Burg's method: reflection coefficients that minimize the pooled
/// forward/backward prediction error, guaranteed inside (-1, 1).
///
/// The caller demeans the series; `sigma2` of the result is the final
/// prediction error variance.
pub fn burg_fit(series: &[f64], order: usize) -> Result<ArModel> {
    let n = series.len();
    if order * 2 >= n {
        return Err(FdcvError::InvalidParameter(format!(
            "Burg order {order} too large for series of length {n}"
        )));
    }
    let mut v = series.iter().map(|x| x * x).sum::<f64>() / n as f64;
    if v <= 0.0 {
        return Err(FdcvError::DegenerateSeries {
            reason: "zero variance",
        });
    }
    let mut fwd = series.to_vec();
    let mut bwd = series.to_vec();
    let mut pacf = Vec::with_capacity(order);
    for m in 1..=order {
        let mut num = 0.0;
        let mut den = 0.0;
        for t in m..n {
            num += fwd[t] * bwd[t - 1];
            den += fwd[t] * fwd[t] + bwd[t - 1] * bwd[t - 1];
        }
        if den <= 0.0 {
            return Err(FdcvError::DegenerateSeries {
                reason: "prediction error vanished in Burg recursion",
            });
        }
        let kappa = 2.0 * num / den;
        if kappa.abs() >= 1.0 {
            return Err(FdcvError::DegenerateSeries {
                reason: "Burg reflection coefficient on the boundary",
            });
        }
        // descending update keeps bwd[t-1] untouched until it is consumed
        for t in (m..n).rev() {
            let f = fwd[t];
            let b = bwd[t - 1];
            fwd[t] = f - kappa * b;
            bwd[t] = b - kappa * f;
        }
        v *= 1.0 - kappa * kappa;
        pacf.push(kappa);
    }
    ArModel::from_pacf(pacf, v.max(f64::MIN_POSITIVE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_one_pacf_is_identity() {
        assert_eq!(pacf_to_ar(&[0.5]).unwrap(), vec![0.5]);
        assert_eq!(ar_to_pacf(&[0.9]).unwrap(), vec![0.9]);
    }

    #[test]
    fn order_two_recursion_step() {
        let phi = pacf_to_ar(&[0.5, 0.3]).unwrap();
        assert!((phi[0] - 0.35).abs() < 1e-15);
        assert!((phi[1] - 0.3).abs() < 1e-15);
        let pacf = ar_to_pacf(&[0.35, 0.3]).unwrap();
        assert!((pacf[0] - 0.5).abs() < 1e-15);
        assert!((pacf[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn nonstationary_coefficient_rejected() {
        let err = ar_to_pacf(&[1.2]).unwrap_err();
        assert!(matches!(err, FdcvError::NonStationary { level: 1, .. }));
        assert!(pacf_to_ar(&[0.2, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn durbin_levinson_round_trip(v in proptest::collection::vec(-0.9f64..0.9, 1..=10)) {
            let phi = pacf_to_ar(&v).unwrap();
            let back = ar_to_pacf(&phi).unwrap();
            for (a, b) in v.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn durbin_levinson_round_trip_near_boundary(
            v in proptest::collection::vec(-0.995f64..0.995, 1..=6),
        ) {
            // the 1/(1 - k^2) downdating amplifies rounding near the
            // boundary; accuracy degrades gracefully, not catastrophically
            let phi = pacf_to_ar(&v).unwrap();
            let back = ar_to_pacf(&phi).unwrap();
            for (a, b) in v.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-6);
            }
        }

        #[test]
        fn spectrum_positive_and_symmetric(
            v in proptest::collection::vec(-0.95f64..0.95, 0..=5),
            w in 0.0f64..std::f64::consts::PI,
        ) {
            let model = ArModel::from_pacf(v, 1.0).unwrap();
            let f = model.spectrum(w);
            prop_assert!(f > 0.0 && f.is_finite());
            prop_assert!((f - model.spectrum(-w)).abs() <= 1e-12 * f);
        }
    }

    #[test]
    fn ar1_autocovariances_closed_form() {
        let model = ArModel::from_coefficients(vec![0.9], 1.0).unwrap();
        let acvf = model.autocovariances(6);
        for (k, &c) in acvf.iter().enumerate() {
            let expected = 0.9f64.powi(k as i32) / (1.0 - 0.81);
            assert!((c - expected).abs() < 1e-12, "lag {k}");
        }
    }

    #[test]
    fn white_noise_autocovariances() {
        let model = ArModel::white_noise(2.0).unwrap();
        let acvf = model.autocovariances(4);
        assert_eq!(acvf[0], 2.0);
        assert!(acvf[1..].iter().all(|&c| c == 0.0));
    }

    // Box-Muller on a splitmix stream; fine for LLN-style checks.
    fn test_gauss(state: &mut u64) -> f64 {
        let next = |state: &mut u64| {
            *state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = *state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            (z ^ (z >> 31)) as f64 / u64::MAX as f64
        };
        let u1: f64 = next(state).max(1e-12);
        let u2: f64 = next(state);
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    #[test]
    fn ar2_autocovariances_match_long_simulation() {
        // AR(2) phi = (0.5, 0.3), unit innovations, 1e6-point path
        let model = ArModel::from_coefficients(vec![0.5, 0.3], 1.0).unwrap();
        let acvf = model.autocovariances(3);
        let n = 1_000_000usize;
        let mut state = 0x243f6a8885a308d3u64;
        let mut x = vec![0.0f64; n];
        for t in 2..n {
            x[t] = 0.5 * x[t - 1] + 0.3 * x[t - 2] + test_gauss(&mut state);
        }
        let tail = &x[1000..];
        let m = tail.len();
        for lag in 0..=3usize {
            let mut s = 0.0;
            for t in lag..m {
                s += tail[t] * tail[t - lag];
            }
            let sample = s / m as f64;
            let rel = (sample - acvf[lag]).abs() / acvf[lag].abs();
            assert!(rel < 0.01, "lag {lag}: sample {sample} vs {0}", acvf[lag]);
        }
    }

    #[test]
    fn spectrum_white_noise_is_flat() {
        let model = ArModel::white_noise(1.0).unwrap();
        for w in [0.0, 0.3, 1.0, std::f64::consts::PI] {
            assert!((model.spectrum(w) - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn spectrum_ar1_at_zero() {
        let model = ArModel::from_coefficients(vec![0.9], 1.0).unwrap();
        assert!((model.spectrum(0.0) - 1.0 / (2.0 * std::f64::consts::PI * 0.01)).abs() < 1e-10);
    }

    #[test]
    fn spectrum_integrates_to_lag_zero_autocovariance() {
        // Simpson quadrature over [-pi, pi] against c_0
        let model = ArModel::from_pacf(vec![0.6, -0.2, 0.1], 1.3).unwrap();
        let c0 = model.autocovariances(0)[0];
        let m = 20_000usize;
        let h = 2.0 * std::f64::consts::PI / m as f64;
        let mut integral = 0.0;
        for i in 0..=m {
            let w = -std::f64::consts::PI + i as f64 * h;
            let coeff = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            integral += coeff * model.spectrum(w);
        }
        integral *= h / 3.0;
        assert!((integral - c0).abs() < 1e-6 * c0);
    }

    #[test]
    fn long_run_variance_identity() {
        // 2 pi f(0) = sum of all autocovariances
        for pacf in [vec![0.8], vec![0.5, 0.3], vec![-0.4, 0.2, 0.1]] {
            let model = ArModel::from_pacf(pacf, 1.0).unwrap();
            let f0 = model.spectrum(0.0);
            let acvf = model.autocovariances(4000);
            let total = acvf[0] + 2.0 * acvf[1..].iter().sum::<f64>();
            let rel = (2.0 * std::f64::consts::PI * f0 - total).abs() / total.abs();
            assert!(rel < 1e-8);
        }
    }

    #[test]
    fn theoretical_acvf_is_positive_definite() {
        let model = ArModel::from_pacf(vec![0.9, -0.5, 0.3, 0.2, -0.1], 1.0).unwrap();
        let acvf = model.autocovariances(63);
        let dense = linalg::toeplitz_dense(&acvf);
        let eig = linalg::sym_eigenvalues(&dense, 64);
        assert!(eig[0] > 0.0);
    }

    #[test]
    fn burg_order_zero_returns_sample_variance() {
        let vals: Vec<f64> = (0..40).map(|t| ((t * 37 % 11) as f64 - 5.0) / 3.0).collect();
        let mean = vals.iter().sum::<f64>() / 40.0;
        let centered: Vec<f64> = vals.iter().map(|v| v - mean).collect();
        let fit = burg_fit(&centered, 0).unwrap();
        assert_eq!(fit.order(), 0);
        let msq = centered.iter().map(|v| v * v).sum::<f64>() / 40.0;
        assert!((fit.sigma2() - msq).abs() < 1e-14);
    }

    #[test]
    fn burg_recovers_ar1_coefficient() {
        // long simulated AR(1), phi = 0.9
        let n = 10_000usize;
        let mut state = 123456789u64;
        let mut x = vec![0.0f64; n];
        for t in 1..n {
            x[t] = 0.9 * x[t - 1] + test_gauss(&mut state);
        }
        let mean = x.iter().sum::<f64>() / n as f64;
        let centered: Vec<f64> = x.iter().map(|v| v - mean).collect();
        let fit = burg_fit(&centered, 1).unwrap();
        assert!((fit.coefficients()[0] - 0.9).abs() < 0.02);
    }

    #[test]
    fn burg_pacf_stays_inside_box() {
        let vals: Vec<f64> = (0..64)
            .map(|t| ((t * 97 % 23) as f64 / 11.0 - 1.0) * (1.0 + 0.1 * (t % 7) as f64))
            .collect();
        let fit = burg_fit(&vals, 8).unwrap();
        assert!(fit.pacf().iter().all(|k| k.abs() < 1.0));
        assert!(burg_fit(&vec![0.0; 32], 2).is_err());
        assert!(burg_fit(&vals, 32).is_err());
    }
}
