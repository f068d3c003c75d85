//! Fourier machinery: DFT, periodogram, sample autocovariances, and the
//! mean-invariant leave-one-out transform.
//!
//! Conventions (used consistently across the crate):
//!
//! ```text
//! J_j     = (1/n) sum_t x_t exp(-i w_j t),   w_j = 2 pi j / n
//! x_t     = sum_j J_j exp(i w_j t)
//! I(w_j)  = (n / 2 pi) |J_j|^2,              j = 1..n_tilde
//! c_hat_r = (1/n) sum_{t=r}^{n-1} x_t x_{t-r}
//! ```
//!
//! Note the 1/n normalization on the forward transform; the inverse carries
//! no scale factor. `n_tilde = floor((n-1)/2)`, so the periodogram never
//! includes the mean frequency j = 0 and, for even n, never the Nyquist
//! index either.
//!
//! The leave-one-out DFT perturbs both mirror indices {j, n-j} and drops the
//! zero-frequency coefficient entirely, which makes every quantity derived
//! from it invariant under adding a constant to the input series.

use std::cell::RefCell;
use std::sync::OnceLock;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{FdcvError, Result};

/// Minimum series length accepted anywhere in the crate.
pub const MIN_SERIES_LEN: usize = 8;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(buf.len())
        } else {
            p.plan_fft_forward(buf.len())
        }
    });
    fft.process(buf);
}

/// Unnormalized forward FFT of a real vector (mixed-radix, any length).
pub(crate) fn fft_real_forward(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut buf, false);
    buf
}

/// Unnormalized forward FFT of a complex vector.
pub(crate) fn fft_forward(mut buf: Vec<Complex64>) -> Vec<Complex64> {
    fft_in_place(&mut buf, false);
    buf
}

/// Unnormalized inverse FFT of a complex vector.
pub(crate) fn fft_inverse(mut buf: Vec<Complex64>) -> Vec<Complex64> {
    fft_in_place(&mut buf, true);
    buf
}

/// A real-valued series with its DFT cached on first use.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    values: Vec<f64>,
    dft: OnceLock<Vec<Complex64>>,
}

impl TimeSeries {
    /// Wrap a series of at least [`MIN_SERIES_LEN`] finite values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < MIN_SERIES_LEN {
            return Err(FdcvError::SeriesTooShort {
                n: values.len(),
                min: MIN_SERIES_LEN,
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(FdcvError::NonFiniteValue { index });
        }
        Ok(TimeSeries {
            values,
            dft: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Number of periodogram ordinates, floor((n-1)/2).
    pub fn n_tilde(&self) -> usize {
        (self.len() - 1) / 2
    }

    /// Fourier frequency `w_j = 2 pi j / n`.
    pub fn frequency(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.len() as f64
    }

    /// The normalized DFT `J_0..J_{n-1}`, computed once and cached.
    pub fn dft(&self) -> &[Complex64] {
        self.dft.get_or_init(|| {
            let n = self.values.len() as f64;
            let mut buf = fft_real_forward(&self.values);
            for v in buf.iter_mut() {
                *v /= n;
            }
            debug_assert!(conjugate_symmetry_defect(&buf) <= 1e-10);
            buf
        })
    }

    /// Periodogram ordinates at j = 1..n_tilde.
    pub fn periodogram(&self) -> Periodogram {
        let n = self.len() as f64;
        let scale = n / (2.0 * std::f64::consts::PI);
        let dft = self.dft();
        let ordinates = (1..=self.n_tilde())
            .map(|j| scale * dft[j].norm_sqr())
            .collect();
        Periodogram { ordinates }
    }

    /// Leave-one-out DFT for Fourier index `1 <= j <= n_tilde`.
    ///
    /// Returns a length-n vector whose slot 0 is fixed at zero (the mean
    /// frequency is removed) and whose entries at k = 1..n-1 follow the
    /// case rule: untouched away from {j, n-j}, averaged neighbors at the
    /// two mirror indices, nearest untouched coefficient when j = 1.
    pub fn leave_one_out_dft(&self, j: usize) -> Result<Vec<Complex64>> {
        let n = self.len();
        let n_tilde = self.n_tilde();
        if j < 1 || j > n_tilde {
            return Err(FdcvError::FrequencyIndexOutOfRange { j, max: n_tilde });
        }
        let dft = self.dft();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..n {
            out[k] = if j == 1 {
                if k == 1 {
                    dft[2]
                } else if k == n - 1 {
                    dft[n - 2]
                } else {
                    dft[k]
                }
            } else if k == j || k == n - j {
                0.5 * (dft[k - 1] + dft[k + 1])
            } else {
                dft[k]
            };
        }
        Ok(out)
    }

    /// Leave-one-out series `x^{-j}`, the real inverse transform of
    /// [`leave_one_out_dft`] over k = 1..n-1. Always has sample mean zero.
    pub fn leave_one_out_series(&self, j: usize) -> Result<LeaveOneOutSeries> {
        let coeffs = self.leave_one_out_dft(j)?;
        let buf = fft_inverse(coeffs);
        let max_abs = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let worst_imag = buf.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
        assert!(
            worst_imag <= 1e-9 * max_abs.max(1e-300),
            "imaginary residue {worst_imag:.3e} exceeds bound; index rule is broken"
        );
        Ok(LeaveOneOutSeries {
            j,
            values: buf.into_iter().map(|v| v.re).collect(),
        })
    }
}

/// Periodogram ordinates `I(w_1)..I(w_n_tilde)`, all nonnegative.
#[derive(Debug, Clone)]
pub struct Periodogram {
    ordinates: Vec<f64>,
}

impl Periodogram {
    pub fn n_tilde(&self) -> usize {
        self.ordinates.len()
    }

    /// Ordinate at Fourier index `1 <= j <= n_tilde`.
    pub fn ordinate(&self, j: usize) -> f64 {
        self.ordinates[j - 1]
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }
}

/// The series with Fourier index j smoothed out and the mean removed.
#[derive(Debug, Clone)]
pub struct LeaveOneOutSeries {
    j: usize,
    values: Vec<f64>,
}

impl LeaveOneOutSeries {
    pub fn excluded_index(&self) -> usize {
        self.j
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Inverse DFT under the crate convention: `x_t = sum_j J_j exp(i w_j t)`.
pub fn inverse_dft(coeffs: &[Complex64]) -> Vec<Complex64> {
    fft_inverse(coeffs.to_vec())
}

/// Biased sample autocovariances `c_hat_0..c_hat_{max_lag}` (divisor n).
///
/// The input is used as-is; callers demean first when the context requires
/// it. The 1/n divisor keeps the sequence nonnegative-definite.
pub fn sample_autocovariance(values: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = values.len();
    if max_lag >= n {
        return Err(FdcvError::LagOutOfRange { lag: max_lag, n });
    }
    let scale = 1.0 / n as f64;
    let mut acvf = Vec::with_capacity(max_lag + 1);
    for r in 0..=max_lag {
        let mut s = 0.0;
        for t in r..n {
            s += values[t] * values[t - r];
        }
        acvf.push(scale * s);
    }
    Ok(acvf)
}

/// Worst-case deviation from `J_{n-k} = conj(J_k)`, relative to max |J|.
pub(crate) fn conjugate_symmetry_defect(dft: &[Complex64]) -> f64 {
    let n = dft.len();
    let max_abs = dft.iter().fold(0.0f64, |m, v| m.max(v.norm())).max(1e-300);
    let mut worst = 0.0f64;
    for k in 1..n {
        let d = (dft[n - k] - dft[k].conj()).norm();
        worst = worst.max(d);
    }
    worst / max_abs
}
