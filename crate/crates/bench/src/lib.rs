//! Benchmark helpers shared by the criterion targets.

use fdcv_core::sim::{simulate, DgpFamily, DgpSpec};

/// A reproducible AR(3)-flavored series for likelihood benchmarks.
pub fn bench_series(n: usize) -> Vec<f64> {
    let spec = DgpSpec::new(DgpFamily::Ar1 { phi: 0.7 }, n).expect("valid spec");
    simulate(&spec, 0xbe9c).expect("simulation succeeds")
}

/// PACF point used by the likelihood benchmarks.
pub const BENCH_PACF: [f64; 3] = [0.7, -0.2, 0.1];
