//! Shared fixtures for the benchmarks.

use qss_core::{build_threshold, Complex64, SchemeSpec};

/// Scheme sizes benchmarked, as `(k, n, s)`.
pub const SIZES: [(usize, usize, usize); 3] = [(2, 3, 3), (3, 5, 2), (3, 5, 5)];

/// A fixed secret of dimension `s` with distinct complex amplitudes.
pub fn secret(s: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..s)
        .map(|i| Complex64::new(1.0 + i as f64, 0.5 * i as f64 - 0.25))
        .collect();
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / n).collect()
}

pub fn scheme(k: usize, n: usize, s: usize) -> SchemeSpec {
    build_threshold(k, n, s).expect("benchmark sizes are valid")
}

pub fn label(k: usize, n: usize, s: usize) -> String {
    format!("(({k},{n})) s={s}")
}
