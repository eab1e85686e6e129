//! Cyclic Jacobi eigenvalue iteration for small dense Hermitian matrices.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of the Hermitian `n x n` row-major matrix `a`, ascending.
///
/// Each rotation first rephases row/column `q` so that `a[p][q]` becomes real
/// and non-negative, then applies an ordinary real Jacobi rotation in the
/// `(p, q)` plane. Only the lower/upper triangles' Hermitian symmetry is
/// relied upon; the input is not checked.
pub fn hermitian_eigenvalues(a: &[Complex64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut a = a.to_vec();
    let frob: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = f64::EPSILON * frob.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, n, p, q);
            }
        }
    }

    let mut evals: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    evals.sort_by(|x, y| x.total_cmp(y));
    evals
}

fn rotate(a: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    // rephase: column q *= conj(phase), row q *= phase
    let phase = apq / r;
    let conj = phase.conj();
    for i in 0..n {
        a[i * n + q] *= conj;
    }
    for j in 0..n {
        a[q * n + j] *= phase;
    }

    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // A <- R^T A R with R the real Givens rotation on (p, q)
    for i in 0..n {
        let aip = a[i * n + p];
        let aiq = a[i * n + q];
        a[i * n + p] = aip * c - aiq * s;
        a[i * n + q] = aip * s + aiq * c;
    }
    for j in 0..n {
        let apj = a[p * n + j];
        let aqj = a[q * n + j];
        a[p * n + j] = apj * c - aqj * s;
        a[q * n + j] = apj * s + aqj * c;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
}
