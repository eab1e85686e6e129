//! Arithmetic over the prime field `Z_q`.
//!
//! Field elements are plain `usize` values kept reduced in `[0, q)`. The
//! moduli in this crate are tiny (a few hundred at most), so products never
//! come close to overflowing.

use std::fmt;

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A prime modulus `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(usize);

impl Prime {
    pub fn new(q: usize) -> Result<Self> {
        if is_prime(q) {
            Ok(Prime(q))
        } else {
            Err(Error::NotPrime(q))
        }
    }

    #[inline]
    pub fn value(self) -> usize {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: usize) -> usize {
        x % self.0
    }

    #[inline]
    pub fn add(self, a: usize, b: usize) -> usize {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: usize, b: usize) -> usize {
        (a + self.0 - b % self.0) % self.0
    }

    #[inline]
    pub fn neg(self, a: usize) -> usize {
        (self.0 - a % self.0) % self.0
    }

    #[inline]
    pub fn mul(self, a: usize, b: usize) -> usize {
        (a % self.0) * (b % self.0) % self.0
    }

    pub fn pow(self, base: usize, mut exp: usize) -> usize {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem; `None` for zero.
    pub fn inv(self, a: usize) -> Option<usize> {
        let a = a % self.0;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.0 - 2))
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Smallest prime `q` with `max(m, s) <= q <= 2 max(m, s)`.
///
/// Bertrand's postulate guarantees one exists. Arguments below the usual
/// preconditions (`m >= 1`, `s >= 2`) are clamped so the result is always a
/// valid modulus.
pub fn choose_prime(m: usize, s: usize) -> Prime {
    let lo = m.max(s).max(2);
    (lo..=2 * lo)
        .find(|&q| is_prime(q))
        .map(Prime)
        .expect("Bertrand's postulate")
}

/// Evaluates `c_0 + c_1 t + ... + c_{d-1} t^{d-1}` mod `q` by Horner's rule.
pub fn poly_eval(coeffs: &[usize], t: usize, q: Prime) -> usize {
    coeffs.iter().rev().fold(0, |acc, &c| q.add(q.mul(acc, t), c))
}

/// Dense matrix over `Z_q`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    q: Prime,
    rows: usize,
    cols: usize,
    entries: Vec<usize>,
}

impl FieldMatrix {
    pub fn from_rows(q: Prime, rows: &[Vec<usize>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        let entries = rows.iter().flatten().map(|&x| q.reduce(x)).collect();
        Ok(FieldMatrix {
            q,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn identity(q: Prime, d: usize) -> Self {
        let mut entries = vec![0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1;
        }
        FieldMatrix {
            q,
            rows: d,
            cols: d,
            entries,
        }
    }

    /// The `d x d` Vandermonde matrix with entry `(i, j) = z_j^i`.
    ///
    /// With this orientation a row vector of coefficients `c` maps to the
    /// evaluations: `c * V(z) = (p_c(z_0), ..., p_c(z_{d-1}))`.
    pub fn vandermonde(points: &[usize], q: Prime) -> Self {
        let d = points.len();
        let mut entries = vec![0; d * d];
        for (j, &z) in points.iter().enumerate() {
            let mut power = 1 % q.value();
            for i in 0..d {
                entries[i * d + j] = power;
                power = q.mul(power, z);
            }
        }
        FieldMatrix {
            q,
            rows: d,
            cols: d,
            entries,
        }
    }

    pub fn modulus(&self) -> Prime {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-vector product `y * M`.
    pub fn left_mul(&self, y: &[usize]) -> Vec<usize> {
        assert_eq!(y.len(), self.rows, "vector length must match row count");
        let q = self.q;
        let mut out = vec![0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0 {
                continue;
            }
            for (o, &mij) in out.iter_mut().zip(self.row(i)) {
                *o = q.add(*o, q.mul(yi, mij));
            }
        }
        out
    }

    pub fn matmul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows || self.q != other.q {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rows: Vec<Vec<usize>> = (0..self.rows).map(|i| other.left_mul(self.row(i))).collect();
        FieldMatrix::from_rows(self.q, &rows)
    }

    /// Inverse by Gauss-Jordan elimination mod `q`.
    pub fn inverse(&self) -> Result<FieldMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let q = self.q;
        let d = self.rows;
        let w = 2 * d;
        // augmented [M | I]
        let mut a = vec![0; d * w];
        for i in 0..d {
            a[i * w..i * w + d].copy_from_slice(self.row(i));
            a[i * w + d + i] = 1;
        }
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| a[r * w + col] != 0)
                .ok_or(Error::SingularMatrix(q.value()))?;
            if pivot != col {
                for j in 0..w {
                    a.swap(pivot * w + j, col * w + j);
                }
            }
            let inv = q.inv(a[col * w + col]).expect("nonzero pivot");
            for j in 0..w {
                a[col * w + j] = q.mul(a[col * w + j], inv);
            }
            for r in 0..d {
                let f = a[r * w + col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..w {
                    let v = q.mul(f, a[col * w + j]);
                    a[r * w + j] = q.sub(a[r * w + j], v);
                }
            }
        }
        let entries = (0..d).flat_map(|i| a[i * w + d..(i + 1) * w].to_vec()).collect();
        Ok(FieldMatrix {
            q,
            rows: d,
            cols: d,
            entries,
        })
    }
}

/// Convenience wrapper matching [`FieldMatrix::vandermonde`].
pub fn vandermonde(points: &[usize], q: Prime) -> FieldMatrix {
    FieldMatrix::vandermonde(points, q)
}

/// Convenience wrapper matching [`FieldMatrix::inverse`].
pub fn mat_inverse(m: &FieldMatrix) -> Result<FieldMatrix> {
    m.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(q: usize) -> Prime {
        Prime::new(q).unwrap()
    }

    #[test]
    fn choose_prime_examples() {
        assert_eq!(choose_prime(3, 3).value(), 3);
        assert_eq!(choose_prime(5, 2).value(), 5);
        assert_eq!(choose_prime(1, 2).value(), 2);
        assert_eq!(choose_prime(7, 2).value(), 7);
        assert_eq!(choose_prime(4, 2).value(), 5);
        assert_eq!(choose_prime(3, 8).value(), 11);
    }

    #[test]
    fn choose_prime_is_smallest_in_window() {
        for m in 1..40 {
            for s in 2..40 {
                let lo = m.max(s);
                let q = choose_prime(m, s).value();
                assert!(lo <= q && q <= 2 * lo);
                assert!((lo..q).all(|x| !is_prime(x)));
            }
        }
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(Prime::new(9), Err(Error::NotPrime(9)));
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(13).is_ok());
    }

    #[test]
    fn poly_eval_examples() {
        assert_eq!(poly_eval(&[1, 2], 2, p(3)), 2);
        assert_eq!(poly_eval(&[4, 3, 2], 0, p(5)), 4);
        assert_eq!(poly_eval(&[0, 0, 0], 3, p(5)), 0);
        assert_eq!(poly_eval(&[], 3, p(5)), 0);
    }

    #[test]
    fn poly_eval_matches_power_sum_exhaustively() {
        for q in [2, 3, 5, 7] {
            let q = p(q);
            for d in 1..=3 {
                let total = q.value().pow(d as u32);
                for code in 0..total {
                    let mut c = Vec::with_capacity(d);
                    let mut x = code;
                    for _ in 0..d {
                        c.push(x % q.value());
                        x /= q.value();
                    }
                    for t in 0..q.value() {
                        let naive: usize =
                            c.iter().enumerate().map(|(i, &ci)| ci * t.pow(i as u32)).sum::<usize>() % q.value();
                        assert_eq!(poly_eval(&c, t, q), naive);
                    }
                }
            }
        }
    }

    #[test]
    fn vandermonde_examples() {
        let q = p(3);
        let v = vandermonde(&[0, 1, 2], q);
        assert_eq!(v.row(0), &[1, 1, 1]);
        assert_eq!(v.row(1), &[0, 1, 2]);
        assert_eq!(v.row(2), &[0, 1, 1]);
        assert_eq!(vandermonde(&[4], p(7)).row(0), &[1]);

        let q = p(7);
        let v = vandermonde(&[3, 5], q);
        let c = [2, 6];
        assert_eq!(v.left_mul(&c), vec![poly_eval(&c, 3, q), poly_eval(&c, 5, q)]);
    }

    #[test]
    fn inverse_examples() {
        let q = p(3);
        let id = FieldMatrix::identity(q, 3);
        assert_eq!(id.inverse().unwrap(), id);

        let v = vandermonde(&[0, 1], q);
        let inv = v.inverse().unwrap();
        assert_eq!(inv, FieldMatrix::from_rows(q, &[vec![1, 2], vec![0, 1]]).unwrap());
        assert_eq!(v.matmul(&inv).unwrap(), FieldMatrix::identity(q, 2));
    }

    #[test]
    fn singular_and_non_square() {
        let q = p(5);
        let v = vandermonde(&[2, 2], q);
        assert_eq!(v.inverse(), Err(Error::SingularMatrix(5)));
        let r = FieldMatrix::from_rows(q, &[vec![1, 2, 3]]).unwrap();
        assert!(matches!(r.inverse(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn distinct_point_vandermondes_are_invertible() {
        // every ordered tuple of distinct points, d <= 4, q <= 7
        for q in [2, 3, 5, 7] {
            let q = p(q);
            for d in 1..=q.value().min(4) {
                let mut tuple = vec![0; d];
                loop {
                    let distinct = (0..d).all(|i| (0..i).all(|j| tuple[i] != tuple[j]));
                    if distinct {
                        let v = vandermonde(&tuple, q);
                        let inv = v.inverse().expect("distinct points");
                        assert_eq!(v.matmul(&inv).unwrap(), FieldMatrix::identity(q, d));
                        assert_eq!(inv.matmul(&v).unwrap(), FieldMatrix::identity(q, d));
                    }
                    let mut i = 0;
                    while i < d {
                        tuple[i] += 1;
                        if tuple[i] < q.value() {
                            break;
                        }
                        tuple[i] = 0;
                        i += 1;
                    }
                    if i == d {
                        break;
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn larger_vandermondes_invert(q in prop::sample::select(vec![7usize, 11, 13]), seed in any::<u64>()) {
            let q = p(q);
            // d distinct points from a seeded shuffle
            let mut pts: Vec<usize> = (0..q.value()).collect();
            let mut s = seed;
            for i in (1..pts.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                pts.swap(i, (s >> 33) as usize % (i + 1));
            }
            let d = 1 + (seed as usize % 7).min(q.value() - 1);
            let v = vandermonde(&pts[..d], q);
            let inv = v.inverse().unwrap();
            prop_assert_eq!(v.matmul(&inv).unwrap(), FieldMatrix::identity(q, d));
        }

        #[test]
        fn random_invertible_matrices(rows in prop::collection::vec(prop::collection::vec(0usize..11, 4), 4)) {
            let q = p(11);
            let m = FieldMatrix::from_rows(q, &rows).unwrap();
            if let Ok(inv) = m.inverse() {
                prop_assert_eq!(m.matmul(&inv).unwrap(), FieldMatrix::identity(q, 4));
                prop_assert_eq!(inv.matmul(&m).unwrap(), FieldMatrix::identity(q, 4));
            }
        }
    }
}
