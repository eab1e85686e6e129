use std::f64::consts::PI;

use num_complex::Complex64;

use super::PureState;
use crate::error::{Error, Result};
use crate::gfq::Prime;

/// An operator on a subset of registers, identity elsewhere.
///
/// Stored column-wise as sparse `(row, value)` lists: Weyl operators have a
/// single entry per column, which keeps exhaustive operator-basis sweeps cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetOperator {
    support: Vec<usize>,
    dims: Vec<usize>,
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl SubsetOperator {
    /// From a dense row-major matrix on the support (support registers in
    /// the given order, first most significant).
    pub fn from_dense(support: Vec<usize>, dims: Vec<usize>, matrix: &[Complex64]) -> Result<Self> {
        if support.len() != dims.len() || support.is_empty() {
            return Err(Error::DimensionMismatch("support and dims disagree".into()));
        }
        let d: usize = dims.iter().product();
        if matrix.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {d}x{d} operator",
                matrix.len()
            )));
        }
        let columns = (0..d)
            .map(|col| {
                (0..d)
                    .filter_map(|row| {
                        let v = matrix[row * d + col];
                        (v != Complex64::new(0.0, 0.0)).then_some((row, v))
                    })
                    .collect()
            })
            .collect();
        Ok(SubsetOperator { support, dims, columns })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, col: usize) -> &[(usize, Complex64)] {
        &self.columns[col]
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut m = vec![Complex64::new(0.0, 0.0); d * d];
        for (col, entries) in self.columns.iter().enumerate() {
            for &(row, v) in entries {
                m[row * d + col] = v;
            }
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.columns
            .iter()
            .enumerate()
            .all(|(c, e)| e.len() == 1 && e[0].0 == c && e[0].1 == Complex64::new(1.0, 0.0))
    }

    fn check_against(&self, state: &PureState) -> Result<()> {
        let sys = state.system();
        for (&r, &d) in self.support.iter().zip(&self.dims) {
            match sys.dims().get(r) {
                None => return Err(Error::RegisterOutOfRange(r)),
                Some(&sd) if sd != d => {
                    return Err(Error::DimensionMismatch(format!(
                        "operator expects dimension {d} on register {r}, state has {sd}"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Support-local index of a full basis index.
    #[inline]
    fn local_index(&self, state: &PureState, idx: usize) -> usize {
        let sys = state.system();
        self.support
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&r, &d)| acc * d + sys.label(idx, r))
    }

    /// Full basis index with the support labels replaced by local index `row`.
    #[inline]
    fn replace_local(&self, state: &PureState, idx: usize, old: usize, row: usize) -> usize {
        let sys = state.system();
        let (mut old, mut row, mut out) = (old, row, idx);
        for (&r, &d) in self.support.iter().zip(&self.dims).rev() {
            let st = sys.stride(r);
            out = out - (old % d) * st + (row % d) * st;
            old /= d;
            row /= d;
        }
        out
    }

    /// `E |psi>` (not renormalized, so general operators are allowed).
    pub fn apply(&self, state: &PureState) -> Result<Vec<Complex64>> {
        self.check_against(state)?;
        let amps = state.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (idx, &a) in amps.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let col = self.local_index(state, idx);
            for &(row, v) in &self.columns[col] {
                out[self.replace_local(state, idx, col, row)] += v * a;
            }
        }
        Ok(out)
    }

    /// `E |psi>` for a unitary `E`, as a state.
    pub fn apply_unitary(&self, state: &PureState) -> Result<PureState> {
        let amps = self.apply(state)?;
        PureState::new(state.system().clone(), amps)
    }
}

/// `prod_j X^{a_j} Z^{b_j}` on `support`, with `X|y> = |y+1>` and
/// `Z|y> = w^y |y>`, `w = exp(2 pi i / q)`.
pub fn gen_pauli(a: &[usize], b: &[usize], support: &[usize], q: Prime) -> Result<SubsetOperator> {
    let r = support.len();
    if a.len() != r || b.len() != r || r == 0 {
        return Err(Error::DimensionMismatch(format!(
            "exponent vectors of length {}/{} for support of size {r}",
            a.len(),
            b.len()
        )));
    }
    let qv = q.value();
    let d = qv.pow(r as u32);
    let roots: Vec<Complex64> = (0..qv)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / qv as f64))
        .collect();
    let mut columns = Vec::with_capacity(d);
    let mut y = vec![0; r];
    for col in 0..d {
        let mut rem = col;
        for j in (0..r).rev() {
            y[j] = rem % qv;
            rem /= qv;
        }
        let mut phase = 0;
        let mut row = 0;
        for j in 0..r {
            phase = q.add(phase, q.mul(b[j], y[j]));
            row = row * qv + q.add(y[j], a[j]);
        }
        columns.push(vec![(row, roots[phase])]);
    }
    Ok(SubsetOperator {
        support: support.to_vec(),
        dims: vec![qv; r],
        columns,
    })
}

/// `<bra| E |ket>`, iterating only over the nonzero amplitudes of `ket`.
pub fn matrix_element(bra: &PureState, op: &SubsetOperator, ket: &PureState) -> Result<Complex64> {
    if bra.system() != ket.system() {
        return Err(Error::DimensionMismatch("bra and ket live on different systems".into()));
    }
    op.check_against(ket)?;
    let (ba, ka) = (bra.amplitudes(), ket.amplitudes());
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, &a) in ka.iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let col = op.local_index(ket, idx);
        for &(row, v) in &op.columns[col] {
            let out = op.replace_local(ket, idx, col, row);
            acc += ba[out].conj() * v * a;
        }
    }
    Ok(acc)
}

/// `<phi| E |phi>`.
pub fn expectation(state: &PureState, op: &SubsetOperator) -> Result<Complex64> {
    matrix_element(state, op, state)
}
