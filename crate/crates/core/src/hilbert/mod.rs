//! Dense simulation of multi-register qudit systems.
//!
//! Basis states are indexed in mixed radix with register 0 most significant:
//! `index(y_0, ..., y_{r-1}) = sum_j y_j * prod_{l > j} d_l`. The file formats
//! in `qss-cli` rely on this ordering.

mod eigen;
mod operator;

pub use eigen::hermitian_eigenvalues;
pub use operator::{expectation, gen_pauli, matrix_element, SubsetOperator};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gfq::{FieldMatrix, Prime};

/// Tolerance used when validating that constructed objects are physical.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Eigenvalues above this are counted towards a density matrix's rank.
pub const RANK_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Per-register dimensions of a composite system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegisterSystem {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl RegisterSystem {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSystem("no registers".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSystem(format!("register dimension {d} < 2")));
        }
        let mut strides = vec![1; dims.len()];
        for j in (0..dims.len() - 1).rev() {
            strides[j] = strides[j + 1] * dims[j + 1];
        }
        let total = strides[0] * dims[0];
        Ok(RegisterSystem { dims, strides, total })
    }

    /// `r` registers of dimension `q` each.
    pub fn uniform(q: usize, r: usize) -> Result<Self> {
        Self::new(vec![q; r])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn stride(&self, register: usize) -> usize {
        self.strides[register]
    }

    pub fn index(&self, labels: &[usize]) -> Result<usize> {
        if labels.len() != self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} registers",
                labels.len(),
                self.dims.len()
            )));
        }
        let mut idx = 0;
        for (j, (&y, &d)) in labels.iter().zip(&self.dims).enumerate() {
            if y >= d {
                return Err(Error::LabelOutOfRange {
                    register: j,
                    label: y,
                    dim: d,
                });
            }
            idx += y * self.strides[j];
        }
        Ok(idx)
    }

    #[inline]
    pub fn label(&self, index: usize, register: usize) -> usize {
        (index / self.strides[register]) % self.dims[register]
    }

    pub fn labels(&self, index: usize) -> Vec<usize> {
        (0..self.dims.len()).map(|j| self.label(index, j)).collect()
    }

    /// The subsystem made of `registers`, in the given order.
    pub fn subsystem(&self, registers: &[usize]) -> Result<RegisterSystem> {
        let dims = registers
            .iter()
            .map(|&r| self.dims.get(r).copied().ok_or(Error::RegisterOutOfRange(r)))
            .collect::<Result<Vec<_>>>()?;
        RegisterSystem::new(dims)
    }

    pub fn concat(&self, other: &RegisterSystem) -> RegisterSystem {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        RegisterSystem::new(dims).expect("concatenation of valid systems")
    }

    fn check_registers(&self, registers: &[usize]) -> Result<()> {
        for (i, &r) in registers.iter().enumerate() {
            if r >= self.dims.len() {
                return Err(Error::RegisterOutOfRange(r));
            }
            if registers[..i].contains(&r) {
                return Err(Error::DimensionMismatch(format!("register {r} listed twice")));
            }
        }
        Ok(())
    }

    /// Splits every basis index into (index within `keep`, index within the rest).
    fn split_indices(&self, keep: &[usize]) -> (usize, usize, Vec<(usize, usize)>) {
        let rest: Vec<usize> = (0..self.len()).filter(|r| !keep.contains(r)).collect();
        let keep_dim: usize = keep.iter().map(|&r| self.dims[r]).product();
        let rest_dim: usize = rest.iter().map(|&r| self.dims[r]).product();
        let pairs = (0..self.total)
            .map(|idx| {
                let k = keep.iter().fold(0, |acc, &r| acc * self.dims[r] + self.label(idx, r));
                let t = rest.iter().fold(0, |acc, &r| acc * self.dims[r] + self.label(idx, r));
                (k, t)
            })
            .collect();
        (keep_dim, rest_dim, pairs)
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    system: RegisterSystem,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalized within [`CONSTRUCTION_TOL`].
    pub fn new(system: RegisterSystem, amps: Vec<Complex64>) -> Result<Self> {
        check_len(&system, amps.len())?;
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(PureState { system, amps })
    }

    /// Rescales `amps` to unit norm. Fails on the zero vector.
    pub fn normalized(system: RegisterSystem, mut amps: Vec<Complex64>) -> Result<Self> {
        check_len(&system, amps.len())?;
        let n2 = norm_sqr(&amps);
        if !n2.is_finite() || n2 <= 0.0 {
            return Err(Error::NotNormalized(n2));
        }
        let scale = 1.0 / n2.sqrt();
        amps.iter_mut().for_each(|a| *a *= scale);
        Ok(PureState { system, amps })
    }

    pub fn basis_state(system: RegisterSystem, labels: &[usize]) -> Result<Self> {
        let idx = system.index(labels)?;
        let mut amps = vec![ZERO; system.total_dim()];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(PureState { system, amps })
    }

    pub fn system(&self) -> &RegisterSystem {
        &self.system
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.system != other.system {
            return Err(Error::DimensionMismatch("inner product of different systems".into()));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self ⊗ other`, with `self`'s registers first.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        PureState {
            system: self.system.concat(&other.system),
            amps,
        }
    }

    /// Pads each register with zero amplitudes up to `dims`.
    pub fn embed(&self, dims: &[usize]) -> Result<PureState> {
        if dims.len() != self.system.len() || dims.iter().zip(self.system.dims()).any(|(n, o)| n < o) {
            return Err(Error::DimensionMismatch(format!(
                "cannot embed {:?} into {:?}",
                self.system.dims(),
                dims
            )));
        }
        let target = RegisterSystem::new(dims.to_vec())?;
        let mut amps = vec![ZERO; target.total_dim()];
        for (idx, &a) in self.amps.iter().enumerate() {
            let labels = self.system.labels(idx);
            amps[target.index(&labels)?] = a;
        }
        Ok(PureState { system: target, amps })
    }

    /// Applies the basis map `y -> yM` to `registers` (label order as given).
    pub fn apply_label_matrix(&self, m: &FieldMatrix, registers: &[usize]) -> Result<PureState> {
        let q = m.modulus().value();
        if !m.is_square() || m.rows() != registers.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on {} registers",
                m.rows(),
                m.cols(),
                registers.len()
            )));
        }
        self.check_target_dims(registers, q)?;
        // a singular M would not be a permutation
        m.inverse()?;
        let mut out = vec![ZERO; self.amps.len()];
        let mut y = vec![0; registers.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            for (slot, &r) in y.iter_mut().zip(registers) {
                *slot = self.system.label(idx, r);
            }
            let image = m.left_mul(&y);
            let mut new_idx = idx;
            for ((&r, &old), &new) in registers.iter().zip(&y).zip(&image) {
                let st = self.system.stride(r);
                new_idx = new_idx - old * st + new * st;
            }
            out[new_idx] = a;
        }
        Ok(PureState {
            system: self.system.clone(),
            amps: out,
        })
    }

    /// Reorders registers so that new register `j` is old register `perm[j]`.
    pub fn permute_registers(&self, perm: &[usize]) -> Result<PureState> {
        let r = self.system.len();
        let mut seen = vec![false; r];
        if perm.len() != r {
            return Err(Error::InvalidPermutation);
        }
        for &p in perm {
            if p >= r || seen[p] {
                return Err(Error::InvalidPermutation);
            }
            seen[p] = true;
        }
        let new_sys = RegisterSystem::new(perm.iter().map(|&p| self.system.dims[p]).collect())?;
        let mut out = vec![ZERO; self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            let new_idx = perm
                .iter()
                .enumerate()
                .map(|(j, &p)| self.system.label(idx, p) * new_sys.strides[j])
                .sum::<usize>();
            out[new_idx] = a;
        }
        Ok(PureState {
            system: new_sys,
            amps: out,
        })
    }

    /// `|.., y_src, .., y_dst, ..> -> |.., y_src, .., y_dst + factor*y_src, ..>` mod `q`.
    pub fn add_scaled_register(&self, src: usize, dst: usize, factor: usize, q: Prime) -> Result<PureState> {
        if src == dst {
            return Err(Error::DimensionMismatch("source and destination coincide".into()));
        }
        self.check_target_dims(&[src, dst], q.value())?;
        let factor = q.reduce(factor);
        let st = self.system.stride(dst);
        let mut out = vec![ZERO; self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            let ys = self.system.label(idx, src);
            let yd = self.system.label(idx, dst);
            let nd = q.add(yd, q.mul(factor, ys));
            out[idx - yd * st + nd * st] = a;
        }
        Ok(PureState {
            system: self.system.clone(),
            amps: out,
        })
    }

    /// Reduced state on `keep` (sorted ascending, duplicates ignored).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = normalize_keep(&self.system, keep)?;
        let (kd, td, pairs) = self.system.split_indices(&keep);
        // reshape psi into a kd x td matrix A; rho = A A^dagger
        let mut a = vec![ZERO; kd * td];
        for (idx, &(k, t)) in pairs.iter().enumerate() {
            a[k * td + t] = self.amps[idx];
        }
        let mut rho = vec![ZERO; kd * kd];
        for i in 0..kd {
            let ri = &a[i * td..(i + 1) * td];
            for j in i..kd {
                let rj = &a[j * td..(j + 1) * td];
                let v: Complex64 = ri.iter().zip(rj).map(|(x, y)| x * y.conj()).sum();
                rho[i * kd + j] = v;
                rho[j * kd + i] = v.conj();
            }
        }
        Ok(DensityMatrix {
            system: self.system.subsystem(&keep)?,
            entries: rho,
        })
    }

    /// Nonzero part of the Schmidt spectrum across `part | rest`, computed on
    /// whichever side is smaller.
    pub fn schmidt_spectrum(&self, part: &[usize]) -> Result<Vec<f64>> {
        let part = normalize_keep(&self.system, part)?;
        let rest: Vec<usize> = (0..self.system.len()).filter(|r| !part.contains(r)).collect();
        if rest.is_empty() {
            return Ok(vec![1.0]);
        }
        let dim = |regs: &[usize]| regs.iter().map(|&r| self.system.dims[r]).product::<usize>();
        let side = if dim(&part) <= dim(&rest) { part } else { rest };
        self.partial_trace(&side).map(|rho| rho.eigenvalues())
    }

    fn check_target_dims(&self, registers: &[usize], q: usize) -> Result<()> {
        self.system.check_registers(registers)?;
        for &r in registers {
            if self.system.dims[r] != q {
                return Err(Error::DimensionMismatch(format!(
                    "register {r} has dimension {}, expected {q}",
                    self.system.dims[r]
                )));
            }
        }
        Ok(())
    }
}

/// A density matrix on the registers it was reduced to.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    system: RegisterSystem,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(system: RegisterSystem, entries: Vec<Complex64>) -> Result<Self> {
        let d = system.total_dim();
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {d}x{d} matrix",
                entries.len()
            )));
        }
        let rho = DensityMatrix { system, entries };
        rho.validate()?;
        Ok(rho)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let a = &psi.amps;
        let entries = a.iter().flat_map(|x| a.iter().map(move |y| x * y.conj())).collect();
        DensityMatrix {
            system: psi.system.clone(),
            entries,
        }
    }

    pub fn maximally_mixed(system: RegisterSystem) -> Self {
        let d = system.total_dim();
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            entries[i * d + i] = Complex64::new(1.0 / d as f64, 0.0);
        }
        DensityMatrix { system, entries }
    }

    pub fn system(&self) -> &RegisterSystem {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.system.total_dim()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim() + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Checks the physical-state invariants at [`CONSTRUCTION_TOL`], with
    /// eigenvalues allowed down to `-1e-10`.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in i..d {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > CONSTRUCTION_TOL {
                    return Err(Error::DimensionMismatch(format!("not Hermitian at ({i},{j})")));
                }
            }
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > CONSTRUCTION_TOL {
            return Err(Error::NotNormalized(tr.re));
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -1e-10 {
                return Err(Error::DimensionMismatch(format!("negative eigenvalue {min}")));
            }
        }
        Ok(())
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries, self.dim())
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > tol).count()
    }

    /// `self ⊗ other`, with `self`'s registers first.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let (da, db) = (self.dim(), other.dim());
        let d = da * db;
        let mut entries = vec![ZERO; d * d];
        for i in 0..da {
            for j in 0..da {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        entries[(i * db + k) * d + j * db + l] = a * other.get(k, l);
                    }
                }
            }
        }
        DensityMatrix {
            system: self.system.concat(&other.system),
            entries,
        }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = normalize_keep(&self.system, keep)?;
        let (kd, td, pairs) = self.system.split_indices(&keep);
        let mut full_index = vec![0; kd * td];
        for (idx, &(k, t)) in pairs.iter().enumerate() {
            full_index[k * td + t] = idx;
        }
        let d = self.dim();
        let mut out = vec![ZERO; kd * kd];
        for i in 0..kd {
            for j in 0..kd {
                out[i * kd + j] = (0..td)
                    .map(|t| self.entries[full_index[i * td + t] * d + full_index[j * td + t]])
                    .sum();
            }
        }
        Ok(DensityMatrix {
            system: self.system.subsystem(&keep)?,
            entries: out,
        })
    }

    /// Largest-weight pure component, with the global phase chosen so that
    /// the largest diagonal entry's amplitude is real and positive. Exact for
    /// rank-one matrices.
    pub fn dominant_pure_state(&self) -> PureState {
        let d = self.dim();
        let j = (0..d)
            .max_by(|&a, &b| self.get(a, a).re.total_cmp(&self.get(b, b).re))
            .unwrap_or(0);
        let pjj = self.get(j, j).re.max(f64::MIN_POSITIVE).sqrt();
        let amps: Vec<Complex64> = (0..d).map(|i| self.get(i, j) / pjj).collect();
        PureState::normalized(self.system.clone(), amps).expect("trace-one matrix has a nonzero diagonal")
    }
}

/// `<psi| rho |psi>`.
pub fn fidelity(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    if rho.system != psi.system {
        return Err(Error::DimensionMismatch(format!(
            "density matrix on {:?}, state on {:?}",
            rho.system.dims(),
            psi.system.dims()
        )));
    }
    let d = rho.dim();
    let a = &psi.amps;
    let mut acc = ZERO;
    for i in 0..d {
        if a[i] == ZERO {
            continue;
        }
        let row: Complex64 = (0..d).map(|j| rho.get(i, j) * a[j]).sum();
        acc += a[i].conj() * row;
    }
    Ok(acc.re.clamp(0.0, 1.0))
}

/// Half the trace norm of `rho - sigma`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.system.total_dim() != sigma.system.total_dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional vs {}-dimensional density matrices",
            rho.dim(),
            sigma.dim()
        )));
    }
    let diff: Vec<Complex64> = rho.entries.iter().zip(&sigma.entries).map(|(a, b)| a - b).collect();
    let ev = hermitian_eigenvalues(&diff, rho.dim());
    Ok((0.5 * ev.iter().map(|l| l.abs()).sum::<f64>()).min(1.0))
}

/// Maximally entangled `(1/sqrt(d)) sum_a |a>|a>` on two registers of dimension `d`.
pub fn maximally_entangled(d: usize) -> Result<PureState> {
    let system = RegisterSystem::new(vec![d, d])?;
    let mut amps = vec![ZERO; d * d];
    let v = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for a in 0..d {
        amps[a * d + a] = v;
    }
    Ok(PureState { system, amps })
}

fn normalize_keep(system: &RegisterSystem, keep: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&r) = keep.iter().find(|&&r| r >= system.len()) {
        return Err(Error::RegisterOutOfRange(r));
    }
    Ok(keep)
}

fn check_len(system: &RegisterSystem, len: usize) -> Result<()> {
    if system.total_dim() != len {
        return Err(Error::DimensionMismatch(format!(
            "{len} amplitudes for a {}-dimensional system",
            system.total_dim()
        )));
    }
    Ok(())
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}
