//! Brute-force verification of the secret-sharing contract.
//!
//! Every verdict here is measured. A coordinate set is reported authorized
//! only if decoding succeeds on every probe secret (and on half of a
//! maximally entangled pair), and unauthorized only if the reduced states of
//! all probe secrets are pairwise indistinguishable.

mod demos;
mod report;

pub use demos::{
    demo_epr_product, demo_four_qubit_leak, demo_qutrit_233, demo_restricted_22, four_qubit_basis, restricted_22_basis,
    DemoReport, Fact,
};
pub use report::{full_report, ErasureConsistency, SubsetVerdict, VerificationReport, VerifyOptions};

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gfq::Prime;
use crate::hilbert::{
    gen_pauli, matrix_element, maximally_entangled, trace_distance, DensityMatrix, PureState, RegisterSystem, RANK_TOL,
};
use crate::scheme::{decode_coordinates, probe_secrets, split, split_joint, SchemeSpec};

/// Pass/fail tolerance for fidelities and trace distances.
pub const TOL: f64 = 1e-9;
/// Default largest erased set for operator-basis sweeps (`q^{2|K|}` operators).
pub const DEFAULT_OPERATOR_CAP: usize = 3;

/// Empirical classification of a set of coordinates or shares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Authorized,
    Unauthorized,
    Intermediate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Authorized => "authorized",
            Verdict::Unauthorized => "unauthorized",
            Verdict::Intermediate => "intermediate",
        })
    }
}

/// Largest pairwise trace distance in a family of density matrices.
pub fn max_pairwise_trace_distance(states: &[DensityMatrix]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            worst = worst.max(trace_distance(a, b)?);
        }
    }
    Ok(worst)
}

/// Max pairwise trace distance between the reduced states of `coords` over
/// the probe secrets.
pub fn check_no_information(spec: &SchemeSpec, coords: &[usize]) -> Result<f64> {
    let reduced = probe_secrets(spec.params().s())
        .iter()
        .map(|p| split(spec, p)?.reduced_coordinates(coords))
        .collect::<Result<Vec<_>>>()?;
    max_pairwise_trace_distance(&reduced)
}

/// Worst-case fidelities of decoding from a coordinate set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionCheck {
    /// Minimum over the probe secrets.
    pub min_fidelity: f64,
    /// Fidelity with a maximally entangled reference after decoding.
    pub entanglement_fidelity: f64,
}

impl ReconstructionCheck {
    pub fn worst(&self) -> f64 {
        self.min_fidelity.min(self.entanglement_fidelity)
    }
}

/// Decodes from the lowest `k` of `coords` for every probe secret and for
/// an entangled secret.
pub fn check_reconstruction(spec: &SchemeSpec, coords: &[usize]) -> Result<ReconstructionCheck> {
    let mut coords = coords.to_vec();
    coords.sort_unstable();
    coords.dedup();
    if coords.len() < spec.k() {
        return Err(Error::SubsetTooSmall {
            got: coords.len(),
            k: spec.k(),
        });
    }
    let used = &coords[..spec.k()];
    let mut min_fidelity: f64 = 1.0;
    for probe in probe_secrets(spec.params().s()) {
        let shared = split(spec, &probe)?;
        let f = decode_coordinates(&shared, used)?.fidelity.expect("secret known");
        min_fidelity = min_fidelity.min(f);
    }
    let bell = maximally_entangled(spec.params().s())?;
    let shared = split_joint(spec, bell)?;
    let entanglement_fidelity = decode_coordinates(&shared, used)?.fidelity.expect("secret known");
    Ok(ReconstructionCheck {
        min_fidelity,
        entanglement_fidelity,
    })
}

/// One element of the operator basis on an erased set: `X^a Z^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylEntry {
    pub x_powers: Vec<usize>,
    pub z_powers: Vec<usize>,
    pub value: Complex64,
}

/// Why the erasure conditions failed.
#[derive(Debug, Clone, PartialEq)]
pub enum ConditionViolation {
    /// `<phi_i|E|phi_j> != 0` for `i != j`.
    OffDiagonal { op: WeylEntry, i: usize, j: usize },
    /// `<phi_i|E|phi_i>` differs from `<phi_0|E|phi_0>`.
    Diagonal { op: WeylEntry, i: usize },
}

/// Result of checking the erasure-correction conditions on a set `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErasureCheck {
    pub erased: Vec<usize>,
    pub holds: bool,
    /// `c(E)` for every operator examined (all of them when `holds`).
    pub table: Vec<WeylEntry>,
    pub violation: Option<ConditionViolation>,
}

impl ErasureCheck {
    pub fn c(&self, x_powers: &[usize], z_powers: &[usize]) -> Option<Complex64> {
        self.table
            .iter()
            .find(|e| e.x_powers == x_powers && e.z_powers == z_powers)
            .map(|e| e.value)
    }
}

fn erased_modulus(basis: &[PureState], erased: &[usize]) -> Result<Prime> {
    let first = basis
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty code basis".into()))?;
    let dims = first.system().dims();
    let mut q = None;
    for &r in erased {
        let d = *dims.get(r).ok_or(Error::RegisterOutOfRange(r))?;
        if q.is_some_and(|q| q != d) {
            return Err(Error::DimensionMismatch("erased registers differ in dimension".into()));
        }
        q = Some(d);
    }
    Prime::new(q.ok_or(Error::EmptyKeepSet)?)
}

/// Checks `<phi_i|E|phi_j> = 0` (`i != j`) and `<phi_i|E|phi_i> = c(E)` for
/// every generalized Pauli `E` on `erased`, within [`TOL`].
///
/// Operators are visited with the `X` part outermost, so `Z`-type violations
/// (the usual way a set leaks the secret) are found first and the sweep
/// stops there. Refuses `|erased| > cap`.
pub fn check_erasure_conditions(basis: &[PureState], erased: &[usize], cap: usize) -> Result<ErasureCheck> {
    if erased.len() > cap {
        return Err(Error::TooLarge {
            size: erased.len() as u128,
            cap: cap as u128,
        });
    }
    let q = erased_modulus(basis, erased)?;
    let qv = q.value();
    let r = erased.len();
    let per_part = qv.pow(r as u32);
    let digits = |mut code: usize| {
        let mut v = vec![0; r];
        for slot in v.iter_mut().rev() {
            *slot = code % qv;
            code /= qv;
        }
        v
    };
    let mut table = Vec::with_capacity(per_part * per_part);
    for xa in 0..per_part {
        let a = digits(xa);
        for zb in 0..per_part {
            let b = digits(zb);
            let op = gen_pauli(&a, &b, erased, q)?;
            let c0 = matrix_element(&basis[0], &op, &basis[0])?;
            let entry = |value| WeylEntry {
                x_powers: a.clone(),
                z_powers: b.clone(),
                value,
            };
            for (i, bra) in basis.iter().enumerate() {
                for (j, ket) in basis.iter().enumerate() {
                    let v = matrix_element(bra, &op, ket)?;
                    let violation = if i != j && v.norm() > TOL {
                        Some(ConditionViolation::OffDiagonal { op: entry(v), i, j })
                    } else if i == j && (v - c0).norm() > TOL {
                        Some(ConditionViolation::Diagonal { op: entry(v), i })
                    } else {
                        None
                    };
                    if violation.is_some() {
                        return Ok(ErasureCheck {
                            erased: erased.to_vec(),
                            holds: false,
                            table,
                            violation,
                        });
                    }
                }
            }
            table.push(entry(c0));
        }
    }
    Ok(ErasureCheck {
        erased: erased.to_vec(),
        holds: true,
        table,
        violation: None,
    })
}

/// Largest deviation of `<phi|E|phi>` from the tabulated `c(E)` over
/// `samples` seeded random superpositions of the code basis.
pub fn condition_c_deviation(basis: &[PureState], check: &ErasureCheck, samples: usize, seed: u64) -> Result<f64> {
    let q = erased_modulus(basis, &check.erased)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sys = basis[0].system().clone();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let coeffs: Vec<Complex64> = basis
            .iter()
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut amps = vec![Complex64::new(0.0, 0.0); sys.total_dim()];
        for (c, b) in coeffs.iter().zip(basis) {
            for (o, a) in amps.iter_mut().zip(b.amplitudes()) {
                *o += c * a;
            }
        }
        let phi = PureState::normalized(sys.clone(), amps)?;
        for e in &check.table {
            let op = gen_pauli(&e.x_powers, &e.z_powers, &check.erased, q)?;
            worst = worst.max((matrix_element(&phi, &op, &phi)? - e.value).norm());
        }
    }
    Ok(worst)
}

/// Classification of a pure scheme's share sets plus the complement check.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport {
    /// Share-label sets and their measured verdicts, in mask order.
    pub classes: Vec<(Vec<String>, Verdict)>,
    /// Every proper nonempty set is authorized iff its complement is unauthorized.
    pub duality: bool,
    /// For threshold schemes: `n == 2k - 1`.
    pub threshold_length: Option<bool>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.duality
            && self.threshold_length.unwrap_or(true)
            && self.classes.iter().all(|(_, v)| *v != Verdict::Intermediate)
    }
}

/// Highest retained-state rank over the probe secrets.
pub fn max_retained_rank(spec: &SchemeSpec) -> Result<usize> {
    let mut worst = 0;
    for p in probe_secrets(spec.params().s()) {
        worst = worst.max(split(spec, &p)?.retained_rank(RANK_TOL)?);
    }
    Ok(worst)
}

/// Measures the verdict of a set of retained coordinates.
pub fn classify_coordinates(spec: &SchemeSpec, coords: &[usize]) -> Result<(Verdict, Option<f64>, Option<f64>)> {
    if coords.len() >= spec.k() {
        let f = check_reconstruction(spec, coords)?.worst();
        let v = if f >= 1.0 - TOL {
            Verdict::Authorized
        } else {
            Verdict::Intermediate
        };
        Ok((v, Some(f), None))
    } else {
        let td = check_no_information(spec, coords)?;
        let v = if td <= TOL {
            Verdict::Unauthorized
        } else {
            Verdict::Intermediate
        };
        Ok((v, None, Some(td)))
    }
}

/// Verifies that every unauthorized share set is the complement of an
/// authorized one and vice versa. Only pure schemes qualify.
pub fn check_pure_state_structure(spec: &SchemeSpec) -> Result<DualityReport> {
    let rank = max_retained_rank(spec)?;
    if rank > 1 {
        return Err(Error::NotPureScheme { rank });
    }
    let shares = spec.shares();
    let count = shares.len();
    let full = (1usize << count) - 1;
    let mut verdicts = vec![None; 1 << count];
    let mut classes = Vec::new();
    for (mask, slot) in verdicts.iter_mut().enumerate().skip(1) {
        let labels: Vec<String> = (0..count)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| shares[i].label.clone())
            .collect();
        let coords = spec.coordinates_of(&labels)?;
        let (v, _, _) = classify_coordinates(spec, &coords)?;
        *slot = Some(v);
        classes.push((labels, v));
    }
    let duality = (1..full).all(|mask| {
        let a = verdicts[mask].unwrap();
        let b = verdicts[full ^ mask].unwrap();
        (a == Verdict::Authorized) == (b == Verdict::Unauthorized)
            && (a == Verdict::Unauthorized) == (b == Verdict::Authorized)
    });
    let threshold_length = spec.is_threshold().then(|| spec.n() == 2 * spec.k() - 1);
    Ok(DualityReport {
        classes,
        duality,
        threshold_length,
    })
}

/// A coordinate subset, its verdict and the largest pairwise trace distance
/// between probe secrets on it.
pub type SubsetClass = (Vec<usize>, Verdict, f64);

/// Verdicts for every nonempty coordinate subset of an arbitrary code given
/// by its basis states: authorized when the erasure conditions hold on the
/// complement, unauthorized when `probes` leave no trace on the subset.
pub fn classify_code_subsets(basis: &[PureState], probes: &[Vec<Complex64>], cap: usize) -> Result<Vec<SubsetClass>> {
    let sys = basis[0].system().clone();
    let m = sys.len();
    let encoded: Vec<PureState> = probes
        .iter()
        .map(|p| superpose(&sys, basis, p))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for mask in 1usize..(1 << m) {
        let subset: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let erased: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 0).collect();
        let corrects = erased.is_empty() || check_erasure_conditions(basis, &erased, cap)?.holds;
        let reduced = encoded
            .iter()
            .map(|e| e.partial_trace(&subset))
            .collect::<Result<Vec<_>>>()?;
        let td = max_pairwise_trace_distance(&reduced)?;
        let v = if corrects {
            Verdict::Authorized
        } else if td <= TOL {
            Verdict::Unauthorized
        } else {
            Verdict::Intermediate
        };
        out.push((subset, v, td));
    }
    Ok(out)
}

fn superpose(sys: &RegisterSystem, basis: &[PureState], coeffs: &[Complex64]) -> Result<PureState> {
    let mut amps = vec![Complex64::new(0.0, 0.0); sys.total_dim()];
    for (c, b) in coeffs.iter().zip(basis) {
        for (o, a) in amps.iter_mut().zip(b.amplitudes()) {
            *o += c * a;
        }
    }
    PureState::normalized(sys.clone(), amps)
}
