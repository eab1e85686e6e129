use std::fmt;

use rayon::prelude::*;

use super::{
    check_erasure_conditions, check_pure_state_structure, classify_coordinates, max_retained_rank, DualityReport,
    Verdict, DEFAULT_OPERATOR_CAP, TOL,
};
use crate::error::{Error, Result};
use crate::polycode::{code_basis, min_distance_check};
use crate::scheme::SchemeSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Largest erased set swept with the full operator basis.
    pub operator_cap: usize,
    /// Largest global state (`q^m` amplitudes) the report will simulate.
    pub state_cap: u128,
    /// Largest `q^k` for which the classical distance check runs.
    pub distance_cap: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            operator_cap: DEFAULT_OPERATOR_CAP,
            state_cap: 1_000_000,
            distance_cap: 10_000,
        }
    }
}

/// Measured verdict for one set of shares.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetVerdict {
    pub labels: Vec<String>,
    pub coordinates: Vec<usize>,
    /// What the access structure says.
    pub expected: Verdict,
    /// What was measured.
    pub verdict: Verdict,
    pub min_fidelity: Option<f64>,
    pub max_trace_distance: Option<f64>,
}

impl SubsetVerdict {
    pub fn passed(&self) -> bool {
        self.verdict == self.expected
    }
}

/// Erasure conditions on a coordinate set versus decoding from its complement.
#[derive(Debug, Clone, PartialEq)]
pub struct ErasureConsistency {
    pub erased: Vec<usize>,
    /// `None` when the set exceeds the operator cap.
    pub conditions_hold: Option<bool>,
    pub complement_reconstructs: bool,
}

impl ErasureConsistency {
    pub fn consistent(&self) -> bool {
        self.conditions_hold.is_none_or(|h| h == self.complement_reconstructs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub q: usize,
    pub s: usize,
    pub discarded: Vec<usize>,
    pub subsets: Vec<SubsetVerdict>,
    pub erasure: Vec<ErasureConsistency>,
    /// `(dist C1, dist C2^perp)` when small enough to enumerate.
    pub distances: Option<(usize, usize)>,
    /// Largest rank of the retained state over the probe secrets.
    pub retained_rank: usize,
    /// Complement duality, for pure schemes.
    pub duality: Option<DualityReport>,
}

impl VerificationReport {
    pub fn distance_ok(&self) -> bool {
        let want = self.m - self.k + 1;
        self.distances.is_none_or(|(a, b)| a.min(b) == want)
    }

    /// The retained state is pure exactly when nothing is discarded.
    pub fn purity_ok(&self) -> bool {
        (self.retained_rank == 1) == self.discarded.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.subsets.iter().all(SubsetVerdict::passed)
            && self.erasure.iter().all(ErasureConsistency::consistent)
            && self.distance_ok()
            && self.purity_ok()
            && self.duality.as_ref().is_none_or(DualityReport::passed)
    }

    /// One `SUBSET <indices> VERDICT <v> FID <min> TD <max>` line per share set.
    pub fn machine_lines(&self) -> String {
        let num = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.12e}"));
        let mut out = String::new();
        for s in &self.subsets {
            let idx: Vec<String> = s.coordinates.iter().map(usize::to_string).collect();
            out.push_str(&format!(
                "SUBSET {} VERDICT {} FID {} TD {}\n",
                idx.join(","),
                s.verdict,
                num(s.min_fidelity),
                num(s.max_trace_distance)
            ));
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "scheme (({},{})) from a length-{} code over Z_{}, secret dimension {}, discarded {:?}",
            self.k, self.n, self.m, self.q, self.s, self.discarded
        )?;
        for s in &self.subsets {
            writeln!(
                f,
                "  [{}] shares {{{}}} coords {:?}: {} (expected {}){}{}",
                mark(s.passed()),
                s.labels.join(","),
                s.coordinates,
                s.verdict,
                s.expected,
                s.min_fidelity
                    .map_or(String::new(), |v| format!(", min fidelity {v:.3e}")),
                s.max_trace_distance
                    .map_or(String::new(), |v| format!(", max trace distance {v:.3e}")),
            )?;
        }
        let checked = self.erasure.iter().filter(|e| e.conditions_hold.is_some()).count();
        writeln!(
            f,
            "  [{}] erasure conditions match complement decoding on {checked}/{} coordinate sets",
            mark(self.erasure.iter().all(ErasureConsistency::consistent)),
            self.erasure.len()
        )?;
        match self.distances {
            Some((a, b)) => writeln!(
                f,
                "  [{}] dist C1 = {a}, dist C2^perp = {b}, expected min {}",
                mark(self.distance_ok()),
                self.m - self.k + 1
            )?,
            None => writeln!(f, "  [----] classical distances skipped (too large)")?,
        }
        writeln!(
            f,
            "  [{}] retained-state rank {} ({} scheme)",
            mark(self.purity_ok()),
            self.retained_rank,
            if self.retained_rank == 1 { "pure" } else { "mixed" }
        )?;
        if let Some(d) = &self.duality {
            writeln!(
                f,
                "  [{}] complement duality of authorized/unauthorized sets",
                mark(d.passed())
            )?;
        }
        write!(f, "result: {}", mark(self.passed()))
    }
}

/// Runs every applicable check on `spec`: all share sets against the
/// access structure, erasure conditions against complement decoding, the
/// classical distances, the pure/mixed rank and (for pure schemes)
/// complement duality.
pub fn full_report(spec: &SchemeSpec, opts: &VerifyOptions) -> Result<VerificationReport> {
    let params = spec.params();
    let (k, m, q) = (spec.k(), params.m(), params.q().value());
    let size = (q as u128).pow(m as u32) * params.s() as u128;
    if size > opts.state_cap {
        return Err(Error::TooLarge {
            size,
            cap: opts.state_cap,
        });
    }

    let access = spec.access_structure();
    let shares = spec.shares();
    let masks: Vec<usize> = (1..1usize << shares.len()).collect();
    let subsets = masks
        .par_iter()
        .map(|&mask| {
            let labels: Vec<String> = (0..shares.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| shares[i].label.clone())
                .collect();
            let coordinates = spec.coordinates_of(&labels)?;
            let expected = if access.is_authorized(&labels) {
                Verdict::Authorized
            } else {
                Verdict::Unauthorized
            };
            let (verdict, min_fidelity, max_trace_distance) = classify_coordinates(spec, &coordinates)?;
            Ok(SubsetVerdict {
                labels,
                coordinates,
                expected,
                verdict,
                min_fidelity,
                max_trace_distance,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let basis = code_basis(params);
    let erasure = (1..1usize << m)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&mask| {
            let erased: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            let rest: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 0).collect();
            let complement_reconstructs =
                rest.len() >= k && super::check_reconstruction(spec, &rest)?.worst() >= 1.0 - TOL;
            let conditions_hold = if erased.len() <= opts.operator_cap {
                Some(check_erasure_conditions(&basis, &erased, opts.operator_cap)?.holds)
            } else {
                None
            };
            Ok(ErasureConsistency {
                erased,
                conditions_hold,
                complement_reconstructs,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let distances = if (q as u128).pow(k as u32) <= opts.distance_cap {
        Some(min_distance_check(params)?)
    } else {
        None
    };
    let retained_rank = max_retained_rank(spec)?;
    let duality = if retained_rank == 1 {
        Some(check_pure_state_structure(spec)?)
    } else {
        None
    };

    Ok(VerificationReport {
        k,
        n: spec.n(),
        m,
        q,
        s: params.s(),
        discarded: spec.discarded().to_vec(),
        subsets,
        erasure,
        distances,
        retained_rank,
        duality,
    })
}
