//! Threshold schemes built from the length-`2k-1` polynomial code.
//!
//! A `((k, n))` scheme keeps `n` of the `m = 2k-1` code coordinates and
//! discards the rest. Discarded coordinates stay inside the global state as a
//! purification and are never reachable through share labels, so a scheme
//! with `n < 2k-1` hands out a mixed state.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::hilbert::{fidelity, DensityMatrix, PureState, RegisterSystem};
use crate::polycode::{code_offset, encode_with_reference, CodeParams, SubsetDecoder};

/// Seed of the pseudorandom probe secret.
pub const PROBE_SEED: u64 = 42;

/// One party's share: a label and the code coordinates it holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Share {
    pub label: String,
    pub coordinates: Vec<usize>,
}

/// Complete description of a threshold scheme (possibly with bundled shares).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeSpec {
    k: usize,
    n: usize,
    params: CodeParams,
    discarded: Vec<usize>,
    shares: Vec<Share>,
}

/// Default share labels: `A`, `B`, ..., `Z`, then `S26`, `S27`, ...
pub fn default_label(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("S{i}")
    }
}

fn singleton_shares(coords: impl Iterator<Item = usize>) -> Vec<Share> {
    coords
        .enumerate()
        .map(|(i, c)| Share {
            label: default_label(i),
            coordinates: vec![c],
        })
        .collect()
}

/// Builds a `((k, n))` threshold scheme for secrets of dimension `s`.
///
/// Refuses `n >= 2k`: two disjoint authorized sets would clone the secret.
pub fn build_threshold(k: usize, n: usize, s: usize) -> Result<SchemeSpec> {
    if k == 0 || n < k {
        return Err(Error::ParamViolation(format!("need 1 <= k <= n, got k={k} n={n}")));
    }
    if s < 2 {
        return Err(Error::ParamViolation(format!("secret dimension {s} < 2")));
    }
    if n >= 2 * k {
        return Err(Error::NoCloningViolation { k, n });
    }
    let m = 2 * k - 1;
    let params = CodeParams::new(k, m, s)?;
    Ok(SchemeSpec {
        k,
        n,
        params,
        discarded: (n..m).collect(),
        shares: singleton_shares(0..n),
    })
}

impl SchemeSpec {
    /// Reassembles a spec from its parts, checking every invariant.
    pub fn from_parts(k: usize, params: CodeParams, discarded: Vec<usize>, shares: Vec<Share>) -> Result<Self> {
        let m = params.m();
        if params.k() != k || m != 2 * k - 1 {
            return Err(Error::ParamViolation(format!(
                "threshold schemes use m = 2k-1 (k={k}, code k={}, m={m})",
                params.k()
            )));
        }
        let discarded_set: BTreeSet<usize> = discarded.iter().copied().collect();
        if discarded_set.len() != discarded.len() || discarded_set.iter().any(|&c| c >= m) {
            return Err(Error::InvalidPartition(format!("bad discarded set {discarded:?}")));
        }
        let n = m - discarded.len();
        if n < k {
            return Err(Error::ThresholdFloor(k));
        }
        let retained: Vec<usize> = (0..m).filter(|c| !discarded_set.contains(c)).collect();
        check_partition(&retained, shares.iter().map(|s| s.coordinates.as_slice()))?;
        let labels: BTreeSet<&str> = shares.iter().map(|s| s.label.as_str()).collect();
        if labels.len() != shares.len() || labels.iter().any(|l| !valid_label(l)) {
            return Err(Error::InvalidPartition(
                "share labels must be distinct identifiers".into(),
            ));
        }
        Ok(SchemeSpec {
            k,
            n,
            params,
            discarded: discarded_set.into_iter().collect(),
            shares,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of retained coordinates.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn discarded(&self) -> &[usize] {
        &self.discarded
    }

    pub fn shares(&self) -> &[Share] {
        &self.shares
    }

    pub fn retained(&self) -> Vec<usize> {
        (0..self.params.m()).filter(|c| !self.discarded.contains(c)).collect()
    }

    pub fn share(&self, label: &str) -> Result<&Share> {
        self.shares
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| Error::UnknownShareLabel(label.to_string()))
    }

    /// Hilbert-space dimension of a share: `q` per coordinate it holds.
    pub fn share_dim(&self, label: &str) -> Result<usize> {
        let share = self.share(label)?;
        Ok(self.params.q().value().pow(share.coordinates.len() as u32))
    }

    /// Union of the coordinates held by `labels`, ascending.
    pub fn coordinates_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut coords = BTreeSet::new();
        for l in labels {
            coords.extend(self.share(l.as_ref())?.coordinates.iter().copied());
        }
        Ok(coords.into_iter().collect())
    }

    pub fn is_threshold(&self) -> bool {
        self.shares.iter().all(|s| s.coordinates.len() == 1)
    }

    /// Whether pure secrets are handed out as pure global states.
    pub fn is_pure(&self) -> bool {
        self.discarded.is_empty()
    }

    /// Turns a `((k, n))` scheme into a `((k, n-1))` scheme by discarding the
    /// highest retained coordinate. Only defined for unbundled schemes.
    pub fn discard(&self) -> Result<SchemeSpec> {
        if self.n <= self.k {
            return Err(Error::ThresholdFloor(self.k));
        }
        if !self.is_threshold() {
            return Err(Error::InvalidPartition("cannot discard from a bundled scheme".into()));
        }
        let last = *self.retained().last().expect("n > k >= 1");
        let mut discarded = self.discarded.clone();
        discarded.push(last);
        discarded.sort_unstable();
        let shares = singleton_shares(self.retained().into_iter().filter(|&c| c != last));
        SchemeSpec::from_parts(self.k, self.params.clone(), discarded, shares)
    }

    /// Regroups the retained coordinates into shares labelled `A`, `B`, ...
    /// in the order given.
    pub fn bundle(&self, partition: &[Vec<usize>]) -> Result<SchemeSpec> {
        let shares = partition
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut coordinates = g.clone();
                coordinates.sort_unstable();
                Share {
                    label: default_label(i),
                    coordinates,
                }
            })
            .collect();
        SchemeSpec::from_parts(self.k, self.params.clone(), self.discarded.clone(), shares)
    }

    /// Authorized and unauthorized share sets. A set is authorized exactly
    /// when it holds at least `k` coordinates.
    pub fn access_structure(&self) -> AccessStructure {
        let count = self.shares.len();
        let mut authorized = Vec::new();
        let mut unauthorized = Vec::new();
        for mask in 1usize..(1 << count) {
            let labels: Vec<String> = (0..count)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.shares[i].label.clone())
                .collect();
            let held: usize = (0..count)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.shares[i].coordinates.len())
                .sum();
            if held >= self.k {
                authorized.push(labels);
            } else {
                unauthorized.push(labels);
            }
        }
        AccessStructure {
            authorized,
            unauthorized,
        }
    }
}

fn valid_label(l: &str) -> bool {
    !l.is_empty() && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_partition<'a>(retained: &[usize], groups: impl Iterator<Item = &'a [usize]>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for g in groups {
        if g.is_empty() {
            return Err(Error::InvalidPartition("empty share".into()));
        }
        for &c in g {
            if !retained.contains(&c) {
                return Err(Error::InvalidPartition(format!("coordinate {c} is not retained")));
            }
            if !seen.insert(c) {
                return Err(Error::InvalidPartition(format!("coordinate {c} appears twice")));
            }
        }
    }
    if seen.len() != retained.len() {
        return Err(Error::InvalidPartition("retained coordinates not covered".into()));
    }
    Ok(())
}

/// Share sets of a scheme, each listed by label. Every nonempty set of
/// shares appears in exactly one list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessStructure {
    pub authorized: Vec<Vec<String>>,
    pub unauthorized: Vec<Vec<String>>,
}

impl AccessStructure {
    pub fn is_authorized<S: AsRef<str>>(&self, labels: &[S]) -> bool {
        let want: BTreeSet<&str> = labels.iter().map(|s| s.as_ref()).collect();
        self.authorized
            .iter()
            .any(|a| a.iter().map(String::as_str).collect::<BTreeSet<_>>() == want)
    }

    /// Authorized sets with no authorized proper subset.
    pub fn minimal_authorized(&self) -> Vec<Vec<String>> {
        self.authorized
            .iter()
            .filter(|a| {
                !self
                    .authorized
                    .iter()
                    .any(|b| b.len() < a.len() && b.iter().all(|x| a.contains(x)))
            })
            .cloned()
            .collect()
    }
}

/// A split secret: the global purification plus the scheme it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedState {
    global: PureState,
    spec: SchemeSpec,
    secret: Option<PureState>,
}

impl SharedState {
    /// Wraps an existing global state (e.g. read back from a file). Any
    /// registers before the last `m` are treated as external references.
    pub fn from_global(spec: SchemeSpec, global: PureState) -> Result<Self> {
        code_offset(&global, spec.params())?;
        Ok(SharedState {
            global,
            spec,
            secret: None,
        })
    }

    pub fn global(&self) -> &PureState {
        &self.global
    }

    pub fn spec(&self) -> &SchemeSpec {
        &self.spec
    }

    /// The split secret (including reference registers), when known.
    pub fn secret(&self) -> Option<&PureState> {
        self.secret.as_ref()
    }

    /// Number of reference registers preceding the code registers.
    pub fn reference_registers(&self) -> usize {
        self.global.system().len() - self.spec.params.m()
    }

    /// Reduced state of the given share labels.
    pub fn reduced<S: AsRef<str>>(&self, labels: &[S]) -> Result<DensityMatrix> {
        let off = self.reference_registers();
        let regs: Vec<usize> = self.spec.coordinates_of(labels)?.iter().map(|c| off + c).collect();
        self.global.partial_trace(&regs)
    }

    /// Reduced state on raw code coordinates (discarded ones included, for
    /// analysis only).
    pub fn reduced_coordinates(&self, coords: &[usize]) -> Result<DensityMatrix> {
        let off = self.reference_registers();
        let regs: Vec<usize> = coords.iter().map(|c| off + c).collect();
        self.global.partial_trace(&regs)
    }

    /// Rank of the state handed out on the retained coordinates.
    pub fn retained_rank(&self, tol: f64) -> Result<usize> {
        let off = self.reference_registers();
        let mut regs: Vec<usize> = (0..off).collect();
        regs.extend(self.spec.retained().iter().map(|c| off + c));
        Ok(self
            .global
            .schmidt_spectrum(&regs)?
            .iter()
            .filter(|&&l| l > tol)
            .count())
    }
}

/// Splits a secret given as at most `s` amplitudes (normalized within 1e-6,
/// then renormalized exactly).
pub fn split(spec: &SchemeSpec, secret: &[Complex64]) -> Result<SharedState> {
    let s = spec.params.s();
    if secret.is_empty() || secret.len() > s {
        return Err(Error::BadSecretDimension {
            got: secret.len(),
            max: s,
        });
    }
    let n2: f64 = secret.iter().map(|a| a.norm_sqr()).sum();
    if (n2 - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized(n2));
    }
    let mut amps = secret.to_vec();
    amps.resize(s, Complex64::new(0.0, 0.0));
    let psi = PureState::normalized(RegisterSystem::new(vec![s])?, amps)?;
    split_joint(spec, psi)
}

/// Splits the last register of `joint`; earlier registers are kept as
/// references outside the scheme (e.g. the other half of an EPR pair).
pub fn split_joint(spec: &SchemeSpec, joint: PureState) -> Result<SharedState> {
    let global = encode_with_reference(&joint, &spec.params)?;
    Ok(SharedState {
        global,
        spec: spec.clone(),
        secret: Some(joint),
    })
}

/// Outcome of [`reconstruct`].
#[derive(Debug, Clone, PartialEq)]
pub enum Reconstruction {
    Recovered(Recovered),
    NotReconstructible {
        coordinates: Vec<usize>,
        reduced: DensityMatrix,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recovered {
    /// The `k` coordinates the decoder used.
    pub used: Vec<usize>,
    /// Reduced state of the reference registers plus the output register.
    pub output: DensityMatrix,
    /// Best pure approximation of `output`.
    pub state: PureState,
    /// Fidelity with the original secret, when it is known.
    pub fidelity: Option<f64>,
}

/// Recovers the secret from the shares named in `labels`.
///
/// With at least `k` coordinates available the `k` lowest are decoded;
/// otherwise the reduced state of the shares is returned for inspection.
pub fn reconstruct<S: AsRef<str>>(shared: &SharedState, labels: &[S]) -> Result<Reconstruction> {
    let spec = &shared.spec;
    let coords = spec.coordinates_of(labels)?;
    if coords.len() < spec.k {
        let reduced = shared.reduced_coordinates(&coords)?;
        return Ok(Reconstruction::NotReconstructible {
            coordinates: coords,
            reduced,
        });
    }
    let used = coords[..spec.k].to_vec();
    Ok(Reconstruction::Recovered(decode_coordinates(shared, &used)?))
}

/// Decodes from exactly `k` coordinates (retained or not).
pub fn decode_coordinates(shared: &SharedState, used: &[usize]) -> Result<Recovered> {
    let spec = &shared.spec;
    let off = shared.reference_registers();
    let decoder = SubsetDecoder::new(&spec.params, used)?;
    let decoded = decoder.apply(&shared.global, off)?;
    let mut keep: Vec<usize> = (0..off).collect();
    keep.push(off + decoder.output_coordinate());
    let output = decoded.partial_trace(&keep)?;
    let state = output.dominant_pure_state();
    let fidelity = match &shared.secret {
        Some(secret) => Some(fidelity(&output, &secret.embed(output.system().dims())?)?),
        None => None,
    };
    Ok(Recovered {
        used: decoder.subset().to_vec(),
        output,
        state,
        fidelity,
    })
}

/// Probe secrets of dimension `s`: the basis states, `(|0> + |a>)/sqrt2` and
/// `(|0> + i|a>)/sqrt2` for `1 <= a < s`, and one seeded random state.
pub fn probe_secrets(s: usize) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut probes = Vec::with_capacity(3 * s);
    for a in 0..s {
        let mut v = vec![zero; s];
        v[a] = Complex64::new(1.0, 0.0);
        probes.push(v);
    }
    for phase in [Complex64::new(h, 0.0), Complex64::new(0.0, h)] {
        for a in 1..s {
            let mut v = vec![zero; s];
            v[0] = Complex64::new(h, 0.0);
            v[a] = phase;
            probes.push(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let v: Vec<Complex64> = (0..s)
        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    probes.push(v.into_iter().map(|a| a / norm).collect());
    probes
}
