//! Reproductions of the standard examples: the qutrit ((2,3)) scheme, the
//! four-qubit erasure code that leaks, the phase-restricted ((2,2))
//! encoding, and the EPR product-state example.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{classify_code_subsets, max_pairwise_trace_distance, Verdict, TOL};
use crate::error::Result;
use crate::hilbert::{
    fidelity, maximally_entangled, trace_distance, DensityMatrix, PureState, RegisterSystem, SubsetOperator,
};
use crate::polycode::{encode, CodeParams, SubsetDecoder};
use crate::scheme::{build_threshold, reconstruct, split_joint, Reconstruction};

/// One checked claim of a demo.
#[derive(Debug, Clone, PartialEq)]
pub struct Fact {
    pub claim: String,
    pub value: f64,
    pub passed: bool,
}

impl Fact {
    fn at_most(claim: impl Into<String>, value: f64, bound: f64) -> Self {
        Fact {
            claim: claim.into(),
            value,
            passed: value <= bound,
        }
    }

    fn at_least(claim: impl Into<String>, value: f64, bound: f64) -> Self {
        Fact {
            claim: claim.into(),
            value,
            passed: value >= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoReport {
    pub name: &'static str,
    pub facts: Vec<Fact>,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.facts.iter().all(|f| f.passed)
    }

    pub fn fact(&self, prefix: &str) -> Option<&Fact> {
        self.facts.iter().find(|f| f.claim.starts_with(prefix))
    }
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "demo {}", self.name)?;
        for fact in &self.facts {
            writeln!(
                f,
                "  [{}] {} = {:.12e}",
                if fact.passed { "PASS" } else { "FAIL" },
                fact.claim,
                fact.value
            )?;
        }
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ket_sum(dims: &[usize], kets: &[(&[usize], f64)]) -> Result<PureState> {
    let sys = RegisterSystem::new(dims.to_vec())?;
    let mut amps = vec![c(0., 0.); sys.total_dim()];
    for (labels, sign) in kets {
        amps[sys.index(labels)?] += c(*sign, 0.);
    }
    PureState::normalized(sys, amps)
}

fn superpose(basis: &[PureState], coeffs: &[Complex64]) -> Result<PureState> {
    let sys = basis[0].system().clone();
    let mut amps = vec![c(0., 0.); sys.total_dim()];
    for (k, b) in coeffs.iter().zip(basis) {
        for (o, a) in amps.iter_mut().zip(b.amplitudes()) {
            *o += k * a;
        }
    }
    PureState::normalized(sys, amps)
}

/// Number of random secrets used by [`demo_qutrit_233`].
pub const QUTRIT_DEMO_TRIALS: usize = 200;
/// Seed for those secrets.
pub const QUTRIT_DEMO_SEED: u64 = 2023;

/// The three-qutrit `((2,3))` scheme: exact codewords, reconstruction from
/// every pair on seeded random secrets, and maximally mixed single shares.
pub fn demo_qutrit_233() -> Result<DemoReport> {
    let params = CodeParams::new(2, 3, 3)?;
    let rows: [[&[usize]; 3]; 3] = [
        [&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]],
        [&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]],
        [&[0, 2, 1], &[1, 0, 2], &[2, 1, 0]],
    ];
    let mut worst_dev: f64 = 0.0;
    for (s, kets) in rows.iter().enumerate() {
        let mut secret = vec![c(0., 0.); 3];
        secret[s] = c(1., 0.);
        let got = encode(&secret, &params)?;
        let want = ket_sum(&[3, 3, 3], &kets.map(|k| (k, 1.0)))?;
        for (a, b) in got.amplitudes().iter().zip(want.amplitudes()) {
            worst_dev = worst_dev.max((a - b).norm());
        }
    }
    let mut facts = vec![Fact::at_most("codeword max amplitude deviation", worst_dev, 1e-12)];

    let mut rng = ChaCha8Rng::seed_from_u64(QUTRIT_DEMO_SEED);
    let secrets: Vec<PureState> = (0..QUTRIT_DEMO_TRIALS)
        .map(|_| {
            let amps = (0..3)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            PureState::normalized(RegisterSystem::new(vec![3]).unwrap(), amps)
        })
        .collect::<Result<_>>()?;
    let mixed = DensityMatrix::maximally_mixed(RegisterSystem::new(vec![3])?);
    let mut worst_single: f64 = 0.0;
    let mut worst_pair = [1.0f64; 3];
    let pairs = [[0, 1], [0, 2], [1, 2]];
    let decoders = pairs
        .iter()
        .map(|p| SubsetDecoder::new(&params, p))
        .collect::<Result<Vec<_>>>()?;
    for secret in &secrets {
        let enc = encode(secret.amplitudes(), &params)?;
        for (slot, dec) in worst_pair.iter_mut().zip(&decoders) {
            let out = dec.apply(&enc, 0)?.partial_trace(&[dec.output_coordinate()])?;
            *slot = slot.min(fidelity(&out, secret)?);
        }
        for r in 0..3 {
            worst_single = worst_single.max(trace_distance(&enc.partial_trace(&[r])?, &mixed)?);
        }
    }
    for (p, f) in pairs.iter().zip(worst_pair) {
        facts.push(Fact::at_least(
            format!("min fidelity from shares {{{},{}}}", p[0], p[1]),
            f,
            1.0 - 1e-10,
        ));
    }
    facts.push(Fact::at_most(
        "max single-share trace distance to I/3",
        worst_single,
        1e-10,
    ));
    Ok(DemoReport {
        name: "qutrit-233",
        facts,
    })
}

/// The four-qubit code `|0> -> |0000>+|1111>`, `|1> -> |0011>+|1100>`:
/// every three qubits recover the secret, yet qubits {0,2} tell `|0>` from
/// `|1>` perfectly, so it is not a threshold scheme.
pub fn demo_four_qubit_leak() -> Result<DemoReport> {
    let basis = four_qubit_basis()?;
    let zero = basis[0].partial_trace(&[0, 2])?;
    let one = basis[1].partial_trace(&[0, 2])?;
    let leak = trace_distance(&zero, &one)?;
    let mut facts = vec![Fact::at_least(
        "trace distance on {0,2} between |0> and |1>",
        leak,
        1.0 - TOL,
    )];

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let probes = vec![
        vec![c(1., 0.), c(0., 0.)],
        vec![c(0., 0.), c(1., 0.)],
        vec![c(h, 0.), c(h, 0.)],
        vec![c(h, 0.), c(0., h)],
    ];
    let classes = classify_code_subsets(&basis, &probes, 4)?;
    let triples: Vec<_> = classes.iter().filter(|(s, _, _)| s.len() == 3).collect();
    let authorized = triples.iter().filter(|(_, v, _)| *v == Verdict::Authorized).count();
    facts.push(Fact::at_least(
        "three-qubit subsets that reconstruct",
        authorized as f64,
        4.0,
    ));
    let intermediate = classes.iter().filter(|(_, v, _)| *v == Verdict::Intermediate).count();
    facts.push(Fact::at_least(
        "subsets with partial information",
        intermediate as f64,
        1.0,
    ));
    Ok(DemoReport {
        name: "four-qubit-leak",
        facts,
    })
}

/// Basis codewords of the four-qubit erasure code.
pub fn four_qubit_basis() -> Result<Vec<PureState>> {
    Ok(vec![
        ket_sum(&[2; 4], &[(&[0, 0, 0, 0], 1.0), (&[1, 1, 1, 1], 1.0)])?,
        ket_sum(&[2; 4], &[(&[0, 0, 1, 1], 1.0), (&[1, 1, 0, 0], 1.0)])?,
    ])
}

/// Basis codewords of the phase-restricted two-qubit encoding
/// `a(|00> - |11>) + b(|01> + |10>)`.
pub fn restricted_22_basis() -> Result<Vec<PureState>> {
    Ok(vec![
        ket_sum(&[2, 2], &[(&[0, 0], 1.0), (&[1, 1], -1.0)])?,
        ket_sum(&[2, 2], &[(&[0, 1], 1.0), (&[1, 0], 1.0)])?,
    ])
}

/// The restricted two-qubit encoding hides secrets with real `a b*` but a
/// single share separates `|0> + i|1>` from `|0> - i|1>`.
pub fn demo_restricted_22() -> Result<DemoReport> {
    let basis = restricted_22_basis()?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus_i = superpose(&basis, &[c(h, 0.), c(0., h)])?;
    let minus_i = superpose(&basis, &[c(h, 0.), c(0., -h)])?;
    let mut facts = Vec::new();
    for share in [0, 1] {
        let td = trace_distance(&plus_i.partial_trace(&[share])?, &minus_i.partial_trace(&[share])?)?;
        facts.push(Fact::at_least(
            format!("share {share} trace distance between |0>+i|1> and |0>-i|1>"),
            td,
            1.0 - TOL,
        ));
    }

    let real_probes = [
        vec![c(1., 0.), c(0., 0.)],
        vec![c(0., 0.), c(1., 0.)],
        vec![c(h, 0.), c(h, 0.)],
    ];
    let encoded = real_probes
        .iter()
        .map(|p| superpose(&basis, p))
        .collect::<Result<Vec<_>>>()?;
    for share in [0, 1] {
        let reduced = encoded
            .iter()
            .map(|e| e.partial_trace(&[share]))
            .collect::<Result<Vec<_>>>()?;
        facts.push(Fact::at_most(
            format!("share {share} max trace distance over real-amplitude secrets"),
            max_pairwise_trace_distance(&reduced)?,
            1e-10,
        ));
    }

    // U|a,0> = encoding of |a>, completed with the two remaining Bell states;
    // applying U^dagger to both shares leaves the secret in register 0.
    let s = h;
    #[rustfmt::skip]
    let u = [
        c(s, 0.),  c(s, 0.),  c(0., 0.), c(0., 0.),
        c(0., 0.), c(0., 0.), c(s, 0.),  c(s, 0.),
        c(0., 0.), c(0., 0.), c(s, 0.),  c(-s, 0.),
        c(-s, 0.), c(s, 0.),  c(0., 0.), c(0., 0.),
    ];
    // rows index |b0 b1>, columns index |a, anc>; transpose for U^dagger (real)
    let mut u_dag = [c(0., 0.); 16];
    for i in 0..4 {
        for j in 0..4 {
            u_dag[j * 4 + i] = u[i * 4 + j].conj();
        }
    }
    let decoder = SubsetOperator::from_dense(vec![0, 1], vec![2, 2], &u_dag)?;
    let mut worst: f64 = 1.0;
    for (probe, enc) in real_probes.iter().zip(&encoded) {
        let out = decoder.apply_unitary(enc)?;
        let target = PureState::new(RegisterSystem::new(vec![2])?, probe.clone())?;
        worst = worst.min(fidelity(&out.partial_trace(&[0])?, &target)?);
    }
    facts.push(Fact::at_least(
        "two-share reconstruction fidelity (real secrets)",
        worst,
        1.0 - TOL,
    ));
    Ok(DemoReport {
        name: "restricted-22",
        facts,
    })
}

/// Alice holds half of an EPR pair whose other half is split with the
/// `((2,2))` scheme into Bob's and Carol's shares.
pub fn demo_epr_product() -> Result<DemoReport> {
    let spec = build_threshold(2, 2, 2)?;
    let shared = split_joint(&spec, maximally_entangled(2)?)?;
    let global = shared.global();
    // registers: 0 = Alice, 1 = Bob (share A), 2 = Carol (share B), 3 = discarded
    let alice = global.partial_trace(&[0])?;
    let mixed = DensityMatrix::maximally_mixed(RegisterSystem::new(vec![2])?);
    let mut facts = vec![Fact::at_most(
        "Alice's trace distance to I/2",
        trace_distance(&alice, &mixed)?,
        TOL,
    )];
    for (who, reg) in [("Bob", 1), ("Carol", 2)] {
        let joint = global.partial_trace(&[0, reg])?;
        let product = alice.tensor(&global.partial_trace(&[reg])?);
        facts.push(Fact::at_most(
            format!("Alice-{who} distance from product state"),
            trace_distance(&joint, &product)?,
            TOL,
        ));
    }
    let f = match reconstruct(&shared, &["A", "B"])? {
        Reconstruction::Recovered(r) => r.fidelity.unwrap_or(0.0),
        Reconstruction::NotReconstructible { .. } => 0.0,
    };
    facts.push(Fact::at_least(
        "Bob+Carol entanglement fidelity with Alice",
        f,
        1.0 - TOL,
    ));
    Ok(DemoReport { name: "epr", facts })
}
