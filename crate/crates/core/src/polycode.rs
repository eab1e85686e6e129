//! Quantum polynomial codes over `Z_q`.
//!
//! A basis secret `|s>` is encoded as the uniform superposition over all
//! polynomials `p_c` of degree `< k` with leading coefficient `c_{k-1} = s`,
//! evaluated at `m` distinct points: `|p_c(x_0), ..., p_c(x_{m-1})>`.
//! Any `k` coordinates recover the secret when `m < 2k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gfq::{choose_prime, poly_eval, FieldMatrix, Prime};
use crate::hilbert::{PureState, RegisterSystem};

/// Largest number of codewords `classical_code` and `min_distance_check`
/// will enumerate.
pub const ENUMERATION_CAP: u128 = 1_000_000;

/// Parameters of a polynomial code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeParams {
    k: usize,
    m: usize,
    q: Prime,
    s: usize,
    points: Vec<usize>,
}

impl CodeParams {
    /// Smallest admissible prime and the default points `x_i = i`.
    pub fn new(k: usize, m: usize, s: usize) -> Result<Self> {
        let q = choose_prime(m, s);
        Self::with_points(k, m, q, s, (0..m).collect())
    }

    pub fn with_points(k: usize, m: usize, q: Prime, s: usize, points: Vec<usize>) -> Result<Self> {
        let fail = |msg: String| Err(Error::ParamViolation(msg));
        if k == 0 {
            return fail("threshold k must be at least 1".into());
        }
        if m < k {
            return fail(format!("code length m={m} is below the threshold k={k}"));
        }
        if m >= 2 * k {
            return fail(format!("m={m} >= 2k={}: the secret could not be disentangled", 2 * k));
        }
        if s < 2 || s > q.value() {
            return fail(format!("secret dimension s={s} must lie in [2, q={q}]"));
        }
        if m > q.value() {
            return fail(format!("m={m} distinct points do not exist mod {q}"));
        }
        if points.len() != m {
            return fail(format!("{} points for length {m}", points.len()));
        }
        if let Some(&x) = points.iter().find(|&&x| x >= q.value()) {
            return fail(format!("point {x} is not reduced mod {q}"));
        }
        for i in 0..m {
            if points[..i].contains(&points[i]) {
                return fail(format!("point {} repeated", points[i]));
            }
        }
        Ok(CodeParams { k, m, q, s, points })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> Prime {
        self.q
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    /// The `m` code registers.
    pub fn code_system(&self) -> RegisterSystem {
        RegisterSystem::uniform(self.q.value(), self.m).expect("q >= 2, m >= 1")
    }

    /// Evaluation tuple `(p_c(x_0), ..., p_c(x_{m-1}))`.
    pub fn evaluate(&self, coeffs: &[usize]) -> Vec<usize> {
        self.points.iter().map(|&x| poly_eval(coeffs, x, self.q)).collect()
    }

    /// Index of the codeword ket for coefficient vector `coeffs`.
    fn codeword_index(&self, coeffs: &[usize]) -> usize {
        let q = self.q.value();
        self.points
            .iter()
            .fold(0, |acc, &x| acc * q + poly_eval(coeffs, x, self.q))
    }
}

/// All vectors in `Z_q^len`, first entry least significant.
fn for_each_vector(q: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut v = vec![0; len];
    loop {
        f(&v);
        let mut i = 0;
        while i < len {
            v[i] += 1;
            if v[i] < q {
                break;
            }
            v[i] = 0;
            i += 1;
        }
        if i == len {
            return;
        }
    }
}

/// Encodes `joint`, a state on `ref_dims` followed by one secret register of
/// dimension `<= s`, into `ref_dims` followed by the `m` code registers.
pub fn encode_with_reference(joint: &PureState, params: &CodeParams) -> Result<PureState> {
    let dims = joint.system().dims();
    let (&secret_dim, ref_dims) = dims.split_last().expect("nonempty system");
    if secret_dim > params.s {
        return Err(Error::BadSecretDimension {
            got: secret_dim,
            max: params.s,
        });
    }
    let n2 = joint.norm_sqr();
    if (n2 - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(n2));
    }

    let q = params.q.value();
    let k = params.k;
    // codeword kets of each basis secret, shared across reference indices
    let mut kets: Vec<Vec<usize>> = Vec::with_capacity(secret_dim);
    for s in 0..secret_dim {
        let mut list = Vec::with_capacity(q.pow(k as u32 - 1));
        let mut coeffs = vec![0; k];
        coeffs[k - 1] = s;
        for_each_vector(q, k - 1, |low| {
            coeffs[..k - 1].copy_from_slice(low);
            list.push(params.codeword_index(&coeffs));
        });
        kets.push(list);
    }
    let scale = 1.0 / (q.pow(k as u32 - 1) as f64).sqrt();

    let code = params.code_system();
    let ref_dim: usize = ref_dims.iter().product();
    let mut out_dims = ref_dims.to_vec();
    out_dims.extend_from_slice(code.dims());
    let out_sys = RegisterSystem::new(out_dims)?;
    let code_dim = code.total_dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); ref_dim * code_dim];
    for (idx, &a) in joint.amplitudes().iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (r, s) = (idx / secret_dim, idx % secret_dim);
        for &cw in &kets[s] {
            amps[r * code_dim + cw] += a * scale;
        }
    }
    PureState::new(out_sys, amps)
}

/// Encodes a secret given as `<= s` amplitudes (normalized within 1e-9).
pub fn encode(secret: &[Complex64], params: &CodeParams) -> Result<PureState> {
    if secret.is_empty() || secret.len() > params.s {
        return Err(Error::BadSecretDimension {
            got: secret.len(),
            max: params.s,
        });
    }
    // a 1-dimensional secret is padded so it forms a valid register
    let dim = secret.len().max(2);
    let mut amps = secret.to_vec();
    amps.resize(dim, Complex64::new(0.0, 0.0));
    let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (n2 - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(n2));
    }
    let sys = RegisterSystem::new(vec![dim])?;
    let psi = PureState::normalized(sys, amps)?;
    encode_with_reference(&psi, params)
}

/// Encodings of the basis secrets `|0>, ..., |s-1>`: an orthonormal basis of
/// the code space used by the secret.
pub fn code_basis(params: &CodeParams) -> Vec<PureState> {
    (0..params.s)
        .map(|s| {
            let mut v = vec![Complex64::new(0.0, 0.0); params.s];
            v[s] = Complex64::new(1.0, 0.0);
            encode(&v, params).expect("basis secret")
        })
        .collect()
}

/// The decoding unitary for one `k`-subset of coordinates, precomputed.
#[derive(Debug, Clone)]
pub struct SubsetDecoder {
    q: Prime,
    /// Subset coordinates, ascending; the first receives the secret.
    subset: Vec<usize>,
    /// `V_k(x_S)^{-1}`.
    unspread: FieldMatrix,
    /// `V_{k-1}(z)` over the `k-1` auxiliary points.
    respread: FieldMatrix,
    /// `z_j^{k-1}` for each auxiliary point.
    leading: Vec<usize>,
}

impl SubsetDecoder {
    pub fn new(params: &CodeParams, subset: &[usize]) -> Result<Self> {
        let k = params.k;
        if subset.len() != k {
            return Err(Error::WrongSubsetSize {
                expected: k,
                got: subset.len(),
            });
        }
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        if subset.len() != k || subset.iter().any(|&c| c >= params.m) {
            return Err(Error::ParamViolation(format!(
                "subset {subset:?} is not {k} distinct coordinates below {}",
                params.m
            )));
        }
        let q = params.q;
        let sub_points: Vec<usize> = subset.iter().map(|&c| params.points[c]).collect();
        // Auxiliary points: the complement's points (ascending by coordinate),
        // topped up from the subset's own points when m < 2k - 1.
        let mut aux: Vec<usize> = (0..params.m)
            .filter(|c| !subset.contains(c))
            .map(|c| params.points[c])
            .collect();
        aux.extend(sub_points.iter().copied().take(k - 1 - aux.len()));
        let unspread = FieldMatrix::vandermonde(&sub_points, q).inverse()?;
        let respread = FieldMatrix::vandermonde(&aux, q);
        let leading = aux.iter().map(|&z| q.pow(z, k - 1)).collect();
        Ok(SubsetDecoder {
            q,
            subset,
            unspread,
            respread,
            leading,
        })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// Coordinate whose register holds the secret afterwards.
    pub fn output_coordinate(&self) -> usize {
        self.subset[0]
    }

    /// Runs steps 1-2 only: afterwards the output register holds the
    /// leading coefficient, still entangled with the rest.
    pub fn unspread(&self, state: &PureState, offset: usize) -> Result<PureState> {
        let regs: Vec<usize> = self.subset.iter().map(|&c| offset + c).collect();
        let state = state.apply_label_matrix(&self.unspread, &regs)?;
        // (R_0, R_1, ..., R_{k-1}) <- (R_{k-1}, R_0, ..., R_{k-2})
        let mut perm: Vec<usize> = (0..state.system().len()).collect();
        let k = regs.len();
        for i in 0..k {
            perm[regs[i]] = regs[(i + k - 1) % k];
        }
        state.permute_registers(&perm)
    }

    /// Applies the full decoding unitary to the code registers starting at
    /// register `offset` of `state`.
    pub fn apply(&self, state: &PureState, offset: usize) -> Result<PureState> {
        let mut state = self.unspread(state, offset)?;
        let regs: Vec<usize> = self.subset.iter().map(|&c| offset + c).collect();
        if regs.len() > 1 {
            state = state.apply_label_matrix(&self.respread, &regs[1..])?;
            for (&dst, &f) in regs[1..].iter().zip(&self.leading) {
                state = state.add_scaled_register(regs[0], dst, f, self.q)?;
            }
        }
        Ok(state)
    }
}

/// Decodes from the coordinates in `subset`, with the code occupying the last
/// `m` registers of `state` (earlier registers are untouched references).
///
/// Afterwards the register of the lowest coordinate in `subset` holds the
/// secret; the other subset registers are left in `sum_y |y>|y>` with the
/// complement and are not reset.
pub fn decode_subset(state: &PureState, subset: &[usize], params: &CodeParams) -> Result<PureState> {
    let offset = code_offset(state, params)?;
    SubsetDecoder::new(params, subset)?.apply(state, offset)
}

pub(crate) fn code_offset(state: &PureState, params: &CodeParams) -> Result<usize> {
    let dims = state.system().dims();
    let q = params.q.value();
    if dims.len() < params.m || dims[dims.len() - params.m..].iter().any(|&d| d != q) {
        return Err(Error::DimensionMismatch(format!(
            "state {:?} does not end in {} registers of dimension {q}",
            dims, params.m
        )));
    }
    Ok(dims.len() - params.m)
}

/// Which of the two classical codes underlying the quantum code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    /// All evaluation tuples of polynomials of degree `< k`.
    C1,
    /// Those with vanishing leading coefficient `c_{k-1}`.
    C2,
}

/// An explicitly enumerated linear code over `Z_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalCode {
    q: Prime,
    length: usize,
    codewords: Vec<Vec<usize>>,
}

impl ClassicalCode {
    pub fn codewords(&self) -> &[Vec<usize>] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn contains(&self, word: &[usize]) -> bool {
        self.codewords.iter().any(|w| w == word)
    }

    pub fn is_linear(&self) -> bool {
        let q = self.q;
        self.codewords.iter().all(|a| {
            self.codewords.iter().all(|b| {
                let sum: Vec<usize> = a.iter().zip(b).map(|(&x, &y)| q.add(x, y)).collect();
                self.contains(&sum)
            })
        })
    }

    /// Minimum Hamming weight of a nonzero codeword; `length + 1` for the zero code.
    pub fn min_distance(&self) -> usize {
        self.codewords
            .iter()
            .map(|w| w.iter().filter(|&&x| x != 0).count())
            .filter(|&wt| wt > 0)
            .min()
            .unwrap_or(self.length + 1)
    }

    /// The dual code, by exhaustive search over `Z_q^length`.
    pub fn dual(&self, cap: u128) -> Result<ClassicalCode> {
        let q = self.q;
        let size = (q.value() as u128).pow(self.length as u32);
        if size > cap {
            return Err(Error::TooLarge { size, cap });
        }
        let mut codewords = Vec::new();
        for_each_vector(q.value(), self.length, |v| {
            let orthogonal = self
                .codewords
                .iter()
                .all(|w| w.iter().zip(v).fold(0, |acc, (&a, &b)| q.add(acc, q.mul(a, b))) == 0);
            if orthogonal {
                codewords.push(v.to_vec());
            }
        });
        Ok(ClassicalCode {
            q,
            length: self.length,
            codewords,
        })
    }
}

/// Enumerates `C1` or `C2` exhaustively.
pub fn classical_code(params: &CodeParams, which: Which) -> Result<ClassicalCode> {
    let q = params.q.value();
    let k = params.k;
    let free = match which {
        Which::C1 => k,
        Which::C2 => k - 1,
    };
    let size = (q as u128).pow(free as u32);
    if size > ENUMERATION_CAP {
        return Err(Error::TooLarge {
            size,
            cap: ENUMERATION_CAP,
        });
    }
    let mut codewords = Vec::with_capacity(size as usize);
    let mut coeffs = vec![0; k];
    for_each_vector(q, free, |c| {
        coeffs[..free].copy_from_slice(c);
        codewords.push(params.evaluate(&coeffs));
    });
    Ok(ClassicalCode {
        q: params.q,
        length: params.m,
        codewords,
    })
}

/// `(dist C1, dist C2^perp)` by exhaustive enumeration.
pub fn min_distance_check(params: &CodeParams) -> Result<(usize, usize)> {
    let c1 = classical_code(params, Which::C1)?;
    let c2_dual = classical_code(params, Which::C2)?.dual(ENUMERATION_CAP)?;
    Ok((c1.min_distance(), c2_dual.min_distance()))
}
