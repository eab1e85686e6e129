//! Text file formats for schemes and shared states.
//!
//! Both start with the header `QSS1` followed by `key=value` lines in a
//! fixed order. Index lists are comma separated, `-` means empty, and share
//! bundles are written `A:0,1;B:2`. A state file then lists its nonzero
//! amplitudes as `amp <basis-index> <re> <im>`, each float printed with 17
//! significant digits so it parses back to the same bits.

use std::fmt::Write as _;

use qss_core::{CodeParams, Complex64, PureState, RegisterSystem, SchemeSpec, Share, SharedState};

use crate::CliError;

pub const HEADER: &str = "QSS1";

/// Amplitudes below this magnitude are not written.
pub const AMP_CUTOFF: f64 = 1e-15;

/// Allowed deviation of a state file's norm from 1.
pub const NORM_TOL: f64 = 1e-9;

/// Formats `x` as a plain decimal with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let point = exp as usize + 1;
        if point >= digits.len() {
            format!("{}{}", digits, "0".repeat(point - digits.len()))
        } else {
            format!("{}.{}", &digits[..point], &digits[point..])
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn fmt_indices(xs: &[usize]) -> String {
    if xs.is_empty() {
        return "-".into();
    }
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_indices(s: &str) -> Result<Vec<usize>, CliError> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| usage(format!("bad index `{t}`"))))
        .collect()
}

pub fn fmt_bundles(shares: &[Share]) -> String {
    shares
        .iter()
        .map(|s| format!("{}:{}", s.label, fmt_indices(&s.coordinates)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_bundles(s: &str) -> Result<Vec<Share>, CliError> {
    s.split(';')
        .map(|group| {
            let (label, coords) = group
                .split_once(':')
                .ok_or_else(|| usage(format!("bad bundle `{group}`")))?;
            Ok(Share {
                label: label.trim().to_string(),
                coordinates: parse_indices(coords)?,
            })
        })
        .collect()
}

/// Parses a secret written as comma separated `re:im` pairs.
pub fn parse_amplitudes(s: &str) -> Result<Vec<Complex64>, CliError> {
    s.split(',')
        .map(|pair| {
            let (re, im) = pair
                .split_once(':')
                .ok_or_else(|| usage(format!("amplitude `{pair}` is not of the form re:im")))?;
            let num = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| usage(format!("bad number `{t}`")))
            };
            Ok(Complex64::new(num(re)?, num(im)?))
        })
        .collect()
}

/// Reads `key=value` lines in order.
struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Result<Self, CliError> {
        let mut iter = text.lines().enumerate();
        match iter.next() {
            Some((_, h)) if h.trim() == HEADER => Ok(Lines { iter }),
            _ => Err(usage(format!("missing `{HEADER}` header"))),
        }
    }

    fn field(&mut self, key: &str) -> Result<&'a str, CliError> {
        let (no, line) = self
            .iter
            .next()
            .ok_or_else(|| usage(format!("missing `{key}=` line")))?;
        line.trim()
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| usage(format!("line {}: expected `{key}=`", no + 1)))
    }

    fn number(&mut self, key: &str) -> Result<usize, CliError> {
        let v = self.field(key)?;
        v.parse().map_err(|_| usage(format!("bad {key} `{v}`")))
    }

    fn rest(self) -> impl Iterator<Item = (usize, &'a str)> {
        self.iter
            .map(|(no, l)| (no + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
    }
}

fn check_dims(dims: &[usize], q: usize, m: usize) -> Result<(), CliError> {
    if dims.len() != m || dims.iter().any(|&d| d != q) {
        return Err(usage(format!("dims must list {m} registers of dimension {q}")));
    }
    Ok(())
}

/// Serializes a scheme.
pub fn write_scheme(spec: &SchemeSpec) -> String {
    let p = spec.params();
    let q = p.q().value();
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "k={}", spec.k()).unwrap();
    writeln!(out, "n={}", spec.n()).unwrap();
    writeln!(out, "s={}", p.s()).unwrap();
    writeln!(out, "q={q}").unwrap();
    writeln!(out, "dims={}", fmt_indices(&vec![q; p.m()])).unwrap();
    writeln!(out, "discarded={}", fmt_indices(spec.discarded())).unwrap();
    writeln!(out, "bundles={}", fmt_bundles(spec.shares())).unwrap();
    out
}

/// Parses a scheme written by [`write_scheme`].
pub fn read_scheme(text: &str) -> Result<SchemeSpec, CliError> {
    let mut lines = Lines::new(text)?;
    let k = lines.number("k")?;
    let n = lines.number("n")?;
    let s = lines.number("s")?;
    let q = lines.number("q")?;
    let dims = parse_indices(lines.field("dims")?)?;
    let discarded = parse_indices(lines.field("discarded")?)?;
    let shares = parse_bundles(lines.field("bundles")?)?;
    if let Some((no, _)) = lines.rest().next() {
        return Err(usage(format!("line {no}: unexpected content")));
    }
    if k == 0 {
        return Err(usage("k must be positive"));
    }
    let params = CodeParams::new(k, 2 * k - 1, s)?;
    if params.q().value() != q {
        return Err(usage(format!("q={q} but k={k}, s={s} give q={}", params.q())));
    }
    check_dims(&dims, q, params.m())?;
    let spec = SchemeSpec::from_parts(k, params, discarded, shares)?;
    if spec.n() != n {
        return Err(usage(format!("n={n} but {} coordinates are retained", spec.n())));
    }
    Ok(spec)
}

/// A shared state as stored on disk: the global state on all `m` code
/// registers (discarded ones included) plus the share layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateFile {
    pub q: usize,
    pub dims: Vec<usize>,
    pub discarded: Vec<usize>,
    pub bundles: Vec<Share>,
    pub amplitudes: Vec<Complex64>,
}

impl StateFile {
    pub fn from_shared(shared: &SharedState) -> Result<Self, CliError> {
        if shared.reference_registers() != 0 {
            return Err(usage("states with reference registers cannot be stored"));
        }
        let spec = shared.spec();
        Ok(StateFile {
            q: spec.params().q().value(),
            dims: shared.global().system().dims().to_vec(),
            discarded: spec.discarded().to_vec(),
            bundles: spec.shares().to_vec(),
            amplitudes: shared.global().amplitudes().to_vec(),
        })
    }

    /// Rebuilds the scheme and state. The threshold is `(m+1)/2`, the points
    /// are `0..m` and the secret dimension is taken to be `q`.
    pub fn to_shared(&self) -> Result<SharedState, CliError> {
        let m = self.dims.len();
        if m.is_multiple_of(2) {
            return Err(usage(format!("{m} registers do not form a threshold code")));
        }
        let k = m.div_ceil(2);
        let params = CodeParams::new(k, m, self.q)?;
        if params.q().value() != self.q {
            return Err(usage(format!("q={} is not a valid modulus for m={m}", self.q)));
        }
        check_dims(&self.dims, self.q, m)?;
        let spec = SchemeSpec::from_parts(k, params, self.discarded.clone(), self.bundles.clone())?;
        let global = PureState::new(RegisterSystem::new(self.dims.clone())?, self.amplitudes.clone())?;
        Ok(SharedState::from_global(spec, global)?)
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{HEADER}").unwrap();
        writeln!(out, "q={}", self.q).unwrap();
        writeln!(out, "dims={}", fmt_indices(&self.dims)).unwrap();
        writeln!(out, "discarded={}", fmt_indices(&self.discarded)).unwrap();
        writeln!(out, "bundles={}", fmt_bundles(&self.bundles)).unwrap();
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() >= AMP_CUTOFF {
                writeln!(out, "amp {i} {} {}", fmt17(a.re), fmt17(a.im)).unwrap();
            }
        }
        out
    }

    pub fn read(text: &str) -> Result<Self, CliError> {
        let mut lines = Lines::new(text)?;
        let q = lines.number("q")?;
        let dims = parse_indices(lines.field("dims")?)?;
        let discarded = parse_indices(lines.field("discarded")?)?;
        let bundles = parse_bundles(lines.field("bundles")?)?;
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&t| t <= 1 << 28)
            .ok_or_else(|| usage("state too large"))?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); total];
        let mut seen = vec![false; total];
        for (no, line) in lines.rest() {
            let bad = || usage(format!("line {no}: expected `amp <index> <re> <im>`"));
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [tag, idx, re, im] = parts[..] else {
                return Err(bad());
            };
            if tag != "amp" {
                return Err(bad());
            }
            let idx: usize = idx.parse().map_err(|_| bad())?;
            let re: f64 = re.parse().map_err(|_| bad())?;
            let im: f64 = im.parse().map_err(|_| bad())?;
            if idx >= total || seen[idx] {
                return Err(usage(format!("line {no}: index {idx} out of range or repeated")));
            }
            seen[idx] = true;
            amplitudes[idx] = Complex64::new(re, im);
        }
        let n2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(usage(format!("state norm^2 {n2} is not 1")));
        }
        Ok(StateFile {
            q,
            dims,
            discarded,
            bundles,
            amplitudes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fmt17_shapes() {
        assert_eq!(fmt17(0.0), "0");
        assert_eq!(fmt17(1.0), "1.0000000000000000");
        assert_eq!(fmt17(-0.5), "-0.50000000000000000");
        assert_eq!(fmt17(0.001), "0.0010000000000000000");
        assert_eq!(fmt17(12.5), "12.500000000000000");
    }

    proptest! {
        #[test]
        fn fmt17_round_trips(x in proptest::num::f64::NORMAL) {
            prop_assert_eq!(fmt17(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }

        #[test]
        fn fmt17_has_17_significant_digits(x in -1.0f64..1.0) {
            prop_assume!(x.abs() >= 1e-15);
            let s = fmt17(x);
            let sig = s.trim_start_matches(['-', '0', '.']).chars().filter(char::is_ascii_digit).count();
            prop_assert_eq!(sig, 17);
        }
    }

    #[test]
    fn amplitude_parsing() {
        let v = parse_amplitudes("1:0, 0.5:-2").unwrap();
        assert_eq!(v, vec![Complex64::new(1., 0.), Complex64::new(0.5, -2.)]);
        assert!(parse_amplitudes("1").is_err());
        assert!(parse_amplitudes("1:x").is_err());
        assert!(parse_amplitudes("inf:0").is_err());
    }

    #[test]
    fn bundle_syntax() {
        let b = parse_bundles("A:0,1;B:2").unwrap();
        assert_eq!(b[0].coordinates, [0, 1]);
        assert_eq!(fmt_bundles(&b), "A:0,1;B:2");
        assert!(parse_bundles("A0").is_err());
    }
}
