//! Wire formats: the problem-file schema shared by every subcommand and the
//! JSON rendering of results. Exact values travel as canonical strings
//! (rational multiples of powers of pi), floats as doubles. Parsing is
//! strict; unknown fields are rejected.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::funcs::{CoeffFn, CoeffSeq, Frac, PiecewiseTrig, QuasiTrigPoly, SampledFn, DEFAULT_GRID};
use crate::scalar::{parse_re_im, parse_real_scalar, Scalar};
use crate::words::Word;
use crate::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// One x^p e^{imx} term; re/im are pi-polynomial strings like "2π^2/3".
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    #[serde(default)]
    pub p: u32,
    #[serde(default)]
    pub m: i64,
    #[serde(default = "one_string")]
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn one_string() -> String {
    "1".into()
}

fn zero_string() -> String {
    "0".into()
}

/// A coefficient function in one of the three classes. `kind` selects which
/// of the remaining fields apply: "trig" takes `terms`, "pw" takes `breaks`
/// (fractions of the period, as "num/den" strings) and `pieces`, "sampled"
/// takes `values` (and optionally `left`, defaulting to the last value).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FnJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breaks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<Vec<TermJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<[f64; 2]>,
}

/// A coefficient function entry: either a shorthand string ("sin", "cos 2x",
/// or any exact constant like "1/2" or "π") or a full object.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FnSpec {
    Short(String),
    Full(FnJson),
}

/// A scalar entry: a double, an exact real string, or an exact re/im pair.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ScalarSpec {
    Num(f64),
    Str(String),
    ReIm { re: String, im: String },
}

/// Target return series for gen-center: r + sum_k d_k r^{k+1}.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetJson {
    pub d: Vec<ScalarSpec>,
}

/// The shared problem file. Which fields are required depends on the
/// subcommand; `schema` must always be 1.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub schema: u32,
    #[serde(default)]
    pub a: Option<Vec<Option<FnSpec>>>,
    #[serde(default)]
    pub bound: Option<f64>,
    #[serde(default)]
    pub words: Option<Vec<Word>>,
    #[serde(default)]
    pub u: Option<Vec<FnSpec>>,
    #[serde(default)]
    pub f: Option<TargetJson>,
    #[serde(default)]
    pub lambda: Option<Vec<ScalarSpec>>,
    #[serde(default)]
    pub radii: Option<Vec<f64>>,
}

pub fn parse_problem(text: &str) -> Result<Problem, Error> {
    let p: Problem =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("problem JSON: {e}")))?;
    if p.schema != SCHEMA_VERSION {
        return Err(Error::Input(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            p.schema
        )));
    }
    Ok(p)
}

pub fn scalar_from_spec(s: &ScalarSpec) -> Result<Scalar, Error> {
    match s {
        ScalarSpec::Num(x) => Ok(Scalar::from_f64(*x)),
        ScalarSpec::Str(t) => parse_real_scalar(t)
            .map(Scalar::Exact)
            .map_err(|e| Error::Input(format!("scalar {t:?}: {e}"))),
        ScalarSpec::ReIm { re, im } => parse_re_im(re, im)
            .map(Scalar::Exact)
            .map_err(|e| Error::Input(format!("scalar re={re:?} im={im:?}: {e}"))),
    }
}

/// Shorthands: "sin", "cos", "sin kx" / "cos kx" (the trailing x optional),
/// or any exact real constant string.
fn coeff_fn_from_short(s: &str) -> Result<CoeffFn, Error> {
    let t = s.trim();
    for (prefix, build) in [
        ("sin", QuasiTrigPoly::sin as fn(i64) -> QuasiTrigPoly),
        ("cos", QuasiTrigPoly::cos as fn(i64) -> QuasiTrigPoly),
    ] {
        if let Some(rest) = t.strip_prefix(prefix) {
            let rest = rest.trim().trim_end_matches('x').trim();
            let k: i64 = if rest.is_empty() {
                1
            } else {
                rest.parse().map_err(|_| {
                    Error::Input(format!("bad harmonic {rest:?} in function shorthand {t:?}"))
                })?
            };
            if k == 0 {
                return Err(Error::Input(format!("zero frequency in shorthand {t:?}")));
            }
            return Ok(CoeffFn::Trig(build(k)));
        }
    }
    let c = parse_real_scalar(t)
        .map_err(|e| Error::Input(format!("function shorthand {t:?}: {e}")))?;
    Ok(CoeffFn::constant(Scalar::Exact(c)))
}

fn term_from_json(t: &TermJson) -> Result<(u32, i64, Scalar), Error> {
    let c = parse_re_im(&t.re, &t.im)
        .map_err(|e| Error::Input(format!("term coefficient re={:?} im={:?}: {e}", t.re, t.im)))?;
    Ok((t.p, t.m, Scalar::Exact(c)))
}

fn trig_from_terms(terms: &[TermJson]) -> Result<QuasiTrigPoly, Error> {
    let mut q = QuasiTrigPoly::zero();
    for t in terms {
        let (p, m, c) = term_from_json(t)?;
        q.add_term(p, m, c);
    }
    Ok(q)
}

fn parse_break(s: &str) -> Result<Frac, Error> {
    let bad = |m: &str| Error::Input(format!("breakpoint {s:?}: {m}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let d: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Frac::new(n, d))
}

pub fn coeff_fn_from_json(f: &FnJson) -> Result<CoeffFn, Error> {
    let expect_absent = |name: &str, present: bool| {
        if present {
            Err(Error::Input(format!("field {name:?} does not apply to kind {:?}", f.kind)))
        } else {
            Ok(())
        }
    };
    match f.kind.as_str() {
        "trig" => {
            expect_absent("breaks", f.breaks.is_some())?;
            expect_absent("pieces", f.pieces.is_some())?;
            expect_absent("values", f.values.is_some())?;
            expect_absent("left", f.left.is_some())?;
            let terms = f
                .terms
                .as_ref()
                .ok_or_else(|| Error::Input("kind \"trig\" requires \"terms\"".into()))?;
            Ok(CoeffFn::Trig(trig_from_terms(terms)?))
        }
        "pw" => {
            expect_absent("terms", f.terms.is_some())?;
            expect_absent("values", f.values.is_some())?;
            expect_absent("left", f.left.is_some())?;
            let breaks = f
                .breaks
                .as_ref()
                .ok_or_else(|| Error::Input("kind \"pw\" requires \"breaks\"".into()))?;
            let pieces = f
                .pieces
                .as_ref()
                .ok_or_else(|| Error::Input("kind \"pw\" requires \"pieces\"".into()))?;
            let breaks: Vec<Frac> =
                breaks.iter().map(|b| parse_break(b)).collect::<Result<_, _>>()?;
            let pieces: Vec<QuasiTrigPoly> =
                pieces.iter().map(|p| trig_from_terms(p)).collect::<Result<_, _>>()?;
            let pw = PiecewiseTrig::new(breaks, pieces).map_err(Error::Input)?;
            Ok(CoeffFn::Pw(pw))
        }
        "sampled" => {
            expect_absent("terms", f.terms.is_some())?;
            expect_absent("breaks", f.breaks.is_some())?;
            expect_absent("pieces", f.pieces.is_some())?;
            let values = f
                .values
                .as_ref()
                .ok_or_else(|| Error::Input("kind \"sampled\" requires \"values\"".into()))?;
            let vals: Vec<Complex64> =
                values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            let left = f
                .left
                .map(|[re, im]| Complex64::new(re, im))
                .or_else(|| vals.last().copied())
                .unwrap_or(Complex64::ZERO);
            let sf = SampledFn::new(vals, left).map_err(Error::Input)?;
            Ok(CoeffFn::Sampled(sf))
        }
        other => Err(Error::Input(format!(
            "unknown function kind {other:?} (expected \"trig\", \"pw\", or \"sampled\")"
        ))),
    }
}

pub fn coeff_fn_from_spec(spec: &FnSpec) -> Result<CoeffFn, Error> {
    match spec {
        FnSpec::Short(s) => coeff_fn_from_short(s),
        FnSpec::Full(f) => coeff_fn_from_json(f),
    }
}

/// Build the coefficient sequence from the problem's `a` (null entries are
/// zero functions) and optional `bound`.
pub fn seq_from_problem(p: &Problem) -> Result<CoeffSeq, Error> {
    let specs = p
        .a
        .as_ref()
        .ok_or_else(|| Error::Input("this subcommand requires the \"a\" field".into()))?;
    let mut a = Vec::with_capacity(specs.len());
    for (i, s) in specs.iter().enumerate() {
        match s {
            None => a.push(CoeffFn::zero()),
            Some(spec) => a.push(
                coeff_fn_from_spec(spec)
                    .map_err(|e| Error::Input(format!("a[{}]: {e}", i + 1)))?,
            ),
        }
    }
    match p.bound {
        Some(b) => CoeffSeq::with_bound(a, b).map_err(Error::Input),
        None => Ok(CoeffSeq::new(a)),
    }
}

fn scalar_term_strings(c: &Scalar) -> Option<(String, String)> {
    match c {
        Scalar::Exact(q) => Some((q.re_poly_string(), q.im_poly_string())),
        Scalar::Float(_) => None,
    }
}

fn terms_to_json(q: &QuasiTrigPoly) -> Option<Vec<TermJson>> {
    let mut out = Vec::new();
    for ((p, m), c) in q.terms() {
        let (re, im) = scalar_term_strings(c)?;
        out.push(TermJson { p: *p, m: *m, re, im });
    }
    Some(out)
}

fn frac_string(f: &Frac) -> String {
    if f.denom().is_one() {
        format!("{}", f.numer())
    } else {
        format!("{}/{}", f.numer(), f.denom())
    }
}

fn sampled_to_json(s: &SampledFn) -> FnJson {
    FnJson {
        kind: "sampled".into(),
        terms: None,
        breaks: None,
        pieces: None,
        values: Some(s.values().iter().map(|z| [z.re, z.im]).collect()),
        left: Some([s.left().re, s.left().im]),
    }
}

/// Serialize a coefficient function. Exact classes keep their structure;
/// anything carrying floats degrades to the sampled class on the default
/// grid.
pub fn coeff_fn_to_json(f: &CoeffFn) -> FnJson {
    match f {
        CoeffFn::Trig(q) => match terms_to_json(q) {
            Some(terms) => FnJson {
                kind: "trig".into(),
                terms: Some(terms),
                breaks: None,
                pieces: None,
                values: None,
                left: None,
            },
            None => sampled_to_json(&f.to_sampled(DEFAULT_GRID)),
        },
        CoeffFn::Pw(pw) => {
            let pieces: Option<Vec<Vec<TermJson>>> = pw.pieces().iter().map(terms_to_json).collect();
            match pieces {
                Some(pieces) => FnJson {
                    kind: "pw".into(),
                    terms: None,
                    breaks: Some(pw.breaks().iter().map(frac_string).collect()),
                    pieces: Some(pieces),
                    values: None,
                    left: None,
                },
                None => sampled_to_json(&f.to_sampled(DEFAULT_GRID)),
            }
        }
        CoeffFn::Sampled(s) => sampled_to_json(s),
    }
}

/// Serialize a sequence as a problem file, ready to feed back in.
pub fn seq_to_problem_json(a: &CoeffSeq) -> Value {
    let entries: Vec<Value> = a
        .coeffs()
        .iter()
        .map(|f| {
            if f.is_zero() {
                Value::Null
            } else {
                serde_json::to_value(coeff_fn_to_json(f)).expect("plain data serializes")
            }
        })
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "a": entries,
        "bound": a.bound(),
    })
}

/// Render a scalar: {"exact": "..."} or {"float": re[, "im": im]}.
pub fn value_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(q) => json!({ "exact": q.to_canonical_string() }),
        Scalar::Float(z) => {
            if z.im == 0.0 {
                json!({ "float": z.re })
            } else {
                json!({ "float": z.re, "im": z.im })
            }
        }
    }
}
