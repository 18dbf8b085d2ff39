//! Command-line front end: one shared problem-file schema, subcommand
//! dispatch, and deterministic serialization. Exit codes: 0 success,
//! 1 internal failure, 2 malformed input, 3 precondition violation.

use std::io::Read;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::centergen::{from_u_sequence, t_map};
use crate::freealg::is_universal_center;
use crate::funcs::{CoeffFn, CoeffSeq};
use crate::iint::{iint, shuffle_product_check, signature};
use crate::json::{
    coeff_fn_from_spec, parse_problem, scalar_from_spec, seq_from_problem, seq_to_problem_json,
    value_json, Problem,
};
use crate::oracle::{self, displacement_scan, safe_radius};
use crate::pathgroup::{concat, equivalent, inverse};
use crate::planar::{
    cherkas, composition_check, dulac_component, dulac_field, polar_reduce,
    quadratic_circle_pair, QuadraticParams,
};
use crate::returnmap::{classify, return_series, Classification, ReturnSeries};
use crate::scalar::Scalar;
use crate::words::Word;
use crate::Error;

#[derive(Parser)]
#[command(
    name = "centersig",
    about = "Iterated-integral signatures, return maps and center detection for periodic ODEs",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Weight cutoff for signatures, classification and series identities.
    #[arg(long, global = true, default_value_t = 8)]
    cutoff: u32,
    /// Numeric tolerance for the integrator-backed subcommands.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Reject inputs that carry sampled (inexact) coefficient functions.
    #[arg(long, global = true)]
    exact: bool,
    /// Emit CSV instead of JSON (oracle scan only).
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the iterated integrals of the listed words.
    Iint { file: Option<PathBuf> },
    /// All iterated integrals up to the weight cutoff.
    Signature { file: Option<PathBuf> },
    /// First nonvanishing return-series coefficient, or a center verdict.
    Classify { file: Option<PathBuf> },
    /// Do all iterated integrals up to the cutoff vanish?
    Universal { file: Option<PathBuf> },
    /// Group operations on coefficient sequences.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Build a center sequence from loop data ("u") or a target series ("f").
    GenCenter { file: Option<PathBuf> },
    /// Numeric displacement scan backed by the adaptive integrator.
    Oracle { file: Option<PathBuf> },
    /// Quadratic-family analysis of a lambda point.
    Quadratic { file: Option<PathBuf> },
    /// Run the embedded invariant suite.
    Selftest,
}

#[derive(Subcommand)]
enum GroupOp {
    /// Concatenate two sequences (second half after first half).
    Concat { a: PathBuf, b: PathBuf },
    /// Orientation reversal; concatenation with the original is trivial.
    Inverse { a: Option<PathBuf> },
    /// Signature equality up to the cutoff.
    Equivalent { a: PathBuf, b: PathBuf },
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Error> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn load_problem(path: &Option<PathBuf>) -> Result<Problem, Error> {
    parse_problem(&read_input(path)?)
}

fn load_seq(path: &Option<PathBuf>, exact: bool) -> Result<CoeffSeq, Error> {
    let a = seq_from_problem(&load_problem(path)?)?;
    check_exact(&a, exact)?;
    Ok(a)
}

fn check_exact(a: &CoeffSeq, exact: bool) -> Result<(), Error> {
    if exact && a.has_sampled() {
        return Err(Error::Precondition(
            "--exact was given but the input carries sampled coefficient functions".into(),
        ));
    }
    Ok(())
}

fn word_value_array<'a>(items: impl Iterator<Item = (&'a Word, &'a Scalar)>) -> Value {
    let rows: Vec<Value> =
        items.map(|(w, v)| json!({ "word": w, "value": value_json(v) })).collect();
    Value::Array(rows)
}

fn cmd_iint(p: &Problem, exact: bool) -> Result<Value, Error> {
    let a = seq_from_problem(p)?;
    check_exact(&a, exact)?;
    let mut words: Vec<Word> = p
        .words
        .clone()
        .ok_or_else(|| Error::Input("iint requires the \"words\" field".into()))?;
    for w in &words {
        if w.iter().any(|&i| i == 0) {
            return Err(Error::Input("word letters are positive indices".into()));
        }
    }
    words.sort();
    words.dedup();
    let values: Vec<Scalar> = words.iter().map(|w| iint(&a, w)).collect();
    Ok(word_value_array(words.iter().zip(values.iter())))
}

fn cmd_signature(p: &Problem, cutoff: u32, exact: bool) -> Result<Value, Error> {
    let a = seq_from_problem(p)?;
    check_exact(&a, exact)?;
    let sig = signature(&a, cutoff);
    Ok(json!({
        "cutoff": cutoff,
        "integrals": word_value_array(sig.words()),
    }))
}

fn cmd_classify(p: &Problem, cutoff: u32, exact: bool) -> Result<Value, Error> {
    let a = seq_from_problem(p)?;
    check_exact(&a, exact)?;
    Ok(match classify(&a, cutoff) {
        Classification::CenterUpTo(n) => json!({ "verdict": "center", "cutoff": n }),
        Classification::Focus { order, cn } => {
            json!({ "verdict": "focus", "order": order, "c_n": value_json(&cn) })
        }
    })
}

fn cmd_universal(p: &Problem, cutoff: u32, exact: bool) -> Result<Value, Error> {
    let a = seq_from_problem(p)?;
    check_exact(&a, exact)?;
    let chk = is_universal_center(&a, cutoff);
    Ok(json!({
        "cutoff": chk.cutoff,
        "verdict": chk.verdict,
        "witnesses": word_value_array(chk.witnesses.iter().map(|(w, v)| (w, v))),
    }))
}

fn cmd_group(op: &GroupOp, cutoff: u32, exact: bool) -> Result<Value, Error> {
    match op {
        GroupOp::Concat { a, b } => {
            let x = load_seq(&Some(a.clone()), exact)?;
            let y = load_seq(&Some(b.clone()), exact)?;
            Ok(seq_to_problem_json(&concat(&x, &y)))
        }
        GroupOp::Inverse { a } => {
            let x = load_seq(a, exact)?;
            Ok(seq_to_problem_json(&inverse(&x)))
        }
        GroupOp::Equivalent { a, b } => {
            let x = load_seq(&Some(a.clone()), exact)?;
            let y = load_seq(&Some(b.clone()), exact)?;
            let rep = equivalent(&x, &y, cutoff);
            let witness = rep.witness.as_ref().map(|(w, l, r)| {
                json!({ "word": w, "lhs": value_json(l), "rhs": value_json(r) })
            });
            Ok(json!({
                "equivalent": rep.equivalent,
                "cutoff": rep.cutoff,
                "witness": witness,
            }))
        }
    }
}

fn cmd_gen_center(p: &Problem, cutoff: u32) -> Result<Value, Error> {
    match (&p.u, &p.f) {
        (Some(_), Some(_)) => {
            Err(Error::Input("gen-center takes either \"u\" or \"f\", not both".into()))
        }
        (None, None) => Err(Error::Input("gen-center requires \"u\" or \"f\"".into())),
        (Some(us), None) => {
            let u: Vec<CoeffFn> = us
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    coeff_fn_from_spec(s).map_err(|e| Error::Input(format!("u[{}]: {e}", i + 1)))
                })
                .collect::<Result<_, _>>()?;
            Ok(seq_to_problem_json(&from_u_sequence(&u, cutoff as usize)?))
        }
        (None, Some(t)) => {
            let d: Vec<Scalar> = t.d.iter().map(scalar_from_spec).collect::<Result<_, _>>()?;
            let f = ReturnSeries::from_coeffs(d);
            Ok(seq_to_problem_json(&t_map(&f, cutoff as usize)))
        }
    }
}

enum Rendered {
    Json(Value),
    Csv(String),
}

fn cmd_oracle(p: &Problem, tol: Option<f64>, exact: bool, csv: bool) -> Result<Rendered, Error> {
    let a = seq_from_problem(p)?;
    check_exact(&a, exact)?;
    let tol = tol.unwrap_or(1e-9);
    let radii: Vec<Complex64> = match &p.radii {
        Some(rs) => rs.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        None => {
            let safe = safe_radius(a.bound());
            (1..=8).map(|k| Complex64::new(0.1 * k as f64 * safe, 0.0)).collect()
        }
    };
    let rep = displacement_scan(&a, &radii, tol)?;
    if csv {
        let mut out = String::from("r,re,im\n");
        for row in &rep.rows {
            out.push_str(&format!("{:e},{:e},{:e}\n", row.r.re, row.displacement.re, row.displacement.im));
        }
        Ok(Rendered::Csv(out))
    } else {
        let rows: Vec<Value> = rep
            .rows
            .iter()
            .map(|row| json!({ "r": row.r.re, "re": row.displacement.re, "im": row.displacement.im }))
            .collect();
        Ok(Rendered::Json(json!({
            "tol": rep.tol,
            "center_like": rep.center_like,
            "rows": rows,
        })))
    }
}

fn cmd_quadratic(p: &Problem, cutoff: u32) -> Result<Value, Error> {
    let specs = p
        .lambda
        .as_ref()
        .ok_or_else(|| Error::Input("quadratic requires the \"lambda\" field".into()))?;
    if specs.len() != 5 {
        return Err(Error::Input(format!(
            "\"lambda\" must list the 5 parameters (got {})",
            specs.len()
        )));
    }
    let l: Vec<Scalar> = specs.iter().map(scalar_from_spec).collect::<Result<_, _>>()?;
    let params = QuadraticParams::new(l[0].clone(), l[1].clone(), l[2].clone(), l[3].clone(), l[4].clone());
    let v = dulac_field(&params);
    let components: Vec<String> =
        dulac_component(&params).iter().map(|c| c.to_string()).collect();
    let polar = polar_reduce(&v, cutoff);
    let polar_verdict = cmd_classify_value(&polar, cutoff);
    let (f, g) = quadratic_circle_pair(&v)?;
    let abel = cherkas(&f, &g).to_seq();
    let abel_verdict = cmd_classify_value(&abel, cutoff);
    let chk = is_universal_center(&abel, cutoff);
    Ok(json!({
        "components": components,
        "polar": polar_verdict,
        "abel": abel_verdict,
        "abel_universal": chk.verdict,
        "abel_witnesses": word_value_array(chk.witnesses.iter().map(|(w, v)| (w, v))),
    }))
}

fn cmd_classify_value(a: &CoeffSeq, cutoff: u32) -> Value {
    match classify(a, cutoff) {
        Classification::CenterUpTo(n) => json!({ "verdict": "center", "cutoff": n }),
        Classification::Focus { order, cn } => {
            json!({ "verdict": "focus", "order": order, "c_n": value_json(&cn) })
        }
    }
}

fn selftest() -> Result<Value, Error> {
    let mut checks: Vec<(&str, bool)> = Vec::new();

    // Constant coefficient: c_n = (2 pi c)^n.
    let c = Scalar::from_ratio(1, 2);
    let riccati = CoeffSeq::new(vec![CoeffFn::constant(c.clone())]);
    let rs = return_series(&riccati, 6);
    let ok = (1..=6).all(|n| rs.coeff(n) == &Scalar::two_pi().mul(&c).pow(n));
    checks.push(("constant-coefficient return series", ok));

    // Shuffle identity on a mixed trig input.
    let a = CoeffSeq::new(vec![CoeffFn::sin(), CoeffFn::cos()]);
    let sig = signature(&a, 5);
    let ok = shuffle_product_check(&sig, &[1], &[2], 0.0).ok
        && shuffle_product_check(&sig, &[1, 2], &[2], 0.0).ok
        && shuffle_product_check(&sig, &[2, 1], &[1, 1], 0.0).ok;
    checks.push(("shuffle identity", ok));

    // A path concatenated with its reversal is trivial.
    let trivial = concat(&a, &inverse(&a));
    let z = CoeffSeq::zero();
    checks.push(("inverse cancels", equivalent(&trivial, &z, 4).equivalent));

    // Concatenation matches composition of return series.
    let b = CoeffSeq::new(vec![CoeffFn::cos(), CoeffFn::constant(Scalar::from_ratio(1, 3))]);
    let lhs = return_series(&concat(&a, &b), 5);
    let rhs = crate::returnmap::compose(&return_series(&a, 5), &return_series(&b, 5))?;
    checks.push(("concatenation homomorphism", lhs == rhs));

    // The generator map is a section of the return series.
    let d = vec![Scalar::from_ratio(1, 2), Scalar::from_ratio(-1, 3), Scalar::one(), Scalar::from_ratio(2, 7)];
    let f = ReturnSeries::from_coeffs(d);
    let ok = return_series(&t_map(&f, 4), 4) == f;
    checks.push(("return-series section", ok));

    // Loop data generates centers with a composition witness.
    let gen = from_u_sequence(&[CoeffFn::sin()], 6)?;
    let targets: Vec<CoeffFn> = gen.coeffs().iter().map(|f| f.antiderivative()).collect();
    let ok = classify(&gen, 6) == Classification::CenterUpTo(6)
        && composition_check(&targets, &CoeffFn::sin())?.ok;
    checks.push(("loop-generated centers", ok));

    // Numeric oracle agrees with the exact series.
    let v2 = oracle::variational(&riccati, 2, 1e-12)?;
    let exact = rs.coeff(2).to_complex();
    let ok = (v2 - exact).norm() <= 1e-9 * exact.norm();
    checks.push(("integrator cross-check", ok));

    let all_ok = checks.iter().all(|(_, ok)| *ok);
    let rows: Vec<Value> =
        checks.iter().map(|(name, ok)| json!({ "check": name, "ok": ok })).collect();
    if !all_ok {
        // Rendered by the caller before the nonzero exit.
        return Err(Error::Numeric(format!(
            "selftest failed: {}",
            serde_json::to_string(&rows).unwrap_or_default()
        )));
    }
    Ok(json!({ "ok": true, "checks": rows }))
}

fn dispatch(cli: &Cli) -> Result<Rendered, Error> {
    if cli.csv && !matches!(cli.cmd, Cmd::Oracle { .. }) {
        return Err(Error::Input("--csv applies only to the oracle subcommand".into()));
    }
    if cli.cutoff == 0 || cli.cutoff > 16 {
        return Err(Error::Input(format!("cutoff {} outside 1..=16", cli.cutoff)));
    }
    let v = match &cli.cmd {
        Cmd::Iint { file } => cmd_iint(&load_problem(file)?, cli.exact)?,
        Cmd::Signature { file } => cmd_signature(&load_problem(file)?, cli.cutoff, cli.exact)?,
        Cmd::Classify { file } => cmd_classify(&load_problem(file)?, cli.cutoff, cli.exact)?,
        Cmd::Universal { file } => cmd_universal(&load_problem(file)?, cli.cutoff, cli.exact)?,
        Cmd::Group { op } => cmd_group(op, cli.cutoff, cli.exact)?,
        Cmd::GenCenter { file } => cmd_gen_center(&load_problem(file)?, cli.cutoff)?,
        Cmd::Oracle { file } => {
            return cmd_oracle(&load_problem(file)?, cli.tol, cli.exact, cli.csv)
        }
        Cmd::Quadratic { file } => cmd_quadratic(&load_problem(file)?, cli.cutoff)?,
        Cmd::Selftest => selftest()?,
    };
    Ok(Rendered::Json(v))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) => 2,
        Error::Precondition(_) => 3,
        Error::Numeric(_) => 1,
    }
}

/// Parse argv, dispatch, print the result, and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(Rendered::Json(v)) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            0
        }
        Ok(Rendered::Csv(s)) => {
            print!("{s}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
