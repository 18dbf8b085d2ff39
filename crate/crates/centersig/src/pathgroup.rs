//! The group structure on coefficient sequences: time-rescaled
//! concatenation, reversal, and equivalence of truncated signatures.
//!
//! Concatenation runs a at double speed on (0, pi] and b on (pi, 2pi]:
//! (a * b)_i(x) = 2 a_i(2x) on the first half, 2 b_i(2x - 2pi) on the
//! second. The inverse path is a_i^{-1}(x) = -a_i(2pi - x). Signatures
//! compose by Chen's law, so concatenation maps onto products of fundamental
//! solutions and composition of return maps.

use crate::funcs::{CoeffFn, CoeffSeq, Frac, PiecewiseTrig, QuasiTrigPoly, SampledFn, DEFAULT_GRID, TWO_PI};
use crate::iint::signature;
use crate::scalar::Scalar;
use crate::words::Word;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

fn half(q: &Frac) -> Frac {
    q / BigRational::from_integer(BigInt::from(2))
}

fn shift_half(q: &Frac) -> Frac {
    half(q) + BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// Piece list of a component (single full-interval piece for quasi-trig).
fn pieces_of(f: &CoeffFn) -> (Vec<Frac>, Vec<QuasiTrigPoly>) {
    match f {
        CoeffFn::Trig(q) => (vec![Frac::one()], vec![q.clone()]),
        CoeffFn::Pw(p) => (p.breaks().to_vec(), p.pieces().to_vec()),
        CoeffFn::Sampled(_) => unreachable!("sampled components take the grid path"),
    }
}

fn concat_component(a: &CoeffFn, b: &CoeffFn) -> CoeffFn {
    if a.is_sampled() || b.is_sampled() {
        let n = match (a, b) {
            (CoeffFn::Sampled(sa), CoeffFn::Sampled(sb)) => sa.len().max(sb.len()),
            (CoeffFn::Sampled(sa), _) => sa.len(),
            (_, CoeffFn::Sampled(sb)) => sb.len(),
            _ => DEFAULT_GRID,
        };
        let n = if n % 2 == 0 { n } else { n + 1 };
        let h = TWO_PI / n as f64;
        let pi = std::f64::consts::PI;
        let values: Vec<Complex64> = (0..n)
            .map(|j| {
                let x = (j + 1) as f64 * h;
                if x <= pi + 1e-15 {
                    2.0 * a.eval(2.0 * x)
                } else {
                    2.0 * b.eval(2.0 * x - TWO_PI)
                }
            })
            .collect();
        let left = 2.0 * a.eval_raw(0.0);
        return CoeffFn::Sampled(SampledFn::new(values, left).expect("grid >= 64"));
    }
    let two = Scalar::from_int(2);
    let (ab, ap) = pieces_of(a);
    let (bb, bp) = pieces_of(b);
    let mut breaks = Vec::with_capacity(ab.len() + bb.len());
    let mut pieces = Vec::with_capacity(ab.len() + bb.len());
    for (q, p) in ab.iter().zip(&ap) {
        breaks.push(half(q));
        pieces.push(p.subst_affine(2, 0).scale(&two));
    }
    for (q, p) in bb.iter().zip(&bp) {
        breaks.push(shift_half(q));
        pieces.push(p.subst_affine(2, -1).scale(&two));
    }
    CoeffFn::Pw(PiecewiseTrig::new(breaks, pieces).expect("halved breakpoints stay ordered"))
}

/// Concatenation a * b with the documented bound 2 max(l_a, l_b).
pub fn concat(a: &CoeffSeq, b: &CoeffSeq) -> CoeffSeq {
    let len = a.coeffs().len().max(b.coeffs().len());
    let zero = CoeffFn::zero();
    let mut out = Vec::with_capacity(len);
    for i in 1..=len {
        let ai = a.get(i).unwrap_or(&zero);
        let bi = b.get(i).unwrap_or(&zero);
        if ai.is_zero() && bi.is_zero() {
            out.push(CoeffFn::zero());
        } else {
            out.push(concat_component(ai, bi));
        }
    }
    CoeffSeq::with_bound_unchecked(out, 2.0 * a.bound().max(b.bound()))
}

fn inverse_component(f: &CoeffFn) -> CoeffFn {
    match f {
        CoeffFn::Trig(q) => CoeffFn::Trig(q.subst_affine(-1, 1).neg()),
        CoeffFn::Pw(p) => {
            let k = p.pieces().len();
            let mut breaks = Vec::with_capacity(k);
            let mut pieces = Vec::with_capacity(k);
            // Piece on (b_{j-1}, b_j] reverses onto (1 - b_j, 1 - b_{j-1}].
            for j in (0..k).rev() {
                let left = if j == 0 { Frac::zero() } else { p.breaks()[j - 1].clone() };
                breaks.push(Frac::one() - left);
                pieces.push(p.pieces()[j].subst_affine(-1, 1).neg());
            }
            CoeffFn::Pw(PiecewiseTrig::new(breaks, pieces).expect("reflected breakpoints stay ordered"))
        }
        CoeffFn::Sampled(s) => {
            let n = s.len();
            let h = TWO_PI / n as f64;
            let values: Vec<Complex64> =
                (0..n).map(|j| -f.eval(TWO_PI - (j + 1) as f64 * h)).collect();
            let left = -f.eval_raw(TWO_PI);
            CoeffFn::Sampled(SampledFn::new(values, left).expect("same grid"))
        }
    }
}

/// The reversed path: (a^{-1})_i(x) = -a_i(2pi - x); same bound.
pub fn inverse(a: &CoeffSeq) -> CoeffSeq {
    let out = a.coeffs().iter().map(inverse_component).collect();
    CoeffSeq::with_bound_unchecked(out, a.bound())
}

/// Scaling mode: whole-path factor or weight-graded factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleMode {
    /// a -> t a: multiplies I_w by t^{length(w)}.
    Path,
    /// a_i -> t^i a_i: multiplies I_w by t^{weight(w)}.
    Graded,
}

/// Scale a sequence. The factor may be exact, keeping exact pipelines exact.
pub fn scale(a: &CoeffSeq, t: &Scalar, mode: ScaleMode) -> CoeffSeq {
    let out: Vec<CoeffFn> = a
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, f)| match mode {
            ScaleMode::Path => f.scale(t),
            ScaleMode::Graded => f.scale(&t.pow((idx + 1) as u32)),
        })
        .collect();
    let tb = t.abs();
    let bound = match mode {
        ScaleMode::Path => tb.max(1.0) * a.bound(),
        ScaleMode::Graded => tb * a.bound(),
    };
    CoeffSeq::with_bound_unchecked(out, bound)
}

/// Outcome of a signature comparison at a cutoff.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub cutoff: u32,
    /// First word (lexicographically) whose integrals differ, with both values.
    pub witness: Option<(Word, Scalar, Scalar)>,
}

/// Equality of truncated signatures ("equivalent up to N"): every word of
/// weight <= cutoff has equal integrals, exactly for exact inputs and within
/// the scaled threshold otherwise.
pub fn equivalent(a: &CoeffSeq, b: &CoeffSeq, cutoff: u32) -> EquivalenceReport {
    let sa = signature(a, cutoff);
    let sb = signature(b, cutoff);
    let mut all_words: BTreeSet<Word> = BTreeSet::new();
    all_words.extend(sa.words().map(|(w, _)| w.clone()));
    all_words.extend(sb.words().map(|(w, _)| w.clone()));
    for w in all_words {
        let va = sa.get(&w);
        let vb = sb.get(&w);
        let equal = match (&va, &vb) {
            (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
            _ => {
                let tol = sa.zero_threshold(&w).max(sb.zero_threshold(&w));
                (va.to_complex() - vb.to_complex()).norm() <= tol
            }
        };
        if !equal {
            return EquivalenceReport { equivalent: false, cutoff, witness: Some((w, va, vb)) };
        }
    }
    EquivalenceReport { equivalent: true, cutoff, witness: None }
}
