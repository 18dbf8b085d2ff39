//! Iterated integrals of coefficient sequences and their signatures.
//!
//! For a word w = (i_1, ..., i_k) the integral I_w(a) is taken over the
//! ordered simplex 0 <= s_1 <= ... <= s_k <= 2pi with a_{i_j} paired with
//! s_j. It is computed by the partial-integral recursion G_0 = 1,
//! G_m = antiderivative(a_{i_m} * G_{m-1}), I_w = G_k(2pi), which shares the
//! G chain across words with a common prefix.

use crate::funcs::{fn_mul, CoeffFn, CoeffSeq, TWO_PI};
use crate::scalar::Scalar;
use crate::words::{self, Word};
use std::collections::BTreeMap;

/// All iterated integrals of weight <= cutoff over the support of the
/// sequence, keyed by word.
#[derive(Clone, Debug)]
pub struct Signature {
    cutoff: u32,
    values: BTreeMap<Word, Scalar>,
    support: Vec<u32>,
    bound: f64,
    sampled_grid: Option<usize>,
}

impl Signature {
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn support(&self) -> &[u32] {
        &self.support
    }

    /// I_w, treating any word absent from the table as zero. Words of weight
    /// above the cutoff are a caller error.
    pub fn get(&self, w: &[u32]) -> Scalar {
        assert!(
            words::weight(w) <= self.cutoff,
            "word weight {} exceeds signature cutoff {}",
            words::weight(w),
            self.cutoff
        );
        self.values.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Words actually stored, lexicographically.
    pub fn words(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.values.iter()
    }

    /// Coefficient-sequence bound used for thresholds.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Numeric zero threshold for I_w: the a priori bound
    /// (2pi)^k / k! * prod l^{i_j} (at least 1), times 1e-10, widened to the
    /// grid error when the input had sampled coefficients.
    pub fn zero_threshold(&self, w: &[u32]) -> f64 {
        word_threshold(w, self.bound, self.sampled_grid)
    }

    /// Is I_w zero (exactly, or below the scaled threshold)?
    pub fn is_zero(&self, w: &[u32]) -> bool {
        match self.get(w) {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(z) => z.norm() <= self.zero_threshold(w),
        }
    }
}

/// A priori bound (2pi)^k / k! * prod l^{i_j} on |I_w| for sup |a_i| <= l^i.
pub fn word_scale(w: &[u32], bound: f64) -> f64 {
    let k = w.len() as i32;
    let mut s = TWO_PI.powi(k);
    for j in 1..=k {
        s /= j as f64;
    }
    for &i in w {
        s *= bound.max(0.0).powi(i as i32);
    }
    s
}

/// Zero threshold for a word: 1e-10 of the a priori scale for float inputs,
/// widened to the documented O(h^2) trapezoid error for sampled grids.
pub fn word_threshold(w: &[u32], bound: f64, sampled_grid: Option<usize>) -> f64 {
    let base = match sampled_grid {
        Some(n) => {
            let h = TWO_PI / n as f64;
            (10.0 * h * h).max(1e-10)
        }
        None => 1e-10,
    };
    base * word_scale(w, bound).max(1.0)
}

/// The m-fold partial integral G_m along the word w = (i_1, ..., i_m):
/// the function x -> integral over the ordered simplex up to x.
pub fn partial_integral(a: &CoeffSeq, w: &[u32]) -> CoeffFn {
    let mut g = CoeffFn::constant(Scalar::one());
    for &i in w {
        let ai = match a.get(i as usize) {
            Some(f) => f.clone(),
            None => return CoeffFn::zero(),
        };
        g = fn_mul(&ai, &g).antiderivative();
    }
    g
}

/// The iterated integral I_w(a) = G_k(2pi).
pub fn iint(a: &CoeffSeq, w: &[u32]) -> Scalar {
    partial_integral(a, w).value_at_2pi()
}

fn worker_count() -> usize {
    match std::env::var("CENTER_SIG_THREADS") {
        Ok(s) => s.trim().parse::<usize>().ok().filter(|&n| n >= 1).unwrap_or(1),
        Err(_) => 1,
    }
}

/// Depth-first extension of one prefix: `g` is the partial integral of
/// `prefix`; record values for every extension within the remaining weight.
fn extend(
    a: &CoeffSeq,
    support: &[u32],
    cutoff: u32,
    prefix: &mut Word,
    g: &CoeffFn,
    used: u32,
    out: &mut BTreeMap<Word, Scalar>,
) {
    for &i in support {
        if used + i > cutoff {
            break;
        }
        let ai = a.get(i as usize).expect("support indexes nonzero coefficients");
        let gi = fn_mul(ai, g).antiderivative();
        prefix.push(i);
        out.insert(prefix.clone(), gi.value_at_2pi());
        extend(a, support, cutoff, prefix, &gi, used + i, out);
        prefix.pop();
    }
}

/// The full signature up to the cutoff. Words share partial integrals along
/// common prefixes; with CENTER_SIG_THREADS > 1 the top-level branches fan
/// out to that many workers, and the merged result is identical for every
/// thread count.
pub fn signature(a: &CoeffSeq, cutoff: u32) -> Signature {
    let support: Vec<u32> = a.support().iter().map(|&i| i as u32).collect();
    let support: Vec<u32> = support.into_iter().filter(|&i| i <= cutoff).collect();
    let threads = worker_count().min(support.len().max(1));
    let mut values = BTreeMap::new();
    if threads <= 1 || support.len() <= 1 {
        let g0 = CoeffFn::constant(Scalar::one());
        let mut prefix = Vec::new();
        extend(a, &support, cutoff, &mut prefix, &g0, 0, &mut values);
    } else {
        // One task per first letter; disjoint word sets merge deterministically.
        let results: Vec<BTreeMap<Word, Scalar>> = std::thread::scope(|scope| {
            let handles: Vec<_> = support
                .iter()
                .map(|&i| {
                    let a = &a;
                    let support = &support;
                    scope.spawn(move || {
                        let mut local = BTreeMap::new();
                        let ai = a.get(i as usize).unwrap();
                        let gi = fn_mul(ai, &CoeffFn::constant(Scalar::one())).antiderivative();
                        let mut prefix = vec![i];
                        local.insert(prefix.clone(), gi.value_at_2pi());
                        extend(a, support, cutoff, &mut prefix, &gi, i, &mut local);
                        local
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("signature worker")).collect()
        });
        for r in results {
            values.extend(r);
        }
    }
    Signature {
        cutoff,
        values,
        support,
        bound: a.bound(),
        sampled_grid: a.grid(),
    }
}

/// Outcome of one shuffle identity check: I_u I_v = sum over shuffles of I_w.
#[derive(Clone, Debug)]
pub struct ShuffleCheck {
    pub u: Word,
    pub v: Word,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub ok: bool,
}

/// Verify the shuffle identity for one pair of words. Exact values must agree
/// exactly; floats within `rel_tol` relative (scaled by the larger side and
/// the a priori bound).
pub fn shuffle_product_check(sig: &Signature, u: &[u32], v: &[u32], rel_tol: f64) -> ShuffleCheck {
    let lhs = sig.get(u).mul(&sig.get(v));
    let mut rhs = Scalar::zero();
    for w in words::shuffles(u, v) {
        rhs = rhs.add(&sig.get(&w));
    }
    let ok = match (&lhs, &rhs) {
        (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
        _ => {
            let scale = lhs
                .abs()
                .max(rhs.abs())
                .max(word_scale(&[u, v].concat(), sig.bound()))
                .max(1.0);
            (lhs.to_complex() - rhs.to_complex()).norm() <= rel_tol * scale
        }
    };
    ShuffleCheck { u: u.to_vec(), v: v.to_vec(), lhs, rhs, ok }
}
