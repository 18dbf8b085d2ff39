//! Truncated series in the free algebra on two letters, the operator algebra
//! they map onto, and the universal-center test.
//!
//! The fundamental solution attached to a coefficient sequence is
//! Y = 1 + sum_{i>=1} p_i t^i with p_i the sum of I_w(a) times the monomial
//! of w over all words w of weight i. The monomial of w = (i_1, ..., i_k) is
//! (X Y^{i_k - 1}) ... (X Y^{i_1 - 1}) with X, Y the two letters; its length
//! equals the weight, so the series is graded by monomial length.
//!
//! The letters act on polynomials as X -> D (differentiation) and
//! Y -> L (left shift), which satisfy DL - LD = -L^2; rewriting with the
//! oriented rule Y X -> X Y + Y Y produces the canonical basis S1^i S2^j of
//! the quotient algebra.

use crate::funcs::CoeffSeq;
use crate::iint::{signature, Signature};
use crate::scalar::Scalar;
use crate::words::{self, Word};
use crate::Error;
use std::collections::{BTreeMap, HashMap};

/// Letters: 1 = X (maps to D), 2 = Y (maps to L).
pub type Mono = Vec<u8>;

/// The monomial of a word: (X Y^{i_k-1}) ... (X Y^{i_1-1}).
pub fn mono_of_word(w: &[u32]) -> Mono {
    let mut m = Vec::with_capacity(words::weight(w) as usize);
    for &i in w.iter().rev() {
        m.push(1);
        for _ in 1..i {
            m.push(2);
        }
    }
    m
}

/// Wire form of a monomial: letters X and Y.
pub fn mono_string(m: &[u8]) -> String {
    m.iter().map(|&l| if l == 1 { 'X' } else { 'Y' }).collect()
}

/// Parse the wire form back into letters.
pub fn mono_from_string(s: &str) -> Result<Mono, Error> {
    s.chars()
        .map(|c| match c {
            'X' => Ok(1),
            'Y' => Ok(2),
            _ => Err(Error::Input(format!("bad monomial letter {c:?}"))),
        })
        .collect()
}

/// Truncated noncommutative power series 1 + sum_{i=1..N} p_i t^i, with each
/// p_i a combination of monomials of length i.
#[derive(Clone, Debug, PartialEq)]
pub struct NCSeries {
    cutoff: u32,
    /// degrees[i-1] holds p_i; monomial keys all have length i.
    degrees: Vec<BTreeMap<Mono, Scalar>>,
}

impl NCSeries {
    pub fn identity(cutoff: u32) -> Self {
        NCSeries { cutoff, degrees: vec![BTreeMap::new(); cutoff as usize] }
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// p_i as a monomial map (empty for i = 0: the constant term 1 is implied).
    pub fn degree(&self, i: u32) -> &BTreeMap<Mono, Scalar> {
        &self.degrees[(i - 1) as usize]
    }

    pub fn add_term(&mut self, mono: Mono, value: Scalar) {
        assert!(!mono.is_empty() && mono.len() as u32 <= self.cutoff, "monomial outside grading");
        if value.is_zero() {
            return;
        }
        let map = &mut self.degrees[mono.len() - 1];
        match map.get_mut(&mono) {
            Some(old) => {
                let s = old.add(&value);
                if s.is_zero() {
                    map.remove(&mono);
                } else {
                    *old = s;
                }
            }
            None => {
                map.insert(mono, value);
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.degrees.iter().all(|d| d.is_empty())
    }

    /// All stored terms as (degree, monomial, value), degree-major then
    /// lexicographic in the monomial.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Mono, &Scalar)> {
        self.degrees
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.iter().map(move |(mono, v)| ((i + 1) as u32, mono, v)))
    }
}

/// Graded product of two truncated series with the same cutoff, concatenating
/// monomials; the constant terms are both 1.
pub fn nc_mul(f: &NCSeries, g: &NCSeries) -> Result<NCSeries, Error> {
    if f.cutoff != g.cutoff {
        return Err(Error::Precondition(format!(
            "cutoff mismatch: {} vs {}",
            f.cutoff, g.cutoff
        )));
    }
    let mut r = NCSeries::identity(f.cutoff);
    // (f g)_n = f_n + g_n + sum_{i+j=n} f_i g_j.
    for n in 1..=f.cutoff {
        for (m, v) in f.degree(n) {
            r.add_term(m.clone(), v.clone());
        }
        for (m, v) in g.degree(n) {
            r.add_term(m.clone(), v.clone());
        }
        for i in 1..n {
            let j = n - i;
            for (mi, vi) in f.degree(i) {
                for (mj, vj) in g.degree(j) {
                    let mut m = mi.clone();
                    m.extend_from_slice(mj);
                    r.add_term(m, vi.mul(vj));
                }
            }
        }
    }
    Ok(r)
}

/// Multiplicative inverse of 1 + P in the truncated algebra:
/// Q_n = -P_n - sum_{i=1..n-1} P_i Q_{n-i}.
pub fn nc_inv(f: &NCSeries) -> NCSeries {
    let mut q = NCSeries::identity(f.cutoff);
    for n in 1..=f.cutoff {
        let mut terms: Vec<(Mono, Scalar)> =
            f.degree(n).iter().map(|(m, v)| (m.clone(), v.neg())).collect();
        for i in 1..n {
            let j = n - i;
            for (mi, vi) in f.degree(i) {
                for (mj, vj) in q.degree(j) {
                    let mut m = mi.clone();
                    m.extend_from_slice(mj);
                    terms.push((m, vi.mul(vj).neg()));
                }
            }
        }
        for (m, v) in terms {
            q.add_term(m, v);
        }
    }
    q
}

/// The fundamental solution at 2pi, truncated at the cutoff: coefficients are
/// the iterated integrals of the sequence.
pub fn fundamental_solution(a: &CoeffSeq, cutoff: u32) -> NCSeries {
    let sig = signature(a, cutoff);
    from_signature(&sig)
}

/// Assemble the truncated series from an existing signature table.
pub fn from_signature(sig: &Signature) -> NCSeries {
    let mut f = NCSeries::identity(sig.cutoff());
    for (w, v) in sig.words() {
        f.add_term(mono_of_word(w), v.clone());
    }
    f
}

/// Universal-center verdict with the nonvanishing words as witnesses.
#[derive(Clone, Debug)]
pub struct UniversalCheck {
    pub verdict: bool,
    pub cutoff: u32,
    pub witnesses: Vec<(Word, Scalar)>,
}

/// All iterated integrals up to the cutoff vanish? Exact values decide
/// exactly; floats use the scaled threshold of the signature.
pub fn is_universal_center(a: &CoeffSeq, cutoff: u32) -> UniversalCheck {
    let sig = signature(a, cutoff);
    let mut witnesses = Vec::new();
    for (w, v) in sig.words() {
        if !sig.is_zero(w) {
            witnesses.push((w.clone(), v.clone()));
        }
    }
    UniversalCheck { verdict: witnesses.is_empty(), cutoff, witnesses }
}

/// Polynomial in the quotient algebra, canonical basis S1^i S2^j.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SPoly {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl SPoly {
    pub fn zero() -> Self {
        SPoly::default()
    }

    pub fn term(i: u32, j: u32, c: Scalar) -> Self {
        let mut p = SPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(i, j)) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&(i, j));
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert((i, j), c);
            }
        }
    }

    pub fn add(&self, o: &SPoly) -> SPoly {
        let mut r = self.clone();
        for ((i, j), c) in &o.terms {
            r.add_term(*i, *j, c.clone());
        }
        r
    }

    pub fn scale(&self, s: &Scalar) -> SPoly {
        let mut r = SPoly::zero();
        for ((i, j), c) in &self.terms {
            r.add_term(*i, *j, c.mul(s));
        }
        r
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Scalar)> {
        self.terms.iter()
    }
}

/// Normal form of a single monomial under the oriented rewrite
/// Y X -> X Y + Y Y, memoized. Terminates because each step strictly lowers
/// the inversion count; reduced monomials have all X's before all Y's.
pub fn spoly_of_mono(mono: &[u8]) -> SPoly {
    fn rec(mono: &[u8], memo: &mut HashMap<Mono, SPoly>) -> SPoly {
        if let Some(p) = memo.get(mono) {
            return p.clone();
        }
        let redex = mono.windows(2).position(|w| w == [2, 1]);
        let result = match redex {
            None => {
                let i = mono.iter().filter(|&&l| l == 1).count() as u32;
                let j = mono.len() as u32 - i;
                SPoly::term(i, j, Scalar::one())
            }
            Some(k) => {
                let mut swapped = mono.to_vec();
                swapped[k] = 1;
                swapped[k + 1] = 2;
                let mut merged = mono.to_vec();
                merged[k + 1] = 2;
                let a = rec(&swapped, memo);
                let b = rec(&merged, memo);
                a.add(&b)
            }
        };
        memo.insert(mono.to_vec(), result.clone());
        result
    }
    let mut memo = HashMap::new();
    rec(mono, &mut memo)
}

/// Rewrite a monomial map (one homogeneous component) into the canonical
/// S-basis.
pub fn to_s_algebra(terms: &BTreeMap<Mono, Scalar>) -> SPoly {
    let mut r = SPoly::zero();
    for (m, v) in terms {
        r = r.add(&spoly_of_mono(m).scale(v));
    }
    r
}

/// Polynomial in z of bounded degree, dense coefficients c_0..c_d.
pub type ZPoly = Vec<Scalar>;

/// D: differentiation, (Df)_k = (k+1) c_{k+1}.
pub fn op_d(p: &ZPoly) -> ZPoly {
    (0..p.len().saturating_sub(1))
        .map(|k| p[k + 1].mul(&Scalar::from_int((k + 1) as i64)))
        .collect()
}

/// L: left shift, (Lf)_k = c_{k+1}.
pub fn op_l(p: &ZPoly) -> ZPoly {
    if p.len() <= 1 {
        Vec::new()
    } else {
        p[1..].to_vec()
    }
}

/// Apply a monomial (operator word, leftmost letter outermost) to a
/// polynomial: letters act right to left.
pub fn apply_mono(mono: &[u8], p: &ZPoly) -> ZPoly {
    let mut cur = p.clone();
    for &l in mono.iter().rev() {
        cur = if l == 1 { op_d(&cur) } else { op_l(&cur) };
    }
    cur
}

/// The return-map coefficient c_n computed through the operator realization:
/// apply each word's monomial (X -> D, Y -> L) to z^n and sum the resulting
/// constants against the iterated integrals. Independent of the closed-form
/// combinatorial coefficients.
pub fn cn_via_operators(a: &CoeffSeq, n: u32) -> Scalar {
    let sig = signature(a, n);
    cn_via_operators_from(&sig, n)
}

/// Same, reusing a precomputed signature (cutoff >= n).
pub fn cn_via_operators_from(sig: &Signature, n: u32) -> Scalar {
    let support: Vec<u32> = sig.support().to_vec();
    let mut zn: ZPoly = vec![Scalar::zero(); n as usize + 1];
    zn[n as usize] = Scalar::one();
    let mut acc = Scalar::zero();
    for w in words::compositions(n, &support) {
        let applied = apply_mono(&mono_of_word(&w), &zn);
        let c = applied.first().cloned().unwrap_or_else(Scalar::zero);
        debug_assert!(applied.iter().skip(1).all(|x| x.is_zero()));
        acc = acc.add(&sig.get(&w).mul(&c));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{CoeffFn, QuasiTrigPoly};
    use crate::scalar::GRat;

    #[test]
    fn monomial_of_word_reverses_letter_blocks() {
        // (1,2) -> (X Y^{2-1})(X Y^{1-1}) = X Y X.
        assert_eq!(mono_of_word(&[1, 2]), vec![1, 2, 1]);
        assert_eq!(mono_of_word(&[2]), vec![1, 2]);
        assert_eq!(mono_of_word(&[2, 2]), vec![1, 2, 1, 2]);
        assert_eq!(mono_string(&mono_of_word(&[1, 2])), "XYX");
        assert_eq!(mono_from_string("XYX").unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn fundamental_solution_of_zero_is_identity() {
        let f = fundamental_solution(&CoeffSeq::zero(), 4);
        assert!(f.is_identity());
    }

    #[test]
    fn fundamental_solution_of_unit_constant() {
        let a = CoeffSeq::new(vec![CoeffFn::constant(Scalar::one())]);
        let f = fundamental_solution(&a, 4);
        for k in 1..=4u32 {
            let mono = vec![1u8; k as usize];
            let mut expect = Scalar::one();
            for j in 1..=k {
                expect = expect.mul(&Scalar::two_pi()).div_int(j as i64);
            }
            assert_eq!(f.degree(k).get(&mono), Some(&expect), "degree {k}");
            assert_eq!(f.degree(k).len(), 1);
        }
    }

    #[test]
    fn fundamental_solution_of_quadratic_letter() {
        // a_2 = 1: p_2 = 2pi XY, p_4 = 2pi^2 (XY)^2.
        let a = CoeffSeq::new(vec![CoeffFn::zero(), CoeffFn::constant(Scalar::one())]);
        let f = fundamental_solution(&a, 4);
        assert!(f.degree(1).is_empty() && f.degree(3).is_empty());
        assert_eq!(f.degree(2).get(&vec![1u8, 2]), Some(&Scalar::two_pi()));
        let p4 = f.degree(4).get(&vec![1u8, 2, 1, 2]).unwrap();
        assert_eq!(*p4, Scalar::pi_term(GRat::from_int(2), 2));
    }

    #[test]
    fn nc_mul_identity_and_mismatch() {
        let a = CoeffSeq::new(vec![CoeffFn::sin()]);
        let f = fundamental_solution(&a, 3);
        let id = NCSeries::identity(3);
        assert_eq!(nc_mul(&f, &id).unwrap(), f);
        assert_eq!(nc_mul(&id, &f).unwrap(), f);
        assert!(nc_mul(&f, &NCSeries::identity(4)).is_err());
    }

    #[test]
    fn nc_mul_concatenates_monomials() {
        let mut f = NCSeries::identity(3);
        f.add_term(vec![1], Scalar::from_int(2));
        let mut g = NCSeries::identity(3);
        g.add_term(vec![1, 2], Scalar::from_int(3));
        let p = nc_mul(&f, &g).unwrap();
        assert_eq!(p.degree(3).get(&vec![1u8, 1, 2]), Some(&Scalar::from_int(6)));
        assert_eq!(p.degree(1).get(&vec![1u8]), Some(&Scalar::from_int(2)));
        assert_eq!(p.degree(2).get(&vec![1u8, 2]), Some(&Scalar::from_int(3)));
    }

    #[test]
    fn nc_inverse_cancels() {
        let a = CoeffSeq::new(vec![
            CoeffFn::Trig(QuasiTrigPoly::one().add(&QuasiTrigPoly::sin(1))),
            CoeffFn::cos(),
        ]);
        let f = fundamental_solution(&a, 5);
        let inv = nc_inv(&f);
        assert!(nc_mul(&f, &inv).unwrap().is_identity());
        assert!(nc_mul(&inv, &f).unwrap().is_identity());
    }

    #[test]
    fn universal_center_verdicts() {
        let sin_seq = CoeffSeq::new(vec![CoeffFn::sin()]);
        let chk = is_universal_center(&sin_seq, 6);
        assert!(chk.verdict, "witnesses: {:?}", chk.witnesses);

        let const_seq = CoeffSeq::new(vec![CoeffFn::constant(Scalar::one())]);
        let chk2 = is_universal_center(&const_seq, 4);
        assert!(!chk2.verdict);
        assert_eq!(chk2.witnesses[0].0, vec![1]);
        assert_eq!(chk2.witnesses[0].1, Scalar::two_pi());
    }

    #[test]
    fn rewrite_examples() {
        // XY is already canonical.
        assert_eq!(spoly_of_mono(&[1, 2]), SPoly::term(1, 1, Scalar::one()));
        // YX -> XY + YY.
        let p = spoly_of_mono(&[2, 1]);
        let mut expect = SPoly::term(1, 1, Scalar::one());
        expect.add_term(0, 2, Scalar::one());
        assert_eq!(p, expect);
        // YXY -> XYY + YYY.
        let p2 = spoly_of_mono(&[2, 1, 2]);
        let mut expect2 = SPoly::term(1, 2, Scalar::one());
        expect2.add_term(0, 3, Scalar::one());
        assert_eq!(p2, expect2);
    }

    #[test]
    fn rewrite_is_confluent_under_random_orders() {
        // Reduce full expansions choosing an arbitrary redex each step, with
        // a small deterministic LCG; all orders must agree with the memoized
        // leftmost strategy.
        fn reduce_random(mono: &[u8], seed: &mut u64) -> SPoly {
            let mut terms: Vec<(Mono, Scalar)> = vec![(mono.to_vec(), Scalar::one())];
            let mut done = SPoly::zero();
            while let Some((m, c)) = terms.pop() {
                let redexes: Vec<usize> =
                    m.windows(2).enumerate().filter(|(_, w)| *w == [2, 1]).map(|(k, _)| k).collect();
                if redexes.is_empty() {
                    let i = m.iter().filter(|&&l| l == 1).count() as u32;
                    done.add_term(i, m.len() as u32 - i, c);
                    continue;
                }
                *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let k = redexes[(*seed >> 33) as usize % redexes.len()];
                let mut swapped = m.clone();
                swapped[k] = 1;
                swapped[k + 1] = 2;
                let mut merged = m.clone();
                merged[k + 1] = 2;
                terms.push((swapped, c.clone()));
                terms.push((merged, c));
            }
            done
        }
        let mut seed = 0x9e3779b97f4a7c15u64;
        for len in 2..=6usize {
            for bits in 0..(1usize << len) {
                let mono: Mono = (0..len).map(|b| if bits >> b & 1 == 1 { 2 } else { 1 }).collect();
                let want = spoly_of_mono(&mono);
                for _ in 0..3 {
                    assert_eq!(reduce_random(&mono, &mut seed), want, "mono {mono:?}");
                }
            }
        }
    }

    #[test]
    fn operator_commutator_identity() {
        // DL - LD = -L^2 on polynomials of degree <= 12.
        for s in 0..=12usize {
            let mut zs: ZPoly = vec![Scalar::zero(); s + 1];
            zs[s] = Scalar::one();
            let dl = op_d(&op_l(&zs));
            let ld = op_l(&op_d(&zs));
            let ll = op_l(&op_l(&zs));
            let mut lhs = vec![Scalar::zero(); s + 1];
            for (k, v) in dl.iter().enumerate() {
                lhs[k] = lhs[k].add(v);
            }
            for (k, v) in ld.iter().enumerate() {
                lhs[k] = lhs[k].sub(v);
            }
            for (k, v) in ll.iter().enumerate() {
                lhs[k] = lhs[k].add(v);
            }
            assert!(lhs.iter().all(|c| c.is_zero()), "failure at degree {s}");
        }
    }

    #[test]
    fn operator_falling_factorial_identity() {
        // D^i L^j z^s = (s-j)(s-j-1)...(s-j-i+1) z^{s-i-j}.
        for (i, j, s) in [(1u32, 1u32, 3usize), (2, 1, 5), (3, 2, 8), (2, 0, 4)] {
            let mut zs: ZPoly = vec![Scalar::zero(); s + 1];
            zs[s] = Scalar::one();
            let mut p = zs;
            for _ in 0..j {
                p = op_l(&p);
            }
            for _ in 0..i {
                p = op_d(&p);
            }
            let mut expect = 1i64;
            for t in 0..i as i64 {
                expect *= s as i64 - j as i64 - t;
            }
            let deg = s - (i + j) as usize;
            assert_eq!(p[deg], Scalar::from_int(expect));
            assert!(p.iter().enumerate().all(|(k, c)| k == deg || c.is_zero()));
        }
    }

    #[test]
    fn operator_route_matches_combinatorial_coefficients() {
        // Applying the monomial of w to z^{weight(w)} yields coeff_c(w).
        for w in [vec![1u32, 2], vec![2, 1], vec![1, 1], vec![1, 1, 1], vec![3, 1, 2]] {
            let n = words::weight(&w);
            let mut zn: ZPoly = vec![Scalar::zero(); n as usize + 1];
            zn[n as usize] = Scalar::one();
            let applied = apply_mono(&mono_of_word(&w), &zn);
            assert_eq!(applied[0], Scalar::from_int(words::coeff_c(&w) as i64), "word {w:?}");
        }
    }
}
