//! Poincare return map of dv/dx = sum_i a_i(x) v^{i+1} as a truncated power
//! series P(r) = r + sum_n c_n r^{n+1}, with c_n assembled from the iterated
//! integrals: c_n = sum over compositions w of n of coeff_c(w) * I_w.

use crate::funcs::CoeffSeq;
use crate::iint::{signature, word_threshold, Signature};
use crate::scalar::Scalar;
use crate::words;
use std::fmt;

/// Truncated return series r + sum_{n=1..N} c_n r^{n+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct ReturnSeries {
    cutoff: u32,
    c: Vec<Scalar>,
}

impl ReturnSeries {
    pub fn identity(cutoff: u32) -> Self {
        ReturnSeries { cutoff, c: vec![Scalar::zero(); cutoff as usize] }
    }

    pub fn from_coeffs(c: Vec<Scalar>) -> Self {
        ReturnSeries { cutoff: c.len() as u32, c }
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// c_n (1-based, n <= cutoff).
    pub fn coeff(&self, n: u32) -> &Scalar {
        &self.c[(n - 1) as usize]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }

    /// Dense polynomial coefficients [0, 1, c_1, ..., c_N] of r^0..r^{N+1}.
    fn to_poly(&self) -> Vec<Scalar> {
        let mut p = Vec::with_capacity(self.c.len() + 2);
        p.push(Scalar::zero());
        p.push(Scalar::one());
        p.extend(self.c.iter().cloned());
        p
    }

    fn from_poly(cutoff: u32, p: &[Scalar]) -> Self {
        let mut c = Vec::with_capacity(cutoff as usize);
        for n in 1..=cutoff {
            c.push(p.get((n + 1) as usize).cloned().unwrap_or_else(Scalar::zero));
        }
        ReturnSeries { cutoff, c }
    }
}

impl fmt::Display for ReturnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r")?;
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " + ({})·r^{}", c, i + 2)?;
            }
        }
        Ok(())
    }
}

fn poly_mul_trunc(a: &[Scalar], b: &[Scalar], deg: usize) -> Vec<Scalar> {
    let mut r = vec![Scalar::zero(); deg + 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() || i > deg {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > deg {
                break;
            }
            if !bj.is_zero() {
                r[i + j] = r[i + j].add(&ai.mul(bj));
            }
        }
    }
    r
}

/// g after f: the truncated composition g(f(r)), cut at r^{N+1}. This is the
/// orientation under which path concatenation becomes composition of return
/// maps.
pub fn compose(f: &ReturnSeries, g: &ReturnSeries) -> Result<ReturnSeries, crate::Error> {
    if f.cutoff != g.cutoff {
        return Err(crate::Error::Precondition(format!(
            "cutoff mismatch: {} vs {}",
            f.cutoff, g.cutoff
        )));
    }
    let deg = (f.cutoff + 1) as usize;
    let fp = f.to_poly();
    // Horner evaluation of g's polynomial at the series f.
    let gp = g.to_poly();
    let mut acc = vec![Scalar::zero(); deg + 1];
    for c in gp.iter().rev() {
        acc = poly_mul_trunc(&acc, &fp, deg);
        acc[0] = acc[0].add(c);
    }
    Ok(ReturnSeries::from_poly(f.cutoff, &acc))
}

/// Compositional inverse: the unique series g with g(f(r)) = r (and then
/// also f(g(r)) = r) up to the cutoff.
pub fn invert(f: &ReturnSeries) -> ReturnSeries {
    let n = f.cutoff;
    let mut g = ReturnSeries::identity(n);
    for k in 1..=n {
        let h = compose(f, &g).expect("matched cutoffs");
        let delta = h.coeff(k).clone();
        g.c[(k - 1) as usize] = g.c[(k - 1) as usize].sub(&delta);
    }
    g
}

/// c_n from a precomputed signature (cutoff >= n).
pub fn return_coeff_from(sig: &Signature, n: u32) -> Scalar {
    let mut acc = Scalar::zero();
    for w in words::compositions(n, sig.support()) {
        let c = Scalar::from_int(words::coeff_c(&w) as i64);
        acc = acc.add(&c.mul(&sig.get(&w)));
    }
    acc
}

/// The n-th return-map coefficient c_n(a).
pub fn return_coeff(a: &CoeffSeq, n: u32) -> Scalar {
    return_coeff_from(&signature(a, n), n)
}

/// The truncated return series of a sequence.
pub fn return_series(a: &CoeffSeq, cutoff: u32) -> ReturnSeries {
    let sig = signature(a, cutoff);
    let c = (1..=cutoff).map(|n| return_coeff_from(&sig, n)).collect();
    ReturnSeries { cutoff, c }
}

/// Zero threshold for c_n: the word thresholds weighted by the combinatorial
/// coefficients.
pub fn cn_threshold(sig: &Signature, n: u32) -> f64 {
    let mut t = 0.0;
    for w in words::compositions(n, sig.support()) {
        t += words::coeff_c(&w) as f64 * sig.zero_threshold(&w);
    }
    t.max(word_threshold(&[n], sig.bound(), None))
}

/// Verdict of the first-nonzero-coefficient scan.
#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    /// All c_n vanish for n <= cutoff (exactly, or below threshold).
    CenterUpTo(u32),
    /// First nonvanishing coefficient.
    Focus { order: u32, cn: Scalar },
}

/// Scan c_1, c_2, ... up to the cutoff for the first nonzero coefficient.
/// Exact inputs are decided exactly; floats and grids use scaled thresholds.
pub fn classify(a: &CoeffSeq, cutoff: u32) -> Classification {
    let sig = signature(a, cutoff);
    for n in 1..=cutoff {
        let cn = return_coeff_from(&sig, n);
        let zero = match &cn {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(z) => z.norm() <= cn_threshold(&sig, n),
        };
        if !zero {
            return Classification::Focus { order: n, cn };
        }
    }
    Classification::CenterUpTo(cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{CoeffFn, QuasiTrigPoly};
    use crate::iint::iint;
    use crate::scalar::GRat;

    fn riccati(c: Scalar) -> CoeffSeq {
        CoeffSeq::new(vec![CoeffFn::constant(c)])
    }

    fn two_pi_c_pow(c: &Scalar, n: u32) -> Scalar {
        Scalar::two_pi().mul(c).pow(n)
    }

    #[test]
    fn riccati_coefficients_are_geometric() {
        for c in [Scalar::from_ratio(1, 2), Scalar::i().div_int(3), Scalar::from_int(-1)] {
            let a = riccati(c.clone());
            for n in 1..=6 {
                assert_eq!(return_coeff(&a, n), two_pi_c_pow(&c, n), "c = {c}, n = {n}");
            }
        }
    }

    #[test]
    fn cubic_term_coefficients() {
        // a_2 = c: c_2 = 2 pi c, c_3 = 0, c_4 = 6 pi^2 c^2.
        let c = Scalar::from_ratio(2, 3);
        let a = CoeffSeq::new(vec![CoeffFn::zero(), CoeffFn::constant(c.clone())]);
        assert_eq!(return_coeff(&a, 2), Scalar::two_pi().mul(&c));
        assert!(return_coeff(&a, 3).is_zero());
        let c4 = return_coeff(&a, 4);
        let expect = Scalar::pi_term(GRat::from_int(6), 2).mul(&c).mul(&c);
        assert_eq!(c4, expect);
        assert!(return_coeff(&a, 1).is_zero());
    }

    #[test]
    fn second_coefficient_structure() {
        // c_2 = I_2 + 2 I_{(1,1)} for any sequence.
        let a = CoeffSeq::new(vec![
            CoeffFn::Trig(QuasiTrigPoly::sin(1).add(&QuasiTrigPoly::constant(Scalar::from_ratio(1, 5)))),
            CoeffFn::Trig(QuasiTrigPoly::cos(1).add(&QuasiTrigPoly::one())),
        ]);
        let want = iint(&a, &[2]).add(&iint(&a, &[1, 1]).mul(&Scalar::from_int(2)));
        assert_eq!(return_coeff(&a, 2), want);
    }

    #[test]
    fn return_series_of_zero_is_identity() {
        assert!(return_series(&CoeffSeq::zero(), 6).is_identity());
    }

    #[test]
    fn compose_quadratic_example() {
        // f = r + a r^2, g = r + b r^2: g(f) = r + (a+b) r^2 + 2ab r^3 + ...
        let a = Scalar::from_ratio(1, 2);
        let b = Scalar::from_int(3);
        let f = ReturnSeries::from_coeffs(vec![a.clone(), Scalar::zero(), Scalar::zero()]);
        let g = ReturnSeries::from_coeffs(vec![b.clone(), Scalar::zero(), Scalar::zero()]);
        let h = compose(&f, &g).unwrap();
        assert_eq!(*h.coeff(1), a.add(&b));
        assert_eq!(*h.coeff(2), a.mul(&b).mul(&Scalar::from_int(2)));
        // coefficient of r^4 in g(f) = f + b f^2 is b * (a^2).
        assert_eq!(*h.coeff(3), a.mul(&a).mul(&b));
    }

    #[test]
    fn compose_rejects_cutoff_mismatch() {
        let f = ReturnSeries::identity(3);
        let g = ReturnSeries::identity(4);
        assert!(compose(&f, &g).is_err());
    }

    #[test]
    fn invert_is_involutive_and_cancels() {
        let f = ReturnSeries::from_coeffs(vec![
            Scalar::from_ratio(1, 2),
            Scalar::from_int(-1),
            Scalar::i(),
            Scalar::from_ratio(3, 7),
            Scalar::zero(),
            Scalar::from_int(2),
            Scalar::from_ratio(-2, 5),
            Scalar::one(),
        ]);
        let g = invert(&f);
        assert!(compose(&f, &g).unwrap().is_identity());
        assert!(compose(&g, &f).unwrap().is_identity());
        assert_eq!(invert(&g), f);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&CoeffSeq::new(vec![CoeffFn::sin()]), 8),
            Classification::CenterUpTo(8)
        );
        assert_eq!(
            classify(&riccati(Scalar::one()), 8),
            Classification::Focus { order: 1, cn: Scalar::two_pi() }
        );
        let mixed = CoeffSeq::new(vec![CoeffFn::sin(), CoeffFn::constant(Scalar::one())]);
        assert_eq!(
            classify(&mixed, 8),
            Classification::Focus { order: 2, cn: Scalar::two_pi() }
        );
    }

    #[test]
    fn classify_numeric_center_with_sampled_grid() {
        let a = CoeffSeq::new(vec![CoeffFn::Sampled(CoeffFn::sin().to_sampled(4096))]);
        assert_eq!(classify(&a, 4), Classification::CenterUpTo(4));
    }

    #[test]
    fn linear_term_shift_invariance() {
        // c_n - I_n does not depend on a_n: swap a_3 without touching c_3 - I_3.
        let a1 = CoeffFn::Trig(QuasiTrigPoly::sin(1));
        let a2 = CoeffFn::Trig(QuasiTrigPoly::cos(2).add(&QuasiTrigPoly::one()));
        let variant1 = CoeffFn::Trig(QuasiTrigPoly::cos(1));
        let variant2 = CoeffFn::constant(Scalar::from_ratio(5, 3));
        let s1 = CoeffSeq::new(vec![a1.clone(), a2.clone(), variant1]);
        let s2 = CoeffSeq::new(vec![a1, a2, variant2]);
        let d1 = return_coeff(&s1, 3).sub(&iint(&s1, &[3]));
        let d2 = return_coeff(&s2, 3).sub(&iint(&s2, &[3]));
        assert_eq!(d1, d2);
    }

    #[test]
    fn graded_scaling_of_coefficients() {
        let base = vec![
            CoeffFn::Trig(QuasiTrigPoly::sin(1).add(&QuasiTrigPoly::one())),
            CoeffFn::cos(),
        ];
        let a = CoeffSeq::new(base.clone());
        let t = Scalar::from_ratio(-1, 2);
        let scaled: Vec<CoeffFn> = base
            .iter()
            .enumerate()
            .map(|(idx, f)| f.scale(&t.pow((idx + 1) as u32)))
            .collect();
        let at = CoeffSeq::new(scaled);
        for n in 1..=5 {
            assert_eq!(return_coeff(&at, n), return_coeff(&a, n).mul(&t.pow(n)), "n = {n}");
        }
    }
}
