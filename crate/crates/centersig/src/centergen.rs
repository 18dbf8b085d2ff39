//! Constructive sources of centers: sequences with identically vanishing
//! return series built from free periodic data, a right inverse of the
//! truncated return-series map, and a factory of planar fields whose polar
//! reductions are centers. Both series parametrizations share the same
//! formal-division kernel.

use num_traits::Zero;

use crate::funcs::{series_quotient, CoeffFn, CoeffSeq, Frac, QuasiTrigPoly};
use crate::planar::{BivarPoly, PlanarField};
use crate::returnmap::ReturnSeries;
use crate::scalar::Scalar;
use crate::Error;

/// Left-end value u(0+), exact when the class allows it.
fn value_at_zero(f: &CoeffFn) -> Scalar {
    match f {
        CoeffFn::Trig(q) => {
            q.eval_exact(&Frac::zero()).unwrap_or_else(|| Scalar::Float(q.eval_f64(0.0)))
        }
        CoeffFn::Pw(p) => {
            p.eval_exact(&Frac::zero()).unwrap_or_else(|| Scalar::Float(p.eval_raw(0.0)))
        }
        CoeffFn::Sampled(s) => Scalar::Float(s.left()),
    }
}

/// u_k must vanish at both endpoints so that the data describes a closed
/// loop; exact classes are decided exactly.
fn ensure_closed(k: usize, f: &CoeffFn) -> Result<(), Error> {
    for (name, v) in [("0", value_at_zero(f)), ("2pi", f.value_at_2pi())] {
        let vanishes = match &v {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(z) => z.norm() <= 1e-9 * (1.0 + f.sup_bound()),
        };
        if !vanishes {
            return Err(Error::Input(format!(
                "u_{k} must vanish at both endpoints; u_{k}({name}) = {v}"
            )));
        }
    }
    Ok(())
}

/// The closed-loop family
///   sum_i a_i(x) t^{i+1} = -(sum_k u_k'(x) t^{k+1}) / (1 + sum_k (k+1) u_k(x) t^k),
/// truncated after a_n. Every output has an identically zero return series
/// at every truncation order. Rejects u_k that do not vanish at both ends
/// of the period.
pub fn from_u_sequence(u: &[CoeffFn], n: usize) -> Result<CoeffSeq, Error> {
    for (idx, uk) in u.iter().enumerate() {
        ensure_closed(idx + 1, uk)?;
    }
    let num: Vec<CoeffFn> = u.iter().map(|uk| uk.derivative().neg()).collect();
    let den: Vec<CoeffFn> = u
        .iter()
        .enumerate()
        .map(|(idx, uk)| uk.scale(&Scalar::from_int(idx as i64 + 2)))
        .collect();
    Ok(CoeffSeq::new(series_quotient(&num, &den, n)))
}

/// A right inverse of the truncated return series: for a target
/// r + sum_k d_k r^{k+1} the sequence
///   sum_i a_i(x) t^{i+1} = (sum_k (d_k/2pi) t^{k+1}) / (1 + sum_k (k+1) d_k (1 - x/2pi) t^k)
/// has exactly that return series up to the cutoff. The coefficients are
/// polynomials in x on (0, 2pi], extended periodically; they are
/// discontinuous at the seam unless the target is the identity.
pub fn t_map(f: &ReturnSeries, n: usize) -> CoeffSeq {
    let two_pi = Scalar::two_pi();
    let mut num = Vec::with_capacity(f.cutoff() as usize);
    let mut den = Vec::with_capacity(f.cutoff() as usize);
    for k in 1..=f.cutoff() {
        let d = f.coeff(k).clone();
        num.push(CoeffFn::constant(d.div(&two_pi)));
        let slope = Scalar::from_int(k as i64 + 1).mul(&d);
        let mut q = QuasiTrigPoly::zero();
        q.add_term(0, 0, slope.clone());
        q.add_term(1, 0, slope.div(&two_pi).neg());
        den.push(CoeffFn::Trig(q));
    }
    CoeffSeq::new(series_quotient(&num, &den, n))
}

/// Perturbation of the unit rotation generated by a homogeneous polynomial
/// H and two univariate polynomials: with A = P1(H) and B = P2(H),
///   F = -x y A_x + x^2 A_y - y B,
///   G = -y^2 A_x + x y A_y + x B.
/// Fields of this shape have a center at the origin. H must be homogeneous
/// of degree >= 1 and P2 must vanish at 0 so the perturbation stays
/// nonlinear.
pub fn hamiltonian_field(
    h: &BivarPoly,
    p1: &[Scalar],
    p2: &[Scalar],
) -> Result<PlanarField, Error> {
    match h.homogeneous_degree() {
        Some(d) if d >= 1 => {}
        _ => {
            return Err(Error::Input(
                "H must be homogeneous of degree >= 1".into(),
            ))
        }
    }
    if p2.first().map(|c| !c.is_zero()).unwrap_or(false) {
        return Err(Error::Input(
            "P2 must vanish at 0; a constant term perturbs the rotation part".into(),
        ));
    }
    let a = BivarPoly::compose_univariate(p1, h);
    let b = BivarPoly::compose_univariate(p2, h);
    let ax = a.partial_x();
    let ay = a.partial_y();
    let x = BivarPoly::monomial(1, 0, Scalar::one());
    let y = BivarPoly::monomial(0, 1, Scalar::one());
    let xy = BivarPoly::monomial(1, 1, Scalar::one());
    let xx = BivarPoly::monomial(2, 0, Scalar::one());
    let yy = BivarPoly::monomial(0, 2, Scalar::one());
    let f = xy.mul(&ax).neg().add(&xx.mul(&ay)).add(&y.mul(&b).neg());
    let g = yy.mul(&ax).neg().add(&xy.mul(&ay)).add(&x.mul(&b));
    PlanarField::new(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::is_universal_center;
    use crate::planar::{composition_check, polar_reduce, suggest_q};
    use crate::returnmap::{classify, return_series, Classification};

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn empty_u_is_the_zero_sequence() {
        let a = from_u_sequence(&[], 6).unwrap();
        assert!(a.is_zero_seq());
    }

    #[test]
    fn sine_u_expands_to_the_geometric_series() {
        // -cos(x) t^2 / (1 + 2 sin(x) t) term by term.
        let a = from_u_sequence(&[CoeffFn::sin()], 3).unwrap();
        let expected = [
            QuasiTrigPoly::cos(1).neg(),
            QuasiTrigPoly::sin(2),
            QuasiTrigPoly::cos(3).add(&QuasiTrigPoly::cos(1).neg()),
        ];
        for (i, e) in expected.iter().enumerate() {
            match a.get(i + 1) {
                Some(CoeffFn::Trig(q)) => assert_eq!(q, e, "a_{}", i + 1),
                other => panic!("a_{} has unexpected shape: {:?}", i + 1, other),
            }
        }
    }

    #[test]
    fn u_that_is_not_a_loop_is_rejected() {
        // cos misses the value condition at both ends, x only at the right one.
        assert!(matches!(from_u_sequence(&[CoeffFn::cos()], 4), Err(Error::Input(_))));
        let mut ramp = QuasiTrigPoly::zero();
        ramp.add_term(1, 0, Scalar::one());
        assert!(matches!(from_u_sequence(&[CoeffFn::Trig(ramp)], 4), Err(Error::Input(_))));
    }

    #[test]
    fn single_u_output_is_universal_and_compositional() {
        let a = from_u_sequence(&[CoeffFn::sin()], 6).unwrap();
        let chk = is_universal_center(&a, 6);
        assert!(chk.verdict, "witnesses: {:?}", chk.witnesses);

        let targets: Vec<CoeffFn> = a.coeffs().iter().map(|f| f.antiderivative()).collect();
        let rep = composition_check(&targets, &CoeffFn::sin()).unwrap();
        assert!(rep.ok);
        // The second antiderivative is sin^2, so its polynomial is z^2.
        let p2 = rep.polys[1].as_ref().unwrap();
        assert_eq!(p2, &vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
    }

    #[test]
    fn two_u_output_classifies_as_center() {
        let u2 = QuasiTrigPoly::cos(2).add(&QuasiTrigPoly::one().neg());
        let u = [CoeffFn::sin(), CoeffFn::Trig(u2)];
        let a = from_u_sequence(&u, 6).unwrap();
        assert!(!a.is_zero_seq());
        assert_eq!(classify(&a, 6), Classification::CenterUpTo(6));
    }

    #[test]
    fn t_map_of_identity_is_zero() {
        let a = t_map(&ReturnSeries::identity(5), 5);
        assert!(a.is_zero_seq());
    }

    #[test]
    fn t_map_quadratic_target_matches_closed_form() {
        // Target r + 3 r^2: a_1 = 3/(2 pi), a_2 = -(9/pi)(1 - x/(2 pi)).
        let f = ReturnSeries::from_coeffs(vec![Scalar::from_int(3)]);
        let a = t_map(&f, 2);
        let two_pi = Scalar::two_pi();
        match a.get(1) {
            Some(CoeffFn::Trig(q)) => {
                assert_eq!(q, &QuasiTrigPoly::constant(Scalar::from_int(3).div(&two_pi)))
            }
            other => panic!("a_1 has unexpected shape: {:?}", other),
        }
        let mut e2 = QuasiTrigPoly::zero();
        e2.add_term(0, 0, Scalar::from_int(-9).div(&Scalar::two_pi()).mul(&Scalar::from_int(2)));
        e2.add_term(1, 0, Scalar::from_int(9).div(&two_pi.mul(&two_pi)).mul(&Scalar::from_int(2)));
        match a.get(2) {
            Some(CoeffFn::Trig(q)) => assert_eq!(q, &e2),
            other => panic!("a_2 has unexpected shape: {:?}", other),
        }
    }

    #[test]
    fn t_map_section_identity_is_exact() {
        let d = vec![
            s(1, 2),
            s(-1, 3),
            Scalar::from_int(2),
            Scalar::i().mul(&s(1, 2)),
            Scalar::zero(),
            s(3, 7),
            s(-2, 9),
            Scalar::one(),
        ];
        let f = ReturnSeries::from_coeffs(d);
        let a = t_map(&f, 8);
        let g = return_series(&a, 8);
        for n in 1..=8 {
            assert!(g.coeff(n).is_exact());
            assert_eq!(g.coeff(n), f.coeff(n), "coefficient {n}");
        }
    }

    #[test]
    fn degenerate_data_gives_the_pure_rotation() {
        let mut h = BivarPoly::zero();
        h.add_term(2, 0, Scalar::one());
        h.add_term(0, 2, Scalar::one());
        let v0 = hamiltonian_field(&h, &[], &[]).unwrap();
        assert!(v0.f().is_zero() && v0.g().is_zero());
        // A = x^2 + y^2 commutes with the rotation, so it contributes nothing.
        let v1 = hamiltonian_field(&h, &[Scalar::zero(), Scalar::one()], &[]).unwrap();
        assert!(v1.f().is_zero() && v1.g().is_zero());
    }

    #[test]
    fn hamiltonian_field_reduces_to_a_center() {
        let h = BivarPoly::monomial(1, 0, Scalar::one());
        let p1 = [Scalar::zero(), Scalar::zero(), Scalar::one()];
        let p2 = [Scalar::zero(), Scalar::one()];
        let v = hamiltonian_field(&h, &p1, &p2).unwrap();
        assert!(!v.f().is_zero());
        let a = polar_reduce(&v, 6);
        assert_eq!(classify(&a, 6), Classification::CenterUpTo(6));

        let targets: Vec<CoeffFn> = a.coeffs().iter().map(|f| f.antiderivative()).collect();
        let q = &suggest_q(&v, Some(&h))[0];
        let rep = composition_check(&targets, q).unwrap();
        assert!(rep.ok, "failed at target {:?}", rep.failed_index);
    }

    #[test]
    fn even_generator_yields_the_reflection_symmetry() {
        let h = BivarPoly::monomial(0, 2, Scalar::one());
        let p1 = [Scalar::zero(), Scalar::one()];
        let p2 = [Scalar::zero(), Scalar::one()];
        let v = hamiltonian_field(&h, &p1, &p2).unwrap();
        assert!(v.is_y_symmetric());
        let a = polar_reduce(&v, 6);
        assert_eq!(classify(&a, 6), Classification::CenterUpTo(6));
    }

    #[test]
    fn hamiltonian_factory_rejects_bad_inputs() {
        let mut skew = BivarPoly::zero();
        skew.add_term(2, 0, Scalar::one());
        skew.add_term(0, 1, Scalar::one());
        assert!(matches!(hamiltonian_field(&skew, &[], &[]), Err(Error::Input(_))));

        let constant = BivarPoly::monomial(0, 0, Scalar::one());
        assert!(matches!(hamiltonian_field(&constant, &[], &[]), Err(Error::Input(_))));

        let h = BivarPoly::monomial(1, 0, Scalar::one());
        assert!(matches!(hamiltonian_field(&h, &[], &[Scalar::one()]), Err(Error::Input(_))));
    }
}
