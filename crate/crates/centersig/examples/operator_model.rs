//! The noncommutative model: formal power series in letters, the quotient
//! algebra on two generators, and the differential-operator realization that
//! recovers return coefficients.
//!
//! Run with: cargo run --example operator_model

use centersig::freealg::{
    apply_mono, cn_via_operators, fundamental_solution, mono_of_word, mono_string, nc_inv, nc_mul,
    op_d, op_l, spoly_of_mono, ZPoly,
};
use centersig::returnmap::return_coeff;
use centersig::{CoeffFn, CoeffSeq, Scalar};

fn main() {
    // Words map to monomials in letters A_i.
    let w = vec![2u32, 1, 2];
    let mono = mono_of_word(&w);
    println!("word {:?} -> monomial {}", w, mono_string(&mono));

    // The fundamental solution collects every iterated integral as the
    // coefficient of its monomial, grouped by weight.
    let a = CoeffSeq::new(vec![CoeffFn::sin(), CoeffFn::cos()]);
    let series = fundamental_solution(&a, 3);
    println!("\nfundamental solution terms up to weight 3:");
    for (wt, m, v) in series.terms() {
        println!("  weight {wt}: {} * {}", v, mono_string(m));
    }

    // It is group-like: multiplying by the inverse gives the identity.
    let inv = nc_inv(&series);
    let prod = nc_mul(&series, &inv).expect("same cutoff");
    println!("F * F^-1 = 1: {}", prod.is_identity());

    // Monomials project to the quotient algebra on S_1, S_2.
    for word in [vec![1u32], vec![2], vec![1, 2], vec![2, 1]] {
        let m = mono_of_word(&word);
        let p = spoly_of_mono(&m);
        let terms: Vec<String> = p
            .terms()
            .map(|((i, j), c)| format!("{} S1^{i} S2^{j}", c))
            .collect();
        println!("{} -> {}", mono_string(&m), terms.join(" + "));
    }

    // The operator realization sends letters to D and L acting on
    // polynomials in z; they satisfy DL - LD = -L^2.
    let p: ZPoly = vec![Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(3)];
    let dl = op_d(&op_l(&p));
    let ld = op_l(&op_d(&p));
    let ll = op_l(&op_l(&p));
    let commutator_ok = (0..dl.len().max(ld.len()).max(ll.len())).all(|k| {
        let get = |q: &ZPoly| q.get(k).cloned().unwrap_or_else(Scalar::zero);
        get(&dl).sub(&get(&ld)) == get(&ll).neg()
    });
    println!("\nDL - LD = -L^2 on 1 + 2z + 3z^2: {commutator_ok}");

    // Applying a monomial stacks the operators right to left; summed
    // against the integrals this reproduces the return coefficients.
    let m = mono_of_word(&[2]);
    let z3: ZPoly = vec![Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::one()];
    let image = apply_mono(&m, &z3);
    let terms: Vec<String> = image.iter().map(|c| c.to_string()).collect();
    println!("{} applied to z^3: [{}]", mono_string(&m), terms.join(", "));

    println!("\nreturn coefficients, operator route vs integral route:");
    for n in 1..=5u32 {
        let lhs = cn_via_operators(&a, n);
        let rhs = return_coeff(&a, n);
        println!("  c_{n}: {} vs {} -> {}", lhs, rhs, if lhs == rhs { "ok" } else { "MISMATCH" });
    }
}
