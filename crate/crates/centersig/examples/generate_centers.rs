//! Three center factories: loop-generated sequences, sequences hitting a
//! prescribed return map, and planar fields built from a polynomial first
//! integral.
//!
//! Run with: cargo run --example generate_centers

use centersig::centergen::{from_u_sequence, hamiltonian_field, t_map};
use centersig::freealg::is_universal_center;
use centersig::planar::{composition_check, polar_reduce, suggest_q, BivarPoly};
use centersig::returnmap::{classify, return_series, Classification, ReturnSeries};
use centersig::{CoeffFn, CoeffSeq, Scalar};

fn show(label: &str, a: &CoeffSeq, cutoff: u32) {
    match classify(a, cutoff) {
        Classification::CenterUpTo(n) => println!("{label}: center up to weight {n}"),
        Classification::Focus { order, cn } => {
            println!("{label}: focus of order {order}, c_{order} = {cn}")
        }
    }
}

fn main() {
    // Any closed loop u (u(0) = u(2pi) = 0) generates a sequence whose
    // solutions all return to their initial value.
    let u = vec![CoeffFn::sin()];
    let a = from_u_sequence(&u, 6).expect("closed loop");
    println!("coefficients generated by u_1 = sin x:");
    for (i, f) in a.coeffs().iter().enumerate() {
        if let CoeffFn::Trig(q) = f {
            println!("  a_{} = {}", i + 1, q);
        }
    }
    show("loop-generated", &a, 6);
    let chk = is_universal_center(&a, 6);
    println!("universal up to {}: {}", chk.cutoff, chk.verdict);

    // The reverse direction: prescribe return coefficients d_n and build a
    // polynomial sequence realizing them.
    let target = ReturnSeries::from_coeffs(vec![Scalar::from_int(3)]);
    let b = t_map(&target, 8);
    println!("\nsequence hitting c_1 = 3, c_n = 0 for n >= 2:");
    for i in [1usize, 2] {
        if let Some(CoeffFn::Trig(q)) = b.get(i) {
            println!("  a_{i} = {q}");
        }
    }
    let achieved = return_series(&b, 8);
    println!("achieved return series: {achieved}");
    println!("matches the target: {}", achieved.coeff(1) == &Scalar::from_int(3));

    // A planar field with first integral P_1(H) dx + ... built from H = x:
    // its angular reduction is a center, and the reduction composes through
    // the circle restriction of H.
    let h = BivarPoly::monomial(1, 0, Scalar::one());
    let p1 = vec![Scalar::zero(), Scalar::zero(), Scalar::one()];
    let p2 = vec![Scalar::zero(), Scalar::one()];
    let field = hamiltonian_field(&h, &p1, &p2).expect("valid data");
    let v = polar_reduce(&field, 6);
    show("\nfield from H = x", &v, 6);

    let q = &suggest_q(&field, Some(&h))[0];
    let targets: Vec<CoeffFn> = v.coeffs().iter().map(|f| f.antiderivative()).collect();
    let rep = composition_check(&targets, q).expect("trig data");
    println!("all coefficient integrals compose through cos x: {}", rep.ok);
}
