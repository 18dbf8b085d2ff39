//! The quadratic perturbation family: component membership, angular
//! reduction, and the scalar reduction on the circle, evaluated at known
//! center points and at a generic point.
//!
//! Run with: cargo run --example quadratic_family

use centersig::freealg::is_universal_center;
use centersig::planar::{
    cherkas, composition_check, dulac_component, dulac_field, polar_reduce, quadratic_circle_pair,
    QuadraticParams,
};
use centersig::returnmap::{classify, Classification};
use centersig::Scalar;

fn examine(label: &str, l: &QuadraticParams, cutoff: u32) {
    let field = dulac_field(l);
    let comps: Vec<String> = dulac_component(l).iter().map(|c| c.to_string()).collect();
    println!("{label}: components {:?}", comps);

    let polar = polar_reduce(&field, cutoff);
    match classify(&polar, cutoff) {
        Classification::CenterUpTo(n) => println!("  angular reduction: center up to {n}"),
        Classification::Focus { order, cn } => {
            println!("  angular reduction: focus of order {order}, c_{order} = {cn}")
        }
    }

    let (f, g) = quadratic_circle_pair(&field).expect("quadratic field");
    let pair = cherkas(&f, &g);
    let seq = pair.to_seq();
    match classify(&seq, cutoff) {
        Classification::CenterUpTo(n) => println!("  scalar reduction: center up to {n}"),
        Classification::Focus { order, cn } => {
            println!("  scalar reduction: focus of order {order}, c_{order} = {cn}")
        }
    }
    let chk = is_universal_center(&seq, cutoff);
    println!("  universal up to {}: {}", chk.cutoff, chk.verdict);
    if let Some((w, v)) = chk.witnesses.first() {
        println!("    first surviving word {:?} = {}", w, v);
    }
}

fn r(num: i64, den: i64) -> Scalar {
    Scalar::from_ratio(num, den)
}

fn main() {
    // First integral case: both moment integrals are polynomials in one
    // common primitive, so every iterated integral dies.
    let hamiltonian = QuadraticParams::new(r(1, 3), r(1, 2), r(0, 1), r(0, 1), r(2, 1));
    examine("l4 = l5 = 0", &hamiltonian, 6);

    // The moment relation behind that universality, checked symbolically:
    // the second primitive is a polynomial in the first.
    let field = dulac_field(&hamiltonian);
    let (f, g) = quadratic_circle_pair(&field).expect("quadratic field");
    let pair = cherkas(&f, &g);
    let rep = composition_check(&[pair.p_integral(), pair.q_integral()], &pair.p_integral())
        .expect("trig data");
    if let Some(Some(poly)) = rep.polys.get(1) {
        let terms: Vec<String> = poly.iter().map(|c| c.to_string()).collect();
        println!("  Q as a polynomial in P (ascending): [{}]\n", terms.join(", "));
    }

    // Mirror-symmetric case.
    let symmetric = QuadraticParams::new(r(0, 1), r(1, 2), r(1, 3), r(0, 1), r(1, 1));
    examine("l2 = l5 = 0", &symmetric, 6);
    println!();

    // A center whose integrals survive: every c_n cancels but weight-8
    // words do not vanish.
    let lv = QuadraticParams::new(r(3, 10), r(1, 1), r(1, 5), r(1, 10), r(1, 1));
    examine("product of invariant lines", &lv, 8);
    println!();

    // Generic parameters give a focus.
    let generic = QuadraticParams::new(r(1, 3), r(1, 2), r(1, 4), r(1, 5), r(1, 1));
    examine("generic", &generic, 6);
}
