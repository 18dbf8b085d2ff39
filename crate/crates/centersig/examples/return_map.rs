//! The period return map as a power series in the initial value, its
//! composition law under concatenation, and series inversion.
//!
//! Run with: cargo run --example return_map

use centersig::pathgroup::concat;
use centersig::returnmap::{compose, invert, return_coeff, return_series};
use centersig::{CoeffFn, CoeffSeq, Scalar};

fn main() {
    // Constant a_1 = c integrates in closed form: v(2pi) expands as
    // r + sum_n (2pi c)^n r^{n+1}, a geometric series.
    let c = Scalar::from_ratio(1, 2);
    let a = CoeffSeq::new(vec![CoeffFn::constant(c.clone())]);
    println!("return coefficients for a_1 = 1/2:");
    for n in 1..=4u32 {
        let cn = return_coeff(&a, n);
        let expected = Scalar::two_pi().mul(&c).pow(n);
        println!("  c_{n} = {cn} (closed form {expected})");
    }

    // Concatenating sequences composes their return maps.
    let b = CoeffSeq::new(vec![CoeffFn::sin(), CoeffFn::constant(Scalar::from_ratio(1, 4))]);
    let lhs = return_series(&concat(&a, &b), 5);
    let rhs = compose(&return_series(&a, 5), &return_series(&b, 5)).expect("same cutoff");
    println!("\nreturn series of a*b: {lhs}");
    println!("composed series:      {rhs}");
    println!("equal: {}", lhs == rhs);

    // Series inversion undoes the map up to the cutoff.
    let f = return_series(&b, 5);
    let round_trip = compose(&f, &invert(&f)).expect("same cutoff");
    println!("\nf o f^-1 is the identity: {}", round_trip.is_identity());
}
