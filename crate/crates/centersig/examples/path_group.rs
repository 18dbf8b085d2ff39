//! Group structure on coefficient sequences: concatenation, inverse, scaling,
//! and equivalence of truncated signatures.
//!
//! Run with: cargo run --example path_group

use centersig::iint::iint;
use centersig::pathgroup::{concat, equivalent, inverse, scale, ScaleMode};
use centersig::{CoeffFn, CoeffSeq, QuasiTrigPoly, Scalar};

fn main() {
    // Two sequences over the same two-letter alphabet.
    let mut one_minus_cos = QuasiTrigPoly::one();
    one_minus_cos = one_minus_cos.add(&QuasiTrigPoly::cos(1).neg());
    let a = CoeffSeq::new(vec![
        CoeffFn::Trig(one_minus_cos),
        CoeffFn::sin(),
    ]);
    let b = CoeffSeq::new(vec![CoeffFn::sin(), CoeffFn::cos()]);

    // Weight-1 integrals add under concatenation.
    let ab = concat(&a, &b);
    let w = vec![1u32];
    println!(
        "I_[1]: a = {}, b = {}, a*b = {}",
        iint(&a, &w),
        iint(&b, &w),
        iint(&ab, &w)
    );

    // Higher weights split across the junction: every prefix from the first
    // factor pairs with the complementary suffix from the second.
    let w = vec![1u32, 2];
    let split = iint(&a, &w)
        .add(&iint(&a, &[1]).mul(&iint(&b, &[2])))
        .add(&iint(&b, &w));
    println!("I_[1,2](a*b) = {} = {} by the splitting rule", iint(&ab, &w), split);

    // Inverse negates weight-1 integrals and reverses words: I_w of the
    // inverse equals (-1)^len I_rev(w) of the original.
    let ainv = inverse(&a);
    println!(
        "I_[1,2](a^-1) = {}, (-1)^2 I_[2,1](a) = {}",
        iint(&ainv, &[1, 2]),
        iint(&a, &[2, 1])
    );

    // A sequence concatenated with its inverse is trivial at every cutoff.
    let trivial = concat(&a, &ainv);
    let rep = equivalent(&trivial, &CoeffSeq::zero(), 4);
    println!("a * a^-1 ~ 0 up to weight {}: {}", rep.cutoff, rep.equivalent);

    // Graded scaling a_i -> t^i a_i multiplies I_w by t^weight(w).
    let t = Scalar::from_ratio(1, 3);
    let scaled = scale(&a, &t, ScaleMode::Graded);
    println!(
        "I_[1,2](graded 1/3) = {} = (1/3)^3 * {}",
        iint(&scaled, &[1, 2]),
        iint(&a, &[1, 2])
    );

    // Different sequences, equivalent signatures? Not these two: the report
    // carries the first word that distinguishes them.
    let rep = equivalent(&a, &b, 3);
    println!("a ~ b up to weight {}: {}", rep.cutoff, rep.equivalent);
    if let Some((w, va, vb)) = rep.witness {
        println!("  first differing word {:?}: {} vs {}", w, va, vb);
    }
}
