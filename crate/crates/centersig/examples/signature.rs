//! Iterated integrals of a coefficient sequence, one word at a time and as a
//! full signature table up to a weight cutoff.
//!
//! Run with: cargo run --example signature

use centersig::iint::{iint, signature, word_threshold};
use centersig::{CoeffFn, CoeffSeq};

fn main() {
    // a_1(x) = sin x, a_2(x) = cos x on (0, 2pi].
    let a = CoeffSeq::new(vec![CoeffFn::sin(), CoeffFn::cos()]);

    println!("single words (letter i = index into the sequence, weight = sum):");
    for w in [
        vec![1u32],
        vec![2],
        vec![1, 1],
        vec![1, 2],
        vec![2, 1],
        vec![1, 1, 1],
    ] {
        let v = iint(&a, &w);
        println!("  I_{:?} = {}", w, v);
    }

    // The full table enumerates every word over the support with weight <= 4.
    let sig = signature(&a, 4);
    println!("\nsignature up to weight {} over letters {:?}:", sig.cutoff(), sig.support());
    let mut zeros = 0usize;
    for (w, v) in sig.words() {
        if sig.is_zero(w) {
            zeros += 1;
        } else {
            println!("  I_{:?} = {}", w, v);
        }
    }
    println!("  ({} further words are exactly zero)", zeros);

    // Every integral obeys |I_w| <= (2pi)^k / k! * prod_j bound^{i_j}; the
    // zero test is that bound scaled down by 1e-10.
    let w = vec![1u32, 2, 1];
    println!(
        "\nzero threshold for {:?} at bound {}: {:.3e}",
        w,
        a.bound(),
        word_threshold(&w, a.bound(), None)
    );
}
