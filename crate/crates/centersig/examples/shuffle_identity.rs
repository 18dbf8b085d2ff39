//! The shuffle identity: products of iterated integrals expand as sums over
//! riffle shuffles, exactly in exact arithmetic.
//!
//! Run with: cargo run --example shuffle_identity

use centersig::iint::{shuffle_product_check, signature};
use centersig::words::{coeff_c, shuffles};
use centersig::{CoeffFn, CoeffSeq};

fn main() {
    println!("shuffles of [1] and [2]: {:?}", shuffles(&[1], &[2]));
    println!("shuffles of [1,1] and [2]: {:?}", shuffles(&[1, 1], &[2]));

    let a = CoeffSeq::new(vec![CoeffFn::sin(), CoeffFn::cos()]);
    let sig = signature(&a, 6);

    // I_u * I_v = sum over shuffles of u and v, term by term. Total weight
    // must stay within the signature cutoff.
    println!("\nidentity I_u * I_v = sum_{{w in u sh v}} I_w:");
    for (u, v) in [
        (vec![1u32], vec![2u32]),
        (vec![1, 2], vec![2, 1]),
        (vec![1, 2], vec![1, 2]),
        (vec![2, 1], vec![1, 1]),
        (vec![1, 1], vec![1, 2]),
    ] {
        let chk = shuffle_product_check(&sig, &u, &v, 1e-9);
        println!(
            "  {:?} sh {:?}: lhs = {}, rhs = {} -> {}",
            chk.u,
            chk.v,
            chk.lhs,
            chk.rhs,
            if chk.ok { "ok" } else { "MISMATCH" }
        );
    }

    // c(w) counts the permutations a word contributes to the n-th return
    // coefficient; single letters always contribute once.
    println!("\ncombinatorial coefficients c(w):");
    for w in [vec![3u32], vec![1, 2], vec![2, 1], vec![1, 1, 1], vec![2, 1, 2, 1, 2]] {
        println!("  c({:?}) = {}", w, coeff_c(&w));
    }
}
