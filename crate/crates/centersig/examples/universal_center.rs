//! Universal centers: sequences whose iterated integrals all vanish, which
//! forces a center for every analytic nonlinearity built on the same data.
//! Vanishing integrals are strictly stronger than a vanishing return map,
//! and this example exhibits a center that is not universal.
//!
//! Run with: cargo run --example universal_center

use centersig::freealg::is_universal_center;
use centersig::planar::{cherkas, dulac_field, quadratic_circle_pair, QuadraticParams};
use centersig::returnmap::{classify, Classification};
use centersig::{CoeffFn, CoeffSeq, Scalar};

fn main() {
    // a_1 = sin x: every iterated integral up to weight 6 vanishes exactly.
    let sine = CoeffSeq::new(vec![CoeffFn::sin()]);
    let chk = is_universal_center(&sine, 6);
    println!("a_1 = sin x universal up to {}: {}", chk.cutoff, chk.verdict);

    // A constant is not: the weight-1 word already survives.
    let constant = CoeffSeq::new(vec![CoeffFn::constant(Scalar::one())]);
    let chk = is_universal_center(&constant, 4);
    println!("a_1 = 1 universal up to {}: {}", chk.cutoff, chk.verdict);
    if let Some((w, v)) = chk.witnesses.first() {
        println!("  witness I_{:?} = {}", w, v);
    }

    // A center that is NOT universal. This quadratic system is a known
    // center; its circle pair reduces to a scalar equation whose weight-8
    // integrals survive even though every c_n cancels.
    let lv = QuadraticParams::new(
        Scalar::from_ratio(3, 10),
        Scalar::one(),
        Scalar::from_ratio(1, 5),
        Scalar::from_ratio(1, 10),
        Scalar::one(),
    );
    let field = dulac_field(&lv);
    let (f, g) = quadratic_circle_pair(&field).expect("quadratic field");
    let pair = cherkas(&f, &g);
    let seq = pair.to_seq();

    match classify(&seq, 8) {
        Classification::CenterUpTo(n) => println!("\nscalar reduction: center up to weight {n}"),
        Classification::Focus { order, cn } => {
            println!("\nscalar reduction: focus of order {order}, c_{order} = {cn}")
        }
    }
    let chk = is_universal_center(&seq, 8);
    println!("universal up to {}: {}", chk.cutoff, chk.verdict);
    println!("surviving words ({}):", chk.witnesses.len());
    for (w, v) in chk.witnesses.iter().take(3) {
        println!("  I_{:?} = {}", w, v);
    }
    println!("  ...");
}
