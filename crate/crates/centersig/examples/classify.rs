//! Center versus focus: scan the return-map coefficients c_1, c_2, ... for
//! the first one that does not vanish.
//!
//! Run with: cargo run --example classify

use centersig::funcs::mean_free;
use centersig::returnmap::{classify, Classification};
use centersig::{CoeffFn, CoeffSeq, Scalar};

fn report(label: &str, a: &CoeffSeq, cutoff: u32) {
    match classify(a, cutoff) {
        Classification::CenterUpTo(n) => println!("{label}: center up to weight {n}"),
        Classification::Focus { order, cn } => {
            println!("{label}: focus of order {order}, c_{order} = {cn}")
        }
    }
}

fn main() {
    // Constant a_1 = 1/2 gives v' = v^2/2, whose return map is not the
    // identity: c_n = pi^n exactly.
    let riccati = CoeffSeq::new(vec![CoeffFn::constant(Scalar::from_ratio(1, 2))]);
    report("a_1 = 1/2", &riccati, 8);

    // a_1 = sin x integrates to zero over the period at every order.
    let sine = CoeffSeq::new(vec![CoeffFn::sin()]);
    report("a_1 = sin x", &sine, 8);

    // A gap in the sequence: a_2 = 3 alone has c_1 = 0 but c_2 = 6pi.
    let cubic = CoeffSeq::new(vec![CoeffFn::zero(), CoeffFn::constant(Scalar::from_int(3))]);
    report("a_2 = 3", &cubic, 8);

    // c_1 is just the mean of a_1, so a necessary center condition is that
    // a_1 integrates to zero.
    println!("\nmean-free a_1?");
    println!("  sin x: {}", mean_free(&CoeffFn::sin()));
    println!("  1/2:   {}", mean_free(&CoeffFn::constant(Scalar::from_ratio(1, 2))));
}
