//! The JSON problem format: parsing coefficient sequences from text,
//! shorthand function specs, and serializing results back out with exact
//! values kept exact.
//!
//! Run with: cargo run --example problem_json

use centersig::iint::iint;
use centersig::json::{parse_problem, seq_from_problem, seq_to_problem_json, value_json};
use centersig::pathgroup::inverse;

fn main() {
    // Shorthand strings cover the common coefficients; full objects carry
    // term lists with exact rational/pi scalars as strings.
    let text = r#"{
        "schema": 1,
        "a": [
            "sin",
            {"kind": "trig", "terms": [{"m": 2, "re": "0", "im": "-1/2"},
                                       {"m": -2, "re": "0", "im": "1/2"}]},
            null,
            "1/3"
        ]
    }"#;
    let problem = parse_problem(text).expect("well-formed problem");
    let a = seq_from_problem(&problem).expect("valid coefficients");
    println!("parsed letters {:?}, bound {}", a.support(), a.bound());

    // The second entry is sin 2x written out as exponentials.
    println!("I_[2] = {}", iint(&a, &[2]));
    println!("I_[4] = {}", iint(&a, &[4]));
    println!("I_[4,4] = {}", iint(&a, &[4, 4]));

    // Results serialize back to the same schema; exact structure survives
    // the round trip.
    let inv = inverse(&a);
    let out = seq_to_problem_json(&inv);
    println!("\ninverse sequence as JSON:");
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));

    // Scalar values serialize as canonical exact strings or float pairs.
    let v = iint(&a, &[4, 4]);
    println!("\nvalue JSON: {}", value_json(&v));
}
