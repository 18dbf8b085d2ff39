//! Numerical cross-check of the algebraic machinery: integrate the scalar
//! equation with an adaptive Runge-Kutta method and compare against exact
//! predictions.
//!
//! Run with: cargo run --example oracle_scan

use centersig::oracle::{displacement_scan, safe_radius, trajectory, variational};
use centersig::returnmap::return_coeff;
use centersig::{CoeffFn, CoeffSeq, Scalar};
use num_complex::Complex64;

fn main() {
    // Inside the safe radius every solution is certified to exist up to 2pi
    // and grow no faster than |r0| e^x.
    let sine = CoeffSeq::new(vec![CoeffFn::sin()]);
    let radius = safe_radius(sine.bound());
    println!("safe radius at bound {}: {:.4e}", sine.bound(), radius);

    // A center returns every initial value to itself; the scan measures
    // v(2pi; r) - r on a ladder of radii.
    let radii: Vec<Complex64> = (1..=6)
        .map(|k| Complex64::new(0.12 * radius * k as f64, 0.0))
        .collect();
    let report = displacement_scan(&sine, &radii, 1e-9).expect("radii inside the safe disc");
    println!("\ndisplacements for a_1 = sin x (center):");
    for row in &report.rows {
        println!("  r = {:.4e} -> {:.3e}", row.r.re, row.displacement.norm());
    }
    println!("center-like at tol {:.0e}: {}", report.tol, report.center_like);

    // Return coefficients are limits of displacement quotients; the
    // variational route computes them from the flow and must agree with the
    // exact combinatorial route.
    let a = CoeffSeq::new(vec![CoeffFn::constant(Scalar::from_ratio(1, 2))]);
    let exact = return_coeff(&a, 1);
    let numeric = variational(&a, 1, 1e-12).expect("first variation");
    println!("\nc_1 for a_1 = 1/2: exact {} vs integrated {:.12}", exact, numeric.re);

    // The growth certificate |v(x)| <= |r0| e^x holds along the whole
    // trajectory, not only at the endpoint.
    let r0 = Complex64::new(0.9 * radius, 0.0);
    let traj = trajectory(&sine, r0, 1e-9, false).expect("inside the safe disc");
    println!(
        "\ntrajectory from r0 = {:.3e}: v(2pi) = {:.6e}, growth ratio {:.3}",
        r0.re, traj.v_end.re, traj.growth_ratio
    );
}
