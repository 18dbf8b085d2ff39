//! Independent numerical ground truth: adaptive Runge-Kutta integration of
//! dv/dx = sum_i a_i(x) v^{i+1} and of its Taylor-in-r coefficient system.
//!
//! The coefficient system is generated on the fly by truncated power-series
//! arithmetic in r, so any support pattern of a is handled without
//! hand-derived formulas. Integration always restarts at the breakpoints of
//! piecewise inputs; the right-hand side is merely Lipschitz there and a
//! single step across a jump would poison the error estimate.

use crate::funcs::{CoeffSeq, TWO_PI};
use crate::Error;
use num_complex::Complex64;

/// Radius below which the growth estimate |v(x)| <= |r0| e^x is guaranteed.
pub fn safe_radius(bound: f64) -> f64 {
    (-TWO_PI).exp() / (2.0 * bound.max(1.0))
}

/// Default relative tolerance for the embedded pair.
pub const DEFAULT_REL_TOL: f64 = 1e-12;
/// Default absolute tolerance floor.
pub const DEFAULT_ABS_TOL: f64 = 1e-14;
/// Smallest tolerance the error control can honor in double precision.
pub const MIN_TOL: f64 = 1e-13;

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Interior restart points (strictly between 0 and 2pi), plus both ends.
fn segments(a: &CoeffSeq) -> Vec<(f64, f64)> {
    let mut pts = vec![0.0];
    for b in a.breakpoints() {
        if b > 1e-12 && b < TWO_PI - 1e-12 {
            pts.push(b);
        }
    }
    pts.push(TWO_PI);
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// One adaptive integration over [x0, x1]. `observe` sees every accepted
/// (x, y); returning false aborts with the current state (blow-up handling).
fn integrate<F>(
    rhs: &F,
    y0: Vec<Complex64>,
    x0: f64,
    x1: f64,
    rel_tol: f64,
    abs_tol: f64,
    observe: &mut dyn FnMut(f64, &[Complex64]) -> bool,
) -> Result<Vec<Complex64>, Error>
where
    F: Fn(f64, &[Complex64]) -> Vec<Complex64>,
{
    let dim = y0.len();
    let span = x1 - x0;
    let mut x = x0;
    let mut y = y0;
    let mut h = (span / 16.0).min(0.1);
    let h_min = span * 1e-15;
    let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::ZERO; dim]; 7];
    k[0] = rhs(x, &y);
    loop {
        if x >= x1 - 1e-14 * span.max(1.0) {
            return Ok(y);
        }
        if h < h_min {
            return Err(Error::Numeric(format!(
                "step size underflow at x = {x:.6e} (h = {h:.3e}); the trajectory is likely escaping"
            )));
        }
        h = h.min(x1 - x);
        for s in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate().take(s) {
                let a_sj = A[s][j];
                if a_sj != 0.0 {
                    for d in 0..dim {
                        ys[d] += h * a_sj * kj[d];
                    }
                }
            }
            k[s] = rhs(x + C[s] * h, &ys);
        }
        let mut y5 = y.clone();
        let mut err = vec![Complex64::ZERO; dim];
        for (s, ks) in k.iter().enumerate() {
            for d in 0..dim {
                y5[d] += h * B5[s] * ks[d];
                err[d] += h * (B5[s] - B4[s]) * ks[d];
            }
        }
        let mut err_norm: f64 = 0.0;
        for d in 0..dim {
            let scale = abs_tol + rel_tol * y[d].norm().max(y5[d].norm());
            err_norm += (err[d].norm() / scale).powi(2);
        }
        err_norm = (err_norm / dim as f64).sqrt();
        if err_norm <= 1.0 {
            x += h;
            y = y5;
            // First-same-as-last: stage 7 was evaluated at the new point.
            k[0] = k[6].clone();
            if !observe(x, &y) {
                return Ok(y);
            }
        }
        let factor = if err_norm > 0.0 {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }
}

fn check_tol(tol: f64) -> Result<(), Error> {
    if !(tol >= MIN_TOL) {
        return Err(Error::Precondition(format!(
            "tolerance {tol:e} is below the double-precision floor {MIN_TOL:e}"
        )));
    }
    Ok(())
}

/// Evaluations of the coefficient functions at one abscissa.
fn coeff_values(a: &CoeffSeq, upto: usize, x: f64) -> Vec<Complex64> {
    (1..=upto)
        .map(|i| a.get(i).map(|f| f.eval_raw(x)).unwrap_or(Complex64::ZERO))
        .collect()
}

/// Taylor coefficients c_1..c_n of the circle return map, by integrating the
/// triangular coefficient system. c_n is the coefficient of r^{n+1}.
pub fn variational_all(a: &CoeffSeq, n: u32, tol: f64) -> Result<Vec<Complex64>, Error> {
    if n == 0 || n > 16 {
        return Err(Error::Precondition(format!("order n = {n} outside 1..=16")));
    }
    check_tol(tol)?;
    let n = n as usize;
    let depth = a.coeffs().len().min(n);
    if depth == 0 {
        return Ok(vec![Complex64::ZERO; n]);
    }
    // State y[j] is the coefficient of r^{j+2}, j = 0..n-1. The series for
    // v carries degrees 0..=n+1: index 0 stays 0, index 1 stays 1.
    let rhs = move |x: f64, y: &[Complex64]| -> Vec<Complex64> {
        let av = coeff_values(a, depth, x);
        let mut series = vec![Complex64::ZERO; n + 2];
        series[1] = Complex64::ONE;
        series[2..].copy_from_slice(y);
        let mut acc = vec![Complex64::ZERO; n + 2];
        let mut power = series.clone();
        for (i, ai) in av.iter().enumerate() {
            // power = series^{i+1} after this multiplication chain.
            if i > 0 {
                power = series_mul(&power, &series, n + 2);
            }
            if ai.norm_sqr() != 0.0 {
                let p = series_mul(&power, &series, n + 2);
                for (t, pt) in p.iter().enumerate() {
                    acc[t] += ai * pt;
                }
            }
        }
        acc[2..].to_vec()
    };
    let y0 = vec![Complex64::ZERO; n];
    let mut y = y0;
    for (x0, x1) in segments(a) {
        y = integrate(&rhs, y, x0, x1, tol, DEFAULT_ABS_TOL, &mut |_, _| true)?;
    }
    Ok(y)
}

/// The single coefficient c_n, per the module contract.
pub fn variational(a: &CoeffSeq, n: u32, tol: f64) -> Result<Complex64, Error> {
    Ok(*variational_all(a, n, tol)?.last().unwrap())
}

fn series_mul(p: &[Complex64], q: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; len];
    for (i, pi) in p.iter().enumerate() {
        if pi.norm_sqr() == 0.0 {
            continue;
        }
        for (j, qj) in q.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += pi * qj;
        }
    }
    out
}

/// Result of a direct trajectory integration.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub v_end: Complex64,
    /// Largest observed |v(x)| / (|r0| e^x) over accepted steps.
    pub growth_ratio: f64,
    /// Set when the forced integration left the bounded regime.
    pub blow_up_at: Option<f64>,
}

/// Integrate v' = sum_i a_i(x) v^{i+1}, v(0) = r0, up to x = 2pi.
///
/// Without `force`, |r0| must lie strictly inside the safe radius
/// e^{-2pi} / (2 max(1, bound)); inside it the solution is guaranteed to
/// exist and satisfy |v(x)| <= |r0| e^x. With `force`, escape is reported in
/// the result instead of being an error.
pub fn trajectory(a: &CoeffSeq, r0: Complex64, tol: f64, force: bool) -> Result<Trajectory, Error> {
    check_tol(tol)?;
    let radius = safe_radius(a.bound());
    if !force && r0.norm() >= radius {
        return Err(Error::Precondition(format!(
            "|r0| = {:.3e} is outside the safe radius {:.3e}; pass the override to integrate anyway",
            r0.norm(),
            radius
        )));
    }
    let depth = a.coeffs().len();
    let rhs = move |x: f64, y: &[Complex64]| -> Vec<Complex64> {
        let v = y[0];
        let av = coeff_values(a, depth, x);
        // Horner sum of a_i v^{i+1} = v^2 (a_1 + v (a_2 + ...)).
        let mut s = Complex64::ZERO;
        for ai in av.iter().rev() {
            s = s * v + ai;
        }
        vec![s * v * v]
    };
    let escape = (1.0f64).max(10.0 * r0.norm() * TWO_PI.exp());
    let mut growth: f64 = if r0.norm_sqr() == 0.0 { 0.0 } else { 1.0 };
    let mut blow_up_at = None;
    let mut y = vec![r0];
    'outer: for (x0, x1) in segments(a) {
        let mut observe = |x: f64, y: &[Complex64]| -> bool {
            let v = y[0].norm();
            if r0.norm_sqr() != 0.0 {
                growth = growth.max(v / (r0.norm() * x.exp()));
            }
            if v > escape {
                blow_up_at = Some(x);
                return false;
            }
            true
        };
        y = integrate(&rhs, y, x0, x1, tol, DEFAULT_ABS_TOL, &mut observe)?;
        if blow_up_at.is_some() {
            break 'outer;
        }
    }
    Ok(Trajectory { v_end: y[0], growth_ratio: growth, blow_up_at })
}

/// One row of a displacement scan.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub r: Complex64,
    pub displacement: Complex64,
}

/// Displacement scan outcome: rows plus the empirical verdict.
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// True when every |v(2pi;r) - r| <= tol |r|.
    pub center_like: bool,
    pub tol: f64,
}

/// Evaluate v(2pi; r) - r on each radius. All radii must sit inside the
/// safe radius so the trajectories are certified to close.
pub fn displacement_scan(a: &CoeffSeq, radii: &[Complex64], tol: f64) -> Result<ScanReport, Error> {
    let radius = safe_radius(a.bound());
    for r in radii {
        if r.norm() >= radius {
            return Err(Error::Precondition(format!(
                "scan radius {:.3e} is outside the safe radius {:.3e}",
                r.norm(),
                radius
            )));
        }
    }
    let mut rows = Vec::with_capacity(radii.len());
    let mut center_like = true;
    for &r in radii {
        let t = trajectory(a, r, DEFAULT_REL_TOL.max(tol / 100.0), false)?;
        let displacement = t.v_end - r;
        if displacement.norm() > tol * r.norm() {
            center_like = false;
        }
        rows.push(ScanRow { r, displacement });
    }
    Ok(ScanReport { rows, center_like, tol })
}
