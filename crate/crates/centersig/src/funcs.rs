//! Coefficient functions on the circle (0, 2pi].
//!
//! Three closed classes, all with the operations the integral engine needs
//! (pointwise product, antiderivative vanishing at 0, evaluation):
//!
//! * [`QuasiTrigPoly`]: finite sums c * x^p * e^{i m x} with scalar
//!   coefficients. Closed under product, derivative and antiderivative;
//!   antiderivatives evaluate exactly at rational multiples of 2pi whose
//!   frequencies keep e^{2 pi i m q} inside {1, i, -1, -i}.
//! * [`PiecewiseTrig`]: finitely many quasi-trig pieces on left-open,
//!   right-closed subintervals. Polynomial pieces are the common case; the
//!   extra generality keeps path concatenations exact.
//! * [`SampledFn`]: values on a uniform grid over (0, 2pi], with cumulative
//!   trapezoid antiderivatives (global error O(h^2)).
//!
//! Mixing classes promotes toward the weaker one: quasi-trig into piecewise,
//! anything into sampled. Promotions never fail.

use crate::scalar::{GRat, Scalar};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
/// Default uniform grid size for sampled functions.
pub const DEFAULT_GRID: usize = 4096;
/// Smallest accepted grid.
pub const MIN_GRID: usize = 64;

pub type Frac = BigRational;

pub fn frac(num: i64, den: i64) -> Frac {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Finite sum of terms c * x^p * e^{i m x}, keyed by (p, m).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct QuasiTrigPoly {
    terms: BTreeMap<(u32, i64), Scalar>,
}

impl QuasiTrigPoly {
    pub fn zero() -> Self {
        QuasiTrigPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        let mut q = QuasiTrigPoly::zero();
        q.add_term(0, 0, c);
        q
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    /// x^p.
    pub fn x_pow(p: u32) -> Self {
        let mut q = QuasiTrigPoly::zero();
        q.add_term(p, 0, Scalar::one());
        q
    }

    /// e^{i m x}.
    pub fn exp_im(m: i64) -> Self {
        let mut q = QuasiTrigPoly::zero();
        q.add_term(0, m, Scalar::one());
        q
    }

    /// sin(k x) = -i/2 e^{ikx} + i/2 e^{-ikx}.
    pub fn sin(k: i64) -> Self {
        let mut q = QuasiTrigPoly::zero();
        let half_i = Scalar::i().div_int(2);
        q.add_term(0, k, half_i.neg());
        q.add_term(0, -k, half_i);
        q
    }

    /// cos(k x) = 1/2 e^{ikx} + 1/2 e^{-ikx}.
    pub fn cos(k: i64) -> Self {
        let mut q = QuasiTrigPoly::zero();
        let half = Scalar::from_ratio(1, 2);
        q.add_term(0, k, half.clone());
        q.add_term(0, -k, half);
        q
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, i64), &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, p: u32, m: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(p, m)) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&(p, m));
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert((p, m), c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for ((p, m), c) in &o.terms {
            r.add_term(*p, *m, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        QuasiTrigPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        let mut r = Self::zero();
        for ((p, m), c) in &self.terms {
            r.add_term(*p, *m, c.mul(s));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for ((p1, m1), c1) in &self.terms {
            for ((p2, m2), c2) in &o.terms {
                r.add_term(p1 + p2, m1 + m2, c1.mul(c2));
            }
        }
        r
    }

    /// d/dx. Term c x^p e^{imx} maps to c p x^{p-1} e^{imx} + c i m x^p e^{imx}.
    pub fn derivative(&self) -> Self {
        let mut r = Self::zero();
        for ((p, m), c) in &self.terms {
            if *p > 0 {
                r.add_term(p - 1, *m, c.mul(&Scalar::from_int(*p as i64)));
            }
            if *m != 0 {
                let im = Scalar::i().mul(&Scalar::from_int(*m));
                r.add_term(*p, *m, c.mul(&im));
            }
        }
        r
    }

    /// Antiderivative F with F(0) = 0.
    pub fn antiderivative(&self) -> Self {
        let mut r = Self::zero();
        for ((p, m), c) in &self.terms {
            if *m == 0 {
                r.add_term(p + 1, 0, c.div_int((*p as i64) + 1));
            } else {
                // Repeated integration by parts:
                //   int x^p e^{imx} = e^{imx} sum_{j=0..p} (-1)^j p!/(p-j)! x^{p-j} / (im)^{j+1}
                let im = Scalar::i().mul(&Scalar::from_int(*m));
                let mut falling = BigInt::one();
                let mut im_pow = im.clone();
                for j in 0..=*p {
                    if j > 0 {
                        falling *= BigInt::from((*p - j + 1) as i64);
                        im_pow = im_pow.mul(&im);
                    }
                    let mut coef = c
                        .mul(&Scalar::from_grat(GRat {
                            re: BigRational::from_integer(falling.clone()),
                            im: BigRational::zero(),
                        }))
                        .div(&im_pow);
                    if j % 2 == 1 {
                        coef = coef.neg();
                    }
                    r.add_term(p - j, *m, coef.clone());
                    if p - j == 0 {
                        // Enforce F(0) = 0 by cancelling the constant term.
                        r.add_term(0, 0, coef.neg());
                    }
                }
            }
        }
        r
    }

    pub fn eval_f64(&self, x: f64) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for ((p, m), c) in &self.terms {
            let rot = Complex64::cis((*m as f64) * x);
            z += c.to_complex() * x.powi(*p as i32) * rot;
        }
        z
    }

    /// Exact value at x = 2 pi q. Requires e^{2 pi i m q} to be a fourth root
    /// of unity for every frequency m present, i.e. 4 m q integral; returns
    /// None otherwise.
    pub fn eval_exact(&self, q: &Frac) -> Option<Scalar> {
        let mut acc = Scalar::zero();
        for ((p, m), c) in &self.terms {
            let t = Frac::from_integer(BigInt::from(4 * *m)) * q;
            if !t.is_integer() {
                return None;
            }
            let k = (t.to_integer() % BigInt::from(4) + BigInt::from(4)) % BigInt::from(4);
            let root = match k.to_i64().unwrap() {
                0 => Scalar::one(),
                1 => Scalar::i(),
                2 => Scalar::from_int(-1),
                _ => Scalar::i().neg(),
            };
            // (2 pi q)^p = (2q)^p pi^p
            let two_q = q * BigRational::from_integer(BigInt::from(2));
            let mut pow = BigRational::one();
            for _ in 0..*p {
                pow *= &two_q;
            }
            let xpow = Scalar::pi_term(GRat { re: pow, im: BigRational::zero() }, *p as i32);
            acc = acc.add(&c.mul(&root).mul(&xpow));
        }
        Some(acc)
    }

    /// Substitute x -> a x + 2 pi k (a nonzero integer, k integer). Closed
    /// because e^{2 pi i m k} = 1 while powers expand binomially.
    pub fn subst_affine(&self, a: i64, k: i64) -> Self {
        assert!(a != 0, "degenerate substitution");
        let mut r = Self::zero();
        for ((p, m), c) in &self.terms {
            for j in 0..=*p {
                let binom = num_integer::binomial(BigInt::from(*p), BigInt::from(j));
                // a^j x^j (2 pi k)^{p-j}
                let mut coef_rat = BigRational::from_integer(binom);
                coef_rat *= BigRational::from_integer(BigInt::from(a).pow(j));
                coef_rat *= BigRational::from_integer(BigInt::from(2 * k).pow(p - j));
                let coef = Scalar::pi_term(
                    GRat { re: coef_rat, im: BigRational::zero() },
                    (*p - j) as i32,
                );
                r.add_term(j, m * a, c.mul(&coef));
            }
        }
        r
    }

    /// Sum of |c| (2 pi)^p over all terms: an upper bound for sup |f| on (0, 2pi].
    pub fn sup_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|((p, _), c)| c.abs_bound() * TWO_PI.powi(*p as i32))
            .sum()
    }

    pub fn max_abs_freq(&self) -> i64 {
        self.terms.keys().map(|(_, m)| m.abs()).max().unwrap_or(0)
    }

    pub fn max_x_pow(&self) -> u32 {
        self.terms.keys().map(|(p, _)| *p).max().unwrap_or(0)
    }

    /// True when every scalar coefficient is exact.
    pub fn is_exact(&self) -> bool {
        self.terms.values().all(|c| c.is_exact())
    }

    pub fn to_float(&self) -> Self {
        QuasiTrigPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, Scalar::from_complex(c.to_complex())))
                .collect(),
        }
    }
}

impl fmt::Display for QuasiTrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((p, m), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if *p > 0 {
                write!(f, "·x^{p}")?;
            }
            if *m != 0 {
                write!(f, "·e^{{{m}ix}}")?;
            }
        }
        Ok(())
    }
}

/// Quasi-trig pieces on ((b_{j-1}, b_j] * 2pi) with 0 = b_0 < b_1 < ... < b_n = 1.
/// `breaks[j]` stores b_{j+1} as a fraction of 2 pi.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseTrig {
    breaks: Vec<Frac>,
    pieces: Vec<QuasiTrigPoly>,
}

impl PiecewiseTrig {
    pub fn new(breaks: Vec<Frac>, pieces: Vec<QuasiTrigPoly>) -> Result<Self, String> {
        if breaks.len() != pieces.len() || breaks.is_empty() {
            return Err("piecewise function needs one break per piece".into());
        }
        let one = Frac::one();
        let zero = Frac::zero();
        let mut prev = zero;
        for b in &breaks {
            if *b <= prev || *b > one {
                return Err("breakpoints must increase strictly within (0, 2π]".into());
            }
            prev = b.clone();
        }
        if *breaks.last().unwrap() != one {
            return Err("last breakpoint must be 2π".into());
        }
        Ok(PiecewiseTrig { breaks, pieces })
    }

    pub fn single(piece: QuasiTrigPoly) -> Self {
        PiecewiseTrig { breaks: vec![Frac::one()], pieces: vec![piece] }
    }

    pub fn breaks(&self) -> &[Frac] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[QuasiTrigPoly] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.is_zero())
    }

    /// Merge the breakpoints of both operands so pieces align.
    fn refine_with(&self, o: &Self) -> (Vec<Frac>, Vec<(QuasiTrigPoly, QuasiTrigPoly)>) {
        let mut merged: Vec<Frac> = Vec::new();
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.breaks.len() || j < o.breaks.len() {
            let next = match (self.breaks.get(i), o.breaks.get(j)) {
                (Some(a), Some(b)) => {
                    if a < b {
                        i += 1;
                        a.clone()
                    } else if b < a {
                        j += 1;
                        b.clone()
                    } else {
                        i += 1;
                        j += 1;
                        a.clone()
                    }
                }
                (Some(a), None) => {
                    i += 1;
                    a.clone()
                }
                (None, Some(b)) => {
                    j += 1;
                    b.clone()
                }
                (None, None) => unreachable!(),
            };
            merged.push(next);
        }
        let mut pairs = Vec::with_capacity(merged.len());
        for b in &merged {
            let pi = self.breaks.iter().position(|x| x >= b).unwrap();
            let pj = o.breaks.iter().position(|x| x >= b).unwrap();
            pairs.push((self.pieces[pi].clone(), o.pieces[pj].clone()));
        }
        (merged, pairs)
    }

    pub fn add(&self, o: &Self) -> Self {
        let (breaks, pairs) = self.refine_with(o);
        let pieces = pairs.iter().map(|(a, b)| a.add(b)).collect();
        PiecewiseTrig { breaks, pieces }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (breaks, pairs) = self.refine_with(o);
        let pieces = pairs.iter().map(|(a, b)| a.mul(b)).collect();
        PiecewiseTrig { breaks, pieces }
    }

    pub fn neg(&self) -> Self {
        PiecewiseTrig {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        PiecewiseTrig {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(s)).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        PiecewiseTrig {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p.derivative()).collect(),
        }
    }

    /// Piecewise antiderivative, continuous with F(0) = 0. Needs exact
    /// evaluation at the interior breakpoints; None when a breakpoint falls
    /// outside the fourth-root-of-unity reach of some piece (the caller then
    /// falls back to the sampled representation).
    pub fn antiderivative(&self) -> Option<Self> {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut carry = Scalar::zero();
        let mut prev_break = Frac::zero();
        for (j, piece) in self.pieces.iter().enumerate() {
            let a = piece.antiderivative();
            let at_left = a.eval_exact(&prev_break)?;
            let mut adjusted = a.clone();
            adjusted.add_term(0, 0, carry.sub(&at_left));
            if j + 1 < self.pieces.len() {
                let b = &self.breaks[j];
                let at_right = a.eval_exact(b)?;
                carry = carry.add(&at_right.sub(&at_left));
                prev_break = b.clone();
            }
            pieces.push(adjusted);
        }
        Some(PiecewiseTrig { breaks: self.breaks.clone(), pieces })
    }

    /// Value at x in [0, 2pi] without periodic reduction; x = 0 takes the
    /// right-hand limit.
    pub fn eval_raw(&self, x: f64) -> Complex64 {
        let q = x / TWO_PI;
        let idx = self
            .breaks
            .iter()
            .position(|b| q <= b.to_f64().unwrap_or(1.0) + 1e-15)
            .unwrap_or(self.breaks.len() - 1);
        self.pieces[idx].eval_f64(x)
    }

    pub fn eval_exact(&self, q: &Frac) -> Option<Scalar> {
        let idx = if q.is_zero() {
            0
        } else {
            self.breaks.iter().position(|b| q <= b).unwrap_or(self.breaks.len() - 1)
        };
        self.pieces[idx].eval_exact(q)
    }

    pub fn sup_bound(&self) -> f64 {
        self.pieces.iter().map(|p| p.sup_bound()).fold(0.0, f64::max)
    }

    pub fn is_exact(&self) -> bool {
        self.pieces.iter().all(|p| p.is_exact())
    }

    /// True when every piece is a plain polynomial in x (no oscillatory part).
    pub fn is_polynomial(&self) -> bool {
        self.pieces.iter().all(|p| p.max_abs_freq() == 0)
    }
}

/// Uniform grid over (0, 2pi]: values[j] = f((j+1) h), h = 2pi/n, plus the
/// right-hand limit at 0 for integration starts.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFn {
    values: Vec<Complex64>,
    left: Complex64,
}

impl SampledFn {
    pub fn new(values: Vec<Complex64>, left: Complex64) -> Result<Self, String> {
        if values.len() < MIN_GRID {
            return Err(format!("sampled grid must have at least {MIN_GRID} points"));
        }
        Ok(SampledFn { values, left })
    }

    /// Periodic grid function: the value at 0 is taken from the value at 2pi.
    pub fn periodic(values: Vec<Complex64>) -> Result<Self, String> {
        let left = *values.last().ok_or("empty grid")?;
        Self::new(values, left)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn left(&self) -> Complex64 {
        self.left
    }

    pub fn h(&self) -> f64 {
        TWO_PI / self.values.len() as f64
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    fn zip(&self, o: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let (a, b) = if self.len() == o.len() {
            (self.clone(), o.clone())
        } else if self.len() > o.len() {
            (self.clone(), o.resample(self.len()))
        } else {
            (self.resample(o.len()), o.clone())
        };
        SampledFn {
            values: a.values.iter().zip(&b.values).map(|(x, y)| f(*x, *y)).collect(),
            left: f(a.left, b.left),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        SampledFn { values: self.values.iter().map(|v| -v).collect(), left: -self.left }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        SampledFn { values: self.values.iter().map(|v| v * s).collect(), left: self.left * s }
    }

    pub fn resample(&self, n: usize) -> Self {
        let h = TWO_PI / n as f64;
        let values = (0..n).map(|j| self.eval_raw((j + 1) as f64 * h)).collect();
        SampledFn { values, left: self.left }
    }

    /// Cumulative trapezoid antiderivative; F(0) = 0.
    pub fn antiderivative(&self) -> Self {
        let h = self.h();
        let mut values = Vec::with_capacity(self.values.len());
        let mut acc = Complex64::new(0.0, 0.0);
        let mut prev = self.left;
        for v in &self.values {
            acc += (prev + v) * 0.5 * h;
            values.push(acc);
            prev = *v;
        }
        SampledFn { values, left: Complex64::new(0.0, 0.0) }
    }

    /// Central-difference derivative on the periodic grid.
    pub fn derivative_periodic(&self) -> Self {
        let n = self.values.len();
        let h = self.h();
        let at = |j: isize| -> Complex64 {
            let k = j.rem_euclid(n as isize) as usize;
            self.values[k]
        };
        let values: Vec<Complex64> =
            (0..n as isize).map(|j| (at(j + 1) - at(j - 1)) / (2.0 * h)).collect();
        SampledFn { left: *values.last().unwrap(), values }
    }

    /// Linear interpolation on [0, 2pi], no periodic reduction.
    pub fn eval_raw(&self, x: f64) -> Complex64 {
        let n = self.values.len();
        let h = self.h();
        if x <= 0.0 {
            return self.left;
        }
        if x >= TWO_PI - 1e-12 {
            return self.values[n - 1];
        }
        let k = (x / h).floor() as usize;
        let k = k.min(n - 1);
        let lo = if k == 0 { self.left } else { self.values[k - 1] };
        let hi = self.values[k.min(n - 1)];
        let t = (x - k as f64 * h) / h;
        lo + (hi - lo) * t
    }

    pub fn sup_bound(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(self.left.norm(), f64::max)
    }
}

/// A coefficient function in one of the three classes.
#[derive(Clone, Debug, PartialEq)]
pub enum CoeffFn {
    Trig(QuasiTrigPoly),
    Pw(PiecewiseTrig),
    Sampled(SampledFn),
}

impl CoeffFn {
    pub fn zero() -> Self {
        CoeffFn::Trig(QuasiTrigPoly::zero())
    }

    pub fn constant(c: Scalar) -> Self {
        CoeffFn::Trig(QuasiTrigPoly::constant(c))
    }

    pub fn sin() -> Self {
        CoeffFn::Trig(QuasiTrigPoly::sin(1))
    }

    pub fn cos() -> Self {
        CoeffFn::Trig(QuasiTrigPoly::cos(1))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CoeffFn::Trig(q) => q.is_zero(),
            CoeffFn::Pw(p) => p.is_zero(),
            CoeffFn::Sampled(s) => s.is_zero(),
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self, CoeffFn::Sampled(_))
    }

    pub fn to_sampled(&self, n: usize) -> SampledFn {
        match self {
            CoeffFn::Sampled(s) => {
                if s.len() == n {
                    s.clone()
                } else {
                    s.resample(n)
                }
            }
            _ => {
                let h = TWO_PI / n as f64;
                let values = (0..n).map(|j| self.eval_raw((j + 1) as f64 * h)).collect();
                SampledFn { values, left: self.eval_raw(0.0) }
            }
        }
    }

    fn to_pw(&self) -> PiecewiseTrig {
        match self {
            CoeffFn::Trig(q) => PiecewiseTrig::single(q.clone()),
            CoeffFn::Pw(p) => p.clone(),
            CoeffFn::Sampled(_) => unreachable!("sampled handled before piecewise promotion"),
        }
    }

    fn simplify(pw: PiecewiseTrig) -> CoeffFn {
        if pw.pieces().len() == 1 {
            CoeffFn::Trig(pw.pieces()[0].clone())
        } else {
            CoeffFn::Pw(pw)
        }
    }
}

/// Pointwise product with class promotion.
pub fn fn_mul(f: &CoeffFn, g: &CoeffFn) -> CoeffFn {
    match (f, g) {
        (CoeffFn::Sampled(a), b) => CoeffFn::Sampled(a.mul(&b.to_sampled(a.len()))),
        (a, CoeffFn::Sampled(b)) => CoeffFn::Sampled(a.to_sampled(b.len()).mul(b)),
        (CoeffFn::Trig(a), CoeffFn::Trig(b)) => CoeffFn::Trig(a.mul(b)),
        (a, b) => CoeffFn::simplify(a.to_pw().mul(&b.to_pw())),
    }
}

/// Pointwise sum with class promotion.
pub fn fn_add(f: &CoeffFn, g: &CoeffFn) -> CoeffFn {
    match (f, g) {
        (CoeffFn::Sampled(a), b) => CoeffFn::Sampled(a.add(&b.to_sampled(a.len()))),
        (a, CoeffFn::Sampled(b)) => CoeffFn::Sampled(a.to_sampled(b.len()).add(b)),
        (CoeffFn::Trig(a), CoeffFn::Trig(b)) => CoeffFn::Trig(a.add(b)),
        (a, b) => CoeffFn::simplify(a.to_pw().add(&b.to_pw())),
    }
}

/// Coefficient of t^{i+1}, i = 1..=n, in the quotient of function-coefficient
/// series (sum_k num[k-1] t^{k+1}) / (1 + sum_k den[k-1] t^k), computed by
/// truncated multiplicative inversion of the denominator.
pub(crate) fn series_quotient(num: &[CoeffFn], den: &[CoeffFn], n: usize) -> Vec<CoeffFn> {
    let d = |k: usize| -> CoeffFn {
        if k >= 1 && k <= den.len() { den[k - 1].clone() } else { CoeffFn::zero() }
    };
    // inv[m] is the t^m coefficient of (1 + sum den_k t^k)^{-1}.
    let mut inv: Vec<CoeffFn> = vec![CoeffFn::constant(Scalar::one())];
    for m in 1..n {
        let mut acc = CoeffFn::zero();
        for j in 1..=m {
            let dj = d(j);
            if !dj.is_zero() && !inv[m - j].is_zero() {
                acc = fn_add(&acc, &fn_mul(&dj, &inv[m - j]));
            }
        }
        inv.push(acc.neg());
    }
    (1..=n)
        .map(|i| {
            let mut acc = CoeffFn::zero();
            for j in 1..=i.min(num.len()) {
                if !num[j - 1].is_zero() && !inv[i - j].is_zero() {
                    acc = fn_add(&acc, &fn_mul(&num[j - 1], &inv[i - j]));
                }
            }
            acc
        })
        .collect()
}

impl CoeffFn {
    pub fn neg(&self) -> Self {
        match self {
            CoeffFn::Trig(q) => CoeffFn::Trig(q.neg()),
            CoeffFn::Pw(p) => CoeffFn::Pw(p.neg()),
            CoeffFn::Sampled(s) => CoeffFn::Sampled(s.neg()),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        match self {
            CoeffFn::Trig(q) => CoeffFn::Trig(q.scale(s)),
            CoeffFn::Pw(p) => CoeffFn::Pw(p.scale(s)),
            CoeffFn::Sampled(sf) => CoeffFn::Sampled(sf.scale(s.to_complex())),
        }
    }

    /// Antiderivative with F(0) = 0. A piecewise function whose interior
    /// breakpoints cannot be evaluated exactly degrades to the sampled class.
    pub fn antiderivative(&self) -> Self {
        match self {
            CoeffFn::Trig(q) => CoeffFn::Trig(q.antiderivative()),
            CoeffFn::Pw(p) => match p.antiderivative() {
                Some(a) => CoeffFn::Pw(a),
                None => CoeffFn::Sampled(self.to_sampled(DEFAULT_GRID).antiderivative()),
            },
            CoeffFn::Sampled(s) => CoeffFn::Sampled(s.antiderivative()),
        }
    }

    pub fn derivative(&self) -> Self {
        match self {
            CoeffFn::Trig(q) => CoeffFn::Trig(q.derivative()),
            CoeffFn::Pw(p) => CoeffFn::Pw(p.derivative()),
            CoeffFn::Sampled(s) => CoeffFn::Sampled(s.derivative_periodic()),
        }
    }

    /// Value at x in [0, 2pi] without periodic reduction (antiderivatives are
    /// honest functions on the closed interval, not periodic ones).
    pub fn eval_raw(&self, x: f64) -> Complex64 {
        match self {
            CoeffFn::Trig(q) => q.eval_f64(x),
            CoeffFn::Pw(p) => p.eval_raw(x),
            CoeffFn::Sampled(s) => s.eval_raw(x),
        }
    }

    /// Periodic evaluation: x reduced mod 2pi into (0, 2pi].
    pub fn eval(&self, x: f64) -> Complex64 {
        let mut r = x.rem_euclid(TWO_PI);
        if r == 0.0 {
            r = TWO_PI;
        }
        self.eval_raw(r)
    }

    /// Exact value at 2pi (grid right end for sampled functions).
    pub fn value_at_2pi(&self) -> Scalar {
        match self {
            CoeffFn::Trig(q) => q
                .eval_exact(&Frac::one())
                .expect("2π is always reachable"),
            CoeffFn::Pw(p) => p.eval_exact(&Frac::one()).expect("2π is always reachable"),
            CoeffFn::Sampled(s) => Scalar::from_complex(*s.values().last().unwrap()),
        }
    }

    /// Exact right-hand limit at 0.
    pub fn value_at_0(&self) -> Scalar {
        match self {
            CoeffFn::Trig(q) => q.eval_exact(&Frac::zero()).expect("0 is always reachable"),
            CoeffFn::Pw(p) => p.eval_exact(&Frac::zero()).expect("0 is always reachable"),
            CoeffFn::Sampled(s) => Scalar::from_complex(s.left()),
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            CoeffFn::Trig(q) => q.sup_bound(),
            CoeffFn::Pw(p) => p.sup_bound(),
            CoeffFn::Sampled(s) => s.sup_bound(),
        }
    }

    /// Breakpoints (as fractions of 2pi) where smoothness may fail; the ODE
    /// driver restarts integration there.
    pub fn breakpoints(&self) -> Vec<Frac> {
        match self {
            CoeffFn::Pw(p) => p.breaks().to_vec(),
            _ => vec![],
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            CoeffFn::Trig(q) => q.is_exact(),
            CoeffFn::Pw(p) => p.is_exact(),
            CoeffFn::Sampled(_) => false,
        }
    }
}

/// Mean-free test: the antiderivative returns to 0 at 2pi. Exact classes are
/// decided exactly; floats and grids use a tolerance scaled by the sup bound.
pub fn mean_free(f: &CoeffFn) -> bool {
    let v = f.antiderivative().value_at_2pi();
    match v {
        Scalar::Exact(q) => q.is_zero(),
        Scalar::Float(z) => {
            let scale = (f.sup_bound() * TWO_PI).max(1.0);
            let tol = match f {
                CoeffFn::Sampled(s) => {
                    let h = s.h();
                    (10.0 * h * h).max(1e-10)
                }
                _ => 1e-10,
            };
            z.norm() <= tol * scale
        }
    }
}

/// A coefficient sequence a_1, a_2, ... (finitely many nonzero) together with
/// a certified bound l with sup |a_i| <= l^i.
#[derive(Clone, Debug)]
pub struct CoeffSeq {
    a: Vec<CoeffFn>,
    bound: f64,
}

impl CoeffSeq {
    /// Build from a_1.. list, trimming trailing zeros and certifying the bound.
    pub fn new(mut a: Vec<CoeffFn>) -> Self {
        while a.last().map(|f| f.is_zero()).unwrap_or(false) {
            a.pop();
        }
        let mut bound: f64 = 0.0;
        for (idx, f) in a.iter().enumerate() {
            let i = (idx + 1) as f64;
            let s = f.sup_bound();
            if s > 0.0 {
                bound = bound.max(s.powf(1.0 / i));
            }
        }
        CoeffSeq { a, bound }
    }

    /// Build with a caller-supplied bound; rejected if some sup |a_i| exceeds l^i.
    pub fn with_bound(a: Vec<CoeffFn>, bound: f64) -> Result<Self, String> {
        let s = CoeffSeq::new(a);
        if bound <= 0.0 && !s.a.is_empty() {
            return Err("bound must be positive".into());
        }
        for (idx, f) in s.a.iter().enumerate() {
            let i = (idx + 1) as i32;
            if f.sup_bound() > bound.powi(i) * (1.0 + 1e-9) + 1e-12 {
                return Err(format!(
                    "sup |a_{}| = {} exceeds bound^{} = {}",
                    idx + 1,
                    f.sup_bound(),
                    i,
                    bound.powi(i)
                ));
            }
        }
        Ok(CoeffSeq { a: s.a, bound })
    }

    pub fn zero() -> Self {
        CoeffSeq { a: vec![], bound: 0.0 }
    }

    /// Attach a bound certified by the caller's own argument (used by path
    /// operations whose bound transformation is known in closed form and may
    /// be tighter than the l1 overestimate of `with_bound`).
    pub(crate) fn with_bound_unchecked(mut a: Vec<CoeffFn>, bound: f64) -> Self {
        while a.last().map(|f| f.is_zero()).unwrap_or(false) {
            a.pop();
        }
        CoeffSeq { a, bound }
    }

    /// a_i, 1-based; zero beyond the stored prefix.
    pub fn get(&self, i: usize) -> Option<&CoeffFn> {
        if i == 0 {
            return None;
        }
        self.a.get(i - 1).filter(|f| !f.is_zero())
    }

    pub fn coeffs(&self) -> &[CoeffFn] {
        &self.a
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Indices i with a_i not identically zero, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.a
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn is_zero_seq(&self) -> bool {
        self.a.iter().all(|f| f.is_zero())
    }

    pub fn has_sampled(&self) -> bool {
        self.a.iter().any(|f| f.is_sampled())
    }

    pub fn is_exact(&self) -> bool {
        self.a.iter().all(|f| f.is_exact())
    }

    /// Smallest grid among sampled coefficients, if any.
    pub fn grid(&self) -> Option<usize> {
        self.a
            .iter()
            .filter_map(|f| match f {
                CoeffFn::Sampled(s) => Some(s.len()),
                _ => None,
            })
            .min()
    }

    /// Union of the coefficient breakpoints, for integrator restarts.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut qs: Vec<Frac> = Vec::new();
        for f in &self.a {
            for b in f.breakpoints() {
                if !qs.contains(&b) {
                    qs.push(b);
                }
            }
        }
        qs.sort();
        qs.iter().map(|q| q.to_f64().unwrap_or(1.0) * TWO_PI).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn product_of_conjugate_exponentials_is_one() {
        let f = QuasiTrigPoly::exp_im(1);
        let g = QuasiTrigPoly::exp_im(-1);
        assert_eq!(f.mul(&g), QuasiTrigPoly::one());
    }

    #[test]
    fn x_times_x_is_x_squared() {
        let x = QuasiTrigPoly::x_pow(1);
        assert_eq!(x.mul(&x), QuasiTrigPoly::x_pow(2));
    }

    #[test]
    fn sin_times_cos_is_half_sin_2x() {
        let p = QuasiTrigPoly::sin(1).mul(&QuasiTrigPoly::cos(1));
        let expected = QuasiTrigPoly::sin(2).scale(&s(1, 2));
        assert_eq!(p, expected);
    }

    #[test]
    fn antiderivative_of_constant() {
        let f = CoeffFn::constant(Scalar::one());
        let a = f.antiderivative();
        assert_eq!(a.value_at_2pi(), Scalar::two_pi());
        assert!(a.value_at_0().is_zero());
    }

    #[test]
    fn antiderivative_of_sin_is_one_minus_cos() {
        let a = QuasiTrigPoly::sin(1).antiderivative();
        let expected = QuasiTrigPoly::one().add(&QuasiTrigPoly::cos(1).neg());
        assert_eq!(a, expected);
        assert!(a.eval_exact(&Frac::one()).unwrap().is_zero());
    }

    #[test]
    fn antiderivative_of_x_exp_ix() {
        // F(x) = (-ix + 1) e^{ix} - 1, checked structurally and by derivative.
        let f = QuasiTrigPoly::x_pow(1).mul(&QuasiTrigPoly::exp_im(1));
        let a = f.antiderivative();
        let mut expected = QuasiTrigPoly::zero();
        expected.add_term(1, 1, Scalar::i().neg());
        expected.add_term(0, 1, Scalar::one());
        expected.add_term(0, 0, Scalar::from_int(-1));
        assert_eq!(a, expected);
        assert_eq!(a.derivative(), f);
    }

    #[test]
    fn derivative_undoes_antiderivative() {
        let mut f = QuasiTrigPoly::zero();
        f.add_term(2, -3, s(5, 7));
        f.add_term(1, 0, Scalar::i());
        f.add_term(0, 2, s(-1, 2));
        assert_eq!(f.antiderivative().derivative(), f);
        assert!(f.antiderivative().eval_exact(&Frac::zero()).unwrap().is_zero());
    }

    #[test]
    fn eval_reduces_periodically() {
        let c = CoeffFn::cos();
        let v = c.eval(std::f64::consts::PI);
        assert!((v.re + 1.0).abs() < 1e-14 && v.im.abs() < 1e-15);
        let w = c.eval(TWO_PI + std::f64::consts::FRAC_PI_2);
        assert!(w.re.abs() < 1e-14);
    }

    #[test]
    fn piecewise_eval_takes_left_closed_pieces() {
        let pw = PiecewiseTrig::new(
            vec![frac(1, 2), frac(1, 1)],
            vec![QuasiTrigPoly::one(), QuasiTrigPoly::zero()],
        )
        .unwrap();
        let f = CoeffFn::Pw(pw);
        assert!((f.eval(std::f64::consts::PI).re - 1.0).abs() < 1e-15);
        assert!(f.eval(std::f64::consts::PI + 1e-6).norm() < 1e-15);
    }

    #[test]
    fn piecewise_antiderivative_is_continuous() {
        let pw = PiecewiseTrig::new(
            vec![frac(1, 2), frac(1, 1)],
            vec![QuasiTrigPoly::one(), QuasiTrigPoly::zero()],
        )
        .unwrap();
        let a = CoeffFn::Pw(pw).antiderivative();
        // F = x on (0, pi], constant pi afterwards.
        let end = a.value_at_2pi();
        assert_eq!(end, Scalar::pi_term(GRat::from_int(1), 1));
        let mid = a.eval_raw(std::f64::consts::PI);
        let just_after = a.eval_raw(std::f64::consts::PI + 1e-9);
        assert!((mid - just_after).norm() < 1e-8);
    }

    #[test]
    fn mean_free_examples() {
        assert!(mean_free(&CoeffFn::sin()));
        assert!(!mean_free(&CoeffFn::constant(Scalar::one())));
        let f = fn_add(&CoeffFn::constant(Scalar::one()), &CoeffFn::Trig(QuasiTrigPoly::cos(3)));
        assert!(!mean_free(&f));
    }

    #[test]
    fn sampled_trapezoid_accuracy() {
        let f = CoeffFn::sin().to_sampled(DEFAULT_GRID);
        let a = f.antiderivative();
        // One full period of sin integrates to 0; half period to 2.
        assert!(a.values().last().unwrap().norm() < 1e-9);
        let mid = a.eval_raw(std::f64::consts::PI);
        assert!((mid.re - 2.0).abs() < 1e-5, "got {mid}");
    }

    #[test]
    fn sampled_promotion_matches_pointwise_product() {
        let t = CoeffFn::cos();
        let sfn = CoeffFn::Sampled(CoeffFn::sin().to_sampled(256));
        let p = fn_mul(&t, &sfn);
        match &p {
            CoeffFn::Sampled(s) => {
                let x = 1.7f64;
                let want = x.cos() * x.sin();
                // Interpolation error only; grid points are exact products.
                assert!((p.eval(x).re - want).abs() < 1e-3);
                assert_eq!(s.len(), 256);
            }
            _ => panic!("expected sampled result"),
        }
    }

    #[test]
    fn exact_and_float_twins_agree() {
        let mut exact = QuasiTrigPoly::zero();
        exact.add_term(1, 2, s(3, 4));
        exact.add_term(0, -1, Scalar::i());
        let float = exact.to_float();
        let a_e = exact.antiderivative();
        let a_f = float.antiderivative();
        for &x in &[0.3, 1.1, 2.9, 5.5] {
            let d = (a_e.eval_f64(x) - a_f.eval_f64(x)).norm();
            assert!(d < 1e-12, "mismatch at {x}: {d}");
        }
    }

    #[test]
    fn affine_substitution_matches_numeric() {
        let mut f = QuasiTrigPoly::zero();
        f.add_term(2, 1, s(1, 3));
        f.add_term(1, -2, Scalar::i());
        // x -> 2x - 2pi
        let g = f.subst_affine(2, -1);
        for &x in &[0.4, 2.0, 3.0] {
            let want = f.eval_f64(2.0 * x - TWO_PI);
            let got = g.eval_f64(x);
            assert!((want - got).norm() < 1e-10, "at {x}");
        }
        // x -> 2pi - x
        let h = f.subst_affine(-1, 1);
        for &x in &[0.4, 2.0, 6.0] {
            let want = f.eval_f64(TWO_PI - x);
            let got = h.eval_f64(x);
            assert!((want - got).norm() < 1e-10, "at {x}");
        }
    }

    #[test]
    fn coeff_seq_bound_certification() {
        let a = CoeffSeq::new(vec![CoeffFn::sin(), CoeffFn::constant(s(4, 1))]);
        assert!(a.bound() >= 2.0 - 1e-12);
        assert!(CoeffSeq::with_bound(vec![CoeffFn::constant(s(3, 1))], 2.0).is_err());
        assert!(CoeffSeq::with_bound(vec![CoeffFn::constant(s(3, 1))], 3.0).is_ok());
    }

    #[test]
    fn coeff_seq_support_and_trim() {
        let a = CoeffSeq::new(vec![
            CoeffFn::zero(),
            CoeffFn::sin(),
            CoeffFn::zero(),
        ]);
        assert_eq!(a.support(), vec![2]);
        assert_eq!(a.coeffs().len(), 2);
        assert!(CoeffSeq::zero().is_zero_seq());
    }
}
