//! Scalar arithmetic for the whole crate.
//!
//! Two variants, chosen at construction and propagated through every
//! operation:
//!
//! * [`Scalar::Exact`]: an element of Q(i)[pi, pi^-1], stored as a Laurent
//!   polynomial in the symbol pi with Gaussian-rational coefficients. Since
//!   pi is transcendental, such an element is zero iff every coefficient is
//!   zero, so equality of canonical forms decides equality of values.
//! * [`Scalar::Float`]: a complex double.
//!
//! Mixing an exact value with a float promotes the result to `Float`; the
//! variant tag of a result always records whether it is still exact.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Gaussian rational a + b i with arbitrary-precision parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GRat {
    pub fn zero() -> Self {
        GRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GRat { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        GRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GRat { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn new(re: BigRational, im: BigRational) -> Self {
        GRat { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &GRat) -> GRat {
        GRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &GRat) -> GRat {
        GRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn neg(&self) -> GRat {
        GRat { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, o: &GRat) -> GRat {
        GRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> GRat {
        let n = &self.re * &self.re + &self.im * &self.im;
        assert!(!n.is_zero(), "division by zero GRat");
        GRat { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn div(&self, o: &GRat) -> GRat {
        self.mul(&o.inv())
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// |re| + |im|, as f64: a cheap upper bound on the modulus.
    pub fn abs_bound(&self) -> f64 {
        self.re.abs().to_f64().unwrap_or(f64::INFINITY) + self.im.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Laurent polynomial in pi over the Gaussian rationals. Keys are pi-degrees
/// (negative allowed); zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPi {
    terms: BTreeMap<i32, GRat>,
}

impl QPi {
    pub fn zero() -> Self {
        QPi { terms: BTreeMap::new() }
    }

    pub fn from_grat(c: GRat) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(0, c);
        }
        QPi { terms: t }
    }

    /// c * pi^k.
    pub fn term(c: GRat, k: i32) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(k, c);
        }
        QPi { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &GRat)> {
        self.terms.iter()
    }

    /// The coefficient of pi^k (zero if absent).
    pub fn coeff(&self, k: i32) -> GRat {
        self.terms.get(&k).cloned().unwrap_or_else(GRat::zero)
    }

    /// Some(c) iff the value is the pi-free Gaussian rational c.
    pub fn as_grat(&self) -> Option<GRat> {
        if self.terms.is_empty() {
            return Some(GRat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&0) {
                return Some(c.clone());
            }
        }
        None
    }

    fn insert(&mut self, k: i32, c: GRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add(&self, o: &QPi) -> QPi {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.insert(*k, c.clone());
        }
        r
    }

    pub fn neg(&self) -> QPi {
        QPi { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, o: &QPi) -> QPi {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QPi) -> QPi {
        let mut r = QPi::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                r.insert(k1 + k2, c1.mul(c2));
            }
        }
        r
    }

    /// Divide by the monomial c * pi^k.
    pub fn div_term(&self, c: &GRat, k: i32) -> QPi {
        let inv = c.inv();
        QPi { terms: self.terms.iter().map(|(d, a)| (d - k, a.mul(&inv))).collect() }
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in &self.terms {
            z += c.to_complex() * std::f64::consts::PI.powi(*k);
        }
        z
    }

    /// Upper bound on the modulus of the value.
    pub fn abs_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| c.abs_bound() * 3.1416f64.powi(*k))
            .sum()
    }
}

/// A number: exact element of Q(i)[pi, pi^-1] or complex double.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(QPi),
    Float(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(QPi::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::Exact(QPi::from_grat(GRat::i()))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(QPi::from_grat(GRat::from_int(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(QPi::from_grat(GRat::from_ratio(num, den)))
    }

    pub fn from_grat(c: GRat) -> Self {
        Scalar::Exact(QPi::from_grat(c))
    }

    /// c * pi^k.
    pub fn pi_term(c: GRat, k: i32) -> Self {
        Scalar::Exact(QPi::term(c, k))
    }

    /// 2 pi as an exact value.
    pub fn two_pi() -> Self {
        Scalar::pi_term(GRat::from_int(2), 1)
    }

    pub fn from_f64(x: f64) -> Self {
        Scalar::Float(Complex64::new(x, 0.0))
    }

    pub fn from_complex(z: Complex64) -> Self {
        Scalar::Float(z)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(q) => q.to_complex(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.add(b)),
            _ => Scalar::Float(self.to_complex() + o.to_complex()),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.sub(b)),
            _ => Scalar::Float(self.to_complex() - o.to_complex()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.neg()),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.mul(b)),
            _ => Scalar::Float(self.to_complex() * o.to_complex()),
        }
    }

    /// Divide by a monomial scalar (c * pi^k, c != 0) or any nonzero float.
    /// Exact division by a multi-term exact value is unsupported and panics;
    /// nothing in the engine needs it.
    pub fn div(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                let mut it = b.terms();
                let (k, c) = it.next().expect("division by zero");
                assert!(it.next().is_none(), "exact division requires a monomial divisor");
                Scalar::Exact(a.div_term(c, *k))
            }
            _ => Scalar::Float(self.to_complex() / o.to_complex()),
        }
    }

    pub fn div_int(&self, n: i64) -> Scalar {
        self.div(&Scalar::from_int(n))
    }

    /// Upper bound on the modulus.
    pub fn abs_bound(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.abs_bound(),
            Scalar::Float(z) => z.norm(),
        }
    }

    /// Modulus as f64 (exact values go through their float image).
    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Integer power (exponent may be negative only for exact monomials or floats).
    pub fn pow(&self, e: u32) -> Scalar {
        let mut r = Scalar::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }
}

/// Render a real Laurent pi-polynomial (map degree -> rational) in the
/// canonical string form: terms like `2π^2/3`, `-π`, `5`, `π^-1/2`, joined
/// with ` + ` / ` - `. The zero value renders as `0`.
fn fmt_real_pi_poly(terms: &BTreeMap<i32, BigRational>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (k, c) in terms.iter().rev() {
        let neg = c.is_negative();
        let a = c.abs();
        let (num, den) = (a.numer().clone(), a.denom().clone());
        let mut t = String::new();
        if *k == 0 {
            t.push_str(&format!("{num}"));
            if !den.is_one() {
                t.push_str(&format!("/{den}"));
            }
        } else {
            if !num.is_one() {
                t.push_str(&format!("{num}"));
            }
            t.push('π');
            if *k != 1 {
                t.push_str(&format!("^{k}"));
            }
            if !den.is_one() {
                t.push_str(&format!("/{den}"));
            }
        }
        if first {
            if neg {
                out.push('-');
            }
            out.push_str(&t);
            first = false;
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&t);
        }
    }
    out
}

impl QPi {
    fn split_re_im(&self) -> (BTreeMap<i32, BigRational>, BTreeMap<i32, BigRational>) {
        let mut re = BTreeMap::new();
        let mut im = BTreeMap::new();
        for (k, c) in &self.terms {
            if !c.re.is_zero() {
                re.insert(*k, c.re.clone());
            }
            if !c.im.is_zero() {
                im.insert(*k, c.im.clone());
            }
        }
        (re, im)
    }

    /// Canonical string, e.g. `2π^2/3`, `1/2 + i*(π)`, `0`.
    pub fn to_canonical_string(&self) -> String {
        let (re, im) = self.split_re_im();
        if im.is_empty() {
            return fmt_real_pi_poly(&re);
        }
        let im_s = format!("i*({})", fmt_real_pi_poly(&im));
        if re.is_empty() {
            im_s
        } else {
            format!("{} + {}", fmt_real_pi_poly(&re), im_s)
        }
    }

    /// Real part as a pi-polynomial map, for serialization.
    pub fn re_poly_string(&self) -> String {
        fmt_real_pi_poly(&self.split_re_im().0)
    }

    /// Imaginary part as a pi-polynomial map, for serialization.
    pub fn im_poly_string(&self) -> String {
        fmt_real_pi_poly(&self.split_re_im().1)
    }
}

impl fmt::Display for QPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => q.fmt(f),
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", z.re)
                } else {
                    write!(f, "{}{}{}i", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs())
                }
            }
        }
    }
}

/// Parse a real pi-Laurent polynomial string: signed terms of the form
/// `num[/den]`, `[num]π[^k][/den]`, e.g. `2π^2/3`, `-π + 1/2`, `π^-1/2`.
/// `pi` is accepted as a synonym for `π`.
pub fn parse_real_pi_poly(s: &str) -> Result<BTreeMap<i32, BigRational>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty scalar string".to_string());
    }
    let mut terms: BTreeMap<i32, BigRational> = BTreeMap::new();
    // Tokenize into signed terms. A '-' or '+' that follows '^' belongs to an
    // exponent, not to a new term.
    let chars: Vec<char> = s.chars().collect();
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign = false;
    let mut started = false;
    let mut prev_caret = false;
    for &ch in &chars {
        if (ch == '+' || ch == '-') && !prev_caret && started {
            pieces.push((sign, cur.trim().to_string()));
            sign = ch == '-';
            cur = String::new();
            continue;
        }
        if ch == '+' && !started {
            continue;
        }
        if ch == '-' && !started && cur.trim().is_empty() {
            sign = !sign;
            continue;
        }
        if !ch.is_whitespace() {
            started = true;
        }
        prev_caret = ch == '^';
        cur.push(ch);
    }
    pieces.push((sign, cur.trim().to_string()));

    for (neg, t) in pieces {
        if t.is_empty() {
            return Err(format!("malformed scalar string {s:?}"));
        }
        let t = t.replace("pi", "π").replace(' ', "");
        let mut num_s;
        let (mut k, mut den_s): (i32, String) = Default::default();
        let mut rest = t.as_str();
        if let Some(pos) = rest.find('π') {
            num_s = rest[..pos].to_string();
            rest = &rest[pos + 'π'.len_utf8()..];
            k = 1;
            if let Some(r2) = rest.strip_prefix('^') {
                let end = r2
                    .char_indices()
                    .find(|(i, c)| !(c.is_ascii_digit() || (*i == 0 && *c == '-')))
                    .map(|(i, _)| i)
                    .unwrap_or(r2.len());
                k = r2[..end].parse::<i32>().map_err(|_| format!("bad exponent in {t:?}"))?;
                rest = &r2[end..];
            }
            if let Some(r2) = rest.strip_prefix('/') {
                den_s = r2.to_string();
                rest = "";
            }
            if !rest.is_empty() {
                return Err(format!("malformed term {t:?}"));
            }
        } else {
            num_s = rest.to_string();
        }
        if num_s.is_empty() {
            num_s = "1".to_string();
        }
        // The numerator part itself may be `a/b` when there is no pi factor.
        let (np, dp) = match num_s.split_once('/') {
            Some((a, b)) if den_s.is_empty() => (a.to_string(), b.to_string()),
            Some(_) => return Err(format!("malformed term {t:?}")),
            None => (num_s.clone(), String::new()),
        };
        let num: BigInt = np.parse().map_err(|_| format!("bad numerator in {t:?}"))?;
        let den: BigInt = if !den_s.is_empty() {
            den_s.parse().map_err(|_| format!("bad denominator in {t:?}"))?
        } else if !dp.is_empty() {
            dp.parse().map_err(|_| format!("bad denominator in {t:?}"))?
        } else {
            BigInt::one()
        };
        if den.is_zero() {
            return Err(format!("zero denominator in {t:?}"));
        }
        let mut r = BigRational::new(num, den);
        if neg {
            r = -r;
        }
        let e = terms.entry(k).or_insert_with(BigRational::zero);
        *e += r;
        if e.is_zero() {
            terms.remove(&k);
        }
    }
    Ok(terms)
}

/// Parse a real exact scalar string into a QPi with zero imaginary part.
pub fn parse_real_scalar(s: &str) -> Result<QPi, String> {
    let re = parse_real_pi_poly(s)?;
    let mut q = QPi::zero();
    for (k, c) in re {
        q.insert(k, GRat { re: c, im: BigRational::zero() });
    }
    Ok(q)
}

/// Parse a pair of real pi-poly strings into an exact complex scalar.
pub fn parse_re_im(re: &str, im: &str) -> Result<QPi, String> {
    let rp = parse_real_pi_poly(re)?;
    let ip = parse_real_pi_poly(im)?;
    let mut q = QPi::zero();
    for (k, c) in rp {
        q.insert(k, GRat { re: c, im: BigRational::zero() });
    }
    for (k, c) in ip {
        q.insert(k, GRat { re: BigRational::zero(), im: c });
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grat_field_ops() {
        let a = GRat::from_ratio(1, 2);
        let b = GRat::i();
        let p = a.mul(&b);
        assert_eq!(p, GRat::new(BigRational::zero(), BigRational::new(1.into(), 2.into())));
        assert_eq!(b.mul(&b), GRat::from_int(-1));
        assert_eq!(a.div(&a), GRat::one());
        let z = GRat::new(BigRational::new(3.into(), 4.into()), BigRational::new((-2).into(), 5.into()));
        assert_eq!(z.mul(&z.inv()), GRat::one());
    }

    #[test]
    fn qpi_laurent_ops() {
        let two_pi = QPi::term(GRat::from_int(2), 1);
        let sq = two_pi.mul(&two_pi);
        assert_eq!(sq, QPi::term(GRat::from_int(4), 2));
        let half_inv_pi = QPi::term(GRat::from_ratio(1, 2), -1);
        assert_eq!(two_pi.mul(&half_inv_pi), QPi::from_grat(GRat::from_int(1)));
        assert_eq!(sq.div_term(&GRat::from_int(2), 1), two_pi);
        assert!(two_pi.sub(&two_pi).is_zero());
    }

    #[test]
    fn scalar_promotion() {
        let e = Scalar::from_ratio(1, 3);
        let f = Scalar::from_f64(2.0);
        assert!(e.is_exact());
        assert!(!e.mul(&f).is_exact());
        assert!((e.mul(&f).to_complex().re - 2.0 / 3.0).abs() < 1e-15);
        assert!(e.mul(&e).is_exact());
    }

    #[test]
    fn exact_zero_is_structural() {
        let pi = Scalar::pi_term(GRat::one(), 1);
        let x = pi.mul(&Scalar::from_int(3)).sub(&pi.add(&pi).add(&pi));
        assert!(x.is_zero());
    }

    #[test]
    fn canonical_strings_round_trip() {
        let cases = ["2π^2/3", "-π", "5", "1/2", "π^-1/2", "3π + 1/2", "-2π^3/7 - 1"];
        for s in cases {
            let q = parse_real_scalar(s).unwrap();
            let back = parse_real_scalar(&q.to_canonical_string()).unwrap();
            assert_eq!(q, back, "round trip failed for {s}");
        }
        assert_eq!(parse_real_scalar("2pi").unwrap(), parse_real_scalar("2π").unwrap());
        assert_eq!(parse_real_scalar("0").unwrap(), QPi::zero());
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "two", "1/0", "π^", "1//2", "π^x"] {
            assert!(parse_real_scalar(s).is_err(), "expected error for {s:?}");
        }
    }

    #[test]
    fn float_image_of_pi() {
        let v = Scalar::two_pi().to_complex();
        assert!((v.re - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }
}
