//! Planar polynomial vector fields around a rotation point: polar reduction
//! to a coefficient sequence on the circle, the five-parameter quadratic
//! family, the Cherkas transform to an Abel equation, and an exact verifier
//! for the composition condition on trigonometric polynomials.

use crate::funcs::{fn_add, fn_mul, series_quotient, CoeffFn, CoeffSeq, QuasiTrigPoly};
use crate::scalar::{GRat, Scalar};
use crate::Error;
use std::collections::BTreeMap;
use std::fmt;

/// Bivariate polynomial sum c_{ij} x^i y^j with exact or float coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn monomial(i: u32, j: u32, c: Scalar) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Scalar::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&(i, j), c) in &o.terms {
            r.add_term(i, j, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        BivarPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return BivarPoly::zero();
        }
        BivarPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.mul(s))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = BivarPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &o.terms {
                r.add_term(i1 + i2, j1 + j2, c1.mul(c2));
            }
        }
        r
    }

    pub fn partial_x(&self) -> Self {
        let mut r = BivarPoly::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                r.add_term(i - 1, j, c.mul(&Scalar::from_int(i as i64)));
            }
        }
        r
    }

    pub fn partial_y(&self) -> Self {
        let mut r = BivarPoly::zero();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                r.add_term(i, j - 1, c.mul(&Scalar::from_int(j as i64)));
            }
        }
        r
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).min().unwrap_or(0)
    }

    /// Some(d) when every term has total degree d (zero counts as any degree).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        if self.is_zero() {
            return Some(0);
        }
        let d = self.max_degree();
        (self.min_degree() == d).then_some(d)
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        BivarPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Evaluate a univariate polynomial (ascending coefficients) at this
    /// polynomial, by Horner's rule.
    pub fn compose_univariate(p: &[Scalar], h: &BivarPoly) -> BivarPoly {
        let mut acc = BivarPoly::zero();
        for c in p.iter().rev() {
            acc = acc.mul(h);
            acc.add_term(0, 0, c.clone());
        }
        acc
    }

    /// The restriction to the unit circle: x = cos(phi), y = sin(phi),
    /// carried exactly in the exponential basis.
    pub fn circle(&self) -> QuasiTrigPoly {
        let cos = QuasiTrigPoly::cos(1);
        let sin = QuasiTrigPoly::sin(1);
        let mut cos_pow: Vec<QuasiTrigPoly> = vec![QuasiTrigPoly::one()];
        let mut sin_pow: Vec<QuasiTrigPoly> = vec![QuasiTrigPoly::one()];
        let mut out = QuasiTrigPoly::zero();
        for (&(i, j), c) in &self.terms {
            while cos_pow.len() <= i as usize {
                cos_pow.push(cos_pow.last().unwrap().mul(&cos));
            }
            while sin_pow.len() <= j as usize {
                sin_pow.push(sin_pow.last().unwrap().mul(&sin));
            }
            out = out.add(&cos_pow[i as usize].mul(&sin_pow[j as usize]).scale(c));
        }
        out
    }

    /// Parity under y -> -y: Some(true) odd, Some(false) even, None mixed.
    pub fn y_parity(&self) -> Option<bool> {
        let mut odd = true;
        let mut even = true;
        for &(_, j) in self.terms.keys() {
            if j % 2 == 0 {
                odd = false;
            } else {
                even = false;
            }
        }
        if self.is_zero() || even {
            Some(false)
        } else if odd {
            Some(true)
        } else {
            None
        }
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, "*x^{i}")?;
            }
            if j > 0 {
                write!(f, "*y^{j}")?;
            }
        }
        Ok(())
    }
}

/// A planar system x' = -y + F(x,y), y' = x + G(x,y) with F, G starting at
/// quadratic order.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarField {
    f: BivarPoly,
    g: BivarPoly,
}

impl PlanarField {
    pub fn new(f: BivarPoly, g: BivarPoly) -> Result<Self, Error> {
        for (name, p) in [("F", &f), ("G", &g)] {
            if !p.is_zero() && p.min_degree() < 2 {
                return Err(Error::Input(format!(
                    "{name} has terms of degree < 2; the rotation part is fixed and must not be perturbed"
                )));
            }
        }
        Ok(PlanarField { f, g })
    }

    pub fn rotation() -> Self {
        PlanarField { f: BivarPoly::zero(), g: BivarPoly::zero() }
    }

    pub fn f(&self) -> &BivarPoly {
        &self.f
    }

    pub fn g(&self) -> &BivarPoly {
        &self.g
    }

    /// F odd and G even under y -> -y: the reflection symmetry that forces
    /// a center.
    pub fn is_y_symmetric(&self) -> bool {
        self.f.y_parity() == Some(true) && self.g.y_parity() == Some(false)
    }
}

/// Reduction to polar coordinates on circles of small radius: with
/// x = r cos(phi), y = r sin(phi) the system becomes
/// dr/dphi = (sum_d f_d(phi) r^d) / (1 + sum_d g_d(phi) r^{d-1}) where
/// f_d, g_d are the circle restrictions of x F_d + y G_d and x G_d - y F_d
/// for the degree-d parts. Expanding in r gives the coefficient sequence.
pub fn polar_reduce(v: &PlanarField, n: u32) -> CoeffSeq {
    let maxd = v.f.max_degree().max(v.g.max_degree());
    let mut num: Vec<CoeffFn> = Vec::new();
    let mut den: Vec<CoeffFn> = Vec::new();
    let x = BivarPoly::monomial(1, 0, Scalar::one());
    let y = BivarPoly::monomial(0, 1, Scalar::one());
    for d in 2..=maxd.max(1) {
        let fd = v.f.homogeneous_part(d);
        let gd = v.g.homogeneous_part(d);
        let radial = x.mul(&fd).add(&y.mul(&gd)).circle();
        let angular = x.mul(&gd).add(&y.mul(&fd).neg()).circle();
        // Index k = d - 1: f_d multiplies r^d = r^{k+1}, g_d multiplies r^k.
        while num.len() < (d - 1) as usize {
            num.push(CoeffFn::zero());
            den.push(CoeffFn::zero());
        }
        num[(d - 2) as usize] = CoeffFn::Trig(radial);
        den[(d - 2) as usize] = CoeffFn::Trig(angular);
    }
    CoeffSeq::new(series_quotient(&num, &den, n as usize))
}

/// The five-parameter quadratic family (indices follow the classical
/// normal form; lambda_1 is removed by rotation).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticParams {
    pub l2: Scalar,
    pub l3: Scalar,
    pub l4: Scalar,
    pub l5: Scalar,
    pub l6: Scalar,
}

impl QuadraticParams {
    pub fn new(l2: Scalar, l3: Scalar, l4: Scalar, l5: Scalar, l6: Scalar) -> Self {
        QuadraticParams { l2, l3, l4, l5, l6 }
    }
}

/// x' = -y - l3 x^2 + (2 l2 + l5) xy + l6 y^2,
/// y' = x + l2 x^2 + (2 l3 + l4) xy - l2 y^2.
pub fn dulac_field(l: &QuadraticParams) -> PlanarField {
    let two = Scalar::from_int(2);
    let mut f = BivarPoly::zero();
    f.add_term(2, 0, l.l3.neg());
    f.add_term(1, 1, two.mul(&l.l2).add(&l.l5));
    f.add_term(0, 2, l.l6.clone());
    let mut g = BivarPoly::zero();
    g.add_term(2, 0, l.l2.clone());
    g.add_term(1, 1, two.mul(&l.l3).add(&l.l4));
    g.add_term(0, 2, l.l2.neg());
    PlanarField::new(f, g).expect("quadratic terms only")
}

/// The four classical center components of the quadratic family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Component {
    LotkaVolterra,
    Symmetric,
    Hamiltonian,
    Darboux,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Component::LotkaVolterra => "lotka-volterra",
            Component::Symmetric => "symmetric",
            Component::Hamiltonian => "hamiltonian",
            Component::Darboux => "darboux",
        };
        write!(f, "{s}")
    }
}

/// Exact membership tests for the four components:
/// Lotka-Volterra l3 = l6; Symmetric l2 = l5 = 0; Hamiltonian l4 = l5 = 0;
/// Darboux l5 = l4 + 5 l3 - 5 l6 = l3 l6 - 2 l6^2 - l2^2 = 0.
pub fn dulac_component(l: &QuadraticParams) -> Vec<Component> {
    let mut out = Vec::new();
    if l.l3.sub(&l.l6).is_zero() {
        out.push(Component::LotkaVolterra);
    }
    if l.l2.is_zero() && l.l5.is_zero() {
        out.push(Component::Symmetric);
    }
    if l.l4.is_zero() && l.l5.is_zero() {
        out.push(Component::Hamiltonian);
    }
    let five = Scalar::from_int(5);
    let lin = l.l4.add(&five.mul(&l.l3)).sub(&five.mul(&l.l6));
    let quad = l.l3.mul(&l.l6).sub(&Scalar::from_int(2).mul(&l.l6).mul(&l.l6)).sub(&l.l2.mul(&l.l2));
    if l.l5.is_zero() && lin.is_zero() && quad.is_zero() {
        out.push(Component::Darboux);
    }
    out
}

/// The Abel form d(rho)/d(phi) = p rho^2 + q rho^3 of a polar quadratic
/// equation.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelPair {
    pub p: CoeffFn,
    pub q: CoeffFn,
}

impl AbelPair {
    /// Coefficient sequence (p, q) feeding the signature machinery.
    pub fn to_seq(&self) -> CoeffSeq {
        CoeffSeq::new(vec![self.p.clone(), self.q.clone()])
    }

    /// P(phi) = integral of p from 0, the first moment used downstream.
    pub fn p_integral(&self) -> CoeffFn {
        self.p.antiderivative()
    }

    /// Q(phi) = integral of q from 0.
    pub fn q_integral(&self) -> CoeffFn {
        self.q.antiderivative()
    }
}

/// The circle pair (f, g) of a purely quadratic perturbation: the polar
/// equation is dr/dphi = f r^2 / (1 + g r), with f the radial and g the
/// angular projection of the degree-2 part.
pub fn quadratic_circle_pair(v: &PlanarField) -> Result<(CoeffFn, CoeffFn), Error> {
    for p in [v.f(), v.g()] {
        if !p.is_zero() && (p.min_degree() != 2 || p.max_degree() != 2) {
            return Err(Error::Precondition(
                "the circle pair is only defined for purely quadratic perturbations".into(),
            ));
        }
    }
    let x = BivarPoly::monomial(1, 0, Scalar::one());
    let y = BivarPoly::monomial(0, 1, Scalar::one());
    let f = CoeffFn::Trig(x.mul(v.f()).add(&y.mul(v.g())).circle());
    let g = CoeffFn::Trig(x.mul(v.g()).add(&y.mul(v.f()).neg()).circle());
    Ok((f, g))
}

/// The change of unknown rho = r / (1 + g r) turns dr/dphi = f r^2 / (1 + g r)
/// into the Abel equation with p = f - g', q = -f g. The substitution is
/// regular at the origin, so the two equations have the same centers; the
/// lotka_volterra_center_survives_transform test pins that conjugacy.
pub fn cherkas(f: &CoeffFn, g: &CoeffFn) -> AbelPair {
    let p = fn_add(f, &g.derivative().neg());
    let q = fn_mul(f, g).neg();
    AbelPair { p, q }
}

/// Outcome of an exact composition-condition check.
#[derive(Clone, Debug)]
pub struct CompositionReport {
    pub ok: bool,
    /// For each target, the polynomial through q (ascending coefficients)
    /// when one exists.
    pub polys: Vec<Option<Vec<Scalar>>>,
    /// Index of the first target with no representation.
    pub failed_index: Option<usize>,
}

/// Fourier coefficients of a pure trigonometric polynomial with pi-free
/// Gaussian-rational coefficients; anything else is outside the exact
/// solver's domain.
fn fourier_map(f: &CoeffFn, what: &str) -> Result<BTreeMap<i64, GRat>, Error> {
    let q = match f {
        CoeffFn::Trig(q) => q,
        _ => {
            return Err(Error::Precondition(format!(
                "{what} must be a trigonometric polynomial (single exact piece)"
            )))
        }
    };
    let mut out = BTreeMap::new();
    for (&(p, m), c) in q.terms() {
        if p != 0 {
            return Err(Error::Precondition(format!(
                "{what} has a polynomial factor x^{p}; only pure trigonometric polynomials are supported"
            )));
        }
        let g = match c {
            Scalar::Exact(qpi) => qpi.as_grat(),
            Scalar::Float(_) => None,
        };
        match g {
            Some(g) => {
                out.insert(m, g);
            }
            None => {
                return Err(Error::Precondition(format!(
                    "{what} has a non-rational coefficient; the exact solver works over Gaussian rationals"
                )))
            }
        }
    }
    Ok(out)
}

fn fourier_degree(m: &BTreeMap<i64, GRat>) -> i64 {
    m.keys().map(|k| k.abs()).max().unwrap_or(0)
}

fn fourier_mul(a: &BTreeMap<i64, GRat>, b: &BTreeMap<i64, GRat>) -> BTreeMap<i64, GRat> {
    let mut out: BTreeMap<i64, GRat> = BTreeMap::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k = ka + kb;
            let v = ca.mul(cb);
            let entry = out.entry(k).or_insert_with(GRat::zero);
            *entry = entry.add(&v);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Exact Gaussian elimination: solve M c = rhs over the Gaussian rationals,
/// demanding consistency. Columns index candidate powers of q.
fn solve_exact(rows: &[Vec<GRat>], rhs: &[GRat]) -> Option<Vec<GRat>> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut m: Vec<Vec<GRat>> = rows.to_vec();
    let mut b: Vec<GRat> = rhs.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        b.swap(row, p);
        let inv = m[row][col].inv();
        for x in m[row].iter_mut() {
            *x = x.mul(&inv);
        }
        b[row] = b[row].mul(&inv);
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for cidx in 0..ncols {
                    let t = m[row][cidx].mul(&factor);
                    m[r][cidx] = m[r][cidx].sub(&t);
                }
                let t = b[row].mul(&factor);
                b[r] = b[r].sub(&t);
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == nrows {
            break;
        }
    }
    // Rows with all-zero coefficients must have zero right-hand side.
    for r in 0..nrows {
        if m[r].iter().all(|x| x.is_zero()) && !b[r].is_zero() {
            return None;
        }
    }
    let mut sol = vec![GRat::zero(); ncols];
    for (col, pv) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pv {
            sol[col] = b[*r].clone();
        }
    }
    Some(sol)
}

/// Decide, coefficient by coefficient, whether each target equals a
/// polynomial in q, and recover those polynomials exactly. The degree bound
/// deg p <= fourier_deg(target)/fourier_deg(q) makes the search finite.
pub fn composition_check(targets: &[CoeffFn], q: &CoeffFn) -> Result<CompositionReport, Error> {
    let qf = fourier_map(q, "q")?;
    let dq = fourier_degree(&qf);
    if dq == 0 {
        return Err(Error::Precondition(
            "q is constant; composition through a constant is degenerate".into(),
        ));
    }
    let mut polys = Vec::with_capacity(targets.len());
    let mut failed_index = None;
    for (idx, t) in targets.iter().enumerate() {
        let tf = fourier_map(t, "target")?;
        let dt = fourier_degree(&tf);
        let deg = (dt / dq) as usize;
        // Powers q^0 .. q^deg in the Fourier basis.
        let mut powers: Vec<BTreeMap<i64, GRat>> = Vec::with_capacity(deg + 1);
        let mut acc: BTreeMap<i64, GRat> = BTreeMap::new();
        acc.insert(0, GRat::one());
        powers.push(acc.clone());
        for _ in 0..deg {
            acc = fourier_mul(&acc, &qf);
            powers.push(acc.clone());
        }
        let mut modes: Vec<i64> = Vec::new();
        for p in &powers {
            modes.extend(p.keys().copied());
        }
        modes.extend(tf.keys().copied());
        modes.sort();
        modes.dedup();
        let rows: Vec<Vec<GRat>> = modes
            .iter()
            .map(|m| powers.iter().map(|p| p.get(m).cloned().unwrap_or_else(GRat::zero)).collect())
            .collect();
        let rhs: Vec<GRat> =
            modes.iter().map(|m| tf.get(m).cloned().unwrap_or_else(GRat::zero)).collect();
        match solve_exact(&rows, &rhs) {
            Some(sol) => {
                let mut coeffs: Vec<Scalar> = sol.into_iter().map(Scalar::from_grat).collect();
                while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
                    coeffs.pop();
                }
                polys.push(Some(coeffs));
            }
            None => {
                if failed_index.is_none() {
                    failed_index = Some(idx);
                }
                polys.push(None);
            }
        }
    }
    Ok(CompositionReport { ok: failed_index.is_none(), polys, failed_index })
}

/// Candidate composition witnesses from structure: the circle restriction of
/// a generating polynomial when one is known, cos(phi) for fields with the
/// y-reflection symmetry.
pub fn suggest_q(v: &PlanarField, generator: Option<&BivarPoly>) -> Vec<CoeffFn> {
    let mut out = Vec::new();
    if let Some(h) = generator {
        out.push(CoeffFn::Trig(h.circle()));
    }
    if v.is_y_symmetric() {
        out.push(CoeffFn::cos());
    }
    out
}
