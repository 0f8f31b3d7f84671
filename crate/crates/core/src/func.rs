//! The function field of an elliptic curve.
//!
//! Functions are kept as `(a(x) + b(x) y) / d(x)` with `d` monic and
//! `gcd(a, b, d) = 1`, which makes the representation unique. Valuations at
//! affine points come from the norm `N(a + by) = a^2 - ab(a1 x + a3) - b^2 F(x)`;
//! at `O` they come from weighted degrees (`x` weight 2, `y` weight 3).
//!
//! Riemann–Roch spaces are built two ways: by translating the monomial basis
//! of `L(kO)`, and by a generic linear-algebra oracle driven by local power
//! series expansions.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ec::{Curve, EcError, Point};
use crate::gf::{Fe, FieldCtx, GfError};
use crate::linalg::Matrix;
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FuncError {
    #[error("function has a pole at {0}")]
    Pole(String),
    #[error("valuation of the zero function is undefined")]
    ZeroFunction,
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("divisor has non-rational support ({0})")]
    UnsupportedDivisor(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("Riemann-Roch dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: i64, found: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Curve(#[from] EcError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// `(a(x) + b(x) y) / d(x)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    a: Poly,
    b: Poly,
    d: Poly,
}

impl RationalFunction {
    pub fn num_a(&self) -> &Poly {
        &self.a
    }

    pub fn num_b(&self) -> &Poly {
        &self.b
    }

    pub fn den(&self) -> &Poly {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Constant functions have `b = 0` and `deg a = deg d = 0`.
    pub fn is_constant(&self) -> bool {
        self.b.is_zero() && self.a.degree().unwrap_or(0) == 0 && self.d.degree() == Some(0)
    }
}

/// A divisor `sum n_P P` with nonzero coefficients only.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Divisor {
    coeffs: BTreeMap<Point, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn point(p: Point, n: i64) -> Divisor {
        let mut d = Divisor::zero();
        d.add_term(p, n);
        d
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Point, i64)>) -> Divisor {
        let mut d = Divisor::zero();
        for (p, n) in terms {
            d.add_term(p, n);
        }
        d
    }

    pub fn add_term(&mut self, p: Point, n: i64) {
        let e = self.coeffs.entry(p).or_insert(0);
        *e += n;
        if *e == 0 {
            self.coeffs.remove(&p);
        }
    }

    pub fn coeff(&self, p: &Point) -> i64 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.coeffs.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Point, i64)> {
        self.coeffs.iter().map(|(p, &n)| (p, n))
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&n| n > 0)
    }

    pub fn plus(&self, o: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, n) in o.terms() {
            d.add_term(*p, n);
        }
        d
    }

    pub fn minus(&self, o: &Divisor) -> Divisor {
        self.plus(&o.scaled(-1))
    }

    pub fn scaled(&self, k: i64) -> Divisor {
        Divisor::from_terms(self.terms().map(|(p, n)| (*p, n * k)))
    }

    /// Group-law sum `⊕ [n_P] P`.
    pub fn sum(&self, curve: &Curve) -> Point {
        curve.sum(self.terms())
    }

    pub fn render(&self, curve: &Curve) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (p, n)) in self.terms().enumerate() {
            let sign = if n < 0 { "-" } else { "+" };
            if i > 0 {
                out.push_str(&format!(" {sign} "));
            } else if n < 0 {
                out.push('-');
            }
            let m = n.unsigned_abs();
            if m != 1 {
                out.push_str(&m.to_string());
            }
            out.push_str(&curve.render_point(p));
        }
        out
    }
}

/// A divisor is principal iff it has degree 0 and its points sum to `O`.
pub fn is_principal(d: &Divisor, curve: &Curve) -> bool {
    d.degree() == 0 && d.sum(curve).is_infinity()
}

/// Ordered basis of `L(G)` with the valuation profile of each element on `Supp(G)`.
#[derive(Clone, Debug)]
pub struct RRBasis {
    pub divisor: Divisor,
    pub functions: Vec<RationalFunction>,
    pub tags: Vec<Vec<(Point, i64)>>,
}

impl RRBasis {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

/// Truncated power series in a local uniformizer.
type Series = Vec<Fe>;

/// Arithmetic and analysis of rational functions on a fixed curve.
#[derive(Clone, Debug)]
pub struct FunctionField {
    curve: Curve,
    /// `a1 x + a3`
    s: Poly,
    /// `x^3 + a2 x^2 + a4 x + a6`
    cubic: Poly,
}

impl FunctionField {
    pub fn new(curve: &Curve) -> FunctionField {
        let f = curve.field();
        let [a1, a2, a3, a4, a6] = curve.coefficients();
        FunctionField {
            curve: curve.clone(),
            s: Poly::from_coeffs(vec![a3, a1]),
            cubic: Poly::from_coeffs(vec![a6, a4, a2, f.one()]),
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    fn k(&self) -> &FieldCtx {
        self.curve.field()
    }

    /// Canonical form of `(a + b y) / d`.
    pub fn make(&self, a: Poly, b: Poly, d: Poly) -> Result<RationalFunction, FuncError> {
        let f = self.k();
        if d.is_zero() {
            return Err(FuncError::DivisionByZero);
        }
        if a.is_zero() && b.is_zero() {
            return Ok(self.zero());
        }
        let g = a.gcd(&b, f).gcd(&d, f);
        let (mut a, mut b, mut d) = if g.degree() == Some(0) {
            (a, b, d)
        } else {
            (
                a.div_exact(&g, f).expect("gcd divides"),
                b.div_exact(&g, f).expect("gcd divides"),
                d.div_exact(&g, f).expect("gcd divides"),
            )
        };
        let lc = d.lead().expect("nonzero denominator");
        if lc != f.one() {
            let inv = f.inv(lc).expect("nonzero");
            a = a.scale(inv, f);
            b = b.scale(inv, f);
            d = d.scale(inv, f);
        }
        Ok(RationalFunction { a, b, d })
    }

    fn make_unchecked(&self, a: Poly, b: Poly, d: Poly) -> RationalFunction {
        self.make(a, b, d).expect("nonzero denominator")
    }

    pub fn zero(&self) -> RationalFunction {
        RationalFunction {
            a: Poly::zero(),
            b: Poly::zero(),
            d: Poly::constant(self.k().one()),
        }
    }

    pub fn constant(&self, c: Fe) -> RationalFunction {
        self.make_unchecked(Poly::constant(c), Poly::zero(), Poly::constant(self.k().one()))
    }

    pub fn one(&self) -> RationalFunction {
        self.constant(self.k().one())
    }

    pub fn x(&self) -> RationalFunction {
        self.poly_x(Poly::x(self.k()))
    }

    pub fn y(&self) -> RationalFunction {
        let one = Poly::constant(self.k().one());
        self.make_unchecked(Poly::zero(), one.clone(), one)
    }

    /// A polynomial in `x` as a function.
    pub fn poly_x(&self, p: Poly) -> RationalFunction {
        self.make_unchecked(p, Poly::zero(), Poly::constant(self.k().one()))
    }

    /// `x^i y^j`, `j` in {0, 1}.
    pub fn monomial(&self, i: usize, j: usize) -> RationalFunction {
        let f = self.k();
        let m = Poly::monomial(f, f.one(), i);
        let one = Poly::constant(f.one());
        if j == 0 {
            self.make_unchecked(m, Poly::zero(), one)
        } else {
            self.make_unchecked(Poly::zero(), m, one)
        }
    }

    /// The monomial with pole order exactly `n` at `O` (`n != 1`).
    pub fn weierstrass_monomial(&self, n: usize) -> RationalFunction {
        assert_ne!(n, 1, "no function has a simple pole at O alone");
        if n.is_multiple_of(2) {
            self.monomial(n / 2, 0)
        } else {
            self.monomial((n - 3) / 2, 1)
        }
    }

    pub fn add(&self, u: &RationalFunction, v: &RationalFunction) -> RationalFunction {
        let f = self.k();
        if u.d == v.d {
            return self.make_unchecked(u.a.add(&v.a, f), u.b.add(&v.b, f), u.d.clone());
        }
        let a = u.a.mul(&v.d, f).add(&v.a.mul(&u.d, f), f);
        let b = u.b.mul(&v.d, f).add(&v.b.mul(&u.d, f), f);
        self.make_unchecked(a, b, u.d.mul(&v.d, f))
    }

    pub fn neg(&self, u: &RationalFunction) -> RationalFunction {
        let f = self.k();
        RationalFunction {
            a: u.a.neg(f),
            b: u.b.neg(f),
            d: u.d.clone(),
        }
    }

    pub fn sub(&self, u: &RationalFunction, v: &RationalFunction) -> RationalFunction {
        self.add(u, &self.neg(v))
    }

    pub fn scale(&self, u: &RationalFunction, c: Fe) -> RationalFunction {
        let f = self.k();
        self.make_unchecked(u.a.scale(c, f), u.b.scale(c, f), u.d.clone())
    }

    /// `(a1 + b1 y)(a2 + b2 y)` reduced with `y^2 = F - s y`.
    fn mul_parts(&self, a1: &Poly, b1: &Poly, a2: &Poly, b2: &Poly) -> (Poly, Poly) {
        let f = self.k();
        let bb = b1.mul(b2, f);
        let a = a1.mul(a2, f).add(&bb.mul(&self.cubic, f), f);
        let b = a1.mul(b2, f).add(&a2.mul(b1, f), f).sub(&bb.mul(&self.s, f), f);
        (a, b)
    }

    pub fn mul(&self, u: &RationalFunction, v: &RationalFunction) -> RationalFunction {
        let (a, b) = self.mul_parts(&u.a, &u.b, &v.a, &v.b);
        self.make_unchecked(a, b, u.d.mul(&v.d, self.k()))
    }

    /// `N(a + b y) = a^2 - a b s - b^2 F`
    pub fn norm_parts(&self, a: &Poly, b: &Poly) -> Poly {
        let f = self.k();
        a.mul(a, f)
            .sub(&a.mul(b, f).mul(&self.s, f), f)
            .sub(&b.mul(b, f).mul(&self.cubic, f), f)
    }

    /// Conjugate `a - b s - b y` of `a + b y`.
    fn conj_parts(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let f = self.k();
        (a.sub(&b.mul(&self.s, f), f), b.neg(f))
    }

    pub fn inv(&self, u: &RationalFunction) -> Result<RationalFunction, FuncError> {
        if u.is_zero() {
            return Err(FuncError::DivisionByZero);
        }
        let f = self.k();
        let (ca, cb) = self.conj_parts(&u.a, &u.b);
        let n = self.norm_parts(&u.a, &u.b);
        self.make(ca.mul(&u.d, f), cb.mul(&u.d, f), n)
    }

    pub fn div(&self, u: &RationalFunction, v: &RationalFunction) -> Result<RationalFunction, FuncError> {
        Ok(self.mul(u, &self.inv(v)?))
    }

    pub fn pow(&self, u: &RationalFunction, e: i64) -> Result<RationalFunction, FuncError> {
        let base = if e < 0 { self.inv(u)? } else { u.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    fn check_point(&self, p: &Point) -> Result<(), FuncError> {
        if self.curve.contains(p) {
            Ok(())
        } else {
            Err(EcError::NotOnCurve(self.curve.render_point(p)).into())
        }
    }

    /// `v_P(a + b y)` for a nonzero polynomial part at an affine point.
    fn val_poly_part(&self, a: &Poly, b: &Poly, x0: Fe, y0: Fe) -> i64 {
        let f = self.k();
        let p = Point::Affine { x: x0, y: y0 };
        if self.curve.is_two_torsion(&p) {
            return self.norm_parts(a, b).ord_at(x0, f) as i64;
        }
        let ybar = self.curve.conj_y(x0, y0);
        let (mut a, mut b) = (a.clone(), b.clone());
        let mut acc = 0i64;
        loop {
            let (a0, b0) = (a.eval(x0, f), b.eval(x0, f));
            if !f.is_zero(f.add(a0, f.mul(b0, y0))) {
                return acc;
            }
            if !f.is_zero(f.add(a0, f.mul(b0, ybar))) {
                return acc + self.norm_parts(&a, &b).ord_at(x0, f) as i64;
            }
            a = a.div_linear(x0, f).0;
            b = b.div_linear(x0, f).0;
            acc += 1;
        }
    }

    /// Weighted pole order of `a + b y` at `O` (negative).
    fn val_inf_poly_part(a: &Poly, b: &Poly) -> i64 {
        let va = a.degree().map(|d| -2 * d as i64);
        let vb = b.degree().map(|d| -2 * d as i64 - 3);
        match (va, vb) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => unreachable!("nonzero numerator"),
        }
    }

    pub fn valuation(&self, u: &RationalFunction, p: &Point) -> Result<i64, FuncError> {
        if u.is_zero() {
            return Err(FuncError::ZeroFunction);
        }
        self.check_point(p)?;
        Ok(match *p {
            Point::Infinity => Self::val_inf_poly_part(&u.a, &u.b) + 2 * u.d.degree().expect("nonzero") as i64,
            Point::Affine { x, y } => {
                let mult = if self.curve.is_two_torsion(p) { 2 } else { 1 };
                self.val_poly_part(&u.a, &u.b, x, y) - mult * u.d.ord_at(x, self.k()) as i64
            }
        })
    }

    pub fn evaluate(&self, u: &RationalFunction, p: &Point) -> Result<Fe, FuncError> {
        let f = self.k();
        if u.is_zero() {
            self.check_point(p)?;
            return Ok(f.zero());
        }
        let v = self.valuation(u, p)?;
        if v < 0 {
            return Err(FuncError::Pole(self.curve.render_point(p)));
        }
        if v > 0 {
            return Ok(f.zero());
        }
        let (x0, y0) = match p.xy() {
            None => {
                let la = u.a.lead().expect("v_O = 0 forces deg a = deg d");
                return Ok(f.div(la, u.d.lead().expect("nonzero"))?);
            }
            Some(xy) => xy,
        };
        let d0 = u.d.eval(x0, f);
        if !f.is_zero(d0) {
            let num = f.add(u.a.eval(x0, f), f.mul(u.b.eval(x0, f), y0));
            return Ok(f.div(num, d0)?);
        }
        let k = u.d.ord_at(x0, f);
        let dred = u.d.remove_root(x0, k, f).eval(x0, f);
        let norm = self.norm_parts(&u.a, &u.b);
        if !self.curve.is_two_torsion(p) {
            let ybar = self.curve.conj_y(x0, y0);
            let conj_val = f.add(u.a.eval(x0, f), f.mul(u.b.eval(x0, f), ybar));
            let nred = norm.remove_root(x0, k, f).eval(x0, f);
            return Ok(f.div(f.div(nred, dred)?, conj_val)?);
        }
        if f.characteristic() != 2 {
            // f = (2a - b s) / (2d) + (b / d)(y + s/2); the second term vanishes at P.
            let h = u.a.scale(f.from_int(2), f).sub(&u.b.mul(&self.s, f), f);
            let hred = h.remove_root(x0, k, f).eval(x0, f);
            return Ok(f.div(f.div(hred, dred)?, f.from_int(2))?);
        }
        // Characteristic 2: f(P)^2 = (N(u) / d^2)(P) since P = -P.
        let nred = norm.remove_root(x0, 2 * k, f).eval(x0, f);
        let sq = f.div(nred, f.mul(dred, dred))?;
        Ok(f.sqrt(sq).expect("squaring is bijective in characteristic 2"))
    }

    /// Values at a list of points; fails on the first pole.
    pub fn evaluate_all(&self, u: &RationalFunction, pts: &[Point]) -> Result<Vec<Fe>, FuncError> {
        pts.iter().map(|p| self.evaluate(u, p)).collect()
    }

    pub fn divisor_of(&self, u: &RationalFunction) -> Result<Divisor, FuncError> {
        if u.is_zero() {
            return Err(FuncError::ZeroFunction);
        }
        let f = self.k();
        let norm = self.norm_parts(&u.a, &u.b);
        let mut xs = norm.roots(f);
        xs.extend(u.d.roots(f));
        xs.sort();
        xs.dedup();
        let mut div = Divisor::zero();
        let (mut zeros_u, mut zeros_d) = (0i64, 0i64);
        for x0 in xs {
            for p in self.curve.points_over(x0) {
                let (_, y0) = p.xy().expect("affine");
                let mult = if self.curve.is_two_torsion(&p) { 2 } else { 1 };
                let vu = self.val_poly_part(&u.a, &u.b, x0, y0);
                let vd = mult * u.d.ord_at(x0, f) as i64;
                zeros_u += vu;
                zeros_d += vd;
                div.add_term(p, vu - vd);
            }
        }
        let deg_norm = norm.degree().expect("nonzero norm") as i64;
        let deg_d = 2 * u.d.degree().expect("nonzero") as i64;
        if zeros_u != deg_norm || zeros_d != deg_d {
            return Err(FuncError::UnsupportedDivisor(format!(
                "{} of {} numerator zeros and {} of {} denominator zeros are rational",
                zeros_u, deg_norm, zeros_d, deg_d
            )));
        }
        div.add_term(Point::Infinity, self.valuation(u, &Point::Infinity)?);
        Ok(div)
    }

    /// Chord, tangent or vertical line; see module docs for divisors.
    pub fn line_through(&self, p: &Point, q: &Point) -> Result<RationalFunction, FuncError> {
        self.check_point(p)?;
        self.check_point(q)?;
        let f = self.k();
        let vertical = |x0: Fe| self.poly_x(Poly::linear_root(f, x0));
        let ((x1, y1), (x2, y2)) = match (p.xy(), q.xy()) {
            (None, None) => return Err(FuncError::Degenerate("line through O and O".into())),
            (Some((x, _)), None) | (None, Some((x, _))) => return Ok(vertical(x)),
            (Some(a), Some(b)) => (a, b),
        };
        if *q == self.curve.neg(p) {
            return Ok(vertical(x1));
        }
        let [a1, a2, _, a4, _] = self.curve.coefficients();
        let lambda = if p == q {
            let num = f.sub(
                f.add(
                    f.add(f.mul(f.from_int(3), f.mul(x1, x1)), f.mul(f.from_int(2), f.mul(a2, x1))),
                    a4,
                ),
                f.mul(a1, y1),
            );
            let den = f.add(f.mul(f.from_int(2), y1), self.curve.y_linear(x1));
            f.div(num, den)?
        } else {
            f.div(f.sub(y2, y1), f.sub(x2, x1))?
        };
        // y - y1 - lambda (x - x1)
        let a = Poly::from_coeffs(vec![f.sub(f.mul(lambda, x1), y1), f.neg(lambda)]);
        Ok(self.make_unchecked(a, Poly::constant(f.one()), Poly::constant(f.one())))
    }

    /// Coordinates `(X, Y)` of `R ⊖ Q` as functions of `R`.
    pub fn translation(&self, q: &Point) -> Result<(RationalFunction, RationalFunction), FuncError> {
        self.check_point(q)?;
        let Some((xq, yq)) = self.curve.neg(q).xy() else {
            return Ok((self.x(), self.y()));
        };
        let f = self.k();
        let [a1, a2, a3, _, _] = self.curve.coefficients();
        let x = self.x();
        let y = self.y();
        let dx = self.sub(&x, &self.constant(xq));
        let lambda = self.div(&self.sub(&y, &self.constant(yq)), &dx)?;
        let nu = self.sub(&y, &self.mul(&lambda, &x));
        let xx = {
            let t = self.add(&self.mul(&lambda, &lambda), &self.scale(&lambda, a1));
            let t = self.sub(&t, &self.constant(f.add(a2, xq)));
            self.sub(&t, &x)
        };
        let yy = {
            let la = self.add(&lambda, &self.constant(a1));
            let t = self.neg(&self.mul(&la, &xx));
            self.sub(&self.sub(&t, &nu), &self.constant(a3))
        };
        Ok((xx, yy))
    }

    /// `f ∘ τ` with `τ(R) = R ⊖ Q`; `v_P(result) = v_{P ⊖ Q}(f)`.
    pub fn translate(&self, u: &RationalFunction, q: &Point) -> Result<RationalFunction, FuncError> {
        if q.is_infinity() {
            self.check_point(q)?;
            return Ok(u.clone());
        }
        let (xx, yy) = self.translation(q)?;
        self.compose(u, &xx, &yy)
    }

    /// Substitute `x -> xx`, `y -> yy`.
    fn compose(
        &self,
        u: &RationalFunction,
        xx: &RationalFunction,
        yy: &RationalFunction,
    ) -> Result<RationalFunction, FuncError> {
        let horner = |p: &Poly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(self.zero(), |acc, &c| self.add(&self.mul(&acc, xx), &self.constant(c)))
        };
        let num = self.add(&horner(&u.a), &self.mul(&horner(&u.b), yy));
        self.div(&num, &horner(&u.d))
    }

    /// Basis `{1, f_2, ..., f_k}` of `L(kQ)` with `v_Q(f_i) = -i`.
    pub fn rr_basis_kq(&self, k: usize, q: &Point) -> Result<RRBasis, FuncError> {
        if k < 2 {
            return Err(FuncError::Parameter(format!("k = {k} must be at least 2")));
        }
        self.check_point(q)?;
        let (xx, yy) = self.translation(q)?;
        let mut xpow = vec![self.one()];
        let mut functions = Vec::with_capacity(k);
        for n in std::iter::once(0).chain(2..=k) {
            let i = if n % 2 == 0 { n / 2 } else { (n - 3) / 2 };
            while xpow.len() <= i {
                let next = self.mul(xpow.last().unwrap(), &xx);
                xpow.push(next);
            }
            functions.push(if n % 2 == 0 {
                xpow[i].clone()
            } else {
                self.mul(&xpow[i], &yy)
            });
        }
        self.finish_basis(Divisor::point(*q, k as i64), functions)
    }

    /// Basis `{1, f_2, ..., f_{k-1}, g}` of `L((k-1)P + Q)` with
    /// `v_P(f_i) = -i`, `v_Q(f_i) = 0`, and `g` simple poles at `P` and `Q`.
    pub fn rr_basis_mixed(&self, k: usize, p: &Point, q: &Point) -> Result<RRBasis, FuncError> {
        if k < 2 {
            return Err(FuncError::Parameter(format!("k = {k} must be at least 2")));
        }
        if p == q {
            return Err(FuncError::Parameter("P and Q must differ".into()));
        }
        self.check_point(p)?;
        self.check_point(q)?;
        let f = self.k();
        let (xx, yy) = self.translation(p)?;
        let mut functions = vec![self.one()];
        for n in 2..k {
            let m = self.weierstrass_monomial(n);
            let mut fi = self.compose(&m, &xx, &yy)?;
            if f.is_zero(self.evaluate(&fi, q)?) {
                fi = self.add(&fi, &self.one());
            }
            functions.push(fi);
        }
        functions.push(self.simple_pair_function(p, q)?);
        let g = Divisor::from_terms([(*p, k as i64 - 1), (*q, 1)]);
        let basis = self.finish_basis(g, functions)?;
        let last = basis.functions.last().unwrap();
        if self.valuation(last, p)? != -1 || self.valuation(last, q)? != -1 {
            return Err(FuncError::Internal("g lacks simple poles at P and Q".into()));
        }
        for fi in &basis.functions[1..basis.len() - 1] {
            if self.valuation(fi, q)? != 0 {
                return Err(FuncError::Internal("f_i vanishes or has a pole at Q".into()));
            }
        }
        Ok(basis)
    }

    /// A function with divisor `R + O - P - Q`, `R = P ⊕ Q`, or another
    /// nonconstant element of `L(P + Q)` when that divisor degenerates.
    fn simple_pair_function(&self, p: &Point, q: &Point) -> Result<RationalFunction, FuncError> {
        let r = self.curve.add(p, q);
        if !(r.is_infinity() || r == *p || r == *q) {
            let num = self.line_through(&r, &self.curve.neg(&r))?;
            let den = self.line_through(p, q)?;
            return self.div(&num, &den);
        }
        let g = Divisor::from_terms([(*p, 1), (*q, 1)]);
        let space = self.rr_basis_generic(&g)?;
        space
            .functions
            .into_iter()
            .find(|h| !h.is_constant())
            .ok_or_else(|| FuncError::Internal("L(P + Q) has no nonconstant element".into()))
    }

    fn finish_basis(&self, g: Divisor, functions: Vec<RationalFunction>) -> Result<RRBasis, FuncError> {
        let mut tags = Vec::with_capacity(functions.len());
        for h in &functions {
            let mut tag = Vec::new();
            for (pt, n) in g.terms() {
                let v = self.valuation(h, pt)?;
                if v < -n {
                    return Err(FuncError::Internal(format!(
                        "basis element has pole order {} at {} beyond {}",
                        -v,
                        self.curve.render_point(pt),
                        n
                    )));
                }
                tag.push((*pt, v));
            }
            tags.push(tag);
        }
        Ok(RRBasis {
            divisor: g,
            functions,
            tags,
        })
    }

    /// Expansions of `x` and `y` in a uniformizer at `P`, to `prec` terms.
    /// The uniformizer is `x - x0` unless `P` is 2-torsion, then `y - y0`.
    pub fn local_expansion(&self, p: &Point, prec: usize) -> Result<(Series, Series), FuncError> {
        self.check_point(p)?;
        let f = self.k();
        let (x0, y0) = p
            .xy()
            .ok_or_else(|| FuncError::Parameter("local expansion at O".into()))?;
        let [a1, a2, a3, a4, a6] = self.curve.coefficients();
        let lin = |c0: Fe| {
            let mut s = vec![f.zero(); prec];
            s[0] = c0;
            if prec > 1 {
                s[1] = f.one();
            }
            s
        };
        let cst = |c: Fe| {
            let mut s = vec![f.zero(); prec];
            s[0] = c;
            s
        };
        // E(x, y) = y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6
        let eval_e = |x: &Series, y: &Series| -> Series {
            let xy = series_mul(f, x, y);
            let x2 = series_mul(f, x, x);
            let x3 = series_mul(f, &x2, x);
            let y2 = series_mul(f, y, y);
            let mut out = vec![f.zero(); prec];
            for i in 0..prec {
                let mut v = f.add(y2[i], f.mul(a1, xy[i]));
                v = f.add(v, f.mul(a3, y[i]));
                v = f.sub(v, x3[i]);
                v = f.sub(v, f.mul(a2, x2[i]));
                v = f.sub(v, f.mul(a4, x[i]));
                out[i] = v;
            }
            out[0] = f.sub(out[0], a6);
            out
        };
        let two_torsion = self.curve.is_two_torsion(p);
        let (mut x, mut y) = if two_torsion {
            (cst(x0), lin(y0))
        } else {
            (lin(x0), cst(y0))
        };
        let slope = if two_torsion {
            // dE/dx at P
            let t = f.add(
                f.add(f.mul(f.from_int(3), f.mul(x0, x0)), f.mul(f.from_int(2), f.mul(a2, x0))),
                a4,
            );
            f.sub(f.mul(a1, y0), t)
        } else {
            f.add(f.mul(f.from_int(2), y0), self.curve.y_linear(x0))
        };
        let inv = f.inv(slope).map_err(|_| FuncError::Internal("singular point".into()))?;
        for _ in 0..prec {
            let e = eval_e(&x, &y);
            let target = if two_torsion { &mut x } else { &mut y };
            for i in 0..prec {
                target[i] = f.sub(target[i], f.mul(e[i], inv));
            }
        }
        debug_assert!(eval_e(&x, &y).iter().all(|&c| f.is_zero(c)));
        Ok((x, y))
    }

    /// `L(G)` by linear algebra on monomials over a common denominator,
    /// constrained by local expansions. Independent of translation.
    pub fn rr_basis_generic(&self, g: &Divisor) -> Result<RRBasis, FuncError> {
        let f = self.k();
        for p in g.support() {
            self.check_point(p)?;
        }
        // Denominator (x - x0)^e clearing every affine pole allowed by G.
        let mut exps: BTreeMap<Fe, i64> = BTreeMap::new();
        for (p, n) in g.terms() {
            if let (Some((x0, _)), true) = (p.xy(), n > 0) {
                let mult = if self.curve.is_two_torsion(p) { 2 } else { 1 };
                let e = (n + mult - 1) / mult;
                let slot = exps.entry(x0).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        let mut den = Poly::constant(f.one());
        for (&x0, &e) in &exps {
            den = den.mul(&Poly::linear_root(f, x0).pow(e as u32, f), f);
        }
        let weight = g.coeff(&Point::Infinity) + 2 * den.degree().unwrap_or(0) as i64;
        if weight < 0 {
            return self.finish_basis(g.clone(), Vec::new());
        }
        let monos: Vec<(usize, usize)> = (0..=weight as usize)
            .filter(|&n| n != 1)
            .map(|n| if n % 2 == 0 { (n / 2, 0) } else { ((n - 3) / 2, 1) })
            .collect();
        // Required vanishing order of the numerator h at each affine point.
        let mut required: BTreeMap<Point, i64> = BTreeMap::new();
        for &x0 in exps.keys() {
            for p in self.curve.points_over(x0) {
                let mult = if self.curve.is_two_torsion(&p) { 2 } else { 1 };
                required.insert(p, mult * exps[&x0] - g.coeff(&p));
            }
        }
        for (p, n) in g.terms() {
            if n < 0 && !p.is_infinity() {
                required.entry(*p).or_insert(-n);
            }
        }
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        for (p, &r) in &required {
            if r <= 0 {
                continue;
            }
            let prec = r as usize;
            let (xs, ys) = self.local_expansion(p, prec)?;
            let mut xpow = vec![{
                let mut one = vec![f.zero(); prec];
                one[0] = f.one();
                one
            }];
            let cols: Vec<Series> = monos
                .iter()
                .map(|&(i, j)| {
                    while xpow.len() <= i {
                        let next = series_mul(f, xpow.last().unwrap(), &xs);
                        xpow.push(next);
                    }
                    if j == 0 {
                        xpow[i].clone()
                    } else {
                        series_mul(f, &xpow[i], &ys)
                    }
                })
                .collect();
            for t in 0..prec {
                rows.push(cols.iter().map(|c| c[t]).collect());
            }
        }
        let kernel = if rows.is_empty() {
            Matrix::identity(f_field(self), monos.len()).row_vecs()
        } else {
            Matrix::from_rows(f_field(self), rows).nullspace()
        };
        let functions: Vec<RationalFunction> = kernel
            .iter()
            .map(|v| {
                let mut a = vec![f.zero(); monos.len()];
                let mut b = vec![f.zero(); monos.len()];
                for (&(i, j), &c) in monos.iter().zip(v) {
                    if j == 0 {
                        a[i] = c;
                    } else {
                        b[i] = c;
                    }
                }
                self.make_unchecked(Poly::from_coeffs(a), Poly::from_coeffs(b), den.clone())
            })
            .collect();
        let deg = g.degree();
        if deg >= 1 && functions.len() as i64 != deg {
            return Err(FuncError::DimensionMismatch {
                expected: deg,
                found: functions.len(),
            });
        }
        self.finish_basis(g.clone(), functions)
    }

    /// Evaluation matrix of a basis at the given points.
    pub fn evaluation_matrix(&self, basis: &[RationalFunction], pts: &[Point]) -> Result<Matrix, FuncError> {
        let rows = basis
            .iter()
            .map(|h| self.evaluate_all(h, pts))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_rows(f_field(self), rows))
    }

    /// Human-readable form such as `y/(x + 1)`.
    pub fn render(&self, u: &RationalFunction) -> String {
        let f = self.k();
        let mut terms: Vec<(usize, String)> = Vec::new();
        for (i, &c) in u.a.coeffs().iter().enumerate() {
            if !f.is_zero(c) {
                terms.push((2 * i, term(f, c, i, false)));
            }
        }
        for (i, &c) in u.b.coeffs().iter().enumerate() {
            if !f.is_zero(c) {
                terms.push((2 * i + 3, term(f, c, i, true)));
            }
        }
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        let num = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.iter().map(|t| t.1.as_str()).collect::<Vec<_>>().join(" + ")
        };
        if u.d.degree() == Some(0) {
            return num;
        }
        let num = if terms.len() > 1 { format!("({num})") } else { num };
        format!("{num}/({})", u.d.render(f, "x"))
    }
}

fn f_field(ff: &FunctionField) -> &crate::gf::Field {
    ff.curve.field()
}

fn term(f: &FieldCtx, c: Fe, i: usize, with_y: bool) -> String {
    let mut mono = match i {
        0 => String::new(),
        1 => "x".to_string(),
        _ => format!("x^{i}"),
    };
    if with_y {
        mono.push('y');
    }
    if mono.is_empty() {
        f.render(c)
    } else if c == f.one() {
        mono
    } else {
        format!("{}{}", f.render(c), mono)
    }
}

fn series_mul(f: &FieldCtx, a: &Series, b: &Series) -> Series {
    let n = a.len();
    let mut out = vec![f.zero(); n];
    for (i, &x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().take(n - i).enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}
