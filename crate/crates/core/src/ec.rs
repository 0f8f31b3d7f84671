//! Elliptic curves in general Weierstrass form
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over F_q.
//!
//! The group law uses the full chord-tangent formulas, so characteristic 2
//! and 3 curves are handled without a change of model. Point sets are small
//! enough to enumerate, and the abelian group structure is recovered by brute
//! force from point orders.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::gf::{prime_factors, Fe, Field, FieldCtx, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcError {
    #[error("curve is singular (zero discriminant)")]
    Singular,
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("group of order {0} has no subgroup of index 2")]
    NoIndexTwoSubgroup(u64),
    #[error("subgroup selector {selector} out of range ({available} index-2 subgroups)")]
    SelectorOutOfRange { selector: usize, available: usize },
    #[error("no curve over F_{q} has exactly {target} points in the search space")]
    NotFound { q: u32, target: u64 },
    #[error("point count {target} lies outside the Hasse-Weil interval for q = {q}")]
    OutsideHasseInterval { q: u64, target: u64 },
    #[error("group too large for brute-force structure computation ({0} points)")]
    TooLarge(u64),
    #[error("cannot parse point {0:?}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Upper limit on group orders handled by [`GroupStructure::compute`].
pub const MAX_GROUP_ORDER: u64 = 100_000;

/// A rational point. The derived order puts `Infinity` first, then affine
/// points lexicographically by `(x, y)` in canonical element order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Point {
    Infinity,
    Affine { x: Fe, y: Fe },
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn xy(&self) -> Option<(Fe, Fe)> {
        match *self {
            Point::Infinity => None,
            Point::Affine { x, y } => Some((x, y)),
        }
    }
}

#[derive(Clone)]
pub struct Curve {
    field: Field,
    a1: Fe,
    a2: Fe,
    a3: Fe,
    a4: Fe,
    a6: Fe,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve({})", self.equation())
    }
}

impl PartialEq for Curve {
    fn eq(&self, o: &Self) -> bool {
        self.coefficients() == o.coefficients()
            && self.field.modulus() == o.field.modulus()
            && self.field.characteristic() == o.field.characteristic()
    }
}

impl Curve {
    /// Coefficients in the order `a1, a2, a3, a4, a6`.
    pub fn new(field: Field, coeffs: [Fe; 5]) -> Result<Curve, EcError> {
        for c in coeffs {
            if !field.owns(c) {
                return Err(GfError::ContextMismatch.into());
            }
        }
        let [a1, a2, a3, a4, a6] = coeffs;
        let c = Curve {
            field,
            a1,
            a2,
            a3,
            a4,
            a6,
        };
        if c.field.is_zero(c.discriminant()) {
            return Err(EcError::Singular);
        }
        Ok(c)
    }

    /// `y^2 = x^3 + a x + b`
    pub fn short(field: Field, a: Fe, b: Fe) -> Result<Curve, EcError> {
        let z = field.zero();
        Curve::new(field, [z, z, z, a, b])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coefficients(&self) -> [Fe; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6]
    }

    pub fn discriminant(&self) -> Fe {
        let f = &*self.field;
        let k = |n: i64| f.from_int(n);
        let (a1, a2, a3, a4, a6) = (self.a1, self.a2, self.a3, self.a4, self.a6);
        let b2 = f.add(f.mul(a1, a1), f.mul(k(4), a2));
        let b4 = f.add(f.mul(k(2), a4), f.mul(a1, a3));
        let b6 = f.add(f.mul(a3, a3), f.mul(k(4), a6));
        let b8 = {
            let t1 = f.mul(f.mul(a1, a1), a6);
            let t2 = f.mul(k(4), f.mul(a2, a6));
            let t3 = f.mul(a1, f.mul(a3, a4));
            let t4 = f.mul(a2, f.mul(a3, a3));
            let t5 = f.mul(a4, a4);
            f.sub(f.add(f.sub(f.add(t1, t2), t3), t4), t5)
        };
        let d1 = f.neg(f.mul(f.mul(b2, b2), b8));
        let d2 = f.mul(k(8), f.pow(b4, 3));
        let d3 = f.mul(k(27), f.mul(b6, b6));
        let d4 = f.mul(k(9), f.mul(b2, f.mul(b4, b6)));
        f.add(f.sub(f.sub(d1, d2), d3), d4)
    }

    /// `a1 x + a3`, the linear coefficient of `y` in the curve equation.
    pub fn y_linear(&self, x: Fe) -> Fe {
        let f = &*self.field;
        f.add(f.mul(self.a1, x), self.a3)
    }

    /// `x^3 + a2 x^2 + a4 x + a6`
    pub fn cubic(&self, x: Fe) -> Fe {
        let f = &*self.field;
        let x2 = f.mul(x, x);
        let t = f.add(f.mul(x2, x), f.mul(self.a2, x2));
        f.add(f.add(t, f.mul(self.a4, x)), self.a6)
    }

    pub fn contains(&self, p: &Point) -> bool {
        match *p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let f = &*self.field;
                if !f.owns(x) || !f.owns(y) {
                    return false;
                }
                let lhs = f.add(f.mul(y, y), f.mul(self.y_linear(x), y));
                lhs == self.cubic(x)
            }
        }
    }

    pub fn point(&self, x: Fe, y: Fe) -> Result<Point, EcError> {
        let p = Point::Affine { x, y };
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(EcError::NotOnCurve(self.render_point(&p)))
        }
    }

    /// `y` coordinate of the negative of an affine point: `-y - a1 x - a3`.
    pub fn conj_y(&self, x: Fe, y: Fe) -> Fe {
        let f = &*self.field;
        f.sub(f.neg(y), self.y_linear(x))
    }

    pub fn neg(&self, p: &Point) -> Point {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x,
                y: self.conj_y(x, y),
            },
        }
    }

    pub fn is_two_torsion(&self, p: &Point) -> bool {
        *p == self.neg(p)
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let f = &*self.field;
        let (x1, y1, x2, y2) = match (*p, *q) {
            (Point::Infinity, _) => return *q,
            (_, Point::Infinity) => return *p,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if x1 == x2 && f.add(f.add(y1, y2), self.y_linear(x2)) == f.zero() {
            return Point::Infinity;
        }
        let (lambda, nu) = if x1 != x2 {
            let dx = f.inv(f.sub(x2, x1)).expect("distinct x");
            let lambda = f.mul(f.sub(y2, y1), dx);
            let nu = f.mul(f.sub(f.mul(y1, x2), f.mul(y2, x1)), dx);
            (lambda, nu)
        } else {
            let k = |n: i64| f.from_int(n);
            let den = f
                .inv(f.add(f.mul(k(2), y1), self.y_linear(x1)))
                .expect("not a 2-torsion point");
            let x1sq = f.mul(x1, x1);
            let num = f.sub(
                f.add(f.add(f.mul(k(3), x1sq), f.mul(k(2), f.mul(self.a2, x1))), self.a4),
                f.mul(self.a1, y1),
            );
            let num_nu = f.sub(
                f.add(f.add(f.neg(f.mul(x1sq, x1)), f.mul(self.a4, x1)), f.mul(k(2), self.a6)),
                f.mul(self.a3, y1),
            );
            (f.mul(num, den), f.mul(num_nu, den))
        };
        let x3 = f.sub(
            f.sub(f.sub(f.add(f.mul(lambda, lambda), f.mul(self.a1, lambda)), self.a2), x1),
            x2,
        );
        let y3 = f.sub(f.sub(f.neg(f.mul(f.add(lambda, self.a1), x3)), nu), self.a3);
        Point::Affine { x: x3, y: y3 }
    }

    /// Addition that first checks both points lie on this curve.
    pub fn try_add(&self, p: &Point, q: &Point) -> Result<Point, EcError> {
        for pt in [p, q] {
            if !self.contains(pt) {
                return Err(EcError::NotOnCurve(self.render_point(pt)));
            }
        }
        Ok(self.add(p, q))
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &self.neg(q))
    }

    /// `[n]P` by double-and-add; negative `n` multiplies `-P`.
    pub fn mul(&self, n: i64, p: &Point) -> Point {
        let base = if n < 0 { self.neg(p) } else { *p };
        let mut k = n.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &b);
            }
            b = self.add(&b, &b);
            k >>= 1;
        }
        acc
    }

    /// Sum of a weighted collection of points.
    pub fn sum<'a>(&self, terms: impl IntoIterator<Item = (&'a Point, i64)>) -> Point {
        terms
            .into_iter()
            .fold(Point::Infinity, |acc, (p, n)| self.add(&acc, &self.mul(n, p)))
    }

    /// Affine `y` values over `x`, sorted.
    fn ys_over(&self, x: Fe) -> Vec<Fe> {
        let f = &*self.field;
        let u = self.y_linear(x);
        let v = self.cubic(x);
        let mut ys = if f.characteristic() == 2 {
            if f.is_zero(u) {
                vec![f.sqrt(v).expect("squaring is bijective in characteristic 2")]
            } else {
                let t = f.div(v, f.mul(u, u)).expect("u != 0");
                match f.artin_schreier_root(t) {
                    None => vec![],
                    Some(z) => vec![f.mul(u, z), f.mul(u, f.add(z, f.one()))],
                }
            }
        } else {
            let disc = f.add(f.mul(u, u), f.mul(f.from_int(4), v));
            let half = f.inv(f.from_int(2)).expect("odd characteristic");
            match f.sqrt(disc) {
                None => vec![],
                Some(r) if f.is_zero(r) => vec![f.mul(f.neg(u), half)],
                Some(r) => vec![f.mul(f.sub(r, u), half), f.mul(f.sub(f.neg(r), u), half)],
            }
        };
        ys.sort();
        ys
    }

    /// All rational points: `O` first, then lexicographic by `(x, y)`.
    pub fn points(&self) -> Vec<Point> {
        let mut out = vec![Point::Infinity];
        for x in self.field.elements() {
            out.extend(self.ys_over(x).into_iter().map(|y| Point::Affine { x, y }));
        }
        out
    }

    pub fn count_points(&self) -> u64 {
        1 + self.field.elements().map(|x| self.ys_over(x).len() as u64).sum::<u64>()
    }

    /// Points with a given `x` coordinate.
    pub fn points_over(&self, x: Fe) -> Vec<Point> {
        self.ys_over(x).into_iter().map(|y| Point::Affine { x, y }).collect()
    }

    /// Order of `p` given a multiple `n` of it (e.g. the group order).
    pub fn order_of(&self, p: &Point, n: u64) -> u64 {
        let mut ord = n;
        for l in prime_factors(n) {
            while ord.is_multiple_of(l) && self.mul((ord / l) as i64, p).is_infinity() {
                ord /= l;
            }
        }
        ord
    }

    /// Projective display `[x : y : 1]` or `[0 : 1 : 0]`.
    pub fn render_point(&self, p: &Point) -> String {
        match *p {
            Point::Infinity => "[0 : 1 : 0]".to_string(),
            Point::Affine { x, y } => {
                format!("[{} : {} : 1]", self.field.render(x), self.field.render(y))
            }
        }
    }

    /// Parse `[x : y : 1]`, `[0 : 1 : 0]`, `(x, y)` or `O`.
    pub fn parse_point(&self, s: &str) -> Result<Point, EcError> {
        let err = || EcError::Parse(s.to_string());
        let t = s.trim();
        if t == "O" || t == "inf" {
            return Ok(Point::Infinity);
        }
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .or_else(|| t.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
            .ok_or_else(err)?;
        let parts: Vec<&str> = inner.split([':', ',']).map(str::trim).collect();
        let f = &*self.field;
        let (x, y) = match parts.as_slice() {
            [x, y] => (f.parse(x)?, f.parse(y)?),
            [x, y, z] => {
                let z = f.parse(z)?;
                if f.is_zero(z) {
                    let (x, y) = (f.parse(x)?, f.parse(y)?);
                    return if f.is_zero(x) && !f.is_zero(y) {
                        Ok(Point::Infinity)
                    } else {
                        Err(err())
                    };
                }
                let zi = f.inv(z)?;
                (f.mul(f.parse(x)?, zi), f.mul(f.parse(y)?, zi))
            }
            _ => return Err(err()),
        };
        self.point(x, y)
    }

    pub fn equation(&self) -> String {
        let f = &*self.field;
        let term = |c: Fe, mono: &str| -> Option<String> {
            if f.is_zero(c) {
                None
            } else if c == f.one() && !mono.is_empty() {
                Some(mono.to_string())
            } else {
                Some(format!("{}{}", f.render(c), mono))
            }
        };
        let lhs: Vec<String> = [Some("y^2".to_string()), term(self.a1, "xy"), term(self.a3, "y")]
            .into_iter()
            .flatten()
            .collect();
        let rhs: Vec<String> = [
            Some("x^3".to_string()),
            term(self.a2, "x^2"),
            term(self.a4, "x"),
            term(self.a6, ""),
        ]
        .into_iter()
        .flatten()
        .collect();
        format!("{} = {}", lhs.join(" + "), rhs.join(" + "))
    }
}

/// `floor(sqrt(n))`
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Inclusive range of point counts allowed by `|N - (q+1)| <= floor(2 sqrt q)`.
pub fn hasse_interval(q: u64) -> (u64, u64) {
    let t = isqrt(4 * q);
    (q + 1 - t, q + 1 + t)
}

/// Largest even point count by the three-case formula: `q + 1 + 2 floor(sqrt q)`
/// for odd p, `q + 2 floor(sqrt q)` for even powers of 2 and odd powers with
/// `floor(2 sqrt q)` even, and `q + 1 + floor(2 sqrt q)` for odd powers of 2
/// with `floor(2 sqrt q)` odd.
pub fn waterhouse_max_even_n(q: u64) -> Result<u64, EcError> {
    let (p, m) = crate::gf::prime_power(q).ok_or(GfError::NotPrimePower(q))?;
    let s = isqrt(q);
    let t = isqrt(4 * q);
    Ok(if p != 2 {
        q + 1 + 2 * s
    } else if m % 2 == 0 || t.is_multiple_of(2) {
        q + 2 * s
    } else {
        q + 1 + t
    })
}

/// Whether some curve over F_q has exactly `n` points (Waterhouse's theorem).
pub fn waterhouse_admissible(q: u64, n: u64) -> bool {
    let Some((p, m)) = crate::gf::prime_power(q) else {
        return false;
    };
    let beta = q as i64 + 1 - n as i64;
    if (beta * beta) as u64 > 4 * q {
        return false;
    }
    let p = p as i64;
    if beta % p != 0 {
        return true;
    }
    let b = beta.unsigned_abs();
    if m % 2 == 0 {
        let s = isqrt(q);
        b == 2 * s || (b == s && p % 3 != 1) || (b == 0 && p % 4 != 1)
    } else {
        b == 0 || ((p == 2 || p == 3) && b * b == p as u64 * q)
    }
}

/// Largest even `n` in the Hasse interval admitted by Waterhouse's theorem.
pub fn largest_admissible_even_n(q: u64) -> Option<u64> {
    let (lo, hi) = hasse_interval(q);
    (lo..=hi).rev().find(|&n| n % 2 == 0 && waterhouse_admissible(q, n))
}

type NormalForm<'a> = Box<dyn Fn(Fe, Fe, Fe) -> Option<[Fe; 5]> + 'a>;

/// Candidate Weierstrass coefficient tuples in search order. Every curve
/// over F_q is isomorphic to one of these normal forms.
fn search_space(f: &FieldCtx) -> Vec<NormalForm<'_>> {
    let z = f.zero();
    let one = f.one();
    match f.characteristic() {
        2 => vec![
            // j != 0: y^2 + xy = x^3 + a2 x^2 + a6
            Box::new(move |a, b, c| (c == z).then_some([one, a, z, z, b])),
            // j = 0: y^2 + a3 y = x^3 + a4 x + a6
            Box::new(move |a, b, c| (a != z).then_some([z, z, a, b, c])),
        ],
        3 => vec![
            // j != 0: y^2 = x^3 + a2 x^2 + a6
            Box::new(move |a, b, c| (c == z && a != z).then_some([z, a, z, z, b])),
            // j = 0: y^2 = x^3 + a4 x + a6
            Box::new(move |a, b, c| (c == z).then_some([z, z, z, a, b])),
        ],
        _ => vec![Box::new(move |a, b, c| (c == z).then_some([z, z, z, a, b]))],
    }
}

/// First nonsingular curve (in normal-form search order) with exactly
/// `target` rational points.
pub fn search_curve(field: &Field, target: u64) -> Result<Curve, EcError> {
    let q = field.order() as u64;
    let (lo, hi) = hasse_interval(q);
    if target < lo || target > hi {
        return Err(EcError::OutsideHasseInterval { q, target });
    }
    let f = &**field;
    for family in search_space(f) {
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    let Some(coeffs) = family(a, b, c) else {
                        continue;
                    };
                    let Ok(curve) = Curve::new(field.clone(), coeffs) else {
                        continue;
                    };
                    if curve.count_points() == target {
                        return Ok(curve);
                    }
                }
            }
        }
    }
    Err(EcError::NotFound {
        q: field.order(),
        target,
    })
}

/// `E(F_q) = Z_{d1} + Z_{d2}` with explicit generators and coordinates.
#[derive(Clone, Debug)]
pub struct GroupStructure {
    curve: Curve,
    points: Vec<Point>,
    d1: u64,
    d2: u64,
    g1: Point,
    g2: Point,
    coords: HashMap<Point, (u64, u64)>,
    table: Vec<Point>,
}

impl GroupStructure {
    pub fn compute(curve: &Curve) -> Result<GroupStructure, EcError> {
        let points = curve.points();
        let n = points.len() as u64;
        if n > MAX_GROUP_ORDER {
            return Err(EcError::TooLarge(n));
        }
        let orders: Vec<u64> = points.iter().map(|p| curve.order_of(p, n)).collect();
        let d2 = *orders.iter().max().expect("O is always present");
        let g2 = points[orders.iter().position(|&o| o == d2).unwrap()];
        let d1 = n / d2;
        let cyclic2: HashSet<Point> = (0..d2).map(|j| curve.mul(j as i64, &g2)).collect();
        let g1 = if d1 == 1 {
            Point::Infinity
        } else {
            points
                .iter()
                .zip(&orders)
                .filter(|&(_, &o)| o == d1)
                .map(|(p, _)| *p)
                .find(|p| (1..d1).all(|i| !cyclic2.contains(&curve.mul(i as i64, p))))
                .ok_or_else(|| EcError::Internal("no complement to a maximal cyclic subgroup".into()))?
        };
        let mut table = Vec::with_capacity(n as usize);
        let mut coords = HashMap::with_capacity(n as usize);
        let mut row = Point::Infinity;
        for i in 0..d1 {
            let mut pt = row;
            for j in 0..d2 {
                if coords.insert(pt, (i, j)).is_some() {
                    return Err(EcError::Internal("generators do not span the group".into()));
                }
                table.push(pt);
                pt = curve.add(&pt, &g2);
            }
            row = curve.add(&row, &g1);
        }
        if !d2.is_multiple_of(d1) || !(curve.field().order() as u64 - 1).is_multiple_of(d1) {
            return Err(EcError::Internal(format!(
                "invariants Z_{d1} + Z_{d2} violate d1 | d2 or d1 | q - 1"
            )));
        }
        Ok(GroupStructure {
            curve: curve.clone(),
            points,
            d1,
            d2,
            g1,
            g2,
            coords,
            table,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn order(&self) -> u64 {
        self.d1 * self.d2
    }

    /// Invariant factors `(d1, d2)`, `d1 | d2`; `d1 = 1` for cyclic groups.
    pub fn invariants(&self) -> (u64, u64) {
        (self.d1, self.d2)
    }

    /// Generators `(g1, g2)` of orders `d1` and `d2`.
    pub fn generators(&self) -> (Point, Point) {
        (self.g1, self.g2)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn coords(&self, p: &Point) -> Option<(u64, u64)> {
        self.coords.get(p).copied()
    }

    pub fn at(&self, i: u64, j: u64) -> Point {
        self.table[((i % self.d1) * self.d2 + j % self.d2) as usize]
    }

    /// `Z_4 + Z_4` style description.
    pub fn describe(&self) -> String {
        if self.d1 == 1 {
            format!("Z_{}", self.d2)
        } else {
            format!("Z_{} + Z_{}", self.d1, self.d2)
        }
    }

    /// Index-2 subgroups as kernels of characters `(i, j) -> a i + b j mod 2`,
    /// enumerated `(a, b) = (0, 1), (1, 0), (1, 1)` where well defined.
    pub fn index2_characters(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        if self.d2.is_multiple_of(2) {
            out.push((0, 1));
        }
        if self.d1.is_multiple_of(2) {
            out.push((1, 0));
            out.push((1, 1));
        }
        out
    }

    pub fn index2_subgroups(&self) -> Vec<Subgroup> {
        self.index2_characters()
            .into_iter()
            .map(|(a, b)| {
                let members: Vec<Point> = self
                    .points
                    .iter()
                    .filter(|p| {
                        let (i, j) = self.coords[p];
                        (a * i + b * j) % 2 == 0
                    })
                    .copied()
                    .collect();
                Subgroup::from_members(members, self.order(), Some((a, b)))
            })
            .collect()
    }

    /// The `selector`-th index-2 subgroup; 0 is the kernel of `j mod 2`.
    pub fn index2_subgroup(&self, selector: usize) -> Result<Subgroup, EcError> {
        if self.order() % 2 == 1 {
            return Err(EcError::NoIndexTwoSubgroup(self.order()));
        }
        let mut all = self.index2_subgroups();
        let available = all.len();
        if selector >= available {
            return Err(EcError::SelectorOutOfRange { selector, available });
        }
        Ok(all.swap_remove(selector))
    }

    /// Subgroup generated by arbitrary points.
    pub fn generated_by(&self, gens: &[Point]) -> Result<Subgroup, EcError> {
        let mut span: HashSet<(u64, u64)> = HashSet::from([(0, 0)]);
        let mut frontier = vec![(0u64, 0u64)];
        let gen_coords: Vec<(u64, u64)> = gens
            .iter()
            .map(|g| {
                self.coords(g)
                    .ok_or_else(|| EcError::NotOnCurve(self.curve.render_point(g)))
            })
            .collect::<Result<_, _>>()?;
        while let Some((i, j)) = frontier.pop() {
            for &(gi, gj) in &gen_coords {
                let c = ((i + gi) % self.d1, (j + gj) % self.d2);
                if span.insert(c) {
                    frontier.push(c);
                }
            }
        }
        let members = self
            .points
            .iter()
            .filter(|p| span.contains(&self.coords[p]))
            .copied()
            .collect();
        Ok(Subgroup::from_members(members, self.order(), None))
    }

    /// Which canonical index-2 selector, if any, equals `h`.
    pub fn selector_of(&self, h: &Subgroup) -> Option<usize> {
        self.index2_subgroups().iter().position(|s| s.members == h.members)
    }
}

/// A subgroup listed in canonical point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<Point>,
    set: HashSet<Point>,
    index: u64,
    character: Option<(u64, u64)>,
}

impl Subgroup {
    fn from_members(members: Vec<Point>, parent_order: u64, character: Option<(u64, u64)>) -> Self {
        let index = parent_order / members.len() as u64;
        let set = members.iter().copied().collect();
        Subgroup {
            members,
            set,
            index,
            character,
        }
    }

    pub fn members(&self) -> &[Point] {
        &self.members
    }

    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.set.contains(p)
    }

    /// The defining character `(a, b)` for canonical index-2 subgroups.
    pub fn character(&self) -> Option<(u64, u64)> {
        self.character
    }

    /// Invariant factors of the subgroup itself.
    pub fn structure(&self, curve: &Curve) -> (u64, u64) {
        let n = self.order();
        let max = self.members.iter().map(|p| curve.order_of(p, n)).max().unwrap_or(1);
        (n / max, max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    fn gf8() -> Curve {
        let f = FieldCtx::new(2, 3, Some(vec![1, 1, 0, 1])).unwrap();
        let (o, z) = (f.one(), f.zero());
        Curve::new(f, [o, z, o, z, o]).unwrap()
    }

    #[test]
    fn singular_cusp_rejected() {
        let f = FieldCtx::of_order(5).unwrap();
        let z = f.zero();
        assert_eq!(Curve::short(f, z, z).unwrap_err(), EcError::Singular);
    }

    #[test]
    fn gf8_generator_has_order_14() {
        let c = gf8();
        let a = c.parse_point("[w^5 : w : 1]").unwrap();
        assert!(c.mul(14, &a).is_infinity());
        assert!(!c.mul(7, &a).is_infinity());
        assert!(!c.mul(2, &a).is_infinity());
        assert_eq!(c.count_points(), 14);
    }

    #[test]
    fn identity_inverse_and_negative_scalars() {
        let c = gf8();
        for p in c.points() {
            assert_eq!(c.add(&p, &Point::Infinity), p);
            assert!(c.add(&p, &c.neg(&p)).is_infinity());
            assert!(c.mul(0, &p).is_infinity());
            assert_eq!(c.mul(-3, &p), c.neg(&c.mul(3, &p)));
        }
    }

    #[test]
    fn off_curve_points_rejected() {
        let c = gf8();
        let f = c.field().clone();
        assert!(c.point(f.one(), f.one()).is_err());
        assert!(matches!(
            c.try_add(&Point::Affine { x: f.one(), y: f.one() }, &Point::Infinity),
            Err(EcError::NotOnCurve(_))
        ));
        assert!(c.parse_point("[0 : 1 : 0]").unwrap().is_infinity());
    }

    #[test]
    fn formula_matches_known_cases() {
        assert_eq!(waterhouse_max_even_n(8).unwrap(), 14);
        assert_eq!(waterhouse_max_even_n(9).unwrap(), 16);
        assert_eq!(waterhouse_max_even_n(49).unwrap(), 64);
        assert_eq!(waterhouse_max_even_n(7).unwrap(), 12);
        assert_eq!(waterhouse_max_even_n(4).unwrap(), 8);
        assert_eq!(waterhouse_max_even_n(16).unwrap(), 24);
        assert_eq!(waterhouse_max_even_n(32).unwrap(), 44);
        assert!(waterhouse_max_even_n(6).is_err());
    }

    #[test]
    fn admissibility_matches_exhaustive_counts() {
        // Every count realised by some curve must be admissible, and the
        // admissible even maximum must be realised.
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = FieldCtx::of_order(q).unwrap();
            let mut seen = HashSet::new();
            for coeffs in itertools::iproduct!(f.elements(), f.elements(), f.elements(), f.elements(), f.elements()) {
                let (a1, a2, a3, a4, a6) = coeffs;
                if let Ok(c) = Curve::new(f.clone(), [a1, a2, a3, a4, a6]) {
                    let n = c.count_points();
                    assert_eq!(n, c.points().len() as u64);
                    let (lo, hi) = hasse_interval(q);
                    assert!(lo <= n && n <= hi, "q={q} n={n}");
                    seen.insert(n);
                }
            }
            for n in seen.iter() {
                assert!(waterhouse_admissible(q, *n), "q={q} n={n}");
            }
            let (lo, hi) = hasse_interval(q);
            for n in lo..=hi {
                assert_eq!(seen.contains(&n), waterhouse_admissible(q, n), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn formula_is_not_always_admissible() {
        // q = 3^5: beta = -30 is divisible by 3 and not a special value.
        assert_eq!(waterhouse_max_even_n(243).unwrap(), 274);
        assert!(!waterhouse_admissible(243, 274));
        assert_eq!(largest_admissible_even_n(243), Some(272));
        for q in [4u64, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 121, 125, 128] {
            assert_eq!(largest_admissible_even_n(q), Some(waterhouse_max_even_n(q).unwrap()));
        }
    }

    #[test]
    fn search_finds_maximal_even_counts() {
        for q in [4u64, 7, 8, 9, 11, 13, 16, 25, 27, 49] {
            let f = FieldCtx::of_order(q).unwrap();
            let target = waterhouse_max_even_n(q).unwrap();
            let c = search_curve(&f, target).unwrap();
            assert_eq!(c.count_points(), target, "q={q}");
        }
        let f = FieldCtx::of_order(7).unwrap();
        assert!(matches!(
            search_curve(&f, 100),
            Err(EcError::OutsideHasseInterval { .. })
        ));
    }

    #[test]
    fn gf8_structure_and_subgroup() {
        let c = gf8();
        let g = GroupStructure::compute(&c).unwrap();
        assert_eq!(g.invariants(), (1, 14));
        assert!(c.mul(14, &g.generators().1).is_infinity());
        assert_eq!(g.index2_subgroups().len(), 1);
        let h = g.index2_subgroup(0).unwrap();
        assert_eq!(h.order(), 7);
        assert_eq!(h.index(), 2);
        let listed = [
            "[0:1:0]",
            "[w^4:1:1]",
            "[w^4:w^4:1]",
            "[w^2:w^2:1]",
            "[w:1:1]",
            "[w:w:1]",
            "[w^2:1:1]",
        ];
        for s in listed {
            assert!(h.contains(&c.parse_point(s).unwrap()), "{s}");
        }
        assert!(matches!(g.index2_subgroup(1), Err(EcError::SelectorOutOfRange { .. })));
    }

    #[test]
    fn odd_order_group_has_no_index2_subgroup() {
        let f = FieldCtx::of_order(7).unwrap();
        let c = (0..7)
            .flat_map(|a| (0..7).map(move |b| (a, b)))
            .filter_map(|(a, b)| Curve::short(f.clone(), f.from_int(a), f.from_int(b)).ok())
            .find(|c| c.count_points() % 2 == 1)
            .unwrap();
        let g = GroupStructure::compute(&c).unwrap();
        assert!(matches!(g.index2_subgroup(0), Err(EcError::NoIndexTwoSubgroup(_))));
    }
}
