//! Finite fields F_{p^m} for small orders.
//!
//! Elements are stored as coefficient vectors in the polynomial basis
//! `1, x, ..., x^{m-1}` modulo a monic irreducible polynomial, packed into
//! a single integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. The integer order
//! of this packing is the canonical element order used everywhere else.
//!
//! A log/exp table relative to a primitive element `w` backs the discrete
//! log and the `w^i` display notation. Fields of order at most 256 also cache
//! full addition and multiplication tables derived from polynomial arithmetic.

pub(crate) mod fp_poly;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order accepted.
pub const MAX_ORDER: u64 = 1 << 16;

const TABLE_LIMIT: u32 = 256;
const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported limit")]
    TooLarge(u64),
    #[error("modulus must be monic of degree {0}")]
    BadModulus(u32),
    #[error("modulus {modulus} is reducible: {factor} divides it")]
    Reducible { modulus: String, factor: String },
    #[error("{0} is not a primitive element")]
    NotPrimitive(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete log of zero is undefined")]
    LogOfZero,
    #[error("elements belong to different fields")]
    ContextMismatch,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

/// An element of some [`FieldCtx`]. Plain data; all arithmetic goes
/// through the owning context.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Fe {
    rep: u32,
    tag: u32,
}

impl Fe {
    /// Packed polynomial-basis representation.
    pub fn rep(self) -> u32 {
        self.rep
    }
}

pub type Field = Arc<FieldCtx>;

/// Immutable description of F_{p^m} plus its lookup tables.
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    tag: u32,
    prim: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_tab: Option<Vec<u16>>,
    mul_tab: Option<Vec<u16>>,
    // odd p: a square root of each square; p = 2: the unique square root
    sqrt_tab: Vec<u32>,
    // p = 2 only: smallest z with z^2 + z = v
    as_tab: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus_string())
            .field("w", &self.prim)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Decompose `q = p^m`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn fnv(words: impl IntoIterator<Item = u32>) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(0x0100_0193);
        }
    }
    h
}

impl FieldCtx {
    /// Build F_{p^m}. Without a modulus, the smallest monic irreducible
    /// (by integer value of its lower coefficients) is used. The primitive
    /// element `w` is the smallest element of full multiplicative order.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Field, GfError> {
        Self::build(p, m, modulus, None)
    }

    /// Like [`FieldCtx::new`] but with `w` given by its coefficient vector.
    pub fn with_generator(p: u32, m: u32, modulus: Option<Vec<u32>>, generator: &[u32]) -> Result<Field, GfError> {
        Self::build(p, m, modulus, Some(generator.to_vec()))
    }

    /// Field of order `q` with the default modulus.
    pub fn of_order(q: u64) -> Result<Field, GfError> {
        let (p, m) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p, m, None)
    }

    fn build(p: u32, m: u32, modulus: Option<Vec<u32>>, generator: Option<Vec<u32>>) -> Result<Field, GfError> {
        if !is_prime(p as u64) {
            return Err(GfError::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER {
            return Err(GfError::TooLarge(q64));
        }
        let q = q64 as u32;
        let modulus = match modulus {
            Some(f) => {
                let f = fp_poly::trim(f.into_iter().map(|c| c % p).collect());
                if f.len() != m as usize + 1 || f[m as usize] != 1 {
                    return Err(GfError::BadModulus(m));
                }
                if !fp_poly::is_irreducible(&f, p) {
                    let factor = fp_poly::smallest_factor(&f, p).expect("reducible polynomial has a small factor");
                    return Err(GfError::Reducible {
                        modulus: fp_poly::render(&f),
                        factor: fp_poly::render(&factor),
                    });
                }
                f
            }
            None => (0..q as u64)
                .map(|low| {
                    let mut f = fp_poly::digits(low, p, m as usize);
                    f.push(1);
                    f
                })
                .find(|f| fp_poly::is_irreducible(f, p))
                .expect("an irreducible polynomial of every degree exists"),
        };
        let tag = fnv([p, m].into_iter().chain(modulus.iter().copied()));
        let mut ctx = FieldCtx {
            p,
            m,
            q,
            modulus,
            tag,
            prim: 0,
            exp: Vec::new(),
            log: Vec::new(),
            add_tab: None,
            mul_tab: None,
            sqrt_tab: Vec::new(),
            as_tab: Vec::new(),
        };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = ctx.add_poly(a, b) as u16;
                    mul[(a * q + b) as usize] = ctx.mul_poly(a, b) as u16;
                }
            }
            ctx.add_tab = Some(add);
            ctx.mul_tab = Some(mul);
        }
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let is_primitive = |c: &FieldCtx, g: u32| {
            g != 0 && c.pow_raw(g, order) == 1 && factors.iter().all(|&l| c.pow_raw(g, order / l) != 1)
        };
        ctx.prim = match generator {
            Some(coeffs) => {
                let g = ctx.pack(&coeffs);
                if !is_primitive(&ctx, g) {
                    return Err(GfError::NotPrimitive(fp_poly::render(&fp_poly::trim(coeffs))));
                }
                g
            }
            None => (1..q)
                .find(|&g| is_primitive(&ctx, g))
                .expect("the multiplicative group is cyclic"),
        };
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NONE; q as usize];
        let mut cur = 1u32;
        for i in 0..order as u32 {
            exp.push(cur);
            log[cur as usize] = i;
            cur = ctx.mul_raw(cur, ctx.prim);
        }
        ctx.exp = exp;
        ctx.log = log;

        let mut sqrt_tab = vec![NONE; q as usize];
        for r in (0..q).rev() {
            sqrt_tab[ctx.mul_raw(r, r) as usize] = r;
        }
        ctx.sqrt_tab = sqrt_tab;
        if p == 2 {
            let mut as_tab = vec![NONE; q as usize];
            for z in (0..q).rev() {
                let v = ctx.add_raw(ctx.mul_raw(z, z), z);
                as_tab[v as usize] = z;
            }
            ctx.as_tab = as_tab;
        }
        Ok(Arc::new(ctx))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        fp_poly::render(&self.modulus)
    }

    /// Parse a modulus written like `x^2+6x+3` over F_p.
    pub fn parse_modulus(s: &str, p: u32) -> Result<Vec<u32>, GfError> {
        fp_poly::parse(s, p).ok_or_else(|| GfError::Parse(s.to_string()))
    }

    fn pack(&self, coeffs: &[u32]) -> u32 {
        coeffs
            .iter()
            .take(self.m as usize)
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p)
    }

    fn unpack(&self, mut rep: u32, out: &mut [u32]) {
        for slot in out.iter_mut().take(self.m as usize) {
            *slot = rep % self.p;
            rep /= self.p;
        }
    }

    fn add_poly(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let m = self.m as usize;
        let p = self.p as u64;
        let mut da = [0u32; 16];
        let mut db = [0u32; 16];
        self.unpack(a, &mut da);
        self.unpack(b, &mut db);
        let mut prod = [0u64; 32];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..=m {
                let t = c * self.modulus[j] as u64 % p;
                prod[i - m + j] = (prod[i - m + j] + p - t) % p;
            }
        }
        let out: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
        self.pack(&out)
    }

    #[inline]
    fn add_raw(&self, a: u32, b: u32) -> u32 {
        match &self.add_tab {
            Some(t) => t[(a * self.q + b) as usize] as u32,
            None => self.add_poly(a, b),
        }
    }

    #[inline]
    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match &self.mul_tab {
            Some(t) => t[(a * self.q + b) as usize] as u32,
            None => self.mul_poly(a, b),
        }
    }

    fn neg_raw(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * scale;
            a /= self.p;
            scale *= self.p;
        }
        out
    }

    fn pow_raw(&self, mut b: u32, mut e: u64) -> u32 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_raw(r, b);
            }
            b = self.mul_raw(b, b);
            e >>= 1;
        }
        r
    }

    #[inline]
    fn fe(&self, rep: u32) -> Fe {
        Fe { rep, tag: self.tag }
    }

    #[inline]
    fn check(&self, a: Fe) {
        debug_assert_eq!(a.tag, self.tag, "element from a different field");
    }

    pub fn owns(&self, a: Fe) -> bool {
        a.tag == self.tag && a.rep < self.q
    }

    pub fn zero(&self) -> Fe {
        self.fe(0)
    }

    pub fn one(&self) -> Fe {
        self.fe(1)
    }

    /// The designated primitive element `w`.
    pub fn generator(&self) -> Fe {
        self.fe(self.prim)
    }

    /// Element from its packed representation.
    pub fn from_rep(&self, rep: u32) -> Option<Fe> {
        (rep < self.q).then(|| self.fe(rep))
    }

    /// Element from polynomial-basis coefficients, constant term first.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Fe {
        self.fe(self.pack(coeffs))
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let mut out = vec![0; self.m as usize];
        self.unpack(a.rep, &mut out);
        out
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        self.fe(n.rem_euclid(self.p as i64) as u32)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone + '_ {
        (0..self.q).map(|r| self.fe(r))
    }

    pub fn is_zero(&self, a: Fe) -> bool {
        a.rep == 0
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.check(a);
        self.check(b);
        self.fe(self.add_raw(a.rep, b.rep))
    }

    pub fn neg(&self, a: Fe) -> Fe {
        self.check(a);
        self.fe(self.neg_raw(a.rep))
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.check(a);
        self.check(b);
        self.fe(self.add_raw(a.rep, self.neg_raw(b.rep)))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.check(a);
        self.check(b);
        self.fe(self.mul_raw(a.rep, b.rep))
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, GfError> {
        self.check(a);
        if a.rep == 0 {
            return Err(GfError::DivisionByZero);
        }
        let l = self.log[a.rep as usize];
        let order = self.q - 1;
        Ok(self.fe(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        self.check(a);
        self.fe(self.pow_raw(a.rep, e))
    }

    /// Power with a signed exponent; negative exponents need `a != 0`.
    pub fn pow_signed(&self, a: Fe, e: i64) -> Result<Fe, GfError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// Context-checked variants for callers mixing elements of several fields.
    pub fn checked_add(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        self.same(a)?;
        self.same(b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_mul(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        self.same(a)?;
        self.same(b)?;
        Ok(self.mul(a, b))
    }

    pub fn checked_inv(&self, a: Fe) -> Result<Fe, GfError> {
        self.same(a)?;
        self.inv(a)
    }

    fn same(&self, a: Fe) -> Result<(), GfError> {
        if self.owns(a) {
            Ok(())
        } else {
            Err(GfError::ContextMismatch)
        }
    }

    /// `i` with `w^i = a`, `0 <= i < q - 1`.
    pub fn dlog(&self, a: Fe) -> Result<u32, GfError> {
        self.check(a);
        if a.rep == 0 {
            return Err(GfError::LogOfZero);
        }
        Ok(self.log[a.rep as usize])
    }

    /// `w^i` for any integer `i`.
    pub fn w_pow(&self, i: i64) -> Fe {
        let order = (self.q - 1) as i64;
        self.fe(self.exp[i.rem_euclid(order) as usize])
    }

    /// A square root if one exists (the smallest one in odd characteristic).
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        self.check(a);
        let r = self.sqrt_tab[a.rep as usize];
        (r != NONE).then(|| self.fe(r))
    }

    /// Characteristic 2 only: the smallest `z` with `z^2 + z = v`.
    pub fn artin_schreier_root(&self, v: Fe) -> Option<Fe> {
        self.check(v);
        assert_eq!(self.p, 2, "Artin-Schreier roots are a characteristic-2 tool");
        let r = self.as_tab[v.rep as usize];
        (r != NONE).then(|| self.fe(r))
    }

    pub fn in_prime_subfield(&self, a: Fe) -> bool {
        a.rep < self.p
    }

    /// Display notation: prime-subfield elements as integers, everything
    /// else as a power of `w`.
    pub fn render(&self, a: Fe) -> String {
        self.check(a);
        if a.rep < self.p {
            return a.rep.to_string();
        }
        match self.log[a.rep as usize] {
            1 => "w".to_string(),
            i => format!("w^{i}"),
        }
    }

    /// Inverse of [`FieldCtx::render`]; also accepts `w^{i}`, the compact
    /// `wi`, any exponent and negative integers.
    pub fn parse(&self, s: &str) -> Result<Fe, GfError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || GfError::Parse(s.to_string());
        if t == "w" {
            return Ok(self.generator());
        }
        if let Some(e) = t.strip_prefix("w^").or_else(|| t.strip_prefix('w')) {
            let e = e.trim_start_matches('{').trim_end_matches('}');
            let i: i64 = e.parse().map_err(|_| err())?;
            return Ok(self.w_pow(i));
        }
        let n: i64 = t.parse().map_err(|_| err())?;
        if n >= self.p as i64 {
            return Err(err());
        }
        Ok(self.from_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f8() -> Field {
        FieldCtx::new(2, 3, Some(vec![1, 1, 0, 1])).unwrap()
    }

    #[test]
    fn fixture_moduli_build_and_x_is_primitive() {
        for (p, m, modulus) in [(2, 3, vec![1, 1, 0, 1]), (3, 2, vec![2, 2, 1]), (7, 2, vec![3, 6, 1])] {
            let f = FieldCtx::new(p, m, Some(modulus)).unwrap();
            assert_eq!(f.generator(), f.from_coeffs(&[0, 1]), "p={p}");
        }
    }

    #[test]
    fn f8_w_cubed_is_w_plus_one() {
        let f = f8();
        let w = f.generator();
        let w2 = f.mul(w, w);
        assert_eq!(f.mul(w, w2), f.add(w, f.one()));
        assert_eq!(f.render(f.mul(w, w2)), "w^3");
        assert_eq!(f.coeffs(f.w_pow(3)), vec![1, 1, 0]);
    }

    #[test]
    fn reducible_modulus_reports_factor() {
        // x^2 + 1 = (x + 1)^2 over F_2
        match FieldCtx::new(2, 2, Some(vec![1, 0, 1])) {
            Err(GfError::Reducible { factor, .. }) => assert_eq!(factor, "x+1"),
            other => panic!("{other:?}"),
        }
        assert_eq!(FieldCtx::new(6, 1, None).unwrap_err(), GfError::NotPrime(6));
        assert_eq!(
            FieldCtx::new(3, 2, Some(vec![1, 1])).unwrap_err(),
            GfError::BadModulus(2)
        );
    }

    #[test]
    fn default_modulus_is_smallest_irreducible() {
        assert_eq!(FieldCtx::of_order(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldCtx::of_order(9).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldCtx::of_order(4).unwrap().modulus(), &[1, 1, 1]);
        assert!(matches!(FieldCtx::of_order(6), Err(GfError::NotPrimePower(6))));
    }

    #[test]
    fn zero_has_no_inverse_or_log() {
        let f = f8();
        assert_eq!(f.inv(f.zero()), Err(GfError::DivisionByZero));
        assert_eq!(f.dlog(f.zero()), Err(GfError::LogOfZero));
        assert_eq!(f.dlog(f.one()), Ok(0));
        assert_eq!(f.render(f.zero()), "0");
    }

    #[test]
    fn mixed_contexts_are_rejected() {
        let a = f8();
        let b = FieldCtx::of_order(9).unwrap();
        let x = b.generator();
        assert_eq!(a.checked_mul(a.one(), x), Err(GfError::ContextMismatch));
        assert_eq!(a.checked_add(x, a.one()), Err(GfError::ContextMismatch));
        assert_eq!(a.checked_inv(x), Err(GfError::ContextMismatch));
        // Same modulus built twice is the same field.
        let a2 = f8();
        assert!(a.checked_mul(a.generator(), a2.generator()).is_ok());
    }

    #[test]
    fn notation_round_trips() {
        let f = f8();
        assert_eq!(f.render(f.parse("w^4").unwrap()), "w^4");
        assert_eq!(f.parse("w^{11}").unwrap(), f.w_pow(4));
        let f9 = FieldCtx::new(3, 2, Some(vec![2, 2, 1])).unwrap();
        assert_eq!(f9.parse("2").unwrap(), f9.from_int(2));
        assert_eq!(f9.render(f9.w_pow(4)), "2");
        assert!(f9.parse("3").is_err());
        assert!(f9.parse("v^2").is_err());
        for q in [4u64, 8, 9, 25, 49, 64, 81, 121, 243, 256, 343, 512] {
            let f = FieldCtx::of_order(q).unwrap();
            for e in f.elements() {
                assert_eq!(f.parse(&f.render(e)).unwrap(), e);
            }
        }
    }

    #[test]
    fn fermat_and_inverses_exhaustive_small() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64] {
            let f = FieldCtx::of_order(q).unwrap();
            for e in f.elements().skip(1) {
                assert_eq!(f.pow(e, q - 1), f.one());
                assert_eq!(f.mul(e, f.inv(e).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn dlog_is_a_bijection() {
        for q in [8u64, 9, 49, 125, 128, 256, 343, 512] {
            let f = FieldCtx::of_order(q).unwrap();
            let mut seen = vec![false; q as usize - 1];
            for e in f.elements().skip(1) {
                let i = f.dlog(e).unwrap() as usize;
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(f.w_pow(i as i64), e);
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn tables_agree_with_polynomial_arithmetic() {
        let f = FieldCtx::of_order(81).unwrap();
        for a in 0..81 {
            for b in 0..81 {
                assert_eq!(f.mul_raw(a, b), f.mul_poly(a, b));
                assert_eq!(f.add_raw(a, b), f.add_poly(a, b));
            }
        }
    }

    #[test]
    fn square_roots() {
        for q in [7u64, 8, 9, 16, 49] {
            let f = FieldCtx::of_order(q).unwrap();
            for e in f.elements() {
                if let Some(r) = f.sqrt(e) {
                    assert_eq!(f.mul(r, r), e);
                }
            }
            let squares = f.elements().filter(|&e| f.sqrt(e).is_some()).count() as u64;
            let expect = if q % 2 == 0 { q } else { q.div_ceil(2) };
            assert_eq!(squares, expect);
        }
    }

    fn field_strategy() -> impl Strategy<Value = Field> {
        static FIELDS: std::sync::OnceLock<Vec<Field>> = std::sync::OnceLock::new();
        let fields = FIELDS.get_or_init(|| {
            [4u64, 7, 8, 9, 13, 27, 49, 121, 169, 343, 1024]
                .into_iter()
                .map(|q| FieldCtx::of_order(q).unwrap())
                .collect()
        });
        prop::sample::select(fields.clone())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn ring_axioms(f in field_strategy(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let q = f.order();
            let (a, b, c) = (f.from_rep(a % q).unwrap(), f.from_rep(b % q).unwrap(), f.from_rep(c % q).unwrap());
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(a, f.one()), a);
            prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if !f.is_zero(a) {
                prop_assert_eq!(f.pow(a, q as u64 - 1), f.one());
            }
        }
    }
}
