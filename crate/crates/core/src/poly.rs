//! Univariate polynomials over F_q, coefficients stored constant term first.

use crate::gf::{Fe, FieldCtx};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly(Vec<Fe>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Fe) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `x - a`
    pub fn linear_root(f: &FieldCtx, a: Fe) -> Self {
        Poly(vec![f.neg(a), f.one()])
    }

    pub fn x(f: &FieldCtx) -> Self {
        Poly(vec![f.zero(), f.one()])
    }

    pub fn monomial(f: &FieldCtx, c: Fe, deg: usize) -> Self {
        let mut v = vec![f.zero(); deg + 1];
        v[deg] = c;
        Poly::from_coeffs(v)
    }

    pub fn from_coeffs(mut c: Vec<Fe>) -> Self {
        while c.last().is_some_and(|e| e.rep() == 0) {
            c.pop();
        }
        Poly(c)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<Fe> {
        self.0.last().copied()
    }

    pub fn coeff(&self, i: usize, f: &FieldCtx) -> Fe {
        self.0.get(i).copied().unwrap_or_else(|| f.zero())
    }

    pub fn add(&self, o: &Poly, f: &FieldCtx) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::from_coeffs((0..n).map(|i| f.add(self.coeff(i, f), o.coeff(i, f))).collect())
    }

    pub fn sub(&self, o: &Poly, f: &FieldCtx) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::from_coeffs((0..n).map(|i| f.sub(self.coeff(i, f), o.coeff(i, f))).collect())
    }

    pub fn neg(&self, f: &FieldCtx) -> Poly {
        Poly(self.0.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe, f: &FieldCtx) -> Poly {
        Poly::from_coeffs(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, o: &Poly, f: &FieldCtx) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![f.zero(); self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, e: u32, f: &FieldCtx) -> Poly {
        let mut r = Poly::constant(f.one());
        for _ in 0..e {
            r = r.mul(self, f);
        }
        r
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly, f: &FieldCtx) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = f.inv(d.0[dd]).expect("leading coefficient is nonzero");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![f.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], lead_inv);
            if f.is_zero(c) {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dj) in d.0.iter().enumerate() {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, dj));
            }
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(r))
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly, f: &FieldCtx) -> Option<Poly> {
        let (q, r) = self.divrem(d, f);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self, f: &FieldCtx) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(f.inv(l).expect("nonzero lead"), f),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Poly, f: &FieldCtx) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b, f).1;
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn eval(&self, x: Fe, f: &FieldCtx) -> Fe {
        self.0.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Synthetic division by `x - a`, returning quotient and remainder `p(a)`.
    pub fn div_linear(&self, a: Fe, f: &FieldCtx) -> (Poly, Fe) {
        if self.is_zero() {
            return (Poly::zero(), f.zero());
        }
        let n = self.0.len();
        let mut quot = vec![f.zero(); n - 1];
        let mut carry = f.zero();
        for i in (0..n).rev() {
            let v = f.add(self.0[i], f.mul(carry, a));
            if i == 0 {
                carry = v;
            } else {
                quot[i - 1] = v;
                carry = v;
            }
        }
        (Poly::from_coeffs(quot), carry)
    }

    /// Multiplicity of `a` as a root. Panics for the zero polynomial.
    pub fn ord_at(&self, a: Fe, f: &FieldCtx) -> u32 {
        assert!(!self.is_zero(), "order of the zero polynomial");
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (quot, r) = p.div_linear(a, f);
            if !f.is_zero(r) {
                return k;
            }
            p = quot;
            k += 1;
        }
    }

    /// Strip the factor `(x - a)^k`, returning the cofactor.
    pub fn remove_root(&self, a: Fe, k: u32, f: &FieldCtx) -> Poly {
        let mut p = self.clone();
        for _ in 0..k {
            let (quot, r) = p.div_linear(a, f);
            debug_assert!(f.is_zero(r));
            p = quot;
        }
        p
    }

    /// All roots in F_q, in canonical element order.
    pub fn roots(&self, f: &FieldCtx) -> Vec<Fe> {
        if self.is_zero() {
            return f.elements().collect();
        }
        f.elements().filter(|&a| f.is_zero(self.eval(a, f))).collect()
    }

    pub fn render(&self, f: &FieldCtx, var: &str) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coef = f.render(c);
            terms.push(if i == 0 {
                coef
            } else if c == f.one() {
                mono
            } else {
                format!("{coef}{mono}")
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    #[test]
    fn divrem_reconstructs() {
        let f = FieldCtx::of_order(9).unwrap();
        let a = Poly::from_coeffs(vec![f.w_pow(3), f.one(), f.zero(), f.w_pow(5), f.from_int(2)]);
        let d = Poly::from_coeffs(vec![f.w_pow(1), f.from_int(2), f.w_pow(7)]);
        let (q, r) = a.divrem(&d, &f);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(q.mul(&d, &f).add(&r, &f), a);
    }

    #[test]
    fn roots_and_multiplicity() {
        let f = FieldCtx::of_order(7).unwrap();
        let a = f.from_int(3);
        let p = Poly::linear_root(&f, a)
            .pow(3, &f)
            .mul(&Poly::linear_root(&f, f.from_int(5)), &f);
        assert_eq!(p.ord_at(a, &f), 3);
        assert_eq!(p.ord_at(f.one(), &f), 0);
        assert_eq!(p.roots(&f), vec![f.from_int(3), f.from_int(5)]);
        assert_eq!(p.remove_root(a, 3, &f), Poly::linear_root(&f, f.from_int(5)));
        let g = p.gcd(&Poly::linear_root(&f, a).pow(2, &f), &f);
        assert_eq!(g, Poly::linear_root(&f, a).pow(2, &f));
    }

    #[test]
    fn render_uses_field_notation() {
        let f = FieldCtx::of_order(8).unwrap();
        let p = Poly::from_coeffs(vec![f.one(), f.w_pow(3), f.one()]);
        assert_eq!(p.render(&f, "x"), "x^2 + w^3x + 1");
    }
}
