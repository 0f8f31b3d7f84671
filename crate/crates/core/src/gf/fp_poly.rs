//! Dense polynomials over a prime field F_p, coefficients stored low degree first.
//!
//! Only what field construction needs: reduction, gcd and modular powering.

pub(crate) fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` modulo a nonzero `b`.
pub(crate) fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod(b[db], p) as u64;
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = (r[dr] as u64 * lead_inv % p as u64) as u32;
        let shift = dr - db;
        for (j, &bj) in b[..=db].iter().enumerate() {
            let t = (c as u64 * bj as u64 % p as u64) as u32;
            r[shift + j] = (r[shift + j] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn monic(a: Vec<u32>, p: u32) -> Vec<u32> {
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = inv_mod(a[d], p) as u64;
            a.into_iter().map(|c| (c as u64 * inv % p as u64) as u32).collect()
        }
    }
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(x, p)
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    rem(&result, m, p)
}

/// Ben-Or irreducibility test: `f` (monic, degree m) is irreducible iff
/// gcd(f, x^{p^i} - x) = 1 for every i <= m/2.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let x = vec![0, 1];
    let mut h = rem(&x, f, p);
    for _ in 1..=m / 2 {
        h = powmod(&h, p as u64, f, p);
        let g = gcd(f, &sub(&h, &x, p), p);
        if degree(&g).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// Smallest-degree monic factor of `f` found by trial division, in
/// increasing integer order of the lower coefficients.
pub(crate) fn smallest_factor(f: &[u32], p: u32) -> Option<Vec<u32>> {
    let m = degree(f)?;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut cand = digits(low, p, d);
            cand.push(1);
            if rem(f, &cand, p).is_empty() {
                return Some(cand);
            }
        }
    }
    None
}

pub(crate) fn digits(mut v: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

/// Render with variable `x`, highest degree first, e.g. `x^3+x+1`.
pub(crate) fn render(f: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Parse a polynomial over F_p written like `x^2+6x+3` or `x^3 + 2*x - 1`.
pub(crate) fn parse(s: &str, p: u32) -> Option<Vec<u32>> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return None;
    }
    let mut coeffs: Vec<u32> = Vec::new();
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        let negative = if let Some(r) = rest.strip_prefix('-') {
            rest = r;
            true
        } else {
            rest = rest.strip_prefix('+').unwrap_or(rest);
            false
        };
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let (term, tail) = rest.split_at(end);
        rest = tail;
        let (coef, exp) = match term.find('x') {
            None => (term.parse::<u64>().ok()?, 0usize),
            Some(pos) => {
                let c = term[..pos].trim_end_matches('*');
                let c = if c.is_empty() { 1 } else { c.parse::<u64>().ok()? };
                let e = &term[pos + 1..];
                let e = if e.is_empty() {
                    1
                } else {
                    e.strip_prefix('^')?
                        .trim_matches(|ch| ch == '{' || ch == '}')
                        .parse::<usize>()
                        .ok()?
                };
                (c, e)
            }
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        let c = (coef % p as u64) as u32;
        let c = if negative { (p - c) % p } else { c };
        coeffs[exp] = (coeffs[exp] + c) % p;
    }
    Some(trim(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ben_or_agrees_with_trial_division() {
        for &p in &[2u32, 3, 5] {
            for m in 1..=4usize {
                for low in 0..(p as u64).pow(m as u32) {
                    let mut f = digits(low, p, m);
                    f.push(1);
                    assert_eq!(
                        is_irreducible(&f, p),
                        smallest_factor(&f, p).is_none(),
                        "p={p} f={}",
                        render(&f)
                    );
                }
            }
        }
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse("x^3+x+1", 2), Some(vec![1, 1, 0, 1]));
        assert_eq!(parse("x^2 + 6x + 3", 7), Some(vec![3, 6, 1]));
        assert_eq!(parse("x^2-x-1", 3), Some(vec![2, 2, 1]));
        assert_eq!(parse("x^{2}+2*x+2", 3), Some(vec![2, 2, 1]));
        assert_eq!(render(&[3, 6, 1]), "x^2+6x+3");
        assert_eq!(parse("y+1", 3), None);
    }
}
