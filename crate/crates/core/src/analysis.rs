//! MDS verification, Schur squares and length bounds.
//!
//! Three independent MDS checks are provided: the group-law criterion over
//! `(k-1)`-subsets of the evaluation points, nonsingularity of every `k x k`
//! minor, and exhaustive minimum-weight search. Each exponential check runs
//! under a [`Budget`]; past the limit, the `*_exhaustive` variants return
//! [`AnalysisError::Budget`] and the plain variants fall back to seeded sampling.

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{evaluation_code, CodeError, LinearCode, ParityCase};
use crate::ec::{isqrt, Curve, Point, Subgroup};
use crate::func::{Divisor, FunctionField};
use crate::gf::{Fe, Field};
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("{what}: {needed} exceeds the budget of {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u64,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Cap on subsets, minors or codewords for an exhaustive pass.
    pub limit: u64,
    /// Sample count used once the cap is exceeded.
    pub samples: u64,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            limit: 10_000_000,
            samples: 100_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    /// Column indices into the generator matrix.
    Columns(Vec<usize>),
    /// A nonzero codeword, rendered.
    Codeword(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodResult {
    pub name: String,
    pub passed: bool,
    pub exhaustive: bool,
    /// Subsets, minors or codeword classes examined.
    pub checked: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl MethodResult {
    fn skipped(name: &str, note: String) -> MethodResult {
        MethodResult {
            name: name.into(),
            passed: true,
            exhaustive: false,
            checked: 0,
            witness: None,
            note: Some(note),
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.checked == 0 && self.note.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsReport {
    pub n: usize,
    pub k: usize,
    pub claimed_d: usize,
    /// Exact minimum distance, present only after an exhaustive search.
    pub verified_d: Option<usize>,
    pub methods: Vec<MethodResult>,
}

impl MdsReport {
    pub fn new(code: &LinearCode) -> MdsReport {
        MdsReport {
            n: code.n(),
            k: code.k(),
            claimed_d: code.singleton_distance(),
            verified_d: None,
            methods: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.methods.iter().all(|m| m.passed)
    }

    pub fn summary(&self) -> String {
        let mut s = format!("[n={}, k={}] claimed d={}", self.n, self.k, self.claimed_d);
        if let Some(d) = self.verified_d {
            s.push_str(&format!(", verified d={d}"));
        }
        for m in &self.methods {
            let status = match (m.is_skipped(), m.passed) {
                (true, _) => "skip",
                (false, true) => "pass",
                (false, false) => "FAIL",
            };
            s.push_str(&format!("\n  {:<10} {status}", m.name));
            if !m.is_skipped() {
                let mode = if m.exhaustive { "exhaustive" } else { "sampled" };
                s.push_str(&format!(" ({} checked, {mode})", m.checked));
            }
            if let Some(w) = &m.witness {
                s.push_str(&format!(" witness {w:?}"));
            }
            if let Some(n) = &m.note {
                s.push_str(&format!(" [{n}]"));
            }
        }
        s
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Position of a sorted subset in lexicographic order, 1-based.
fn lex_rank(subset: &[usize], n: usize) -> u64 {
    let k = subset.len();
    let mut rank: u128 = 0;
    let mut prev = 0usize;
    for (i, &c) in subset.iter().enumerate() {
        for skipped in prev..c {
            rank += binomial((n - skipped - 1) as u64, (k - i - 1) as u64);
        }
        prev = c + 1;
    }
    (rank + 1) as u64
}

/// First subset (lexicographically) failing `ok`, searched in parallel by leading element.
fn first_failing_subset<F>(n: usize, r: usize, ok: F) -> Option<Vec<usize>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    if r == 0 {
        return (!ok(&[])).then(Vec::new);
    }
    (0..n).into_par_iter().find_map_first(|first| {
        (first + 1..n).combinations(r - 1).find_map(|rest| {
            let mut s = Vec::with_capacity(r);
            s.push(first);
            s.extend(rest);
            (!ok(&s)).then_some(s)
        })
    })
}

fn sampled_failure<F>(n: usize, r: usize, budget: &Budget, ok: F) -> (u64, Option<Vec<usize>>)
where
    F: Fn(&[usize]) -> bool,
{
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for i in 0..budget.samples {
        let mut s = sample(&mut rng, n, r).into_vec();
        s.sort_unstable();
        if !ok(&s) {
            return (i + 1, Some(s));
        }
    }
    (budget.samples, None)
}

fn subset_method<F>(
    name: &str,
    n: usize,
    r: usize,
    budget: &Budget,
    sampling: bool,
    ok: F,
) -> Result<MethodResult, AnalysisError>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let total = binomial(n as u64, r as u64);
    if total > budget.limit as u128 {
        if !sampling {
            return Err(AnalysisError::Budget {
                what: "subset count",
                needed: total,
                limit: budget.limit,
            });
        }
        let (checked, bad) = sampled_failure(n, r, budget, ok);
        return Ok(MethodResult {
            name: name.into(),
            passed: bad.is_none(),
            exhaustive: false,
            checked,
            witness: bad.map(Witness::Columns),
            note: Some(format!("sampled, seed {}", budget.seed)),
        });
    }
    let bad = first_failing_subset(n, r, ok);
    Ok(MethodResult {
        name: name.into(),
        passed: bad.is_none(),
        exhaustive: true,
        checked: bad.as_ref().map_or(total as u64, |s| lex_rank(s, n)),
        witness: bad.map(Witness::Columns),
        note: None,
    })
}

/// The single group-law condition `sum(G) ∉ H`: `[k]Q` for `G = kQ`,
/// `[k-1]P ⊕ Q` for `G = (k-1)P + Q`.
pub fn mds_structural(curve: &Curve, h: &Subgroup, g: &Divisor) -> bool {
    !h.contains(&g.sum(curve))
}

/// Structural check from a code's construction record, if it has one.
pub fn mds_structural_code(code: &LinearCode) -> Option<bool> {
    let c = code.construction()?;
    let h = c.subgroup.as_ref()?;
    Some(mds_structural(&c.curve, h, &c.g))
}

fn subsets(code: &LinearCode, budget: &Budget, sampling: bool) -> Result<MethodResult, AnalysisError> {
    let c = code
        .construction()
        .ok_or_else(|| AnalysisError::Precondition("group criterion needs a construction record".into()))?;
    if c.extended {
        return Err(AnalysisError::Precondition(
            "group criterion does not apply to extended codes".into(),
        ));
    }
    let curve = &c.curve;
    let pts = &c.d_points;
    let support: std::collections::HashSet<Point> = pts.iter().copied().collect();
    let gsum = c.g.sum(curve);
    let ok = |s: &[usize]| {
        let t = s.iter().fold(gsum, |acc, &i| curve.sub(&acc, &pts[i]));
        !support.contains(&t) || s.iter().any(|&i| pts[i] == t)
    };
    subset_method("subsets", pts.len(), code.k() - 1, budget, sampling, ok)
}

/// Group-law criterion over every `(k-1)`-subset of the evaluation points.
pub fn mds_subsets_exhaustive(code: &LinearCode, budget: &Budget) -> Result<MethodResult, AnalysisError> {
    subsets(code, budget, false)
}

/// As [`mds_subsets_exhaustive`], sampling once the budget is exceeded.
pub fn mds_subsets(code: &LinearCode, budget: &Budget) -> Result<MethodResult, AnalysisError> {
    subsets(code, budget, true)
}

fn minors(code: &LinearCode, budget: &Budget, sampling: bool) -> Result<MethodResult, AnalysisError> {
    let g = code.gen();
    let rows: Vec<usize> = (0..code.k()).collect();
    subset_method("minors", code.n(), code.k(), budget, sampling, |s| {
        g.minor_nonsingular(&rows, s)
    })
}

/// Nonsingularity of every `k x k` column minor.
pub fn mds_by_minors_exhaustive(code: &LinearCode, budget: &Budget) -> Result<MethodResult, AnalysisError> {
    minors(code, budget, false)
}

/// As [`mds_by_minors_exhaustive`], sampling once the budget is exceeded.
pub fn mds_by_minors(code: &LinearCode, budget: &Budget) -> Result<MethodResult, AnalysisError> {
    minors(code, budget, true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDistance {
    pub d: usize,
    /// A codeword of weight `d`.
    pub witness: Vec<Fe>,
    /// Projective codeword classes enumerated.
    pub checked: u64,
}

/// Exact minimum distance by enumerating messages up to scalars.
pub fn min_distance_bruteforce(code: &LinearCode, budget: &Budget) -> Result<MinDistance, AnalysisError> {
    let f = code.field();
    let q = f.order() as u128;
    let k = code.k();
    let full = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if full > budget.limit as u128 {
        return Err(AnalysisError::Budget {
            what: "q^k codewords",
            needed: full,
            limit: budget.limit,
        });
    }
    let q = q as u64;
    let elems: Vec<Fe> = f.elements().collect();
    // Messages whose leading nonzero entry is 1 at position `lead`: q^(k-1-lead) each.
    let offsets: Vec<u64> = (0..k)
        .scan(0u64, |acc, lead| {
            let start = *acc;
            *acc += q.pow((k - 1 - lead) as u32);
            Some(start)
        })
        .collect();
    let total = offsets[k - 1] + 1;
    let message = |t: u64| -> Vec<Fe> {
        let lead = offsets.iter().rposition(|&o| o <= t).unwrap();
        let mut rest = t - offsets[lead];
        let mut m = vec![f.zero(); k];
        m[lead] = f.one();
        for slot in m.iter_mut().skip(lead + 1).rev() {
            *slot = elems[(rest % q) as usize];
            rest /= q;
        }
        m
    };
    let gen = code.gen();
    let weight = |w: &[Fe]| w.iter().filter(|e| !f.is_zero(**e)).count();
    let (d, t) = (0..total)
        .into_par_iter()
        .map(|t| (weight(&gen.left_mul(&message(t))), t))
        .min()
        .expect("at least one message");
    Ok(MinDistance {
        d,
        witness: gen.left_mul(&message(t)),
        checked: total,
    })
}

/// Brute-force distance as a method entry; fills `verified_d`.
pub fn bruteforce_method(code: &LinearCode, budget: &Budget, report: &mut MdsReport) -> Result<(), AnalysisError> {
    let md = min_distance_bruteforce(code, budget)?;
    let f = code.field();
    let passed = md.d == code.singleton_distance();
    report.verified_d = Some(md.d);
    report.methods.push(MethodResult {
        name: "bruteforce".into(),
        passed,
        exhaustive: true,
        checked: md.checked,
        witness: (!passed).then(|| Witness::Codeword(md.witness.iter().map(|&e| f.render(e)).collect())),
        note: None,
    });
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NotRsEquivalent,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NotRsEquivalent => "not-RS-equivalent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchurReport {
    pub n: usize,
    pub k: usize,
    pub dim_square: usize,
    /// `min(2k, n)`
    pub expected: usize,
    /// `min(2k - 1, n)`, the dimension for (generalized) Reed-Solomon codes.
    pub rs_baseline: usize,
    pub verdict: Verdict,
}

impl SchurReport {
    pub fn summary(&self) -> String {
        format!(
            "Schur square: dim {} (min(2k,n) = {}, RS baseline {}), verdict {}",
            self.dim_square, self.expected, self.rs_baseline, self.verdict
        )
    }
}

/// Span of all pairwise row products, as a row-reduced basis.
pub fn schur_square_matrix(gen: &Matrix) -> Matrix {
    let f = gen.field();
    let rows = gen.row_vecs();
    let products: Vec<Vec<Fe>> = (0..rows.len())
        .flat_map(|i| (i..rows.len()).map(move |j| (i, j)))
        .map(|(i, j)| rows[i].iter().zip(&rows[j]).map(|(&a, &b)| f.mul(a, b)).collect())
        .collect();
    Matrix::from_rows(f, products).row_space_basis()
}

pub fn schur_square(code: &LinearCode) -> (Matrix, SchurReport) {
    let sq = schur_square_matrix(code.gen());
    let (n, k) = (code.n(), code.k());
    let dim = sq.nrows();
    let verdict = if 2 * k <= n && dim != 2 * k - 1 {
        Verdict::NotRsEquivalent
    } else {
        Verdict::Inconclusive
    };
    let report = SchurReport {
        n,
        k,
        dim_square: dim,
        expected: (2 * k).min(n),
        rs_baseline: (2 * k - 1).min(n),
        verdict,
    };
    (sq, report)
}

/// Reed-Solomon code evaluating `1, x, ..., x^(k-1)` at `0, 1, w, w^2, ...`.
pub fn rs_control_code(field: &Field, n: usize, k: usize) -> Result<LinearCode, AnalysisError> {
    let q = field.order() as usize;
    if n > q || k == 0 || k > n {
        return Err(AnalysisError::Precondition(format!(
            "RS control needs 1 <= k <= n <= q, got n = {n}, k = {k}, q = {q}"
        )));
    }
    let pts: Vec<Fe> = std::iter::once(field.zero())
        .chain((0..n as i64 - 1).map(|i| field.w_pow(i)))
        .collect();
    let rows = (0..k as u64)
        .map(|i| {
            pts.iter()
                .map(|&a| if i == 0 { field.one() } else { field.pow(a, i) })
                .collect()
        })
        .collect();
    Ok(LinearCode::from_matrix(
        Matrix::from_rows(field, rows),
        "reed-solomon control",
    )?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "detail")]
pub enum BoundCheck {
    Pass,
    Fail(String),
    Skipped(String),
}

/// Length bounds for elliptic MDS codes: `n <= N/2` and, for `q >= 289` and
/// `3 <= k <= N/10`, `n <= (q+1)/2 + sqrt(q)`.
pub fn mec_bound_check(q: u64, n: u64, k: u64, group_order: u64) -> BoundCheck {
    if q < 289 {
        return BoundCheck::Skipped(format!("q = {q} is below 289"));
    }
    if !(3 <= k && 10 * k <= group_order) {
        return BoundCheck::Skipped(format!("k = {k} outside 3..=N/10 for N = {group_order}"));
    }
    if 2 * n > group_order {
        return BoundCheck::Fail(format!("n = {n} exceeds N/2 = {}", group_order / 2));
    }
    // 2n - q - 1 <= 2 sqrt(q)
    let lhs = 2 * n as i128 - q as i128 - 1;
    if lhs > 0 && lhs * lhs > 4 * q as i128 {
        return BoundCheck::Fail(format!("n = {n} exceeds (q+1)/2 + sqrt(q) for q = {q}"));
    }
    BoundCheck::Pass
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthClass {
    /// Odd characteristic: `(q+1)/2 + floor(sqrt q)`.
    OddChar,
    /// `q = 2^m`, `m` even: `(q + 2 floor(sqrt q))/2`.
    EvenCharSquare,
    /// `q = 2^m`, `m` odd: `(q + 1 + floor(2 sqrt q))/2`.
    EvenCharNonSquare,
}

impl LengthClass {
    pub fn of(q: u64) -> Option<LengthClass> {
        let (p, m) = crate::gf::prime_power(q)?;
        Some(match (p, m % 2) {
            (2, 0) => LengthClass::EvenCharSquare,
            (2, _) => LengthClass::EvenCharNonSquare,
            _ => LengthClass::OddChar,
        })
    }

    pub fn formula(&self) -> &'static str {
        match self {
            LengthClass::OddChar => "(q+1)/2 + floor(sqrt q)",
            LengthClass::EvenCharSquare => "(q + 2 floor(sqrt q))/2",
            LengthClass::EvenCharNonSquare => "(q + 1 + floor(2 sqrt q))/2",
        }
    }

    pub fn length(&self, q: u64) -> u64 {
        let s = isqrt(q);
        match self {
            LengthClass::OddChar => q.div_ceil(2) + s,
            LengthClass::EvenCharSquare => (q + 2 * s) / 2,
            LengthClass::EvenCharNonSquare => (q + 1 + isqrt(4 * q)) / 2,
        }
    }
}

/// Tabulated maximal length for odd `k` at this `q`.
pub fn table_length(q: u64) -> Option<u64> {
    LengthClass::of(q).map(|c| c.length(q))
}

/// A deliberately non-MDS code: `D = H - Q`, `G = kQ` with `Q` in `H`.
pub fn non_mds_probe(curve: &Curve, h: &Subgroup, q: &Point, k: usize) -> Result<LinearCode, AnalysisError> {
    if !h.contains(q) {
        return Err(AnalysisError::Precondition("probe point must lie in H".into()));
    }
    let ff = FunctionField::new(curve);
    let basis = ff.rr_basis_kq(k, q).map_err(CodeError::from)?;
    let d_points = h.members().iter().filter(|p| *p != q).copied().collect();
    let mut code = evaluation_code(curve, d_points, basis.divisor, basis.functions, ParityCase::Custom)?;
    code.attach_subgroup(h.clone());
    Ok(code)
}

/// All applicable checks within budget. Over-budget exhaustive checks fall
/// back to sampling; brute force is skipped past its budget.
pub fn verify_all(code: &LinearCode, budget: &Budget) -> MdsReport {
    let mut report = MdsReport::new(code);
    match code.construction() {
        Some(c) => {
            if let Some(ok) = mds_structural_code(code) {
                report.methods.push(MethodResult {
                    name: "structural".into(),
                    passed: ok,
                    exhaustive: true,
                    checked: 1,
                    witness: None,
                    note: None,
                });
            }
            if c.extended {
                report.methods.push(MethodResult::skipped(
                    "subsets",
                    "not applicable to extended codes".into(),
                ));
            } else {
                match mds_subsets(code, budget) {
                    Ok(m) => report.methods.push(m),
                    Err(e) => report.methods.push(MethodResult::skipped("subsets", e.to_string())),
                }
            }
        }
        None => report
            .methods
            .push(MethodResult::skipped("subsets", "no construction record".into())),
    }
    match mds_by_minors(code, budget) {
        Ok(m) => report.methods.push(m),
        Err(e) => report.methods.push(MethodResult::skipped("minors", e.to_string())),
    }
    if let Err(e) = bruteforce_method(code, budget, &mut report) {
        report.methods.push(MethodResult::skipped("bruteforce", e.to_string()));
    }
    report
}
