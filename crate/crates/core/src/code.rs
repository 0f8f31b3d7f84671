//! Evaluation codes `C_L(D, G)` on index-2 subgroups and their extension.
//!
//! Columns follow the canonical point order (`O` first, then lexicographic),
//! restricted to `D`. Every constructed code carries its construction record.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ec::{Curve, EcError, GroupStructure, Point, Subgroup};
use crate::func::{Divisor, FuncError, FunctionField, RationalFunction};
use crate::gf::{Field, FieldCtx, GfError};
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("k = {k} has the wrong parity for this construction (expected {expected})")]
    Parity { k: usize, expected: &'static str },
    #[error("generator matrix has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("malformed matrix input: {0}")]
    Parse(String),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Curve(#[from] EcError),
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityCase {
    /// `G = kQ`, `D = H`
    Odd,
    /// `G = (k-1)P + Q`, `D = H - P`
    Even,
    /// Any other divisor and point set.
    Custom,
}

/// Everything needed to reproduce a constructed code.
#[derive(Clone, Debug)]
pub struct Construction {
    pub curve: Curve,
    pub subgroup: Option<Subgroup>,
    pub d_points: Vec<Point>,
    pub g: Divisor,
    pub basis: Vec<RationalFunction>,
    pub case: ParityCase,
    pub p: Option<Point>,
    pub q: Option<Point>,
    pub extended: bool,
}

#[derive(Clone, Debug)]
pub enum Provenance {
    Constructed(Box<Construction>),
    /// A matrix loaded from elsewhere, with a free-form source label.
    External(String),
}

#[derive(Clone, Debug)]
pub struct LinearCode {
    gen: Matrix,
    meta: Provenance,
}

impl LinearCode {
    /// Wraps a full-row-rank generator matrix.
    pub fn from_matrix(gen: Matrix, source: impl Into<String>) -> Result<LinearCode, CodeError> {
        check_rank(&gen)?;
        Ok(LinearCode {
            gen,
            meta: Provenance::External(source.into()),
        })
    }

    pub fn gen(&self) -> &Matrix {
        &self.gen
    }

    pub fn field(&self) -> &Field {
        self.gen.field()
    }

    pub fn n(&self) -> usize {
        self.gen.ncols()
    }

    pub fn k(&self) -> usize {
        self.gen.nrows()
    }

    /// Singleton bound `n - k + 1`.
    pub fn singleton_distance(&self) -> usize {
        self.n() - self.k() + 1
    }

    pub fn meta(&self) -> &Provenance {
        &self.meta
    }

    pub fn construction(&self) -> Option<&Construction> {
        match &self.meta {
            Provenance::Constructed(c) => Some(c),
            Provenance::External(_) => None,
        }
    }

    pub(crate) fn attach_subgroup(&mut self, h: Subgroup) {
        if let Provenance::Constructed(c) = &mut self.meta {
            c.subgroup = Some(h);
        }
    }

    /// Same code with the generator replaced by its reduced row-echelon form.
    pub fn standard_form(&self) -> LinearCode {
        LinearCode {
            gen: self.gen.rref().0,
            meta: self.meta.clone(),
        }
    }

    /// Text format: `#` header lines followed by one row per line.
    pub fn render_text(&self) -> String {
        let f = self.field();
        let mut out = format!(
            "# q={} modulus={}\n# n={} k={}\n",
            f.order(),
            f.modulus_string(),
            self.n(),
            self.k()
        );
        if let Some(c) = self.construction() {
            out.push_str(&format!("# curve: {}\n", c.curve.equation()));
            out.push_str(&format!("# G = {}\n", c.g.render(&c.curve)));
            if c.extended {
                out.push_str("# extended\n");
            }
        }
        out.push_str(&self.gen.render());
        out.push('\n');
        out
    }

    pub fn to_record(&self) -> MatrixRecord {
        let f = self.field();
        let meta = self.construction().map(|c| {
            let ff = FunctionField::new(&c.curve);
            let pt = |p: &Point| c.curve.render_point(p);
            MetaRecord {
                curve: c.curve.equation(),
                coefficients: c.curve.coefficients().iter().map(|&a| f.render(a)).collect(),
                subgroup: c.subgroup.as_ref().map(|h| h.members().iter().map(pt).collect()),
                d_points: c.d_points.iter().map(pt).collect(),
                g: c.g.render(&c.curve),
                basis: c.basis.iter().map(|h| ff.render(h)).collect(),
                case: c.case,
                p: c.p.as_ref().map(pt),
                q: c.q.as_ref().map(pt),
                extended: c.extended,
            }
        });
        MatrixRecord {
            q: f.order(),
            modulus: f.modulus_string(),
            n: self.n(),
            k: self.k(),
            rows: self
                .gen
                .row_vecs()
                .iter()
                .map(|r| r.iter().map(|&e| f.render(e)).collect())
                .collect(),
            meta,
        }
    }
}

/// Structured emit format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub q: u32,
    pub modulus: String,
    pub n: usize,
    pub k: usize,
    pub rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<MetaRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaRecord {
    pub curve: String,
    pub coefficients: Vec<String>,
    pub subgroup: Option<Vec<String>>,
    pub d_points: Vec<String>,
    pub g: String,
    pub basis: Vec<String>,
    pub case: ParityCase,
    pub p: Option<String>,
    pub q: Option<String>,
    pub extended: bool,
}

impl MatrixRecord {
    pub fn field(&self) -> Result<Field, CodeError> {
        field_from_header(self.q as u64, &self.modulus)
    }

    pub fn to_code(&self) -> Result<LinearCode, CodeError> {
        let f = self.field()?;
        let m = parse_rows(&f, self.rows.iter().map(|r| r.iter().map(String::as_str).collect()))?;
        if m.nrows() != self.k || m.ncols() != self.n {
            return Err(CodeError::Parse(format!(
                "declared {}x{} but found {}x{}",
                self.k,
                self.n,
                m.nrows(),
                m.ncols()
            )));
        }
        let mut code = LinearCode::from_matrix(m, "structured record")?;
        if let Some(meta) = &self.meta {
            match meta.rebuild(&f, self.k) {
                Ok(rebuilt) if rebuilt.gen.same_row_space(&code.gen) => code.meta = rebuilt.meta,
                _ => code.meta = Provenance::External("structured record; construction not reproduced".into()),
            }
        }
        Ok(code)
    }
}

impl MetaRecord {
    /// Re-run the recorded construction.
    pub fn rebuild(&self, f: &Field, k: usize) -> Result<LinearCode, CodeError> {
        let coeffs: Vec<_> = self.coefficients.iter().map(|c| f.parse(c)).collect::<Result<_, _>>()?;
        let coeffs: [_; 5] = coeffs
            .try_into()
            .map_err(|_| CodeError::Parse("curve needs five coefficients".into()))?;
        let curve = Curve::new(f.clone(), coeffs)?;
        let point = |s: &Option<String>, what: &str| -> Result<Point, CodeError> {
            let s = s
                .as_ref()
                .ok_or_else(|| CodeError::Parse(format!("record lacks {what}")))?;
            Ok(curve.parse_point(s)?)
        };
        let members = self
            .subgroup
            .as_ref()
            .ok_or_else(|| CodeError::Parse("record lacks the subgroup".into()))?
            .iter()
            .map(|s| curve.parse_point(s))
            .collect::<Result<Vec<_>, _>>()?;
        let h = GroupStructure::compute(&curve)?.generated_by(&members)?;
        if h.order() as usize != members.len() {
            return Err(CodeError::Parse("recorded subgroup is not closed".into()));
        }
        let q = point(&self.q, "Q")?;
        let code = match self.case {
            ParityCase::Odd => build_code_odd(&curve, k, &h, &q)?,
            ParityCase::Even => build_code_even(&curve, k, &h, &point(&self.p, "P")?, &q)?,
            ParityCase::Custom => {
                return Err(CodeError::Parse("custom constructions cannot be rebuilt".into()));
            }
        };
        if self.extended {
            extend_code(&code)
        } else {
            Ok(code)
        }
    }
}

fn field_from_header(q: u64, modulus: &str) -> Result<Field, CodeError> {
    let (p, m) = crate::gf::prime_power(q).ok_or(GfError::NotPrimePower(q))?;
    let poly = FieldCtx::parse_modulus(modulus, p)?;
    Ok(FieldCtx::new(p, m, Some(poly))?)
}

fn parse_rows<'a>(f: &Field, rows: impl Iterator<Item = Vec<&'a str>>) -> Result<Matrix, CodeError> {
    let rows: Vec<Vec<_>> = rows
        .map(|r| r.into_iter().map(|t| f.parse(t)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Err(CodeError::Parse("no matrix rows".into()));
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(CodeError::Parse("rows have different lengths".into()));
    }
    Ok(Matrix::from_rows(f, rows))
}

/// Parse the text format; the header must carry `q=` and `modulus=`.
pub fn parse_text_matrix(s: &str) -> Result<LinearCode, CodeError> {
    let mut q = None;
    let mut modulus = None;
    let mut body = Vec::new();
    for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(h) = line.strip_prefix('#') {
            for tok in h.split_whitespace() {
                if let Some(v) = tok.strip_prefix("q=") {
                    q = Some(v.parse::<u64>().map_err(|_| CodeError::Parse(format!("bad q {v:?}")))?);
                } else if let Some(v) = tok.strip_prefix("modulus=") {
                    modulus = Some(v.to_string());
                }
            }
        } else {
            body.push(line);
        }
    }
    let q = q.ok_or_else(|| CodeError::Parse("missing q= header".into()))?;
    let modulus = modulus.ok_or_else(|| CodeError::Parse("missing modulus= header".into()))?;
    let f = field_from_header(q, &modulus)?;
    let m = parse_rows(&f, body.iter().map(|l| l.split_whitespace().collect()))?;
    LinearCode::from_matrix(m, "text matrix")
}

fn check_rank(gen: &Matrix) -> Result<(), CodeError> {
    let k = gen.nrows();
    if k == 0 || gen.ncols() < k {
        return Err(CodeError::Precondition(format!(
            "need 1 <= k <= n, got k = {k}, n = {}",
            gen.ncols()
        )));
    }
    let rank = gen.rank();
    if rank != k {
        return Err(CodeError::RankDeficient { rank, k });
    }
    Ok(())
}

/// Evaluate `basis` (a basis of `L(G)`) at `d_points`.
pub fn evaluation_code(
    curve: &Curve,
    d_points: Vec<Point>,
    g: Divisor,
    basis: Vec<RationalFunction>,
    case: ParityCase,
) -> Result<LinearCode, CodeError> {
    for p in &d_points {
        if g.coeff(p) != 0 {
            return Err(CodeError::Precondition(format!(
                "{} lies in both D and Supp(G)",
                curve.render_point(p)
            )));
        }
    }
    let ff = FunctionField::new(curve);
    let gen = ff.evaluation_matrix(&basis, &d_points)?;
    check_rank(&gen)?;
    Ok(LinearCode {
        gen,
        meta: Provenance::Constructed(Box::new(Construction {
            curve: curve.clone(),
            subgroup: None,
            d_points,
            g,
            basis,
            case,
            p: None,
            q: None,
            extended: false,
        })),
    })
}

/// Odd `k`: `D = H`, `G = kQ` with `Q` outside `H`. Length `|H|`.
pub fn build_code_odd(curve: &Curve, k: usize, h: &Subgroup, q: &Point) -> Result<LinearCode, CodeError> {
    if k.is_multiple_of(2) {
        return Err(CodeError::Parity { k, expected: "odd" });
    }
    let n = h.order() as usize;
    if !(1 < k && k < n) {
        return Err(CodeError::Precondition(format!("need 1 < k < n = {n}, got k = {k}")));
    }
    if !curve.contains(q) {
        return Err(EcError::NotOnCurve(curve.render_point(q)).into());
    }
    if h.contains(q) {
        return Err(CodeError::Precondition(format!(
            "Q = {} lies in H",
            curve.render_point(q)
        )));
    }
    let ff = FunctionField::new(curve);
    let basis = ff.rr_basis_kq(k, q)?;
    let mut code = evaluation_code(
        curve,
        h.members().to_vec(),
        basis.divisor,
        basis.functions,
        ParityCase::Odd,
    )?;
    if let Provenance::Constructed(c) = &mut code.meta {
        c.subgroup = Some(h.clone());
        c.q = Some(*q);
    }
    Ok(code)
}

/// Even `k`: `D = H - P`, `G = (k-1)P + Q` with `P` in `H`, `Q` outside. Length `|H| - 1`.
pub fn build_code_even(curve: &Curve, k: usize, h: &Subgroup, p: &Point, q: &Point) -> Result<LinearCode, CodeError> {
    if k % 2 == 1 {
        return Err(CodeError::Parity { k, expected: "even" });
    }
    let n = h.order() as usize - 1;
    if !(1 < k && k < n) {
        return Err(CodeError::Precondition(format!("need 1 < k < n = {n}, got k = {k}")));
    }
    for pt in [p, q] {
        if !curve.contains(pt) {
            return Err(EcError::NotOnCurve(curve.render_point(pt)).into());
        }
    }
    if !h.contains(p) {
        return Err(CodeError::Precondition(format!(
            "P = {} is not in H",
            curve.render_point(p)
        )));
    }
    if h.contains(q) {
        return Err(CodeError::Precondition(format!(
            "Q = {} lies in H",
            curve.render_point(q)
        )));
    }
    let ff = FunctionField::new(curve);
    let basis = ff.rr_basis_mixed(k, p, q)?;
    let d_points = h.members().iter().filter(|t| *t != p).copied().collect();
    let mut code = evaluation_code(curve, d_points, basis.divisor, basis.functions, ParityCase::Even)?;
    if let Provenance::Constructed(c) = &mut code.meta {
        c.subgroup = Some(h.clone());
        c.p = Some(*p);
        c.q = Some(*q);
    }
    Ok(code)
}

/// Append the leading coefficient at `P`: a unit vector on the basis element
/// with pole order `k-1` at `P`. Only for unextended even-case codes.
pub fn extend_code(c: &LinearCode) -> Result<LinearCode, CodeError> {
    let cons = c
        .construction()
        .filter(|m| m.case == ParityCase::Even && !m.extended)
        .ok_or_else(|| CodeError::Precondition("only unextended even-k constructions can be extended".into()))?;
    let p = cons
        .p
        .ok_or_else(|| CodeError::Precondition("construction lacks P".into()))?;
    let ff = FunctionField::new(&cons.curve);
    let top = -(c.k() as i64 - 1);
    let mut row = None;
    for (i, u) in cons.basis.iter().enumerate() {
        if ff.valuation(u, &p)? == top {
            row = Some(i);
        }
    }
    let row = row.ok_or_else(|| CodeError::Precondition("no basis element attains the top pole order at P".into()))?;
    let f = c.field();
    let mut col = vec![f.zero(); c.k()];
    col[row] = f.one();
    let mut meta = cons.clone();
    meta.extended = true;
    Ok(LinearCode {
        gen: c.gen.with_column(&col),
        meta: Provenance::Constructed(Box::new(meta)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> (Curve, Subgroup) {
        let f = FieldCtx::new(3, 2, Some(vec![2, 2, 1])).unwrap();
        let (o, z) = (f.one(), f.zero());
        let c = Curve::new(f, [z, z, z, o, z]).unwrap();
        let h = GroupStructure::compute(&c).unwrap().index2_subgroup(0).unwrap();
        (c, h)
    }

    #[test]
    fn odd_construction_shape_and_errors() {
        let (c, h) = gf9();
        let q = c.parse_point("[2:1:1]").unwrap();
        let code = build_code_odd(&c, 3, &h, &q).unwrap();
        assert_eq!((code.n(), code.k()), (8, 3));
        assert!(matches!(build_code_odd(&c, 4, &h, &q), Err(CodeError::Parity { .. })));
        let inside = h.members()[1];
        assert!(matches!(
            build_code_odd(&c, 3, &h, &inside),
            Err(CodeError::Precondition(_))
        ));
        assert!(matches!(build_code_odd(&c, 9, &h, &q), Err(CodeError::Precondition(_))));
    }

    #[test]
    fn even_construction_and_extension() {
        let (c, h) = gf9();
        let q = c.parse_point("[2:1:1]").unwrap();
        let p = Point::Infinity;
        let code = build_code_even(&c, 4, &h, &p, &q).unwrap();
        assert_eq!((code.n(), code.k()), (7, 4));
        let ext = extend_code(&code).unwrap();
        assert_eq!((ext.n(), ext.k()), (8, 4));
        let last = ext.gen().column(7);
        assert_eq!(last.iter().filter(|e| !c.field().is_zero(**e)).count(), 1);
        assert!(!c.field().is_zero(last[2]));
        assert!(extend_code(&ext).is_err());
        let odd = build_code_odd(&c, 3, &h, &q).unwrap();
        assert!(extend_code(&odd).is_err());
        assert!(matches!(
            build_code_even(&c, 3, &h, &p, &q),
            Err(CodeError::Parity { .. })
        ));
        assert!(build_code_even(&c, 2, &h, &q, &q).is_err());
    }

    #[test]
    fn text_and_record_round_trip() {
        let (c, h) = gf9();
        let q = c.parse_point("[2:1:1]").unwrap();
        let code = build_code_odd(&c, 3, &h, &q).unwrap();
        let back = parse_text_matrix(&code.render_text()).unwrap();
        assert_eq!(back.gen(), code.gen());
        let rec = code.to_record();
        assert_eq!(rec.meta.as_ref().unwrap().d_points.len(), 8);
        let back = rec.to_code().unwrap();
        assert_eq!(back.gen(), code.gen());
        assert_eq!(back.construction().unwrap().q, Some(q));
        let mut bad = rec.clone();
        bad.meta.as_mut().unwrap().q = Some("[w:2:1]".into());
        assert!(bad.to_code().unwrap().construction().is_none());
        assert!(parse_text_matrix("1 0\n0 1\n").is_err());
    }
}
