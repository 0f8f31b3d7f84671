//! Subcommand implementations. Each returns rendered output; nothing here prints.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use ellmds_core::analysis::{
    bruteforce_method, mds_by_minors, mds_by_minors_exhaustive, mds_structural_code, mds_subsets,
    mds_subsets_exhaustive, schur_square, verify_all, AnalysisError, LengthClass,
};
use ellmds_core::code::{parse_text_matrix, MatrixRecord};
use ellmds_core::ec::largest_admissible_even_n;
use ellmds_core::{Budget, GroupStructure, LinearCode, MdsReport, MethodResult, SchurReport};

use crate::job::{self, Format, JobSpec, Method};
use crate::{BuildArgs, CliError, Outcome, SearchArgs, SweepArgs, VerifyArgs};

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Serialize)]
pub struct SubgroupSummary {
    pub selector: usize,
    pub order: u64,
    pub structure: (u64, u64),
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub q: u32,
    pub modulus: String,
    pub curve: String,
    pub coefficients: Vec<String>,
    pub order: u64,
    pub structure: (u64, u64),
    pub generators: (String, String),
    pub subgroups: Vec<SubgroupSummary>,
}

impl SearchReport {
    fn of(gs: &GroupStructure) -> SearchReport {
        let c = gs.curve();
        let f = c.field();
        let (g1, g2) = gs.generators();
        SearchReport {
            q: f.order(),
            modulus: f.modulus_string(),
            curve: c.equation(),
            coefficients: c.coefficients().iter().map(|&a| f.render(a)).collect(),
            order: gs.order(),
            structure: gs.invariants(),
            generators: (c.render_point(&g1), c.render_point(&g2)),
            subgroups: gs
                .index2_subgroups()
                .iter()
                .enumerate()
                .map(|(selector, h)| SubgroupSummary {
                    selector,
                    order: h.order(),
                    structure: h.structure(c),
                })
                .collect(),
        }
    }

    fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "field:      GF({}) mod {}", self.q, self.modulus);
        let _ = writeln!(s, "curve:      {}", self.curve);
        let _ = writeln!(s, "a-invariants: [{}]", self.coefficients.join(", "));
        let (d1, d2) = self.structure;
        let group = if d1 == 1 {
            format!("Z_{d2}")
        } else {
            format!("Z_{d1} + Z_{d2}")
        };
        let _ = writeln!(s, "points:     {}", self.order);
        let _ = writeln!(s, "group:      {group}");
        let _ = writeln!(
            s,
            "generators: {} (order {d1}), {} (order {d2})",
            self.generators.0, self.generators.1
        );
        for h in &self.subgroups {
            let (a, b) = h.structure;
            let _ = writeln!(s, "subgroup {}: order {}, Z_{a} + Z_{b}", h.selector, h.order);
        }
        s
    }
}

pub fn search(a: &SearchArgs, format: Format) -> Result<Outcome, CliError> {
    let f = job::resolve_field(a.q, a.modulus.as_deref())?;
    let c = job::resolve_curve(&f, None, a.target_n)?;
    let gs = GroupStructure::compute(&c).map_err(|e| CliError::Input(e.to_string()))?;
    let r = SearchReport::of(&gs);
    Ok(Outcome {
        text: match format {
            Format::Text => r.render(),
            Format::Structured => json(&r),
        },
        passed: true,
    })
}

fn merge(a: &BuildArgs) -> Result<JobSpec, CliError> {
    let mut j = match &a.job {
        Some(p) => {
            serde_json::from_str::<JobSpec>(&read(p)?).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?
        }
        None => JobSpec::default(),
    };
    macro_rules! over {
        ($($f:ident),*) => { $( if let Some(v) = &a.$f { j.$f = Some(v.clone()); } )* };
    }
    over!(modulus, curve, target_n, subgroup, point_p, point_q);
    if let Some(q) = a.q {
        j.q = q;
    }
    if let Some(k) = a.k {
        j.k = k;
    }
    if !a.generators.is_empty() {
        j.generators = Some(a.generators.clone());
    }
    j.extend |= a.extend;
    if j.q == 0 {
        return Err(CliError::Input("q is required".into()));
    }
    if j.k == 0 {
        return Err(CliError::Input("k is required".into()));
    }
    Ok(j)
}

pub fn render_code(code: &LinearCode, format: Format) -> String {
    match format {
        Format::Text => code.render_text(),
        Format::Structured => json(&code.to_record()),
    }
}

pub fn build(a: &BuildArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let j = merge(a)?;
    let format = format.unwrap_or(j.format);
    let built = job::build(&j)?;
    let text = render_code(&built.code, format);
    match &a.output {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(Outcome {
                text: format!(
                    "wrote [{}, {}] code to {}\n",
                    built.code.n(),
                    built.code.k(),
                    path.display()
                ),
                passed: true,
            })
        }
        None => Ok(Outcome { text, passed: true }),
    }
}

/// Parse either the text format or a structured record.
pub fn load_code(src: &str) -> Result<LinearCode, CliError> {
    let res = if src.trim_start().starts_with('{') {
        serde_json::from_str::<MatrixRecord>(src)
            .map_err(|e| CliError::Input(e.to_string()))?
            .to_code()
    } else {
        parse_text_matrix(src)
    };
    res.map_err(|e| CliError::Input(e.to_string()))
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub mds: MdsReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schur: Option<SchurReport>,
    pub passed: bool,
}

impl VerifyReport {
    fn render(&self) -> String {
        let mut s = self.mds.summary();
        s.push('\n');
        if let Some(sr) = &self.schur {
            s.push_str(&sr.summary());
            s.push('\n');
        }
        s.push_str(if self.passed {
            "result: MDS\n"
        } else {
            "result: NOT MDS\n"
        });
        s
    }
}

fn budget_err(e: AnalysisError) -> CliError {
    match e {
        AnalysisError::Budget { .. } => CliError::Budget(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

/// Run explicit methods in the given order. Any over-budget method aborts
/// unless `sample` allows a sampled pass.
pub fn verify_code(
    code: &LinearCode,
    methods: &[Method],
    budget: &Budget,
    sample: bool,
) -> Result<VerifyReport, CliError> {
    if methods.is_empty() {
        let mds = verify_all(code, budget);
        let passed = mds.passed();
        return Ok(VerifyReport {
            mds,
            schur: Some(schur_square(code).1),
            passed,
        });
    }
    let mut mds = MdsReport::new(code);
    let mut schur = None;
    for m in methods {
        match m {
            Method::Structural => {
                let ok = mds_structural_code(code)
                    .ok_or_else(|| CliError::Input("structural check needs a construction record".into()))?;
                mds.methods.push(MethodResult {
                    name: "structural".into(),
                    passed: ok,
                    exhaustive: true,
                    checked: 1,
                    witness: None,
                    note: None,
                });
            }
            Method::Subsets => {
                let r = if sample {
                    mds_subsets(code, budget)
                } else {
                    mds_subsets_exhaustive(code, budget)
                };
                mds.methods.push(r.map_err(budget_err)?);
            }
            Method::Minors => {
                let r = if sample {
                    mds_by_minors(code, budget)
                } else {
                    mds_by_minors_exhaustive(code, budget)
                };
                mds.methods.push(r.map_err(budget_err)?);
            }
            Method::Bruteforce => bruteforce_method(code, budget, &mut mds).map_err(budget_err)?,
            Method::Schur => schur = Some(schur_square(code).1),
        }
    }
    let passed = mds.passed();
    Ok(VerifyReport { mds, schur, passed })
}

pub fn verify(a: &VerifyArgs, format: Format) -> Result<Outcome, CliError> {
    let code = load_code(&read(&a.matrix)?)?;
    let budget = Budget {
        limit: a.budget.unwrap_or(Budget::default().limit),
        seed: a.seed,
        ..Budget::default()
    };
    let r = verify_code(&code, &a.methods, &budget, a.sample)?;
    Ok(Outcome {
        text: match format {
            Format::Text => r.render(),
            Format::Structured => json(&r),
        },
        passed: r.passed,
    })
}

#[derive(Debug, Serialize)]
pub struct LengthRow {
    pub q: u64,
    pub class: LengthClass,
    pub formula: &'static str,
    pub table_n: u64,
    pub group_order: u64,
    pub structure: (u64, u64),
    pub subgroup_order: u64,
    pub matches: bool,
}

#[derive(Debug, Serialize)]
pub struct SweepCell {
    pub q: u64,
    pub selector: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structural: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schur: Option<SchurReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl SweepCell {
    fn passed(&self) -> bool {
        self.structural != Some(false) && self.mds != Some(false)
    }
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub lengths: Vec<LengthRow>,
    pub cells: Vec<SweepCell>,
    pub passed: bool,
}

impl SweepReport {
    fn render(&self) -> String {
        let mut s =
            String::from("    q  class                  formula                         table  N    |H|  match\n");
        for r in &self.lengths {
            let class = serde_json::to_value(r.class).unwrap();
            let _ = writeln!(
                s,
                "{:>5}  {:<22} {:<31} {:>5}  {:<4} {:<4} {}",
                r.q,
                class.as_str().unwrap_or_default(),
                r.formula,
                r.table_n,
                r.group_order,
                r.subgroup_order,
                if r.matches { "yes" } else { "NO" }
            );
        }
        s.push_str("\n    q  sel  k    n  structural  mds   schur  verdict\n");
        for c in &self.cells {
            if let Some(why) = &c.skipped {
                let _ = writeln!(s, "{:>5}  {:>3}  {:>1}  skipped: {why}", c.q, c.selector, c.k);
                continue;
            }
            let yn = |b: Option<bool>| match b {
                Some(true) => "yes",
                Some(false) => "NO",
                None => "-",
            };
            let sr = c.schur.as_ref().expect("built cells carry a Schur report");
            let _ = writeln!(
                s,
                "{:>5}  {:>3}  {:>1}  {:>3}  {:<10}  {:<4}  {:>3}/{:<3} {}",
                c.q,
                c.selector,
                c.k,
                c.n.unwrap_or(0),
                yn(c.structural),
                yn(c.mds),
                sr.dim_square,
                sr.expected,
                sr.verdict
            );
        }
        s.push_str(if self.passed {
            "result: all checks passed\n"
        } else {
            "result: FAILURES\n"
        });
        s
    }
}

/// Length table plus a construction at every (q, selector, k) with the default points.
pub fn sweep_report(qs: &[u64], ks: &[usize], budget: &Budget) -> Result<SweepReport, CliError> {
    let mut lengths = Vec::new();
    let mut cells = Vec::new();
    for &q in qs {
        let class = LengthClass::of(q).ok_or_else(|| CliError::Input(format!("q = {q} is not a prime power")))?;
        let f = job::resolve_field(q, None)?;
        let c = job::resolve_curve(&f, None, None)?;
        let gs = GroupStructure::compute(&c).map_err(|e| CliError::Input(e.to_string()))?;
        let table_n = class.length(q);
        lengths.push(LengthRow {
            q,
            class,
            formula: class.formula(),
            table_n,
            group_order: gs.order(),
            structure: gs.invariants(),
            subgroup_order: gs.order() / 2,
            matches: gs.order() / 2 == table_n,
        });
        let coeffs: Vec<String> = c.coefficients().iter().map(|&a| f.render(a)).collect();
        for selector in 0..gs.index2_subgroups().len() {
            for &k in ks {
                let spec = JobSpec {
                    q,
                    curve: Some(coeffs.clone()),
                    subgroup: Some(selector),
                    k,
                    ..JobSpec::default()
                };
                let mut cell = SweepCell {
                    q,
                    selector,
                    k,
                    n: None,
                    structural: None,
                    mds: None,
                    schur: None,
                    skipped: None,
                };
                match job::build(&spec) {
                    Ok(b) => {
                        let r = verify_all(&b.code, budget);
                        cell.n = Some(b.code.n());
                        cell.structural = mds_structural_code(&b.code);
                        cell.mds = Some(r.passed());
                        cell.schur = Some(schur_square(&b.code).1);
                    }
                    Err(e) => cell.skipped = Some(e.to_string()),
                }
                cells.push(cell);
            }
        }
    }
    let passed = lengths.iter().all(|r| r.matches) && cells.iter().all(SweepCell::passed);
    Ok(SweepReport { lengths, cells, passed })
}

pub fn sweep(a: &SweepArgs, format: Format) -> Result<Outcome, CliError> {
    for &q in &a.q {
        job::resolve_field(q, None)?;
        if largest_admissible_even_n(q).is_none() {
            return Err(CliError::Input(format!("q = {q} has no admissible even point count")));
        }
    }
    let budget = Budget {
        limit: a.budget.unwrap_or(Budget::default().limit),
        ..Budget::default()
    };
    let r = sweep_report(&a.q, &a.k, &budget)?;
    Ok(Outcome {
        text: match format {
            Format::Text => r.render(),
            Format::Structured => json(&r),
        },
        passed: r.passed,
    })
}
