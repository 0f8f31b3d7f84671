//! Job specifications and their resolution into curves, subgroups and codes.

use serde::{Deserialize, Serialize};

use ellmds_core::analysis::Budget;
use ellmds_core::code::{build_code_even, build_code_odd, extend_code};
use ellmds_core::ec::{largest_admissible_even_n, search_curve};
use ellmds_core::gf::prime_power;
use ellmds_core::{Curve, Fe, Field, FieldCtx, GroupStructure, LinearCode, Point, Subgroup};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Structural,
    Subsets,
    Minors,
    Bruteforce,
    Schur,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Structured,
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobSpec {
    pub q: u64,
    pub modulus: Option<String>,
    /// `[a1, a2, a3, a4, a6]`, or `[a4, a6]` for the short form.
    pub curve: Option<Vec<String>>,
    pub target_n: Option<u64>,
    /// Index into the canonical list of index-2 subgroups.
    pub subgroup: Option<usize>,
    pub generators: Option<Vec<String>>,
    pub k: usize,
    pub extend: bool,
    pub point_p: Option<String>,
    pub point_q: Option<String>,
    /// Empty means every method that fits the budget.
    pub methods: Vec<Method>,
    pub format: Format,
    pub seed: u64,
    pub budget: Option<u64>,
    pub workers: Option<usize>,
}

impl JobSpec {
    pub fn budget(&self) -> Budget {
        Budget {
            limit: self.budget.unwrap_or(Budget::default().limit),
            seed: self.seed,
            ..Budget::default()
        }
    }
}

pub fn resolve_field(q: u64, modulus: Option<&str>) -> Result<Field, CliError> {
    let (p, m) = prime_power(q).ok_or_else(|| CliError::Input(format!("q = {q} is not a prime power")))?;
    let poly = modulus
        .map(|s| FieldCtx::parse_modulus(s, p))
        .transpose()
        .map_err(|e| CliError::Input(e.to_string()))?;
    FieldCtx::new(p, m, poly).map_err(|e| CliError::Input(e.to_string()))
}

pub fn resolve_curve(f: &Field, coeffs: Option<&[String]>, target_n: Option<u64>) -> Result<Curve, CliError> {
    match coeffs {
        Some(cs) => {
            let parsed: Vec<Fe> = cs
                .iter()
                .map(|s| f.parse(s))
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Input(e.to_string()))?;
            let z = f.zero();
            let full = match parsed.as_slice() {
                [a4, a6] => [z, z, z, *a4, *a6],
                [a1, a2, a3, a4, a6] => [*a1, *a2, *a3, *a4, *a6],
                _ => return Err(CliError::Input("curve needs 2 or 5 coefficients".into())),
            };
            let c = Curve::new(f.clone(), full).map_err(|e| CliError::Input(e.to_string()))?;
            if let Some(t) = target_n {
                let n = c.count_points();
                if n != t {
                    return Err(CliError::Input(format!("curve has {n} points, target was {t}")));
                }
            }
            Ok(c)
        }
        None => {
            let q = f.order() as u64;
            let target = match target_n {
                Some(t) => t,
                None => largest_admissible_even_n(q)
                    .ok_or_else(|| CliError::Input(format!("no admissible even point count for q = {q}")))?,
            };
            search_curve(f, target).map_err(|e| CliError::NotFound(e.to_string()))
        }
    }
}

pub fn parse_point(c: &Curve, s: &str) -> Result<Point, CliError> {
    c.parse_point(s).map_err(|e| CliError::Input(e.to_string()))
}

pub fn resolve_subgroup(gs: &GroupStructure, job: &JobSpec) -> Result<Subgroup, CliError> {
    let c = gs.curve();
    let h = match &job.generators {
        Some(gens) => {
            let pts = gens.iter().map(|s| parse_point(c, s)).collect::<Result<Vec<_>, _>>()?;
            gs.generated_by(&pts).map_err(|e| CliError::Input(e.to_string()))?
        }
        None => gs
            .index2_subgroup(job.subgroup.unwrap_or(0))
            .map_err(|e| CliError::Input(e.to_string()))?,
    };
    if h.index() != 2 {
        return Err(CliError::Input(format!(
            "subgroup has order {} and index {}, not 2",
            h.order(),
            h.index()
        )));
    }
    Ok(h)
}

/// The resolved setting of a job plus its code.
pub struct Built {
    pub curve: Curve,
    pub group: GroupStructure,
    pub subgroup: Subgroup,
    pub code: LinearCode,
}

pub fn build(job: &JobSpec) -> Result<Built, CliError> {
    let f = resolve_field(job.q, job.modulus.as_deref())?;
    let curve = resolve_curve(&f, job.curve.as_deref(), job.target_n)?;
    let group = GroupStructure::compute(&curve).map_err(|e| CliError::Input(e.to_string()))?;
    let subgroup = resolve_subgroup(&group, job)?;
    let q = match &job.point_q {
        Some(s) => parse_point(&curve, s)?,
        None => *group
            .points()
            .iter()
            .find(|t| !subgroup.contains(t))
            .expect("an index-2 subgroup leaves a coset"),
    };
    let code = if job.k % 2 == 1 {
        if job.extend {
            return Err(CliError::Input("only even k can be extended".into()));
        }
        build_code_odd(&curve, job.k, &subgroup, &q)
    } else {
        let p = match &job.point_p {
            Some(s) => parse_point(&curve, s)?,
            None => Point::Infinity,
        };
        build_code_even(&curve, job.k, &subgroup, &p, &q).and_then(|c| if job.extend { extend_code(&c) } else { Ok(c) })
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Built {
        curve,
        group,
        subgroup,
        code,
    })
}
