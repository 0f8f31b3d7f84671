//! Fixture loading shared by the integration tests.
#![allow(dead_code)]

use ellmds_core::{Curve, Fe, Field, FieldCtx, LinearCode, Matrix, Point};
use serde_json::Value;

pub fn fixture(name: &str) -> Value {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    serde_json::from_str(&text).unwrap()
}

pub fn field(v: &Value) -> Field {
    let job = &v["job"];
    let q = job["q"].as_u64().unwrap();
    let (p, m) = ellmds_core::gf::prime_power(q).unwrap();
    let modulus = FieldCtx::parse_modulus(job["modulus"].as_str().unwrap(), p).unwrap();
    FieldCtx::new(p, m, Some(modulus)).unwrap()
}

pub fn curve(v: &Value) -> Curve {
    let f = field(v);
    let c: Vec<Fe> = v["job"]["curve"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| f.parse(s.as_str().unwrap()).unwrap())
        .collect();
    Curve::new(f, c.try_into().unwrap()).unwrap()
}

pub fn point(c: &Curve, v: &Value) -> Point {
    c.parse_point(v.as_str().unwrap()).unwrap()
}

pub fn points(c: &Curve, v: &Value) -> Vec<Point> {
    v.as_array().unwrap().iter().map(|s| point(c, s)).collect()
}

pub fn matrix(f: &Field, v: &Value) -> Matrix {
    let rows = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|e| f.parse(e.as_str().unwrap()).unwrap())
                .collect()
        })
        .collect();
    Matrix::from_rows(f, rows)
}

pub fn printed(v: &Value) -> LinearCode {
    LinearCode::from_matrix(matrix(&field(v), &v["printed_matrix"]), "fixture").unwrap()
}

pub fn fixture_curves() -> Vec<Curve> {
    ["gf8", "gf9", "gf49"].iter().map(|n| curve(&fixture(n))).collect()
}
