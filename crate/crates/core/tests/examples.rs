//! The three worked examples: fixture curves, printed matrices and our constructions.

mod common;

use common::*;
use ellmds_core::analysis::*;
use ellmds_core::code::{build_code_even, build_code_odd, extend_code};
use ellmds_core::ec::{largest_admissible_even_n, search_curve, waterhouse_max_even_n};
use ellmds_core::{FunctionField, GroupStructure, LinearCode, Matrix, Point};
use itertools::Itertools;

fn budget() -> Budget {
    Budget::default()
}

fn gf8_code() -> LinearCode {
    let v = fixture("gf8");
    let c = curve(&v);
    let h = GroupStructure::compute(&c).unwrap().index2_subgroup(0).unwrap();
    let p = point(&c, &v["job"]["point_p"]);
    let q = point(&c, &v["job"]["point_q"]);
    build_code_even(&c, 4, &h, &p, &q).unwrap()
}

#[test]
fn gf8_group_and_subgroup() {
    let v = fixture("gf8");
    let c = curve(&v);
    let gs = GroupStructure::compute(&c).unwrap();
    assert_eq!(gs.order(), 14);
    assert_eq!(gs.invariants(), (1, 14));
    assert_eq!(waterhouse_max_even_n(8).unwrap(), 14);
    let g = point(&c, &v["claimed"]["generator"]);
    assert_eq!(c.order_of(&g, 14), 14);
    let h = gs.index2_subgroup(0).unwrap();
    let mut listed = points(&c, &v["subgroup_points"]);
    listed.sort();
    assert_eq!(h.members(), listed.as_slice());
}

#[test]
fn gf8_construction_is_mds() {
    let code = gf8_code();
    assert_eq!((code.n(), code.k()), (6, 4));
    let cons = code.construction().unwrap();
    let h = cons.subgroup.as_ref().unwrap();
    // [3]O + Q
    assert!(mds_structural(&cons.curve, h, &cons.g));
    let l2 = mds_subsets_exhaustive(&code, &budget()).unwrap();
    assert!(l2.passed && l2.checked == 20);
    let report = verify_all(&code, &budget());
    assert!(report.passed(), "{}", report.summary());
    assert_eq!(report.verified_d, Some(3));
}

#[test]
fn gf8_printed_matrices() {
    let v = fixture("gf8");
    let f = field(&v);
    let printed = printed(&v);
    let std = LinearCode::from_matrix(matrix(&f, &v["printed_standard_form"]), "fixture").unwrap();
    for code in [&printed, &std] {
        let r = verify_all(code, &budget());
        assert!(r.passed(), "{}", r.summary());
        assert_eq!(r.verified_d, Some(3));
    }
    // The printed standard form is not the rref of the printed matrix.
    assert_ne!(printed.gen().rref().0, *std.gen());
    // It is the rref of our construction after one column permutation.
    let ours = gf8_code();
    let hit = (0..6)
        .permutations(6)
        .any(|perm| ours.gen().select_columns(&perm).rref().0 == *std.gen());
    assert!(hit);
}

#[test]
fn gf8_extension_is_seven_four_four() {
    let ext = extend_code(&gf8_code()).unwrap();
    assert_eq!((ext.n(), ext.k()), (7, 4));
    let d = min_distance_bruteforce(&ext, &budget()).unwrap();
    assert_eq!(d.d, 4);
    assert!(mds_by_minors_exhaustive(&ext, &budget()).unwrap().passed);
    assert!(mds_subsets_exhaustive(&ext, &budget()).is_err());
}

fn gf9_code() -> LinearCode {
    let v = fixture("gf9");
    let c = curve(&v);
    let h = GroupStructure::compute(&c).unwrap().index2_subgroup(0).unwrap();
    build_code_odd(&c, 3, &h, &point(&c, &v["job"]["point_q"])).unwrap()
}

#[test]
fn gf9_group_and_code() {
    let v = fixture("gf9");
    let c = curve(&v);
    let gs = GroupStructure::compute(&c).unwrap();
    assert_eq!((gs.order(), gs.invariants()), (16, (4, 4)));
    let h = gs.index2_subgroup(0).unwrap();
    let mut listed = points(&c, &v["subgroup_points"]);
    listed.sort();
    assert_eq!(h.members(), listed.as_slice());
    let code = gf9_code();
    let r = verify_all(&code, &budget());
    assert!(r.passed(), "{}", r.summary());
    assert_eq!(r.verified_d, Some(6));
    let (_, s) = schur_square(&code);
    assert_eq!(
        (s.dim_square, s.rs_baseline, s.verdict),
        (6, 5, Verdict::NotRsEquivalent)
    );
}

#[test]
fn gf9_printed_matrix_matches_recovered_column_order() {
    let v = fixture("gf9");
    let c = curve(&v);
    let f = field(&v);
    let printed = printed(&v);
    let code = gf9_code();
    let cons = code.construction().unwrap();
    let ff = FunctionField::new(&c);
    let cols = points(&c, &v["column_order"]);
    let ours = ff.evaluation_matrix(&cons.basis, &cols).unwrap();
    assert!(ours.same_row_space(printed.gen()));
    let std = matrix(&f, &v["printed_standard_form"]);
    assert_eq!(printed.gen().rref().0, std);
    let r = verify_all(&printed, &budget());
    assert!(r.passed(), "{}", r.summary());
    assert_eq!(r.verified_d, Some(6));
    assert_eq!(schur_square(&printed).1.dim_square, 6);
}

fn gf49_setup() -> (ellmds_core::Curve, GroupStructure, ellmds_core::Subgroup) {
    let v = fixture("gf49");
    let c = curve(&v);
    let gs = GroupStructure::compute(&c).unwrap();
    let gens = points(&c, &v["job"]["generators"]);
    let h = gs.generated_by(&gens).unwrap();
    (c, gs, h)
}

#[test]
fn gf49_stated_generators_span_order_sixteen() {
    let v = fixture("gf49");
    let (c, gs, h) = gf49_setup();
    assert_eq!((gs.order(), gs.invariants()), (64, (8, 8)));
    assert_eq!((h.order(), h.structure(&c)), (32, (4, 8)));
    let a1 = point(&c, &v["basis_points"]["A1"]);
    assert!(!h.contains(&a1));
    let stated = gs.generated_by(&points(&c, &v["stated_generators"])).unwrap();
    assert_eq!(stated.order(), 16);
}

#[test]
fn gf49_code_checks() {
    let v = fixture("gf49");
    let (c, _, h) = gf49_setup();
    let q = point(&c, &v["job"]["point_q"]);
    let code = build_code_odd(&c, 5, &h, &q).unwrap();
    assert_eq!((code.n(), code.k()), (32, 5));
    let minors = mds_by_minors_exhaustive(&code, &budget()).unwrap();
    assert!(minors.passed && minors.checked == 201_376);
    let l2 = mds_subsets_exhaustive(&code, &budget()).unwrap();
    assert!(l2.passed && l2.checked == 35_960);
    let (_, s) = schur_square(&code);
    assert_eq!((s.dim_square, s.verdict), (10, Verdict::NotRsEquivalent));
    assert!(matches!(mec_bound_check(49, 32, 5, 64), BoundCheck::Skipped(_)));
}

#[test]
fn gf49_printed_matrix_is_a_translated_construction() {
    let v = fixture("gf49");
    let (c, _, h) = gf49_setup();
    let f = field(&v);
    let a1 = point(&c, &v["basis_points"]["A1"]);
    let a2 = point(&c, &v["basis_points"]["A2"]);
    // Q' = [2]A1 + A2 lies outside H as well.
    let q2 = c.add(&c.mul(2, &a1), &a2);
    assert_eq!(c.render_point(&q2), "[w^9 : w^15 : 1]");
    assert!(!h.contains(&q2));
    let printed = printed(&v);
    let std = matrix(&f, &v["printed_standard_form"]);
    assert_eq!(printed.gen().rref().0, std);
    let ff = FunctionField::new(&c);
    let basis = ff.rr_basis_kq(5, &q2).unwrap();
    let coords = [
        (0, 0),
        (5, 5),
        (1, 3),
        (6, 0),
        (2, 6),
        (7, 3),
        (3, 1),
        (4, 4),
        (5, 7),
        (6, 2),
        (7, 5),
        (0, 2),
        (1, 5),
        (2, 0),
        (3, 3),
        (4, 6),
        (5, 1),
        (6, 4),
        (7, 7),
        (0, 4),
        (1, 7),
        (2, 2),
        (3, 5),
        (4, 0),
        (5, 3),
        (6, 6),
        (7, 1),
        (0, 6),
        (1, 1),
        (2, 4),
        (3, 7),
        (4, 2),
    ];
    let cols: Vec<Point> = coords
        .iter()
        .map(|&(i, j)| c.add(&c.mul(i, &a1), &c.mul(j, &a2)))
        .collect();
    assert!(cols.iter().all(|p| h.contains(p)));
    let ours: Matrix = ff.evaluation_matrix(&basis.functions, &cols).unwrap();
    assert!(ours.same_row_space(printed.gen()));
    assert!(mds_by_minors_exhaustive(&printed, &budget()).unwrap().passed);
}

#[test]
fn search_reaches_example_orders() {
    for (q, n) in [(8u64, 14u64), (9, 16), (49, 64)] {
        assert_eq!(largest_admissible_even_n(q), Some(n));
        let f = ellmds_core::FieldCtx::of_order(q).unwrap();
        assert_eq!(search_curve(&f, n).unwrap().count_points(), n);
    }
}
