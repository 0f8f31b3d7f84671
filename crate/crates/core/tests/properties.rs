//! Property suites over fixture curves and a seeded random corpus.

mod common;

use common::*;
use ellmds_core::analysis::{rs_control_code, schur_square};
use ellmds_core::code::{build_code_even, build_code_odd};
use ellmds_core::ec::{largest_admissible_even_n, search_curve};
use ellmds_core::func::is_principal;
use ellmds_core::suites::{random_corpus, run_all, SuiteSizes};
use ellmds_core::{Divisor, FieldCtx, FunctionField, GroupStructure, LinearCode, Matrix, Point};
use proptest::prelude::*;

#[test]
fn suites_pass_on_fixtures_and_random_curves() {
    let mut curves = fixture_curves();
    curves.extend(random_corpus(20, 13, 0x5eed));
    let reports = run_all(&curves, SuiteSizes::default(), 11);
    assert_eq!(reports.len(), 7);
    for r in &reports {
        assert!(r.cases > 0, "{} ran no cases", r.name);
        assert!(r.passed(), "{}: {:?}", r.name, &r.failures[..r.failures.len().min(5)]);
    }
}

/// `dim C^2 = min(2k, n)`, less one exactly when `2k = n` and `2G - D` is principal.
#[test]
fn schur_dimension_over_every_q_choice() {
    for q in [7u64, 8, 9, 11, 13] {
        let f = FieldCtx::of_order(q).unwrap();
        let c = search_curve(&f, largest_admissible_even_n(q).unwrap()).unwrap();
        let gs = GroupStructure::compute(&c).unwrap();
        for h in gs.index2_subgroups() {
            for qq in gs.points().iter().filter(|t| !h.contains(t)) {
                for k in 3..=8usize {
                    let code = if k % 2 == 1 {
                        build_code_odd(&c, k, &h, qq)
                    } else {
                        build_code_even(&c, k, &h, &Point::Infinity, qq)
                    };
                    let Ok(code) = code else { continue };
                    if 2 * k > code.n() {
                        continue;
                    }
                    let cons = code.construction().unwrap();
                    let d = Divisor::from_terms(cons.d_points.iter().map(|p| (*p, 1)));
                    let drop = 2 * k == code.n() && is_principal(&cons.g.scaled(2).minus(&d), &c);
                    let (_, r) = schur_square(&code);
                    assert_eq!(r.dim_square, r.expected - usize::from(drop), "q={q} k={k}");
                }
            }
        }
    }
}

fn gf9_code() -> LinearCode {
    let v = fixture("gf9");
    let c = curve(&v);
    let h = GroupStructure::compute(&c).unwrap().index2_subgroup(0).unwrap();
    build_code_odd(&c, 3, &h, &point(&c, &v["job"]["point_q"])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_law_on_fixture_curves(which in 0usize..3, a in any::<usize>(), b in any::<usize>(), c3 in any::<usize>()) {
        let c = &fixture_curves()[which];
        let pts = c.points();
        let (a, b, d) = (pts[a % pts.len()], pts[b % pts.len()], pts[c3 % pts.len()]);
        prop_assert_eq!(c.add(&c.add(&a, &b), &d), c.add(&a, &c.add(&b, &d)));
        prop_assert_eq!(c.add(&a, &b), c.add(&b, &a));
        prop_assert_eq!(c.sub(&c.add(&a, &b), &b), a);
    }

    #[test]
    fn lines_have_principal_divisors(which in 0usize..3, a in any::<usize>(), b in any::<usize>()) {
        let c = &fixture_curves()[which];
        let pts = c.points();
        let (p, q) = (pts[a % pts.len()], pts[b % pts.len()]);
        prop_assume!(!(p.is_infinity() && q.is_infinity()));
        let ff = FunctionField::new(c);
        let l = ff.line_through(&p, &q).unwrap();
        let d = ff.divisor_of(&l).unwrap();
        prop_assert!(is_principal(&d, c));
        for t in [p, q].iter().filter(|t| !t.is_infinity()) {
            prop_assert!(d.coeff(t) >= 1);
        }
    }

    #[test]
    fn schur_dimension_is_monomially_invariant(perm_seed in any::<u64>(), scales in proptest::collection::vec(1u32..9, 8)) {
        let code = gf9_code();
        let f = code.field().clone();
        let mut cols: Vec<usize> = (0..8).collect();
        let mut s = perm_seed;
        for i in (1..8).rev() {
            cols.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let m = code.gen().select_columns(&cols);
        let rows = m
            .row_vecs()
            .into_iter()
            .map(|r| r.iter().zip(&scales).map(|(&e, &c)| f.mul(e, f.from_rep(c).unwrap())).collect())
            .collect();
        let moved = LinearCode::from_matrix(Matrix::from_rows(&f, rows), "moved").unwrap();
        prop_assert_eq!(schur_square(&moved).1.dim_square, 6);
    }

    #[test]
    fn rs_control_square_dimension(q in prop::sample::select(vec![7u64, 8, 9, 11, 13]), n in 2usize..14, k in 1usize..8) {
        prop_assume!(n as u64 <= q && k <= n);
        let f = FieldCtx::of_order(q).unwrap();
        let rs = rs_control_code(&f, n, k).unwrap();
        prop_assert_eq!(schur_square(&rs).1.dim_square, (2 * k - 1).min(n));
    }
}
