//! Shared setup for the benchmark suite: the three worked-example settings.

use ellmds_core::code::{build_code_even, build_code_odd};
use ellmds_core::{Curve, FieldCtx, GroupStructure, LinearCode, Point, Subgroup};

pub struct Setting {
    pub curve: Curve,
    pub group: GroupStructure,
    pub subgroup: Subgroup,
    pub code: LinearCode,
}

fn curve(q: u64, modulus: Vec<u32>, coeffs: [&str; 5]) -> Curve {
    let (p, m) = ellmds_core::gf::prime_power(q).unwrap();
    let f = FieldCtx::new(p, m, Some(modulus)).unwrap();
    let a = coeffs.map(|s| f.parse(s).unwrap());
    Curve::new(f, a).unwrap()
}

/// `y^2 + xy + y = x^3 + 1` over GF(8), `[6, 4]` even-case code.
pub fn small() -> Setting {
    let c = curve(8, vec![1, 1, 0, 1], ["1", "0", "1", "0", "1"]);
    let gs = GroupStructure::compute(&c).unwrap();
    let h = gs.index2_subgroup(0).unwrap();
    let q = c.parse_point("[w^3:w^4:1]").unwrap();
    let code = build_code_even(&c, 4, &h, &Point::Infinity, &q).unwrap();
    Setting {
        curve: c,
        group: gs,
        subgroup: h,
        code,
    }
}

/// `y^2 = x^3 + x` over GF(49), `[32, 5]` odd-case code.
pub fn large() -> Setting {
    let c = curve(49, vec![3, 6, 1], ["0", "0", "0", "1", "0"]);
    let gs = GroupStructure::compute(&c).unwrap();
    let gens = ["[w^4:w^18:1]", "[w^6:w^34:1]"].map(|s| c.parse_point(s).unwrap());
    let h = gs.generated_by(&gens).unwrap();
    let q = c.parse_point("[w^41:w^28:1]").unwrap();
    let code = build_code_odd(&c, 5, &h, &q).unwrap();
    Setting {
        curve: c,
        group: gs,
        subgroup: h,
        code,
    }
}
