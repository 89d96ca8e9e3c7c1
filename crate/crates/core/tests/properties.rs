use num_bigint::BigInt;
use num_rational::BigRational;
use plectic_core::cohmodel::{table_from_counts, CuspFormDim, DimPoly};
use plectic_core::extclass::{
    certified_regulator, extension_class, hodge_regulator_matrix, regulator, Precision, Verdict,
};
use plectic_core::cohmodel::GaloisDatum;
use plectic_core::interval::Interval;
use plectic_core::numfield::{make_field, FieldElement, TotallyRealField, UnitSystem};
use plectic_core::quadarith::{fundamental_unit, QuadField};
use plectic_core::toroidal::{cusp_cycle, cycle_from_seed, mobius, monodromy, monodromy_logs};
use proptest::prelude::*;

fn margin() -> BigRational {
    BigRational::new(1.into(), 1_000_000.into())
}

fn quadratic_units(m: i64) -> (TotallyRealField, UnitSystem) {
    let q = QuadField::new(m).unwrap();
    let f = q.to_field().unwrap();
    let eps = fundamental_unit(m).unwrap().to_field_element();
    let u = f.check_units(&[eps]).unwrap();
    (f, u)
}

fn cubic() -> (TotallyRealField, UnitSystem) {
    let f = make_field(&[1, -2, -1, 1]).unwrap();
    let u = f.check_units(&[FieldElement::from_ints(&[0, 1, 0]), FieldElement::from_ints(&[-1, 1, 0])]).unwrap();
    (f, u)
}

/// Real roots of a monic cubic by bisection between sign changes.
fn cubic_roots(c: [f64; 3]) -> Vec<f64> {
    let f = |x: f64| ((x + c[2]) * x + c[1]) * x + c[0];
    let mut roots = Vec::new();
    let mut x = -10.0;
    while x < 10.0 {
        let (mut lo, mut hi) = (x, x + 0.01);
        if f(lo) * f(hi) < 0.0 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x += 0.01;
    }
    roots
}

#[test]
fn regulator_anchors_against_float_oracle() {
    let reg = |m: i64| {
        let (f, u) = quadratic_units(m);
        regulator(&hodge_regulator_matrix(&f, &u, &margin(), &Precision::default()).unwrap()).mid_f64()
    };
    assert!((reg(5) - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
    assert!((reg(5) - 0.4812).abs() < 1e-4);
    assert!((reg(2) - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);
    assert!((reg(2) - 0.8814).abs() < 1e-4);
    assert!((reg(3) - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-12);
    assert!((reg(10) - (3.0 + 10f64.sqrt()).ln()).abs() < 1e-12);

    let (f, u) = cubic();
    let got = regulator(&hodge_regulator_matrix(&f, &u, &margin(), &Precision::default()).unwrap()).mid_f64();
    let rs = cubic_roots([1.0, -2.0, -1.0]);
    assert_eq!(rs.len(), 3);
    let l = |x: f64| x.abs().ln();
    let det = l(rs[0]) * l(rs[1] - 1.0) - l(rs[1]) * l(rs[0] - 1.0);
    assert!((got - det.abs()).abs() < 1e-10, "{got} vs {det}");
    assert!((got - 0.5255).abs() < 1e-4);
}

#[test]
fn certificates_are_reproduced_at_double_precision() {
    for m in [2, 3, 5, 10] {
        let (f, u) = quadratic_units(m);
        assert!(certified_regulator(&f, &u, &margin(), &Precision::default()).unwrap().consistent());
    }
    let (f, u) = cubic();
    assert!(certified_regulator(&f, &u, &margin(), &Precision::default()).unwrap().consistent());
}

#[test]
fn monodromy_logs_are_unit_power_times_regulator() {
    for m in [2, 3, 5, 6, 7, 10, 13] {
        let q = QuadField::new(m).unwrap();
        let mono = monodromy(&cusp_cycle(&q).unwrap(), &q).unwrap();
        let logs = monodromy_logs(&mono, &q, 128).unwrap();
        let (f, u) = quadratic_units(m);
        let reg = regulator(&hodge_regulator_matrix(&f, &u, &margin(), &Precision::default()).unwrap());
        let k = BigRational::from_integer(BigInt::from(mono.unit_power));
        let expected = reg.scale(&k);
        for l in &logs {
            assert!(l.abs().overlaps(&expected), "m = {m}");
        }
        assert!(logs[0].add(&logs[1]).contains_zero());
    }
}

fn small_element() -> impl Strategy<Value = FieldElement> {
    prop::collection::vec(-6i64..=6, 3).prop_map(|c| FieldElement::from_ints(&c))
}

const SL2_GENS: [[[i64; 2]; 2]; 4] = [[[0, -1], [1, 0]], [[1, 1], [0, 1]], [[1, -1], [0, 1]], [[1, 0], [1, 1]]];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_is_multiplicative(a in small_element(), b in small_element()) {
        let (f, _) = cubic();
        let ab = f.mul(&a, &b);
        prop_assert_eq!(f.norm(&ab), f.norm(&a) * f.norm(&b));
    }

    #[test]
    fn refinement_nests(index in 0usize..3, bits in 32u32..256) {
        let (f, _) = cubic();
        let coarse = f.embedding_enclosure(index, bits);
        let fine = f.embedding_enclosure(index, bits * 2);
        prop_assert!(fine.is_subset_of(&coarse));
        prop_assert!(fine.width() <= coarse.width());
    }

    #[test]
    fn table_identities(r in 2usize..=7, c in 1usize..=3, extra in 0usize..=3, s in prop::option::of(0u64..=4)) {
        let h = c + extra;
        let sdim = s.map_or(CuspFormDim::Symbolic, CuspFormDim::Known);
        let t = table_from_counts(r, c, h, sdim).unwrap();
        t.verify().unwrap();
        let top = 2 * r;
        // long exact sequence of the pair: alternating sum vanishes
        let alt: DimPoly = t.rows.iter().map(|row| {
            let sum = row.hc() - row.h() + row.hbd();
            if row.n % 2 == 0 { sum } else { -sum }
        }).sum();
        prop_assert!(alt.is_zero());
        for n in 0..=top {
            prop_assert_eq!(t.row(n).hc(), t.row(top - n).h());
            if n <= 2 * r - 1 {
                prop_assert_eq!(t.row(n).hbd(), t.row(2 * r - 1 - n).hbd());
            }
        }
        prop_assert!(t.row(1).h().is_zero());
        prop_assert_eq!(t.row(0).h(), DimPoly::int(c as i64));
    }

    #[test]
    fn regulator_scales_with_unit_powers(m in prop::sample::select(vec![2i64, 3, 5, 6, 7, 10]), k in 1u32..=5) {
        let (f, u) = quadratic_units(m);
        let base = regulator(&hodge_regulator_matrix(&f, &u, &margin(), &Precision::default()).unwrap());
        let powered = f.check_units(&[f.pow(&u.units[0], k)]).unwrap();
        let reg_k = regulator(&hodge_regulator_matrix(&f, &powered, &margin(), &Precision::default()).unwrap());
        prop_assert!(reg_k.overlaps(&base.scale(&BigRational::from_integer(k.into()))));
    }

    #[test]
    fn doubling_precision_keeps_the_verdict(m in prop::sample::select(vec![2i64, 3, 5, 10]), start in 32u32..=256) {
        let (f, u) = quadratic_units(m);
        let g = GaloisDatum::level_one(2, 1).unwrap();
        let lo = Precision { start_bits: start, max_bits: 4096 };
        let hi = Precision { start_bits: start * 2, max_bits: 4096 };
        let a = extension_class(&f, &u, &g, &margin(), &lo, None).unwrap();
        let b = extension_class(&f, &u, &g, &margin(), &hi, None).unwrap();
        prop_assert_eq!(a.verdict, Verdict::Nontrivial);
        prop_assert_eq!(b.verdict, Verdict::Nontrivial);
    }

    #[test]
    fn cusp_cycle_is_independent_of_the_seed(
        m in prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 11, 13]),
        word in prop::collection::vec(0usize..4, 1..=5),
    ) {
        let q = QuadField::new(m).unwrap();
        let base = cusp_cycle(&q).unwrap();
        let mut w = q.omega();
        for g in word {
            w = mobius(&w, SL2_GENS[g]).unwrap();
        }
        let moved = cycle_from_seed(w, q.d).unwrap();
        prop_assert_eq!(moved.b, base.b);
    }
}

#[test]
fn interval_point_sanity() {
    let i = Interval::from_int(3);
    assert!(i.contains(&BigRational::from_integer(3.into())));
}
