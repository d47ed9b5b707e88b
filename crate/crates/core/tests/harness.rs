use std::collections::BTreeMap;

use proptest::prelude::*;
use ramcalc::arith::FiniteField;
use ramcalc::geometry::{CurveGerm, KummerPushAS, SheafModel};
use ramcalc::harness::{
    approx_conditions, approx_params, check_curve_inequality, check_dt_inequality, lc_sup_scan, run_suite,
    scan_levels, semicontinuity_scan, FamilySpec, Scenario, Status, SUITES,
};
use ramcalc::slopes::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn curve(k: &FiniteField, pairs: &[(&str, &str)]) -> CurveGerm {
    let b: BTreeMap<String, String> = pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    CurveGerm::parse(k, &b, 40).unwrap()
}

fn kummer(r: u64) -> SheafModel {
    SheafModel::KummerPushAS(KummerPushAS::new(2, vec![12], r, 2).unwrap())
}

#[test]
fn approx_examples() {
    let p = approx_params(&[q(2, 1)], q(1, 2), 2).unwrap();
    assert_eq!((p.a, p.r, p.b.clone()), (3, 65, vec![19]));
    let x = q(8 * 19, 65);
    assert!(q(2, 1) < x && x < q(5, 2));
    let wide = approx_params(&[q(1, 1)], q(3, 1), 2).unwrap();
    assert!(approx_conditions(&wide, &[q(1, 1)], q(3, 1), 2).iter().all(|c| c.1));
    assert!(approx_params(&[q(2, 1)], q(0, 1), 2).is_err());
}

#[test]
fn curve_and_dt_suites() {
    let k = FiniteField::new(2, 1).unwrap();
    let curves = [
        curve(&k, &[("y1", "t"), ("y2", "t")]),
        curve(&k, &[("y1", "t^2"), ("y2", "1 + t")]),
        curve(&k, &[("y1", "t"), ("y2", "1 + t^2")]),
    ];
    let r = check_curve_inequality(&kummer(5), &curves, None, 0).unwrap();
    assert!(r.passed());
    assert_eq!(r.cases[2].relation, ">=");
    assert!(r.cases[2].strict);

    let r = check_dt_inequality(&kummer(5), &curves, None, 0).unwrap();
    assert!(r.passed());
    let np: Vec<_> = r.cases.iter().filter(|c| c.id.ends_with("-np")).collect();
    assert_eq!(np.len(), 2);
    // α = 2 doubles every height of the generic polygon.
    assert_eq!(np[1].rhs, r#"[["0/1","0/1"],["5/1","24/1"]]"#);
}

#[test]
fn sup_scan() {
    let k = FiniteField::new(2, 1).unwrap();
    let r = lc_sup_scan(&kummer(5), &k, "y1", &[1, 2, 3, 7], None, 0).unwrap();
    assert!(r.passed());
    assert_eq!(r.cases[0].lhs, "7/5");
    assert!(r.cases.iter().filter(|c| c.status == Status::Pass).all(|c| c.strict));
    assert!(lc_sup_scan(&kummer(5), &k, "y1", &[], None, 0).unwrap().cases.is_empty());
}

#[test]
fn family_scans() {
    let k = FiniteField::new(2, 3).unwrap();
    let fam = FamilySpec::parse_as(&k, "l*t^-5 + t^-3", None, "0", 20).unwrap();
    let r = semicontinuity_scan(&fam, 0).unwrap();
    assert!(r.passed());
    assert_eq!(r.details["chi_special"], "4/1");
    assert_eq!(scan_levels(&r)["6/1"].len(), 7);

    let fam = FamilySpec::parse_as(&k, "t^-3", None, "0", 20).unwrap();
    let r = semicontinuity_scan(&fam, 0).unwrap();
    assert_eq!(scan_levels(&r).keys().collect::<Vec<_>>(), ["4/1"]);
}

#[test]
fn tensor_precondition_becomes_a_skip() {
    let src = r#"{"field": {"p": 2}, "model": {"kind": "tensor",
        "left": {"kind": "kummer_push_as", "p_exps": [12], "r": 5, "n": 2},
        "right": {"kind": "kummer_push_as", "p_exps": [12], "r": 5, "n": 2}}}"#;
    let r = run_suite("tensor-dominance", &Scenario::from_json(src, None).unwrap(), 0).unwrap();
    assert_eq!((r.summary.total, r.summary.skip), (1, 1));

    let src = src.replacen(r#""r": 5"#, r#""r": 7"#, 1);
    let r = run_suite("tensor-dominance", &Scenario::from_json(&src, None).unwrap(), 0).unwrap();
    assert!(r.passed());
    assert!(r.summary.pass > 0);
    assert!(r.cases.iter().filter(|c| c.status == Status::Pass).all(|c| c.lhs == c.rhs));
}

#[test]
fn reports_are_deterministic_and_embed_the_scenario() {
    let src = r#"{"field": {"p": 3}, "model": {"kind": "kummer_push_as", "p_exps": [6, 12], "r": 2, "n": 3},
        "family": {"kind": "as", "f": "l*t^-4 + t^-2", "special": "0"}}"#;
    for suite in SUITES {
        if *suite == "tensor-dominance" {
            continue;
        }
        let a = run_suite(suite, &Scenario::from_json(src, None).unwrap(), 11).unwrap();
        let b = run_suite(suite, &Scenario::from_json(src, None).unwrap(), 11).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{suite}");
        assert!(a.passed(), "{suite}");
        assert_eq!(a.scenario["model"]["r"], 2);
        assert_eq!(a.schema, "ramcalc/1");
    }
}

proptest! {
    #[test]
    fn approx_params_always_pass(
        p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
        cs in prop::collection::vec((1i64..40, 1i64..9), 1..4),
        eps in (1i64..20, 1i64..20),
    ) {
        let c: Vec<Rational> = cs.iter().map(|&(n, d)| q(n, d) + q(1, 1)).collect();
        let eps = q(eps.0, eps.1);
        let params = approx_params(&c, eps, p).unwrap();
        for (name, ok) in approx_conditions(&params, &c, eps, p) {
            prop_assert!(ok, "{} fails for {:?}", name, params);
        }
        prop_assert!(KummerPushAS::new(p, params.p_exps(p), params.r, c.len() + 1).is_ok());
    }
}
