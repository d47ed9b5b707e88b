use std::collections::BTreeMap;

use proptest::prelude::*;
use ramcalc::arith::{parse_germ, FiniteField, LaurentGerm, EXACT};
use ramcalc::aschar::ASChar;
use ramcalc::geometry::{
    is_transversal, restrict_to_curve, CurveGerm, GKPullback, KummerPushAS, MonomialMap, QDivisor, SheafModel,
};
use ramcalc::slopes::{Rational, SlopeProfile};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn s(x: &str) -> String {
    x.to_string()
}

fn curve(k: &FiniteField, pairs: &[(&str, &str)]) -> CurveGerm {
    let b = pairs.iter().map(|(a, b)| (s(a), s(b))).collect();
    CurveGerm::parse(k, &b, 40).unwrap()
}

fn kummer(p: u64, p_exps: Vec<u64>, r: u64, n: usize) -> SheafModel {
    SheafModel::KummerPushAS(KummerPushAS::new(p, p_exps, r, n).unwrap())
}

fn gk(p: u64, base: &str, q: u64, b: u64, m: usize, n: usize) -> SheafModel {
    let k = FiniteField::new(p, 1).unwrap();
    let base = ASChar::new(parse_germ(&k, base, 40).unwrap());
    SheafModel::GKPullback(GKPullback::new(base, q, b, m, n).unwrap())
}

#[test]
fn divisor_pullbacks() {
    let f = MonomialMap::new(
        vec![s("x1"), s("x2")],
        BTreeMap::from([(s("t"), BTreeMap::from([(s("x1"), 2), (s("x2"), 1)]))]),
    )
    .unwrap();
    assert_eq!(
        f.pullback_divisor(&QDivisor::new([(s("t"), q(1, 1))])).unwrap(),
        QDivisor::new([(s("x1"), q(2, 1)), (s("x2"), q(1, 1))])
    );
    let d = QDivisor::new([(s("y1"), q(12, 5))]);
    assert_eq!(MonomialMap::identity(&[s("y1"), s("y2")]).pullback_divisor(&d).unwrap(), d);
    let cover = kummer(2, vec![12], 5, 2);
    let SheafModel::KummerPushAS(k) = &cover else { unreachable!() };
    assert_eq!(
        k.cover().pullback_divisor(&cover.conductor_divisor().unwrap()).unwrap(),
        QDivisor::new([(s("y1"), q(12, 1))])
    );
}

#[test]
fn curve_multiplicities() {
    let k = FiniteField::new(5, 1).unwrap();
    let h = curve(&k, &[("x1", "t^2"), ("x2", "3 + t"), ("x3", "2*t + t^2")]);
    assert_eq!(h.multiplicity("x1").unwrap(), 2);
    assert_eq!(h.multiplicity("x2").unwrap(), 0);
    assert_eq!(h.multiplicity("x3").unwrap(), 1);
}

#[test]
fn divisors_of_models() {
    let k = kummer(2, vec![12], 5, 2);
    assert_eq!(k.conductor_divisor().unwrap(), QDivisor::new([(s("y1"), q(12, 5))]));
    let g = gk(2, "t^-3", 2, 1, 2, 2);
    assert_eq!(
        g.conductor_divisor().unwrap(),
        QDivisor::new([(s("x1"), q(6, 1)), (s("x2"), q(4, 1))])
    );
    assert_eq!(
        g.sw_divisor().unwrap(),
        QDivisor::new([(s("x1"), q(6, 1)), (s("x2"), q(3, 1))])
    );
}

#[test]
fn transversality() {
    let k = FiniteField::new(3, 1).unwrap();
    let m = kummer(3, vec![6], 2, 2);
    for (y2, want) in [("2 + t", true), ("2 + t^2", false), ("1 + t^3", false)] {
        let h = curve(&k, &[("y1", "t"), ("y2", y2)]);
        assert_eq!(is_transversal(&m, &h).unwrap(), want, "{y2}");
    }
}

#[test]
fn characteristic_cycles() {
    let k = kummer(2, vec![12], 5, 2);
    let cc = k.cc_report().unwrap();
    assert_eq!((cc.sign, cc.zero_section), (1, 5));
    assert_eq!(cc.terms[0].coeff, q(12, 1));
    assert_eq!(cc.terms[0].direction, "dy2");
    let g = gk(2, "t^-3", 2, 1, 2, 2);
    let cc = g.cc_report().unwrap();
    assert_eq!(cc.terms[0].coeff, q(6, 1));
    // The rank-7 factor scales every coefficient of the dominant one.
    let t = SheafModel::tensor(kummer(2, vec![12], 5, 2), kummer(2, vec![12], 7, 2)).unwrap();
    let cc = t.cc_report().unwrap();
    assert_eq!((cc.zero_section, cc.terms[0].coeff), (35, q(84, 1)));
    assert_eq!(cc.to_string(), "+(35[T*X] + 84[y1.<dy2>])");
}

#[test]
fn restriction_examples() {
    let k = FiniteField::new(2, 1).unwrap();
    let m = kummer(2, vec![12], 5, 2);
    let h = curve(&k, &[("y1", "t"), ("y2", "t")]);
    assert_eq!(restrict_to_curve(&m, &h).unwrap(), SlopeProfile::isoclinic(q(12, 5), 5).unwrap());
    let h = curve(&k, &[("y1", "t^2"), ("y2", "1 + t")]);
    assert_eq!(restrict_to_curve(&m, &h).unwrap(), SlopeProfile::isoclinic(q(24, 5), 5).unwrap());
    let h = curve(&k, &[("y1", "t"), ("y2", "t^2")]);
    assert!(restrict_to_curve(&m, &h).unwrap().conductor().unwrap() < q(12, 5));
}

/// A valid Kummer model with `m ≤ 2`, `n ≤ 3` and `r ≤ 7`.
fn kummer_strategy() -> impl Strategy<Value = (u64, Vec<u64>, u64, usize)> {
    (prop_oneof![Just(2u64), Just(3)], 1u32..=2, 1usize..=2, any::<bool>(), prop::collection::vec(1u64..5, 2), 1u64..=7)
        .prop_filter_map("valid parameters", |(p, a, m, extra, bs, r)| {
            let bs: Vec<u64> = bs[..m].iter().map(|&b| if b % p == 0 { b + 1 } else { b }).collect();
            let pa = p.pow(a);
            let exps: Vec<u64> = bs.iter().map(|b| pa * b).collect();
            let bound = bs.iter().map(|b| pa * b - b).min().unwrap();
            let n = if m == 1 && extra { 3 } else { m + 1 };
            (r % p != 0 && r < bound && exps.iter().all(|&e| e > p)).then_some((p, exps, r, n))
        })
}

type Coeffs = (Vec<(u64, u64, u64)>, u64, u64);

fn kummer_curve(k: &FiniteField, n: usize, alphas: &[u64], (units, mu, c): &Coeffs) -> CurveGerm {
    let p = k.characteristic() as u64;
    let mut b = BTreeMap::new();
    for i in 0..n {
        let (u0, u1, u2) = units[i];
        let terms = [(0, 1 + u0 % (p - 1)), (1, u1), (2, u2)];
        let unit = LaurentGerm::new(k.clone(), terms.iter().map(|&(e, c)| (e, k.from_int(c as i64))), EXACT);
        let g = if i < alphas.len() {
            unit.shift(alphas[i] as i64)
        } else if i + 1 < n {
            unit
        } else {
            let lin = [(0, *mu), (1, 1 + c % (p - 1))];
            LaurentGerm::new(k.clone(), lin.iter().map(|&(e, c)| (e, k.from_int(c as i64))), EXACT)
        };
        b.insert(format!("y{}", i + 1), g);
    }
    CurveGerm::new(k.clone(), b).unwrap()
}

fn coeffs() -> impl Strategy<Value = Coeffs> {
    (prop::collection::vec((0u64..5, 0u64..5, 0u64..5), 3), 0u64..5, 0u64..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// On transversal curves the restriction is isoclinic of rank `r^m`
    /// with conductor `Σ α_i p_i / r`, and `dt` is an integer.
    #[test]
    fn kummer_curve_formula(
        (p, exps, r, n) in kummer_strategy(),
        alphas in prop::collection::vec(0u64..=3, 2),
        cs in coeffs(),
    ) {
        let m = exps.len();
        let alphas = &alphas[..m];
        prop_assume!(alphas.iter().any(|&a| a > 0));
        let k = FiniteField::new(p, 1).unwrap();
        let model = kummer(p, exps.clone(), r, n);
        let h = kummer_curve(&k, n, alphas, &cs);
        prop_assert!(is_transversal(&model, &h).unwrap());
        let prof = restrict_to_curve(&model, &h).unwrap();
        let expected: i64 = alphas.iter().zip(&exps).map(|(&a, &e)| (a * e) as i64).sum();
        prop_assert_eq!(prof, SlopeProfile::isoclinic(q(expected, r as i64), r.pow(m as u32)).unwrap());
    }

    /// Any curve: the restricted conductor never exceeds the pulled-back
    /// conductor divisor.
    #[test]
    fn conductor_decreases_on_flat_curves(
        (p, exps, r, n) in kummer_strategy(),
        alphas in prop::collection::vec(0u64..=3, 2),
        cs in coeffs(),
        j in 1u64..=2,
    ) {
        let m = exps.len();
        let alphas = &alphas[..m];
        prop_assume!(alphas.iter().any(|&a| a > 0));
        let k = FiniteField::new(p, 1).unwrap();
        let model = kummer(p, exps.clone(), r, n);
        let h = kummer_curve(&k, n, alphas, &cs);
        let mut b = h.bindings().clone();
        let last = format!("y{n}");
        let flat = LaurentGerm::new(k.clone(), [(0, k.from_int(cs.1 as i64)), ((p * j) as i64, k.one())], EXACT);
        b.insert(last, flat);
        let h = CurveGerm::new(k.clone(), b).unwrap();
        prop_assert!(!is_transversal(&model, &h).unwrap());
        let prof = restrict_to_curve(&model, &h).unwrap();
        let bound: i64 = alphas.iter().zip(&exps).map(|(&a, &e)| (a * e) as i64).sum();
        prop_assert!(prof.conductor().unwrap() <= q(bound, r as i64));
        prop_assert!(prof.hasse_arf_check());
    }

    /// Precomposing with `t ↦ t^d`, `d` prime to `p`, multiplies every log
    /// slope by `d`.
    #[test]
    fn tame_scaling(
        (p, exps, r, n) in kummer_strategy(),
        alphas in prop::collection::vec(0u64..=2, 2),
        cs in coeffs(),
        d in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
    ) {
        prop_assume!(d % p != 0);
        let m = exps.len();
        let alphas = &alphas[..m];
        prop_assume!(alphas.iter().any(|&a| a > 0));
        let k = FiniteField::new(p, 1).unwrap();
        let model = kummer(p, exps, r, n);
        let h = kummer_curve(&k, n, alphas, &cs);
        let base = restrict_to_curve(&model, &h).unwrap().to_log();
        let pulled = restrict_to_curve(&model, &h.precompose_power(d)).unwrap().to_log();
        prop_assert_eq!(pulled, base.tame_pullback_log(d));
    }

    /// Monomial pullbacks: `q(c−1)` and `b(c−1)+1` on the divisors, and
    /// `(Mq+b)(c−1)+1` on curves of tame index `Mq+b`.
    #[test]
    fn gk_formulas(
        p in prop_oneof![Just(2u64), Just(3)],
        sw in 1u64..8,
        qexp in 1u32..=2,
        b in 1u64..6,
        mm in 1u64..4,
    ) {
        prop_assume!(sw % p != 0 && b % p != 0);
        let qq = p.pow(qexp);
        prop_assume!((qq - 1) * sw > 1);
        let g = gk(p, &format!("t^-{sw}"), qq, b, 2, 2);
        let c = sw as i64 + 1;
        prop_assert_eq!(
            g.conductor_divisor().unwrap(),
            QDivisor::new([(s("x1"), q(qq as i64 * (c - 1), 1)), (s("x2"), q(b as i64 * (c - 1) + 1, 1))])
        );
        let k = FiniteField::new(p, 1).unwrap();
        let h = curve(&k, &[("x1", &format!("t^{mm} + t^{}", mm + 1)), ("x2", "t")]);
        let idx = (mm * qq + b) as i64;
        prop_assert_eq!(restrict_to_curve(&g, &h).unwrap().conductor().unwrap(), q(idx * (c - 1) + 1, 1));
    }
}
