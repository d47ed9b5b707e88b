use proptest::prelude::*;
use ramcalc::slopes::{tensor, LogSlopeProfile, Rational, SlopeProfile, TensorOutcome};
use ramcalc::Error;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn prof(e: &[(i64, i64, u64)]) -> SlopeProfile {
    SlopeProfile::new(e.iter().map(|&(n, d, m)| (q(n, d), m))).unwrap()
}

fn logp(e: &[(i64, i64, u64)]) -> LogSlopeProfile {
    LogSlopeProfile::new(e.iter().map(|&(n, d, m)| (q(n, d), m))).unwrap()
}

fn pts(v: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
    v.iter().map(|&(x, y)| (q(x, 1), q(y, 1))).collect()
}

#[test]
fn newton_polygons() {
    assert_eq!(prof(&[(4, 1, 2)]).newton_polygon().unwrap().vertices(), pts(&[(0, 0), (2, 8)]));
    assert_eq!(
        prof(&[(4, 1, 1), (1, 1, 1)]).newton_polygon().unwrap().vertices(),
        pts(&[(0, 0), (1, 4), (2, 5)])
    );
    assert_eq!(SlopeProfile::default().newton_polygon().unwrap_err(), Error::EmptyProfile);
}

#[test]
fn tensor_examples() {
    let out = tensor(&prof(&[(5, 1, 2)]), &prof(&[(3, 1, 4)])).unwrap();
    assert_eq!(out, TensorOutcome::Exact(prof(&[(5, 1, 8)])));
    assert!(matches!(
        tensor(&prof(&[(5, 1, 2)]), &prof(&[(5, 1, 1)])).unwrap(),
        TensorOutcome::Indeterminate { .. }
    ));
    // A tame factor of rank k scales every wild piece by k.
    let wild = prof(&[(7, 2, 2), (3, 1, 1)]);
    let out = tensor(&prof(&[(1, 1, 3)]), &wild).unwrap().exact().unwrap();
    assert_eq!(out, prof(&[(7, 2, 6), (3, 1, 3)]));
}

#[test]
fn pullbacks() {
    assert_eq!(logp(&[(3, 2, 1)]).tame_pullback_log(2), logp(&[(3, 1, 1)]));
    assert_eq!(logp(&[(0, 1, 5)]).tame_pullback_log(7), logp(&[(0, 1, 5)]));
    assert_eq!(prof(&[(4, 1, 1)]).tame_pullback_cond(5), prof(&[(16, 1, 1)]));
    assert_eq!(prof(&[(1, 1, 3)]).tame_pullback_cond(9), prof(&[(1, 1, 3)]));
    assert_eq!(prof(&[(12, 5, 1)]).tame_pullback_cond(5), prof(&[(8, 1, 1)]));
    assert_eq!(prof(&[(4, 1, 2)]).insep_pullback(2, 2).unwrap(), prof(&[(4, 1, 2)]));
    assert_eq!(prof(&[(1, 1, 1)]).insep_pullback(3, 27).unwrap(), prof(&[(1, 1, 1)]));
    assert!(prof(&[(1, 1, 1)]).insep_pullback(3, 6).is_err());
}

#[test]
fn log_conversion_and_integrality() {
    assert_eq!(prof(&[(4, 1, 2)]).to_log(), logp(&[(3, 1, 2)]));
    assert_eq!(prof(&[(1, 1, 5)]).to_log(), logp(&[(0, 1, 5)]));
    assert!(prof(&[(4, 1, 2)]).hasse_arf_check());
    assert!(prof(&[(12, 5, 5)]).hasse_arf_check());
    assert!(!prof(&[(3, 2, 1)]).hasse_arf_check());
}

fn profile_strategy() -> impl Strategy<Value = SlopeProfile> {
    prop::collection::vec((1i64..40, 1i64..7, 1u64..5), 1..5).prop_map(|v| {
        SlopeProfile::new(v.into_iter().map(|(n, d, m)| (q(n, d) + q(1, 1) - q(1, d), m))).unwrap()
    })
}

proptest! {
    #[test]
    fn polygon_is_concave_and_ends_at_rank_dt(p in profile_strategy()) {
        let np = p.newton_polygon().unwrap();
        prop_assert!(np.is_concave());
        let last = *np.vertices().last().unwrap();
        prop_assert_eq!(last, (q(p.rank() as i64, 1), p.dt()));
        prop_assert_eq!(p.conductor().unwrap(), *p.entries().keys().next_back().unwrap());
    }

    #[test]
    fn log_round_trip(p in profile_strategy()) {
        let l = p.to_log();
        prop_assert_eq!(SlopeProfile::from_log(&l), p.clone());
        prop_assert_eq!(l.sw() + q(p.rank() as i64, 1), p.dt());
        prop_assert_eq!(l.lc().unwrap() + q(1, 1), p.conductor().unwrap());
    }

    /// Independent formula: every slope `s` goes to `e(s-1)+1`.
    #[test]
    fn tame_pullback_formula(p in profile_strategy(), e in 1u64..12) {
        let got = p.tame_pullback_cond(e);
        let e = q(e as i64, 1);
        let want = SlopeProfile::new(p.entries().iter().map(|(s, m)| (e * (s - q(1, 1)) + q(1, 1), *m))).unwrap();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn dominant_isoclinic_factor_wins(b in profile_strategy(), extra in 1i64..20, d in 1i64..5, m in 1u64..4) {
        let top = *b.entries().keys().next_back().unwrap() + q(extra, d);
        let a = SlopeProfile::isoclinic(top, m).unwrap();
        let out = tensor(&a, &b).unwrap().exact().unwrap();
        prop_assert!(out.is_isoclinic());
        prop_assert_eq!(out.conductor().unwrap(), top);
        prop_assert_eq!(out.rank(), m * b.rank());
        prop_assert_eq!(out.dt(), top * q((m * b.rank()) as i64, 1));
        prop_assert_eq!(tensor(&b, &a).unwrap().exact().unwrap(), out);
    }
}
