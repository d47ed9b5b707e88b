use std::collections::BTreeMap;

use proptest::prelude::*;
use ramcalc::arith::{parse_germ, FiniteField, Fq, LaurentGerm, Monomial, EXACT};
use ramcalc::Error;

/// Schoolbook product of base-`p` encoded polynomials reduced by the
/// field's monic modulus; independent of the log tables.
fn naive_mul(k: &FiniteField, a: Fq, b: Fq) -> u32 {
    let p = k.characteristic();
    let d = k.degree() as usize;
    let digits = |mut x: u32| {
        let mut v = vec![0u32; d];
        for c in v.iter_mut() {
            *c = x % p;
            x /= p;
        }
        v
    };
    let (x, y) = (digits(a.index()), digits(b.index()));
    let mut prod = vec![0u32; 2 * d];
    for i in 0..d {
        for j in 0..d {
            prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
        }
    }
    let m = k.modulus();
    for top in (d..2 * d).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            let idx = top - d + i;
            prod[idx] = (prod[idx] + p * p - c * mi % p) % p;
        }
    }
    prod[..d].iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn field_strategy() -> impl Strategy<Value = FiniteField> {
    prop_oneof![
        Just((2u64, 1u32)),
        Just((2, 3)),
        Just((3, 2)),
        Just((5, 1)),
        Just((5, 2)),
        Just((7, 1))
    ]
    .prop_map(|(p, e)| FiniteField::new(p, e).unwrap())
}

fn germ(k: &FiniteField, s: &str) -> LaurentGerm {
    parse_germ(k, s, 20).unwrap()
}

#[test]
fn field_construction() {
    assert_eq!(FiniteField::new(2, 1).unwrap().order(), 2);
    let f9 = FiniteField::new(3, 2).unwrap();
    assert_eq!(f9.order(), 9);
    let x = f9.element(3).unwrap();
    assert_eq!(f9.mul(x, x).index(), naive_mul(&f9, x, x));
    assert_eq!(FiniteField::new(4, 1).unwrap_err(), Error::NonPrimeCharacteristic(4));
}

#[test]
fn pth_roots_by_exhaustive_search() {
    let f9 = FiniteField::new(3, 2).unwrap();
    for x in f9.elements() {
        let found: Vec<Fq> = f9.elements().filter(|&y| f9.mul(f9.mul(y, y), y) == x).collect();
        assert_eq!(found, vec![f9.pth_root(x)]);
    }
    let f2 = FiniteField::new(2, 1).unwrap();
    assert_eq!(f2.pth_root(f2.one()), f2.one());
    assert_eq!(f9.pth_root(f9.zero()), f9.zero());
}

#[test]
fn germ_ring_examples() {
    let k = FiniteField::new(3, 1).unwrap();
    let prod = germ(&k, "1 + t").mul(&germ(&k, "1 - t")).unwrap();
    assert_eq!(prod, germ(&k, "1 - t^2"));
    let inv = germ(&k, "t").invert_unit().unwrap();
    assert_eq!(inv.valuation(), Some(-1));
    assert!(matches!(
        LaurentGerm::big_o(k.clone(), 8).invert_unit(),
        Err(Error::PrecisionExhausted(_))
    ));
}

#[test]
fn monomial_substitution() {
    let k = FiniteField::new(5, 1).unwrap();
    let m = Monomial::new([("y1".to_string(), -2), ("y2".to_string(), 1)]);
    let mut b = BTreeMap::new();
    b.insert("y1".to_string(), germ(&k, "t"));
    b.insert("y2".to_string(), germ(&k, "1 + t"));
    assert_eq!(m.substitute(&k, &b).unwrap(), germ(&k, "t^-2 + t^-1"));

    // y2 / y1^12 at y1 = u t^2, y2 = μ + t.
    let m = Monomial::new([("y1".to_string(), -12), ("y2".to_string(), 1)]);
    // Exact multi-term germs have no finite inverse; truncate first.
    b.insert("y1".to_string(), germ(&k, "2*t^2 + t^3").truncate(40));
    b.insert("y2".to_string(), germ(&k, "3 + t"));
    assert_eq!(m.substitute(&k, &b).unwrap().valuation(), Some(-24));

    let m = Monomial::new([("y3".to_string(), 1)]);
    assert_eq!(m.substitute(&k, &b).unwrap_err(), Error::UnboundVariable("y3".into()));
}

#[test]
fn malformed_germs_report_positions() {
    let k = FiniteField::new(2, 1).unwrap();
    match parse_germ(&k, "t^-3 +* t", 10) {
        Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

proptest! {
    #[test]
    fn multiplication_matches_polynomial_arithmetic(k in field_strategy(), a in 0u32..1000, b in 0u32..1000) {
        let (x, y) = (k.element(a % k.order()).unwrap(), k.element(b % k.order()).unwrap());
        prop_assert_eq!(k.mul(x, y).index(), naive_mul(&k, x, y));
    }

    #[test]
    fn field_axioms(k in field_strategy(), a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let e = |i: u32| k.element(i % k.order()).unwrap();
        let (x, y, z) = (e(a), e(b), e(c));
        prop_assert_eq!(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)));
        prop_assert_eq!(k.add(x, k.neg(x)), k.zero());
        if !x.is_zero() {
            prop_assert_eq!(k.mul(x, k.inv(x).unwrap()), k.one());
        }
        prop_assert_eq!(k.frobenius(k.pth_root(x)), x);
    }

    #[test]
    fn germ_product_commutes_and_inverts(
        k in field_strategy(),
        xs in prop::collection::vec(0u32..50, 1..6),
        ys in prop::collection::vec(0u32..50, 1..6),
        shift in -4i64..4,
    ) {
        let mk = |cs: &[u32], lead_shift: i64| {
            let mut terms: Vec<(i64, Fq)> = cs
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as i64 + lead_shift, k.element(c % k.order()).unwrap()))
                .collect();
            terms[0].1 = k.one();
            LaurentGerm::new(k.clone(), terms, 30)
        };
        let a = mk(&xs, shift);
        let b = mk(&ys, 0);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        prop_assert_eq!(ab.valuation(), Some(shift));
        let back = ab.mul(&b.invert_unit().unwrap()).unwrap();
        prop_assert_eq!(back.truncate(back.precision()), a.truncate(back.precision()));
    }

    #[test]
    fn display_round_trips(k in field_strategy(), xs in prop::collection::vec((0u32..50, -6i64..6), 0..6)) {
        let terms = xs.iter().map(|&(c, e)| (e, k.element(c % k.order()).unwrap()));
        let g = LaurentGerm::new(k.clone(), terms, EXACT);
        let again = parse_germ(&k, &g.to_string(), EXACT).unwrap();
        prop_assert_eq!(again, g);
    }
}
