//! Curve-level checks of the divisor-level statements.

use std::collections::BTreeMap;

use num_traits::One;
use serde_json::{json, Value};

use super::report::{CaseRecord, VerifyReport};
use crate::arith::{FiniteField, LaurentGerm};
use crate::error::{Error, Result};
use crate::geometry::{is_transversal, restrict_to_curve_with, CurveGerm, SheafModel};
use crate::slopes::{fmt_rational, tensor, Rational, SlopeProfile, TensorOutcome};

fn curve_inputs(h: &CurveGerm) -> Value {
    json!({ "bindings": h.to_strings() })
}

fn transversal(model: &SheafModel, h: &CurveGerm) -> Option<bool> {
    is_transversal(model, h).ok()
}

/// Branch components the curve passes through, with multiplicities.
fn met_components(model: &SheafModel, h: &CurveGerm) -> Result<BTreeMap<String, u64>> {
    let names = model.branch_names();
    h.multiplicities(names.iter().map(String::as_str))
}

/// `m_s(h^*C_X) ≥ c_s(F|_S)` on every curve, with equality on curves
/// transversal to the conical direction.
pub fn check_curve_inequality(
    model: &SheafModel,
    curves: &[CurveGerm],
    precision: Option<i64>,
    seed: u64,
) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("curve-inequality", seed);
    let c_div = model.conductor_divisor()?;
    for (i, h) in curves.iter().enumerate() {
        let case = CaseRecord::new(format!("curve-{i}"), curve_inputs(h));
        let tr = transversal(model, h);
        let lhs = c_div.multiplicity(&met_components(model, h)?);
        let rhs = restrict_to_curve_with(model, h, precision)?
            .conductor()
            .ok_or(Error::EmptyProfile)?;
        let case = if tr == Some(true) {
            case.compare(fmt_rational(&lhs), "=", fmt_rational(&rhs), lhs == rhs, lhs != rhs)
        } else {
            case.compare(fmt_rational(&lhs), ">=", fmt_rational(&rhs), lhs >= rhs, lhs != rhs)
        };
        report.push(case.transversal(tr));
    }
    Ok(report)
}

/// `m_s(h^*DT_X) ≥ dt_s(F|_S)` on every curve; on transversal curves
/// through a single component `D` also the Newton polygon identity
/// `NP_s(F|_S) = m_s(h^*D)·NP_D(F)`.
pub fn check_dt_inequality(
    model: &SheafModel,
    curves: &[CurveGerm],
    precision: Option<i64>,
    seed: u64,
) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("dt-inequality", seed);
    let dt_div = model.dt_divisor()?;
    for (i, h) in curves.iter().enumerate() {
        let tr = transversal(model, h);
        let mults = met_components(model, h)?;
        let prof = restrict_to_curve_with(model, h, precision)?;
        let lhs = dt_div.multiplicity(&mults);
        let rhs = prof.dt();
        let case = CaseRecord::new(format!("curve-{i}"), curve_inputs(h));
        let case = if tr == Some(true) {
            case.compare(fmt_rational(&lhs), "=", fmt_rational(&rhs), lhs == rhs, lhs != rhs)
        } else {
            case.compare(fmt_rational(&lhs), ">=", fmt_rational(&rhs), lhs >= rhs, lhs != rhs)
        };
        report.push(case.transversal(tr));

        let met: Vec<(&String, &u64)> = mults.iter().filter(|(_, &a)| a > 0).collect();
        if tr == Some(true) && met.len() == 1 {
            let (name, &alpha) = met[0];
            let generic = model.generic_profile(name)?.newton_polygon()?;
            let expected = generic.scale(Rational::from_integer(alpha as i64));
            let got = prof.newton_polygon()?;
            let show = |np: &crate::slopes::NewtonPolygon| serde_json::to_string(np).expect("serializes");
            report.push(
                CaseRecord::new(format!("curve-{i}-np"), curve_inputs(h))
                    .compare(show(&got), "=", show(&expected), got == expected, got != expected)
                    .transversal(tr)
                    .note(format!("{alpha}·NP at {name}")),
            );
        }
    }
    Ok(report)
}

/// The degree-`d` test curve for `lc_sup_scan`: the component's coordinate
/// is `t^d`, the direction coordinate is transversal, the rest are `1`.
pub fn sup_curve(model: &SheafModel, field: &FiniteField, divisor: &str, d: u64) -> Result<CurveGerm> {
    let dir = model.direction();
    let branches = model.branch_names();
    let one = LaurentGerm::one(field.clone());
    let t = LaurentGerm::var(field.clone());
    let mut bindings = BTreeMap::new();
    for v in model.variables() {
        let g = if v == divisor {
            LaurentGerm::monomial(field.clone(), field.one(), d as i64)
        } else if v == dir && branches.contains(&v) {
            one.add(&t)?
        } else if v == dir {
            t.clone()
        } else {
            one.clone()
        };
        bindings.insert(v, g);
    }
    CurveGerm::new(field.clone(), bindings)
}

/// Along the degree-`d` curves, `lc_s/m_s(h^*D)` stays at most `lc_D` and
/// comes within `1/d` of it.
pub fn lc_sup_scan(
    model: &SheafModel,
    field: &FiniteField,
    divisor: &str,
    degrees: &[u64],
    precision: Option<i64>,
    seed: u64,
) -> Result<VerifyReport> {
    if !model.branch_names().iter().any(|n| n == divisor) {
        return Err(Error::UnknownDivisorName(divisor.to_string()));
    }
    let p = field.characteristic() as u64;
    let lc_d = model.log_conductor_divisor()?.coeff(divisor);
    let mut report = VerifyReport::new("lc-sup", seed);
    let mut best: Option<Rational> = None;
    for &d in degrees {
        let inputs = json!({ "divisor": divisor, "degree": d });
        let case = CaseRecord::new(format!("d={d}"), inputs);
        if d == 0 || d % p == 0 {
            report.push(case.skip(format!("degree {d} is not prime to {p}")));
            continue;
        }
        let h = sup_curve(model, field, divisor, d)?;
        let prof = restrict_to_curve_with(model, &h, precision)?;
        let lc = prof.to_log().lc().ok_or(Error::EmptyProfile)?;
        let ratio = lc / Rational::from_integer(d as i64);
        let gap = lc_d - ratio;
        let within = gap <= Rational::one() / Rational::from_integer(d as i64);
        best = Some(best.map_or(ratio, |b: Rational| b.max(ratio)));
        report.push(
            case.compare(fmt_rational(&ratio), "<=", fmt_rational(&lc_d), ratio <= lc_d && within, ratio != lc_d)
                .transversal(transversal(model, &h))
                .note(format!("gap {}", fmt_rational(&gap))),
        );
    }
    report.details = json!({
        "divisor": divisor,
        "lc": fmt_rational(&lc_d),
        "best_ratio": best.map(|b| fmt_rational(&b)),
    });
    Ok(report)
}

/// For `G ⊗ F` with `C_X(G) > C_X(F)` everywhere: on transversal curves
/// the restricted tensor product has the conductor of `G` alone.
pub fn tensor_dominance_check(
    g: &SheafModel,
    f: &SheafModel,
    curves: &[CurveGerm],
    precision: Option<i64>,
    seed: u64,
) -> Result<VerifyReport> {
    let cg = g.conductor_divisor()?;
    let cf = f.conductor_divisor()?;
    if !cg.gt_everywhere(&cf) {
        return Err(Error::IndeterminateTensor(
            "the conductor divisors are not strictly ordered".into(),
        ));
    }
    let mut report = VerifyReport::new("tensor-dominance", seed);
    for (i, h) in curves.iter().enumerate() {
        let case = CaseRecord::new(format!("curve-{i}"), curve_inputs(h));
        let tr = transversal(g, h);
        if tr != Some(true) {
            report.push(case.transversal(tr).skip("not transversal"));
            continue;
        }
        let pg = restrict_to_curve_with(g, h, precision)?;
        let pf = restrict_to_curve_with(f, h, precision)?;
        let cg = pg.conductor().ok_or(Error::EmptyProfile)?;
        match tensor(&pg, &pf)? {
            TensorOutcome::Exact(t) => {
                let ct = t.conductor().ok_or(Error::EmptyProfile)?;
                report.push(
                    case.compare(fmt_rational(&ct), "=", fmt_rational(&cg), ct == cg, ct != cg)
                        .transversal(tr)
                        .note(format!("rank {}", t.rank())),
                );
            }
            TensorOutcome::Indeterminate { .. } => {
                report.push(case.transversal(tr).skip("restricted slopes clash"));
            }
        }
    }
    Ok(report)
}

/// Every restricted profile has integral total dimension.
pub fn hasse_arf_rows(model: &SheafModel, curves: &[CurveGerm], precision: Option<i64>, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("hasse-arf", seed);
    for (i, h) in curves.iter().enumerate() {
        let prof: SlopeProfile = restrict_to_curve_with(model, h, precision)?;
        let dt = prof.dt();
        report.push(
            CaseRecord::new(format!("curve-{i}"), curve_inputs(h))
                .compare(fmt_rational(&dt), "in", "Z", prof.hasse_arf_check(), false),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::KummerPushAS;

    fn curve(k: &FiniteField, pairs: &[(&str, &str)]) -> CurveGerm {
        let b = pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        CurveGerm::parse(k, &b, 40).unwrap()
    }

    fn kummer(r: u64) -> SheafModel {
        SheafModel::KummerPushAS(KummerPushAS::new(2, vec![12], r, 2).unwrap())
    }

    #[test]
    fn curve_inequality_with_slack() {
        let k = FiniteField::new(2, 1).unwrap();
        let curves = [
            curve(&k, &[("y1", "t"), ("y2", "t")]),
            curve(&k, &[("y1", "t"), ("y2", "1 + t^2")]),
        ];
        let r = check_curve_inequality(&kummer(5), &curves, None, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases[0].relation, "=");
        assert!(r.cases[1].strict);
        let r = check_dt_inequality(&kummer(5), &curves, None, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.summary.total, 3);
    }

    #[test]
    fn sup_scan_ratios() {
        let k = FiniteField::new(2, 1).unwrap();
        let r = lc_sup_scan(&kummer(5), &k, "y1", &[1, 2, 3, 7], None, 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases[0].lhs, "7/5");
        assert_eq!(r.cases[1].status, super::super::report::Status::Skip);
        assert_eq!(r.details["best_ratio"], "79/35");
        assert!(lc_sup_scan(&kummer(5), &k, "y1", &[], None, 0).unwrap().cases.is_empty());
    }

    #[test]
    fn dominance() {
        let k = FiniteField::new(2, 1).unwrap();
        let curves = [curve(&k, &[("y1", "t"), ("y2", "t")]), curve(&k, &[("y1", "t"), ("y2", "t^2")])];
        let r = tensor_dominance_check(&kummer(5), &kummer(7), &curves, None, 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases[0].lhs, "12/5");
        assert_eq!(r.summary.skip, 1);
        assert!(matches!(
            tensor_dominance_check(&kummer(5), &kummer(5), &curves, None, 0),
            Err(Error::IndeterminateTensor(_))
        ));
    }
}
