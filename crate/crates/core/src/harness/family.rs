//! One-parameter families and the semi-continuity scanner.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::report::{CaseRecord, VerifyReport};
use crate::arith::{parse_germ, parse_scalar, FiniteField, Fq, LaurentGerm, RationalFunctionField};
use crate::aschar::ASChar;
use crate::error::{Error, Result};
use crate::herbrand::{eisenstein_ig, RamFiltration};
use crate::slopes::{fmt_rational, Rational};

type FamilyGerm = LaurentGerm<RationalFunctionField>;

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    /// `T^p − T = f_l` with `f_l` over `F_q(l)`.
    ArtinSchreier { f: FamilyGerm },
    /// Images of the uniformizer under the nontrivial automorphisms of a
    /// totally ramified Galois extension of order `order`.
    Eisenstein { images: Vec<FamilyGerm>, order: u64 },
}

/// A family over the `l`-line with the values of `l` to inspect and a
/// designated special point.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    field: FiniteField,
    kind: FamilyKind,
    samples: Vec<Fq>,
    special: Fq,
}

impl FamilySpec {
    /// `samples = None` means every element of the field.
    pub fn new(field: FiniteField, kind: FamilyKind, samples: Option<Vec<Fq>>, special: Fq) -> Result<Self> {
        if let FamilyKind::Eisenstein { images, order } = &kind {
            if *order < 2 || images.len() as u64 != order - 1 {
                return Err(Error::InvalidFamily(format!(
                    "a group of order {order} needs {} automorphism images, got {}",
                    order.saturating_sub(1),
                    images.len()
                )));
            }
        }
        let mut samples = samples.unwrap_or_else(|| field.elements().collect());
        samples.retain(|&x| x != special);
        samples.sort();
        samples.dedup();
        Ok(Self { field, kind, samples, special })
    }

    /// Parse an Artin–Schreier family from germ and element strings.
    pub fn parse_as(field: &FiniteField, f: &str, samples: Option<&[String]>, special: &str, precision: i64) -> Result<Self> {
        let kl = RationalFunctionField::new(field.clone());
        let f = parse_germ(&kl, f, precision)?;
        Self::new(
            field.clone(),
            FamilyKind::ArtinSchreier { f },
            parse_samples(field, samples)?,
            parse_scalar(field, special)?,
        )
    }

    pub fn parse_eisenstein(
        field: &FiniteField,
        images: &[String],
        order: u64,
        samples: Option<&[String]>,
        special: &str,
        precision: i64,
    ) -> Result<Self> {
        let kl = RationalFunctionField::new(field.clone());
        let images = images
            .iter()
            .map(|s| parse_germ(&kl, s, precision))
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            field.clone(),
            FamilyKind::Eisenstein { images, order },
            parse_samples(field, samples)?,
            parse_scalar(field, special)?,
        )
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn samples(&self) -> &[Fq] {
        &self.samples
    }

    pub fn special(&self) -> Fq {
        self.special
    }
}

fn parse_samples(field: &FiniteField, samples: Option<&[String]>) -> Result<Option<Vec<Fq>>> {
    samples
        .map(|s| s.iter().map(|x| parse_scalar(field, x)).collect())
        .transpose()
}

/// The germ at `l = x`, or `None` if a coefficient has a pole there.
fn specialize(g: &FamilyGerm, field: &FiniteField, x: Fq) -> Option<LaurentGerm> {
    let kl = g.field().clone();
    g.try_map_coeffs(field.clone(), |c| kl.eval(c, x))
}

/// Conductor sum `χ` and total dimension of a specialized character.
fn as_invariants(f: &LaurentGerm) -> Result<(Rational, Rational)> {
    let c = ASChar::new(f.clone()).conductor()?;
    Ok((c, c))
}

/// `χ = 1 + ∫_0^n dt/[G:G_t]` with `n` the last index where `G_n ≠ 1`.
fn chi_from_igs(igs: &[u64], order: u64) -> Result<Rational> {
    let filt = RamFiltration::from_ig(igs, order)?;
    let top = igs.iter().copied().max().unwrap_or(1);
    Ok(filt.chi(top - 1))
}

/// Whether the leading coefficient of every `image − ϖ` survives at `x`.
fn on_locus(images: &[FamilyGerm], x: Fq) -> Result<bool> {
    for img in images {
        let kl = img.field().clone();
        let d = img.sub(&LaurentGerm::var(kl.clone()))?;
        let Some((_, lead)) = d.leading() else {
            return Ok(false);
        };
        match kl.eval(lead, x) {
            Some(v) if !v.is_zero() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Compare `χ` at every sample with its value at the special point, and
/// record the observed level sets of `χ`.
///
/// Artin–Schreier families assert `χ(sample) ≥ χ(special)`. Eisenstein
/// families assert that `χ` equals its generic value wherever the leading
/// coefficients of `g(ϖ) − ϖ` do not vanish; other samples are flagged
/// and skipped.
pub fn semicontinuity_scan(family: &FamilySpec, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("semicontinuity", seed);
    let k = &family.field;
    let name = |x: Fq| k.display(x);
    let mut levels: BTreeMap<String, Vec<String>> = BTreeMap::new();
    match &family.kind {
        FamilyKind::ArtinSchreier { f } => {
            let special = specialize(f, k, family.special)
                .ok_or_else(|| Error::InvalidFamily("the family has a pole at the special point".into()))?;
            let (chi_s, _) = as_invariants(&special)?;
            for &x in &family.samples {
                let inputs = json!({ "l": name(x) });
                let case = CaseRecord::new(format!("l={}", name(x)), inputs);
                let Some(fx) = specialize(f, k, x) else {
                    report.push(case.skip("pole of the family"));
                    continue;
                };
                let (chi, dt) = as_invariants(&fx)?;
                levels.entry(fmt_rational(&chi)).or_default().push(name(x));
                report.push(
                    case.compare(fmt_rational(&chi), ">=", fmt_rational(&chi_s), chi >= chi_s, chi > chi_s)
                        .note(format!("dt={}", fmt_rational(&dt))),
                );
            }
            report.details = json!({
                "special": name(family.special),
                "chi_special": fmt_rational(&chi_s),
                "levels": levels,
            });
        }
        FamilyKind::Eisenstein { images, order } => {
            let kl = RationalFunctionField::new(k.clone());
            let w = LaurentGerm::var(kl);
            let generic = chi_from_igs(&eisenstein_ig(images, &w)?, *order)?;
            let mut points = family.samples.clone();
            points.push(family.special);
            for x in points {
                let inputs = json!({ "l": name(x) });
                let id = if x == family.special {
                    format!("l={} (special)", name(x))
                } else {
                    format!("l={}", name(x))
                };
                let case = CaseRecord::new(id, inputs);
                let specialized: Option<Vec<LaurentGerm>> = images.iter().map(|g| specialize(g, k, x)).collect();
                let chi = specialized.and_then(|imgs| {
                    let w = LaurentGerm::var(k.clone());
                    let igs = eisenstein_ig(&imgs, &w).ok()?;
                    chi_from_igs(&igs, *order).ok()
                });
                if !on_locus(images, x)? {
                    let seen = chi.map_or("undefined".to_string(), |c| fmt_rational(&c));
                    report.push(case.skip(format!("off the good locus, chi={seen}")));
                    continue;
                }
                let chi = chi.ok_or_else(|| Error::InvalidFamily(format!("no filtration at l = {}", name(x))))?;
                levels.entry(fmt_rational(&chi)).or_default().push(name(x));
                report.push(case.compare(fmt_rational(&chi), "=", fmt_rational(&generic), chi == generic, chi != generic));
            }
            report.details = json!({
                "special": name(family.special),
                "chi_generic": fmt_rational(&generic),
                "levels": levels,
            });
        }
    }
    Ok(report)
}

/// Level sets of `χ` recorded by a scan, keyed by value.
pub fn scan_levels(report: &VerifyReport) -> BTreeMap<String, Vec<String>> {
    report
        .details
        .get("levels")
        .and_then(Value::as_object)
        .map(|m| {
            m.iter()
                .map(|(k, v)| {
                    let xs = v
                        .as_array()
                        .map(|a| a.iter().filter_map(|s| s.as_str().map(String::from)).collect())
                        .unwrap_or_default();
                    (k.clone(), xs)
                })
                .collect()
        })
        .unwrap_or_default()
}
