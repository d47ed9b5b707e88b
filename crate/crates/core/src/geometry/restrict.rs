//! Ramification of a sheaf model restricted to a curve germ.

use std::collections::BTreeMap;

use super::curve::CurveGerm;
use super::model::{GKPullback, KummerPushAS, SheafModel};
use crate::arith::{FieldEmbedding, FiniteField, Fq, LaurentGerm, Monomial, MAX_FIELD_ORDER};
use crate::aschar::ASChar;
use crate::error::{Error, Result};
use crate::slopes::{tensor, Rational, SlopeProfile, TensorOutcome};

/// Slope profile at `t = 0` of the model pulled back along the curve,
/// with the default working precision.
pub fn restrict_to_curve(model: &SheafModel, curve: &CurveGerm) -> Result<SlopeProfile> {
    restrict_to_curve_with(model, curve, None)
}

/// As [`restrict_to_curve`]; `precision` overrides the number of series
/// terms kept below the deepest pole. A precision failure is retried once
/// at double precision.
pub fn restrict_to_curve_with(model: &SheafModel, curve: &CurveGerm, precision: Option<i64>) -> Result<SlopeProfile> {
    match model {
        SheafModel::KummerPushAS(k) => with_retry(precision, |extra| restrict_kummer(k, curve, extra)),
        SheafModel::GKPullback(g) => with_retry(precision, |extra| restrict_gk(g, curve, extra)),
        SheafModel::Tensor(a, b) => {
            let pa = restrict_to_curve_with(a, curve, precision)?;
            let pb = restrict_to_curve_with(b, curve, precision)?;
            match tensor(&pa, &pb)? {
                TensorOutcome::Exact(p) => Ok(p),
                TensorOutcome::Indeterminate { .. } => Err(Error::IndeterminateTensor("the curve".into())),
            }
        }
    }
}

/// Whether the curve is transversal to the model's conical direction.
pub fn is_transversal(model: &SheafModel, curve: &CurveGerm) -> Result<bool> {
    curve.is_transversal_to(&model.direction())
}

/// Runs at the working precision, then once more at twice that.
fn with_retry<T>(precision: Option<i64>, run: impl Fn(Precision) -> Result<T>) -> Result<T> {
    match run(Precision { base: precision, factor: 1 }) {
        Err(Error::PrecisionExhausted(_)) => run(Precision { base: precision, factor: 2 }),
        other => other,
    }
}

#[derive(Clone, Copy)]
struct Precision {
    base: Option<i64>,
    factor: i64,
}

impl Precision {
    /// Terms kept below a pole of the given order; `4·pole + 8` unless
    /// overridden.
    fn target(self, pole: i64) -> i64 {
        self.base.unwrap_or(4 * pole + 8).max(1) * self.factor
    }
}

fn check_characteristic(model_p: u64, curve: &CurveGerm) -> Result<()> {
    let p = curve.field().characteristic() as u64;
    if p != model_p {
        return Err(Error::InvalidCurve(format!(
            "curve over characteristic {p}, model over {model_p}"
        )));
    }
    Ok(())
}

/// Branch multiplicities; the curve must meet the branch divisor.
fn branch_multiplicities(curve: &CurveGerm, names: &[String]) -> Result<Vec<u64>> {
    let alphas = names
        .iter()
        .map(|n| curve.multiplicity(n))
        .collect::<Result<Vec<_>>>()?;
    if alphas.iter().all(|&a| a == 0) {
        return Err(Error::InvalidCurve("the curve does not meet the branch divisor".into()));
    }
    Ok(alphas)
}

/// Smallest `F_{q^k}` containing the `r`-th roots of unity and an `r`-th
/// root of each of `leads`.
fn working_field(base: &FiniteField, r: u64, leads: &[Fq]) -> Result<(FiniteField, FieldEmbedding)> {
    let (p, e) = (base.characteristic(), base.degree());
    let q = base.order() as u64 % r;
    let mut qk = 1 % r;
    for k in 1..=(r * r).max(1) as u32 {
        qk = qk * q % r;
        if qk != 1 % r {
            continue;
        }
        let degree = e * k;
        if (p as u64).checked_pow(degree).is_none_or(|o| o > MAX_FIELD_ORDER) {
            return Err(Error::FieldExtensionTooLarge { p, degree });
        }
        let big = base.extension(k)?;
        let emb = base.embedding_into(&big)?;
        if leads.iter().all(|&c| big.nth_root(emb.map(c), r).is_some()) {
            return Ok((big, emb));
        }
    }
    Err(Error::FieldExtensionTooLarge { p, degree: u32::MAX })
}

/// How many tuples `(ϖ_1, …, ϖ_m)` of `r`-th roots of unity give each
/// twist `δ = Π ϖ_i^{−p_i}`.
fn twist_counts(field: &FiniteField, r: u64, p_exps: &[u64]) -> Vec<(Fq, u64)> {
    let r_us = r as usize;
    let mut counts = vec![0u64; r_us];
    counts[0] = 1;
    for &pi in p_exps {
        let mut next = vec![0u64; r_us];
        for (j, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for ji in 0..r_us {
                next[(j + ji * (pi as usize % r_us)) % r_us] += c;
            }
        }
        counts = next;
    }
    // ζ = g^{(Q−1)/r}; the class j stands for δ = ζ^{−j}.
    let step = (field.order() as i64 - 1) / r as i64;
    counts
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(j, c)| (field.gen_pow(-(j as i64) * step), c))
        .collect()
}

fn restrict_kummer(k: &KummerPushAS, curve: &CurveGerm, precision: Precision) -> Result<SlopeProfile> {
    check_characteristic(k.characteristic(), curve)?;
    let names = k.branch_names();
    let alphas = branch_multiplicities(curve, &names)?;
    let r = k.r() as i64;
    let alpha: i64 = alphas
        .iter()
        .zip(k.p_exps())
        .map(|(&a, &pi)| a as i64 * pi as i64)
        .sum();

    let leads: Vec<Fq> = names
        .iter()
        .map(|n| *curve.germ(n).expect("bound").leading().expect("certified").1)
        .collect();
    let (field, emb) = working_field(curve.field(), k.r(), &leads)?;
    let curve = curve.extend(&emb);

    // Lift the curve through the cover: y_i' = ρ_i·z_i(t')·t'^{α_i} with
    // y_i'^r = y_i(t'^r), where z_i is an r-th root of the unit part.
    let goal = precision.target(alpha);
    let t_prec = (goal + alpha + r - 1) / r + 1;
    let mut units = LaurentGerm::one(field.clone());
    let mut rho = field.one();
    for ((name, &a), &pi) in names.iter().zip(&alphas).zip(k.p_exps()) {
        let g = curve.germ(name)?.shift(-(a as i64));
        let c = *g.leading().expect("certified").1;
        let root = field.nth_root(c, k.r()).expect("working field has the root");
        let mut u = g.scale(&field.inv(c).expect("nonzero"));
        if u.is_exact() && u.terms().len() > 1 {
            u = u.truncate(t_prec);
        }
        let z = u.unit_nth_root(k.r(), t_prec)?.substitute_power(r);
        units = units.mul(&z.pow(pi as i64)?)?;
        rho = field.mul(rho, field.pow(root, pi as i64));
    }
    let yn = curve.germ(&k.direction())?.substitute_power(r);
    let rho_inv = field.inv(rho).expect("nonzero");
    let f = yn.mul(&units.invert_unit()?)?.shift(-alpha).scale(&rho_inv);

    let mut entries = Vec::new();
    for (delta, count) in twist_counts(&field, k.r(), k.p_exps()) {
        let sw = ASChar::new(f.scale(&delta)).swan()?;
        entries.push((descend(sw, k.r()), count));
    }
    SlopeProfile::new(entries)
}

/// Conductor over `t` of a character with Swan conductor `sw` over the
/// degree-`r` tame cover.
fn descend(sw: u64, r: u64) -> Rational {
    if sw == 0 {
        Rational::from_integer(1)
    } else {
        Rational::new(sw as i64, r as i64) + 1
    }
}

fn restrict_gk(g: &GKPullback, curve: &CurveGerm, precision: Precision) -> Result<SlopeProfile> {
    let field = g.base().field().clone();
    check_characteristic(field.characteristic() as u64, curve)?;
    if curve.field() != &field {
        return Err(Error::FieldMismatch);
    }
    let exps = g.exponents();
    let names: Vec<String> = exps.keys().cloned().collect();
    let alphas = branch_multiplicities(curve, &names)?;
    let v: i64 = alphas
        .iter()
        .zip(exps.values())
        .map(|(&a, &e)| a as i64 * e as i64)
        .sum();
    let pole = g.base().germ().valuation().map_or(0, |x| (-x).max(0));
    let goal = precision.target(pole * v);
    let mono = Monomial::new(exps.iter().map(|(n, &e)| (n.clone(), e as i64)));
    let bindings: BTreeMap<String, LaurentGerm> = names
        .iter()
        .map(|n| Ok((n.clone(), curve.germ(n)?.clone())))
        .collect::<Result<_>>()?;
    let s = mono.substitute(&field, &bindings)?;
    let s = if s.is_exact() && s.terms().len() > 1 {
        s.truncate(goal + (pole + 1) * v)
    } else {
        s
    };
    let c = g.compose_base(&s)?.conductor()?;
    SlopeProfile::isoclinic(c, 1)
}
