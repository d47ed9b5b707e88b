//! Deterministic curve grids with seeded random unit coefficients.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{FiniteField, Fq, LaurentGerm};
use crate::error::Result;
use crate::geometry::{CurveGerm, GKPullback, KummerPushAS, SheafModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_nonzero(field: &FiniteField, rng: &mut ChaCha8Rng) -> Fq {
    field.gen_pow(rng.gen_range(0..field.order() as i64 - 1))
}

pub fn random_element(field: &FiniteField, rng: &mut ChaCha8Rng) -> Fq {
    field.element(rng.gen_range(0..field.order())).expect("in range")
}

/// An exact polynomial unit `c_0 + c_1 t + … + c_d t^d`, `c_0 ≠ 0`.
pub fn random_unit(field: &FiniteField, rng: &mut ChaCha8Rng, degree: i64) -> LaurentGerm {
    let mut terms = vec![(0, random_nonzero(field, rng))];
    for j in 1..=degree {
        terms.push((j, random_element(field, rng)));
    }
    LaurentGerm::new(field.clone(), terms, crate::arith::EXACT)
}

fn monomial_times_unit(field: &FiniteField, rng: &mut ChaCha8Rng, alpha: u64) -> LaurentGerm {
    random_unit(field, rng, 2).shift(alpha as i64)
}

/// Value of the direction coordinate at the origin of the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mu {
    Zero,
    One,
    Random,
}

impl Mu {
    pub const ALL: [Mu; 3] = [Mu::Zero, Mu::One, Mu::Random];

    fn value(self, field: &FiniteField, rng: &mut ChaCha8Rng) -> Fq {
        match self {
            Mu::Zero => field.zero(),
            Mu::One => field.one(),
            Mu::Random => random_nonzero(field, rng),
        }
    }
}

/// Every multiplicity vector with entries in `0..=max`, not all zero.
pub fn multiplicity_grid(m: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&a| a > 0));
    out
}

/// A Kummer test curve: `y_i ↦ u_i t^{α_i}`, other coordinates units, and
/// `y_n ↦ μ + t` or, when `flat` is `Some(j)`, `y_n ↦ μ + t^{p·j}`.
pub fn kummer_curve(
    model: &KummerPushAS,
    field: &FiniteField,
    alphas: &[u64],
    mu: Mu,
    flat: Option<u64>,
    rng: &mut ChaCha8Rng,
) -> Result<CurveGerm> {
    let mut bindings = BTreeMap::new();
    let names = model.variables();
    for (i, v) in names.iter().enumerate() {
        let g = if i < alphas.len() {
            monomial_times_unit(field, rng, alphas[i])
        } else if i + 1 < names.len() {
            random_unit(field, rng, 2)
        } else {
            let mu = LaurentGerm::constant(field.clone(), mu.value(field, rng));
            let k = flat.map_or(1, |j| field.characteristic() as i64 * j as i64);
            let lin = LaurentGerm::monomial(field.clone(), random_nonzero(field, rng), k);
            mu.add(&lin)?
        };
        bindings.insert(v.clone(), g);
    }
    CurveGerm::new(field.clone(), bindings)
}

/// A transversal curve for the monomial pullback: `x_i ↦ u_i t^{M_i}` for
/// `i < m`, `x_m ↦ c·t + …`, remaining coordinates units.
pub fn gk_curve(model: &GKPullback, field: &FiniteField, mults: &[u64], rng: &mut ChaCha8Rng) -> Result<CurveGerm> {
    let mut bindings = BTreeMap::new();
    for (i, v) in model.variables().iter().enumerate() {
        let g = if i + 1 < model.m() {
            monomial_times_unit(field, rng, mults[i])
        } else if i + 1 == model.m() {
            monomial_times_unit(field, rng, 1)
        } else {
            random_unit(field, rng, 2)
        };
        bindings.insert(v.clone(), g);
    }
    CurveGerm::new(field.clone(), bindings)
}

/// Curves for a model: the full transversal grid (multiplicities up to
/// 3, three choices of `μ` for Kummer models) followed by the same grid
/// with the direction coordinate flattened to `μ + t^p`.
pub fn sample_curves(model: &SheafModel, field: &FiniteField, seed: u64) -> Result<Vec<CurveGerm>> {
    let mut rng = rng(seed);
    sample_into(model, field, &mut rng)
}

fn sample_into(model: &SheafModel, field: &FiniteField, rng: &mut ChaCha8Rng) -> Result<Vec<CurveGerm>> {
    let mut out = Vec::new();
    match model {
        SheafModel::KummerPushAS(k) => {
            for flat in [None, Some(1)] {
                for alphas in multiplicity_grid(k.m(), 3) {
                    for mu in Mu::ALL {
                        out.push(kummer_curve(k, field, &alphas, mu, flat, rng)?);
                    }
                }
            }
        }
        SheafModel::GKPullback(g) => {
            let grid = if g.m() == 1 {
                vec![vec![]]
            } else {
                let mut grid = multiplicity_grid(g.m() - 1, 3);
                grid.retain(|v| v.iter().all(|&a| a > 0));
                grid
            };
            for mults in grid {
                out.push(gk_curve(g, field, &mults, rng)?);
            }
        }
        SheafModel::Tensor(..) => {
            let (dominant, _) = model.split_dominant();
            for h in sample_into(dominant, field, rng)? {
                let mut bindings = h.bindings().clone();
                for v in model.variables() {
                    bindings
                        .entry(v)
                        .or_insert_with(|| random_unit(field, rng, 2));
                }
                out.push(CurveGerm::new(field.clone(), bindings)?);
            }
        }
    }
    Ok(out)
}
