//! Rank-one Artin–Schreier characters `T^p − T = f` of `k((t))`.

use std::collections::BTreeMap;

use crate::arith::{FiniteField, LaurentGerm, EXACT};
use crate::error::{Error, Result};
use crate::slopes::{Rational, SlopeProfile};

/// The character attached to `T^p − T − f`, considered modulo
/// `℘(g) = g^p − g`.
#[derive(Clone, Debug, PartialEq)]
pub struct ASChar {
    f: LaurentGerm,
}

impl ASChar {
    pub fn new(f: LaurentGerm) -> Self {
        Self { f }
    }

    pub fn germ(&self) -> &LaurentGerm {
        &self.f
    }

    pub fn field(&self) -> &FiniteField {
        self.f.field()
    }

    /// Canonical representative of the class of `f` modulo `℘`.
    ///
    /// Positive-valuation terms lie in `℘(k[[t]])` and are dropped. Every
    /// pole term `a·t^{−m}` with `p | m` is replaced by `a^{1/p}·t^{−m/p}`,
    /// deepest first, until no pole exponent is divisible by `p`. The
    /// constant term is brought to `Tr(c)·θ` for a fixed `θ` of trace one.
    /// Two characters are equivalent exactly when these forms agree.
    pub fn reduce(&self) -> ASChar {
        let k = self.f.field().clone();
        let p = k.characteristic() as i64;
        // Terms from t^1 on are ℘-trivial, so knowing f below t^1 determines
        // the class completely.
        let known = self.f.precision().min(1);
        let precision = if known >= 1 { EXACT } else { known };
        let mut terms: BTreeMap<i64, _> = self
            .f
            .terms()
            .range(..known)
            .map(|(e, c)| (*e, *c))
            .collect();
        loop {
            let next = terms.keys().copied().find(|&e| e < 0 && e % p == 0);
            let Some(e) = next else { break };
            let a = terms.remove(&e).expect("present");
            let root = k.pth_root(a);
            let target = e / p;
            if target >= known {
                continue;
            }
            let sum = k.add(terms.get(&target).copied().unwrap_or(k.zero()), root);
            if sum.is_zero() {
                terms.remove(&target);
            } else {
                terms.insert(target, sum);
            }
        }
        if precision >= 1 {
            let c = terms.remove(&0).unwrap_or(k.zero());
            let tr = k.trace(c);
            if tr != 0 {
                terms.insert(0, k.mul(k.from_int(tr as i64), k.trace_one()));
            }
        }
        ASChar {
            f: LaurentGerm::new(k, terms, precision),
        }
    }

    /// Pole order of the reduced form; zero when no pole survives.
    pub fn swan(&self) -> Result<u64> {
        let r = self.reduce();
        match r.f.valuation() {
            Some(v) if v < 0 => Ok((-v) as u64),
            _ if r.f.precision() >= 0 => Ok(0),
            _ => Err(Error::PrecisionExhausted(format!(
                "no pole term certified below t^{}",
                r.f.precision()
            ))),
        }
    }

    /// `swan + 1` for wild characters, `1` otherwise.
    pub fn conductor(&self) -> Result<Rational> {
        Ok(conductor_from_swan(self.swan()?))
    }

    /// Same class modulo `℘`, as far as both precisions certify.
    pub fn equivalent(&self, other: &ASChar) -> Result<bool> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        let a = self.reduce();
        let b = other.reduce();
        let n = a.f.precision().min(b.f.precision());
        Ok(a.f.truncate(n) == b.f.truncate(n))
    }
}

pub(crate) fn conductor_from_swan(sw: u64) -> Rational {
    if sw == 0 {
        Rational::from_integer(1)
    } else {
        Rational::from_integer(sw as i64 + 1)
    }
}

/// Slope profile of a direct sum of rank-one characters.
pub fn char_sum_profile(chars: &[ASChar]) -> Result<SlopeProfile> {
    if let Some(first) = chars.first() {
        if chars.iter().any(|c| c.field() != first.field()) {
            return Err(Error::FieldMismatch);
        }
    }
    let mut entries = Vec::with_capacity(chars.len());
    for c in chars {
        entries.push((c.conductor()?, 1));
    }
    SlopeProfile::new(entries)
}
