use std::collections::BTreeMap;

use crate::arith::{parse_germ, FieldEmbedding, FiniteField, LaurentGerm};
use crate::error::{Error, Result};

/// A curve germ through the origin of a coordinate space: each coordinate
/// is a power series in the local parameter `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveGerm {
    field: FiniteField,
    bindings: BTreeMap<String, LaurentGerm>,
}

impl CurveGerm {
    pub fn new(field: FiniteField, bindings: BTreeMap<String, LaurentGerm>) -> Result<Self> {
        for (name, g) in &bindings {
            if g.field() != &field {
                return Err(Error::FieldMismatch);
            }
            if g.is_exact() && g.is_zero() {
                return Err(Error::InvalidCurve(format!("`{name}` vanishes identically")));
            }
            match g.valuation() {
                Some(v) if v < 0 => {
                    return Err(Error::InvalidCurve(format!("`{name}` has a pole of order {}", -v)))
                }
                None if g.precision() < 0 => {
                    return Err(Error::InvalidCurve(format!("`{name}` is not known at t = 0")))
                }
                _ => {}
            }
        }
        Ok(Self { field, bindings })
    }

    /// Parse every binding with the germ grammar.
    pub fn parse(field: &FiniteField, bindings: &BTreeMap<String, String>, precision: i64) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (name, src) in bindings {
            out.insert(name.clone(), parse_germ(field, src, precision)?);
        }
        Self::new(field.clone(), out)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn bindings(&self) -> &BTreeMap<String, LaurentGerm> {
        &self.bindings
    }

    /// Bindings printed back in the germ grammar.
    pub fn to_strings(&self) -> BTreeMap<String, String> {
        self.bindings
            .iter()
            .map(|(k, g)| (k.clone(), g.to_string()))
            .collect()
    }

    pub fn germ(&self, name: &str) -> Result<&LaurentGerm> {
        self.bindings
            .get(name)
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))
    }

    /// Order of vanishing of the named coordinate at `t = 0`.
    pub fn multiplicity(&self, name: &str) -> Result<u64> {
        Ok(self.germ(name)?.certified_valuation()? as u64)
    }

    pub fn multiplicities<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<BTreeMap<String, u64>> {
        names
            .into_iter()
            .map(|n| Ok((n.to_string(), self.multiplicity(n)?)))
            .collect()
    }

    /// The same curve reparametrized by `t ↦ t^d`.
    pub fn precompose_power(&self, d: u64) -> CurveGerm {
        CurveGerm {
            field: self.field.clone(),
            bindings: self
                .bindings
                .iter()
                .map(|(k, g)| (k.clone(), g.substitute_power(d as i64)))
                .collect(),
        }
    }

    /// Base change along a field embedding.
    pub fn extend(&self, emb: &FieldEmbedding) -> CurveGerm {
        let target = emb.target().clone();
        CurveGerm {
            field: target.clone(),
            bindings: self
                .bindings
                .iter()
                .map(|(k, g)| (k.clone(), g.map_coeffs(target.clone(), |c| emb.map(*c))))
                .collect(),
        }
    }

    /// Whether `d(name)/dt` is a unit, i.e. the coefficient of `t` is
    /// known and nonzero.
    pub fn is_transversal_to(&self, name: &str) -> Result<bool> {
        let g = self.germ(name)?;
        if g.precision() <= 1 {
            return Err(Error::PrecisionExhausted(format!(
                "the linear term of `{name}` is not known"
            )));
        }
        Ok(g.coeff(1).is_some_and(|c| !c.is_zero()))
    }
}
