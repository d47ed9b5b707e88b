use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::slopes::{fmt_rational, Rational};

/// A `Q`-linear combination of coordinate hyperplanes `{x = 0}`, keyed by
/// the coordinate name. Zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QDivisor {
    coeffs: BTreeMap<String, Rational>,
}

impl Serialize for QDivisor {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<&str, String> = self
            .coeffs
            .iter()
            .map(|(k, v)| (k.as_str(), fmt_rational(v)))
            .collect();
        m.serialize(ser)
    }
}

impl QDivisor {
    pub fn new(coeffs: impl IntoIterator<Item = (String, Rational)>) -> Self {
        let mut map: BTreeMap<String, Rational> = BTreeMap::new();
        for (k, v) in coeffs {
            *map.entry(k).or_insert_with(Rational::zero) += v;
        }
        map.retain(|_, v| !v.is_zero());
        Self { coeffs: map }
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, name: &str) -> Rational {
        self.coeffs.get(name).copied().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &QDivisor) -> QDivisor {
        QDivisor::new(self.coeffs.iter().chain(&other.coeffs).map(|(k, v)| (k.clone(), *v)))
    }

    pub fn scale(&self, c: Rational) -> QDivisor {
        QDivisor::new(self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|v| *v >= Rational::zero())
    }

    /// `self − other` effective.
    pub fn ge(&self, other: &QDivisor) -> bool {
        self.add(&other.scale(-Rational::from_integer(1))).is_effective()
    }

    /// Every coefficient strictly larger, over the union of supports.
    pub fn gt_everywhere(&self, other: &QDivisor) -> bool {
        self.coeffs
            .keys()
            .chain(other.coeffs.keys())
            .all(|k| self.coeff(k) > other.coeff(k))
    }

    /// Multiplicity `Σ coeff·α` against per-coordinate valuations.
    pub fn multiplicity(&self, valuations: &BTreeMap<String, u64>) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, (k, v)| {
            acc + v * Rational::from_integer(valuations.get(k).copied().unwrap_or(0) as i64)
        })
    }
}

/// A map between monomial spaces: each target coordinate is a monomial in
/// the source coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    source: Vec<String>,
    images: BTreeMap<String, BTreeMap<String, u64>>,
}

impl MonomialMap {
    pub fn new(source: Vec<String>, images: BTreeMap<String, BTreeMap<String, u64>>) -> Result<Self> {
        for (target, mono) in &images {
            if mono.values().all(|&e| e == 0) {
                return Err(Error::InvalidModel(format!("`{target}` maps to a constant")));
            }
            if let Some(v) = mono.keys().find(|v| !source.contains(v)) {
                return Err(Error::UnknownDivisorName(v.clone()));
            }
        }
        Ok(Self { source, images })
    }

    pub fn identity(vars: &[String]) -> Self {
        let images = vars
            .iter()
            .map(|v| (v.clone(), BTreeMap::from([(v.clone(), 1)])))
            .collect();
        Self {
            source: vars.to_vec(),
            images,
        }
    }

    pub fn source(&self) -> &[String] {
        &self.source
    }

    pub fn image(&self, target: &str) -> Option<&BTreeMap<String, u64>> {
        self.images.get(target)
    }

    /// `{y = 0}` pulls back to `Σ_j a_j·{x_j = 0}` when `y ↦ Π x_j^{a_j}`.
    pub fn pullback_divisor(&self, d: &QDivisor) -> Result<QDivisor> {
        let mut out = Vec::new();
        for (name, c) in d.coeffs() {
            let mono = self
                .images
                .get(name)
                .ok_or_else(|| Error::UnknownDivisorName(name.clone()))?;
            for (x, a) in mono {
                out.push((x.clone(), c * Rational::from_integer(*a as i64)));
            }
        }
        Ok(QDivisor::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn pullback_along_monomials() {
        let f = MonomialMap::new(
            vec![s("x1"), s("x2")],
            BTreeMap::from([(s("t"), BTreeMap::from([(s("x1"), 4), (s("x2"), 3)]))]),
        )
        .unwrap();
        let d = QDivisor::new([(s("t"), q(1, 1))]);
        assert_eq!(
            f.pullback_divisor(&d).unwrap(),
            QDivisor::new([(s("x1"), q(4, 1)), (s("x2"), q(3, 1))])
        );
        let bad = QDivisor::new([(s("y"), q(1, 1))]);
        assert_eq!(f.pullback_divisor(&bad), Err(Error::UnknownDivisorName(s("y"))));
    }

    #[test]
    fn kummer_cover_clears_denominators() {
        let vars = vec![s("y1"), s("y2")];
        let r = 5;
        let images = vars
            .iter()
            .map(|v| (v.clone(), BTreeMap::from([(v.clone(), r)])))
            .collect();
        let cover = MonomialMap::new(vars.clone(), images).unwrap();
        let d = QDivisor::new([(s("y1"), q(12, 5)), (s("y2"), q(7, 5))]);
        assert_eq!(
            cover.pullback_divisor(&d).unwrap(),
            QDivisor::new([(s("y1"), q(12, 1)), (s("y2"), q(7, 1))])
        );
        let id = MonomialMap::identity(&vars);
        assert_eq!(id.pullback_divisor(&d).unwrap(), d);
    }

    #[test]
    fn comparisons() {
        let a = QDivisor::new([(s("x"), q(3, 2)), (s("y"), q(1, 1))]);
        let b = QDivisor::new([(s("x"), q(1, 1))]);
        assert!(a.ge(&b));
        assert!(!b.ge(&a));
        assert!(a.ge(&a));
        assert!(a.gt_everywhere(&b));
        assert!(!a.gt_everywhere(&QDivisor::new([(s("x"), q(1, 1)), (s("y"), q(1, 1))])));
        assert!(a.gt_everywhere(&QDivisor::new([(s("x"), q(1, 2)), (s("y"), q(1, 2))])));
    }
}
