//! Slope decompositions and their numerical invariants.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// `num/den`, always with an explicit denominator.
pub fn fmt_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parse `a`, `a/b` or `-a/b`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().ok()?;
            let b: i64 = b.trim().parse().ok()?;
            (b != 0).then(|| Rational::new(a, b))
        }
        None => s.parse().ok().map(Rational::from_integer),
    }
}

fn build(entries: impl IntoIterator<Item = (Rational, u64)>, min: i64, what: &str) -> Result<BTreeMap<Rational, u64>> {
    let mut map = BTreeMap::new();
    for (s, m) in entries {
        if s < Rational::from_integer(min) {
            return Err(Error::InvalidProfile(format!("{what} slope {s} is below {min}")));
        }
        if m == 0 {
            return Err(Error::InvalidProfile(format!("slope {s} has multiplicity 0")));
        }
        *map.entry(s).or_insert(0) += m;
    }
    Ok(map)
}

fn serialize_entries<S: Serializer>(entries: &BTreeMap<Rational, u64>, ser: S) -> Result<S::Ok, S::Error> {
    struct Entry<'a>(&'a Rational, u64);
    impl Serialize for Entry<'_> {
        fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
            let mut st = ser.serialize_struct("Entry", 2)?;
            st.serialize_field("slope", &fmt_rational(self.0))?;
            st.serialize_field("mult", &self.1)?;
            st.end()
        }
    }
    let mut seq = ser.serialize_seq(Some(entries.len()))?;
    for (s, m) in entries.iter().rev() {
        seq.serialize_element(&Entry(s, *m))?;
    }
    seq.end()
}

fn weighted_sum(entries: &BTreeMap<Rational, u64>) -> Rational {
    entries
        .iter()
        .fold(Rational::zero(), |acc, (s, m)| acc + s * Rational::from_integer(*m as i64))
}

fn polygon(entries: &BTreeMap<Rational, u64>) -> Result<NewtonPolygon> {
    if entries.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let mut vertices = vec![(Rational::zero(), Rational::zero())];
    let (mut x, mut y) = (Rational::zero(), Rational::zero());
    for (s, m) in entries.iter().rev() {
        let m = Rational::from_integer(*m as i64);
        x += m;
        y += s * m;
        vertices.push((x, y));
    }
    Ok(NewtonPolygon { vertices })
}

/// Non-logarithmic slopes, each at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SlopeProfile {
    entries: BTreeMap<Rational, u64>,
}

impl Serialize for SlopeProfile {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        serialize_entries(&self.entries, ser)
    }
}

impl SlopeProfile {
    pub fn new(entries: impl IntoIterator<Item = (Rational, u64)>) -> Result<Self> {
        Ok(Self {
            entries: build(entries, 1, "conductor")?,
        })
    }

    pub fn isoclinic(slope: Rational, mult: u64) -> Result<Self> {
        Self::new([(slope, mult)])
    }

    /// Rank-`n` tame module.
    pub fn tame(n: u64) -> Self {
        Self::new([(Rational::one(), n)]).expect("slope 1 is valid")
    }

    pub fn entries(&self) -> &BTreeMap<Rational, u64> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rank(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Largest slope.
    pub fn conductor(&self) -> Option<Rational> {
        self.entries.keys().next_back().copied()
    }

    /// Total dimension `Σ slope·mult`.
    pub fn dt(&self) -> Rational {
        weighted_sum(&self.entries)
    }

    pub fn is_isoclinic(&self) -> bool {
        self.entries.len() == 1
    }

    pub fn direct_sum(&self, other: &SlopeProfile) -> SlopeProfile {
        let mut entries = self.entries.clone();
        for (s, m) in &other.entries {
            *entries.entry(*s).or_insert(0) += m;
        }
        SlopeProfile { entries }
    }

    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        polygon(&self.entries)
    }

    pub fn to_log(&self) -> LogSlopeProfile {
        LogSlopeProfile {
            entries: self.entries.iter().map(|(s, m)| (s - Rational::one(), *m)).collect(),
        }
    }

    pub fn from_log(l: &LogSlopeProfile) -> SlopeProfile {
        SlopeProfile {
            entries: l.entries.iter().map(|(s, m)| (s + Rational::one(), *m)).collect(),
        }
    }

    /// Pullback along a tame extension of ramification index `e`: each
    /// slope `s` becomes `e(s − 1) + 1`.
    pub fn tame_pullback_cond(&self, e: u64) -> SlopeProfile {
        SlopeProfile::from_log(&self.to_log().tame_pullback_log(e))
    }

    /// Pullback along a purely inseparable extension of degree `beta`.
    /// Over a perfect residue field the Newton polygon does not move.
    pub fn insep_pullback(&self, p: u64, beta: u64) -> Result<SlopeProfile> {
        if !is_power_of(beta, p) {
            return Err(Error::InvalidProfile(format!("{beta} is not a power of {p}")));
        }
        Ok(self.clone())
    }

    /// Whether the total dimension is a non-negative integer.
    pub fn hasse_arf_check(&self) -> bool {
        let dt = self.dt();
        dt.is_integer() && dt >= Rational::zero()
    }
}

pub(crate) fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 || p < 2 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Logarithmic slopes, each at least 0.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LogSlopeProfile {
    entries: BTreeMap<Rational, u64>,
}

impl Serialize for LogSlopeProfile {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        serialize_entries(&self.entries, ser)
    }
}

impl LogSlopeProfile {
    pub fn new(entries: impl IntoIterator<Item = (Rational, u64)>) -> Result<Self> {
        Ok(Self {
            entries: build(entries, 0, "log")?,
        })
    }

    pub fn entries(&self) -> &BTreeMap<Rational, u64> {
        &self.entries
    }

    pub fn rank(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Largest log slope.
    pub fn lc(&self) -> Option<Rational> {
        self.entries.keys().next_back().copied()
    }

    /// Swan conductor `Σ slope·mult`.
    pub fn sw(&self) -> Rational {
        weighted_sum(&self.entries)
    }

    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        polygon(&self.entries)
    }

    /// Log slopes scale by the ramification index of a tame extension.
    pub fn tame_pullback_log(&self, e: u64) -> LogSlopeProfile {
        let e = Rational::from_integer(e as i64);
        LogSlopeProfile {
            entries: self.entries.iter().map(|(s, m)| (s * e, *m)).collect(),
        }
    }

    pub fn hasse_arf_check(&self) -> bool {
        let sw = self.sw();
        sw.is_integer() && sw >= Rational::zero()
    }
}

/// Concave polygon from `(0, 0)` through the cumulative (rank, weight)
/// points, steepest slope first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(Rational, Rational)>,
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let pts: Vec<[String; 2]> = self
            .vertices
            .iter()
            .map(|(x, y)| [fmt_rational(x), fmt_rational(y)])
            .collect();
        pts.serialize(ser)
    }
}

impl NewtonPolygon {
    pub fn vertices(&self) -> &[(Rational, Rational)] {
        &self.vertices
    }

    /// The polygon of `m·NP`: heights multiplied by `m`.
    pub fn scale(&self, m: Rational) -> NewtonPolygon {
        NewtonPolygon {
            vertices: self.vertices.iter().map(|(x, y)| (*x, y * m)).collect(),
        }
    }

    /// Value at `x`, for `0 ≤ x ≤` the last abscissa.
    pub fn eval(&self, x: Rational) -> Option<Rational> {
        for w in self.vertices.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x >= x0 && x <= x1 {
                return Some(y0 + (y1 - y0) / (x1 - x0) * (x - x0));
            }
        }
        (self.vertices.len() == 1 && x.is_zero()).then(Rational::zero)
    }

    pub fn is_concave(&self) -> bool {
        let slopes: Vec<Rational> = self
            .vertices
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        self.vertices.windows(2).all(|w| w[1].0 > w[0].0) && slopes.windows(2).all(|s| s[0] > s[1])
    }
}

/// A pairing of two equal wild slopes whose tensor product is not
/// determined: every resulting slope is at most `bound`, over `rank`
/// dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clash {
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub rank: u64,
}

pub(crate) fn ser_rational<S: Serializer>(x: &Rational, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&fmt_rational(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorOutcome {
    Exact(SlopeProfile),
    Indeterminate { certain: SlopeProfile, clashes: Vec<Clash> },
}

impl TensorOutcome {
    pub fn exact(self) -> Option<SlopeProfile> {
        match self {
            TensorOutcome::Exact(p) => Some(p),
            TensorOutcome::Indeterminate { .. } => None,
        }
    }
}

/// Tensor product by the dominance rule, piece by isoclinic piece: the
/// larger slope wins, two tame pieces stay tame, and two equal wild slopes
/// are left open.
pub fn tensor(a: &SlopeProfile, b: &SlopeProfile) -> Result<TensorOutcome> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let mut certain = BTreeMap::new();
    let mut clashes = Vec::new();
    for (sa, ma) in &a.entries {
        for (sb, mb) in &b.entries {
            if sa == sb && *sa > Rational::one() {
                clashes.push(Clash {
                    bound: *sa,
                    rank: ma * mb,
                });
            } else {
                *certain.entry(*sa.max(sb)).or_insert(0) += ma * mb;
            }
        }
    }
    let certain = SlopeProfile { entries: certain };
    Ok(if clashes.is_empty() {
        TensorOutcome::Exact(certain)
    } else {
        TensorOutcome::Indeterminate { certain, clashes }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn prof(e: &[(i64, i64, u64)]) -> SlopeProfile {
        SlopeProfile::new(e.iter().map(|&(n, d, m)| (q(n, d), m))).unwrap()
    }

    #[test]
    fn polygons() {
        let np = prof(&[(4, 1, 2)]).newton_polygon().unwrap();
        assert_eq!(np.vertices(), &[(q(0, 1), q(0, 1)), (q(2, 1), q(8, 1))]);
        let np = prof(&[(4, 1, 1), (1, 1, 1)]).newton_polygon().unwrap();
        assert_eq!(np.vertices(), &[(q(0, 1), q(0, 1)), (q(1, 1), q(4, 1)), (q(2, 1), q(5, 1))]);
        assert_eq!(SlopeProfile::default().newton_polygon(), Err(Error::EmptyProfile));
    }

    #[test]
    fn tensor_rules() {
        let t = tensor(&prof(&[(5, 1, 2)]), &prof(&[(3, 1, 4)])).unwrap();
        assert_eq!(t, TensorOutcome::Exact(prof(&[(5, 1, 8)])));
        match tensor(&prof(&[(5, 1, 2)]), &prof(&[(5, 1, 1)])).unwrap() {
            TensorOutcome::Indeterminate { certain, clashes } => {
                assert!(certain.is_empty());
                assert_eq!(clashes, vec![Clash { bound: q(5, 1), rank: 2 }]);
            }
            other => panic!("expected a clash, got {other:?}"),
        }
        let tame = SlopeProfile::tame(3);
        let w = prof(&[(7, 2, 1), (2, 1, 2)]);
        assert_eq!(tensor(&tame, &w).unwrap(), TensorOutcome::Exact(prof(&[(7, 2, 3), (2, 1, 6)])));
        assert_eq!(tensor(&tame, &tame).unwrap(), TensorOutcome::Exact(SlopeProfile::tame(9)));
    }

    #[test]
    fn pullbacks() {
        let l = LogSlopeProfile::new([(q(3, 2), 1)]).unwrap();
        assert_eq!(l.tame_pullback_log(2), LogSlopeProfile::new([(q(3, 1), 1)]).unwrap());
        let z = LogSlopeProfile::new([(q(0, 1), 5)]).unwrap();
        assert_eq!(z.tame_pullback_log(7), z);
        assert_eq!(prof(&[(4, 1, 1)]).tame_pullback_cond(5), prof(&[(16, 1, 1)]));
        assert_eq!(prof(&[(1, 1, 3)]).tame_pullback_cond(9), prof(&[(1, 1, 3)]));
        assert_eq!(prof(&[(12, 5, 1)]).tame_pullback_cond(5), prof(&[(8, 1, 1)]));
        assert_eq!(prof(&[(4, 1, 2)]).insep_pullback(2, 8).unwrap(), prof(&[(4, 1, 2)]));
        assert!(prof(&[(4, 1, 2)]).insep_pullback(2, 6).is_err());
    }

    #[test]
    fn log_round_trip_and_integrality() {
        let p = prof(&[(4, 1, 2), (1, 1, 5)]);
        assert_eq!(p.to_log(), LogSlopeProfile::new([(q(3, 1), 2), (q(0, 1), 5)]).unwrap());
        assert_eq!(SlopeProfile::from_log(&p.to_log()), p);
        assert!(prof(&[(4, 1, 2)]).hasse_arf_check());
        assert!(prof(&[(12, 5, 5)]).hasse_arf_check());
        assert!(!prof(&[(3, 2, 1)]).hasse_arf_check());
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(SlopeProfile::new([(q(1, 2), 1)]).is_err());
        assert!(SlopeProfile::new([(q(2, 1), 0)]).is_err());
        assert!(LogSlopeProfile::new([(q(-1, 2), 1)]).is_err());
    }

    #[test]
    fn serializes_descending() {
        let p = prof(&[(1, 1, 1), (12, 5, 5)]);
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"[{"slope":"12/5","mult":5},{"slope":"1/1","mult":1}]"#
        );
    }
}
