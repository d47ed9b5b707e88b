use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::divisor::{MonomialMap, QDivisor};
use crate::arith::{is_prime, LaurentGerm};
use crate::aschar::ASChar;
use crate::error::{Error, Result};
use crate::slopes::{fmt_rational, is_power_of, ser_rational, Rational, SlopeProfile};

/// One isoclinic piece of the ramification at the generic point of a
/// branch component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Piece {
    pub slope: Rational,
    pub log_slope: Rational,
    pub mult: u64,
}

/// Pushforward along the tame cover `y_i ↦ y_i^r` (`i ≤ m`) of the
/// Artin–Schreier sheaf `T^p − T = y_n / Π y_i^{p_i}` on the complement of
/// `y_1⋯y_m = 0` in `A^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerPushAS {
    p: u64,
    p_exps: Vec<u64>,
    r: u64,
    n: usize,
    a: u32,
}

impl KummerPushAS {
    /// Requires `p_i > p`, `p_i = p^a·b_i` with a common `a ≥ 1` and
    /// `p ∤ b_i`, `p ∤ r` and `r < min(p_i − b_i)`, and `m < n`.
    pub fn new(p: u64, p_exps: Vec<u64>, r: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        let bad = |m: String| Err(Error::InvalidModel(m));
        if p_exps.is_empty() {
            return bad("at least one branch exponent is needed".into());
        }
        if p_exps.len() >= n {
            return bad(format!("{} branch components need ambient dimension above {}", p_exps.len(), p_exps.len()));
        }
        let mut a = None;
        for &pi in &p_exps {
            if pi <= p {
                return bad(format!("exponent {pi} must exceed {p}"));
            }
            let v = p_adic_valuation(pi, p);
            if v == 0 {
                return bad(format!("exponent {pi} is not divisible by {p}"));
            }
            match a {
                None => a = Some(v),
                Some(a0) if a0 != v => {
                    return bad(format!("exponents must share the same power of {p}"));
                }
                _ => {}
            }
        }
        let a = a.expect("nonempty");
        if r == 0 || r.is_multiple_of(p) {
            return bad(format!("cover degree {r} must be prime to {p}"));
        }
        let bound = p_exps.iter().map(|&pi| pi - pi / p.pow(a)).min().expect("nonempty");
        if r >= bound {
            return bad(format!("cover degree {r} must be below {bound}"));
        }
        Ok(Self { p, p_exps, r, n, a })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn p_exps(&self) -> &[u64] {
        &self.p_exps
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The common `a` with `p_i = p^a·b_i`.
    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn m(&self) -> usize {
        self.p_exps.len()
    }

    pub fn rank(&self) -> u64 {
        self.r.pow(self.m() as u32)
    }

    pub fn branch_names(&self) -> Vec<String> {
        (1..=self.m()).map(|i| format!("y{i}")).collect()
    }

    pub fn direction(&self) -> String {
        format!("y{}", self.n)
    }

    pub fn variables(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("y{i}")).collect()
    }

    /// The cover `y_i ↦ y_i^r` on the branch coordinates.
    pub fn cover(&self) -> MonomialMap {
        let images = self
            .variables()
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let e = if i < self.m() { self.r } else { 1 };
                (v.clone(), BTreeMap::from([(v, e)]))
            })
            .collect();
        MonomialMap::new(self.variables(), images).expect("valid by construction")
    }
}

fn p_adic_valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Pullback of a wild rank-one character of `G_m` along
/// `t ↦ x_1^q⋯x_{m−1}^q·x_m^b` (or `t ↦ x_1^b` when `m = 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct GKPullback {
    base: ASChar,
    swan: u64,
    q: u64,
    b: u64,
    m: usize,
    n: usize,
}

impl GKPullback {
    pub fn new(base: ASChar, q: u64, b: u64, m: usize, n: usize) -> Result<Self> {
        let p = base.field().characteristic() as u64;
        let bad = |m: String| Err(Error::InvalidModel(m));
        let swan = base.swan()?;
        if swan == 0 {
            return bad("the base character must be wildly ramified".into());
        }
        if !is_power_of(q, p) || (q - 1) * swan <= 1 {
            return bad(format!("q = {q} must be a power of {p} with (q - 1)(c - 1) > 1"));
        }
        if b == 0 || b.is_multiple_of(p) {
            return bad(format!("b = {b} must be positive and prime to {p}"));
        }
        if n < 2 || m == 0 || m > n {
            return bad(format!("need n >= 2 and 1 <= m <= n, got m = {m}, n = {n}"));
        }
        Ok(Self { base, swan, q, b, m, n })
    }

    pub fn base(&self) -> &ASChar {
        &self.base
    }

    /// Conductor of the base character.
    pub fn c(&self) -> Rational {
        Rational::from_integer(self.swan as i64 + 1)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn branch_names(&self) -> Vec<String> {
        (1..=self.m).map(|i| format!("x{i}")).collect()
    }

    pub fn direction(&self) -> String {
        format!("x{}", self.m)
    }

    pub fn variables(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("x{i}")).collect()
    }

    /// Exponent of each branch coordinate in the pulled-back parameter.
    pub fn exponents(&self) -> BTreeMap<String, u64> {
        self.branch_names()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, if i + 1 == self.m { self.b } else { self.q }))
            .collect()
    }

    /// The map to the line, with target coordinate `t`.
    pub fn map(&self) -> MonomialMap {
        MonomialMap::new(self.variables(), BTreeMap::from([("t".to_string(), self.exponents())]))
            .expect("valid by construction")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SheafModel {
    KummerPushAS(KummerPushAS),
    GKPullback(GKPullback),
    Tensor(Box<SheafModel>, Box<SheafModel>),
}

/// A closed-form characteristic cycle
/// `sign·(zero_section·[T*X] + Σ coeff·[D·⟨direction⟩])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CCReport {
    pub sign: i64,
    pub zero_section: u64,
    pub terms: Vec<CCTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CCTerm {
    pub divisor: String,
    #[serde(serialize_with = "ser_rational")]
    pub coeff: Rational,
    pub direction: String,
}

impl fmt::Display for CCReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{sign}({}[T*X]", self.zero_section)?;
        for t in &self.terms {
            let c = if t.coeff.is_integer() {
                t.coeff.to_integer().to_string()
            } else {
                fmt_rational(&t.coeff)
            };
            write!(f, " + {c}[{}.<{}>]", t.divisor, t.direction)?;
        }
        write!(f, ")")
    }
}

fn parity_sign(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl SheafModel {
    pub fn tensor(left: SheafModel, right: SheafModel) -> Result<SheafModel> {
        if left.characteristic() != right.characteristic() {
            return Err(Error::InvalidModel("tensor factors live in different characteristics".into()));
        }
        Ok(SheafModel::Tensor(Box::new(left), Box::new(right)))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            SheafModel::KummerPushAS(k) => k.characteristic(),
            SheafModel::GKPullback(g) => g.base.field().characteristic() as u64,
            SheafModel::Tensor(a, _) => a.characteristic(),
        }
    }

    pub fn rank(&self) -> u64 {
        match self {
            SheafModel::KummerPushAS(k) => k.rank(),
            SheafModel::GKPullback(_) => 1,
            SheafModel::Tensor(a, b) => a.rank() * b.rank(),
        }
    }

    pub fn branch_names(&self) -> Vec<String> {
        match self {
            SheafModel::KummerPushAS(k) => k.branch_names(),
            SheafModel::GKPullback(g) => g.branch_names(),
            SheafModel::Tensor(a, b) => {
                let s: BTreeSet<String> = a.branch_names().into_iter().chain(b.branch_names()).collect();
                s.into_iter().collect()
            }
        }
    }

    pub fn variables(&self) -> Vec<String> {
        match self {
            SheafModel::KummerPushAS(k) => k.variables(),
            SheafModel::GKPullback(g) => g.variables(),
            SheafModel::Tensor(a, b) => {
                let s: BTreeSet<String> = a.variables().into_iter().chain(b.variables()).collect();
                s.into_iter().collect()
            }
        }
    }

    /// The coordinate whose differential spans the conical direction.
    pub fn direction(&self) -> String {
        match self {
            SheafModel::KummerPushAS(k) => k.direction(),
            SheafModel::GKPullback(g) => g.direction(),
            SheafModel::Tensor(..) => self.split_dominant().0.direction(),
        }
    }

    /// For a tensor product, `(dominant, other)`: the factor whose
    /// conductor divisor is strictly larger everywhere comes first, the
    /// left factor when neither is.
    pub fn split_dominant(&self) -> (&SheafModel, &SheafModel) {
        let SheafModel::Tensor(a, b) = self else {
            return (self, self);
        };
        let dominates = |x: &SheafModel, y: &SheafModel| match (x.conductor_divisor(), y.conductor_divisor()) {
            (Ok(cx), Ok(cy)) => cx.gt_everywhere(&cy),
            _ => false,
        };
        if !dominates(a, b) && dominates(b, a) {
            (b, a)
        } else {
            (a, b)
        }
    }

    /// Isoclinic pieces at the generic point of `{name = 0}`; a coordinate
    /// that is not a branch component gives one tame piece.
    pub fn pieces(&self, name: &str) -> Result<Vec<Piece>> {
        let tame = || {
            vec![Piece {
                slope: Rational::one(),
                log_slope: Rational::zero(),
                mult: self.rank(),
            }]
        };
        match self {
            SheafModel::KummerPushAS(k) => {
                let Some(i) = k.branch_names().iter().position(|v| v == name) else {
                    return Ok(tame());
                };
                let c = Rational::new(k.p_exps[i] as i64, k.r as i64);
                Ok(vec![Piece {
                    slope: c,
                    log_slope: c,
                    mult: k.rank(),
                }])
            }
            SheafModel::GKPullback(g) => {
                let Some(&e) = g.exponents().get(name) else {
                    return Ok(tame());
                };
                let s = Rational::from_integer(g.swan as i64);
                let e = Rational::from_integer(e as i64);
                let last = name == g.direction();
                Ok(vec![Piece {
                    slope: if last { e * s + 1 } else { e * s },
                    log_slope: e * s,
                    mult: 1,
                }])
            }
            SheafModel::Tensor(a, b) => {
                let mut out: BTreeMap<(Rational, Rational), u64> = BTreeMap::new();
                for pa in a.pieces(name)? {
                    for pb in b.pieces(name)? {
                        let (slope, log_slope) = if pa.slope > pb.slope {
                            (pa.slope, pa.log_slope)
                        } else if pb.slope > pa.slope {
                            (pb.slope, pb.log_slope)
                        } else if pa.slope == Rational::one() {
                            (pa.slope, pa.log_slope.max(pb.log_slope))
                        } else {
                            return Err(Error::IndeterminateTensor(name.to_string()));
                        };
                        *out.entry((slope, log_slope)).or_insert(0) += pa.mult * pb.mult;
                    }
                }
                Ok(out
                    .into_iter()
                    .rev()
                    .map(|((slope, log_slope), mult)| Piece { slope, log_slope, mult })
                    .collect())
            }
        }
    }

    /// Slope profile at the generic point of `{name = 0}`.
    pub fn generic_profile(&self, name: &str) -> Result<SlopeProfile> {
        SlopeProfile::new(self.pieces(name)?.into_iter().map(|p| (p.slope, p.mult)))
    }

    fn divisor_by(&self, f: impl Fn(&[Piece]) -> Rational) -> Result<QDivisor> {
        let mut out = Vec::new();
        for name in self.branch_names() {
            out.push((name.clone(), f(&self.pieces(&name)?)));
        }
        Ok(QDivisor::new(out))
    }

    /// `Σ c_D·D`: the largest slope along each branch component.
    pub fn conductor_divisor(&self) -> Result<QDivisor> {
        self.divisor_by(|ps| ps.iter().map(|p| p.slope).max().unwrap_or_else(Rational::zero))
    }

    /// `Σ lc_D·D`.
    pub fn log_conductor_divisor(&self) -> Result<QDivisor> {
        self.divisor_by(|ps| ps.iter().map(|p| p.log_slope).max().unwrap_or_else(Rational::zero))
    }

    /// `Σ dt_D·D`.
    pub fn dt_divisor(&self) -> Result<QDivisor> {
        self.divisor_by(|ps| {
            ps.iter()
                .map(|p| p.slope * Rational::from_integer(p.mult as i64))
                .sum()
        })
    }

    /// `Σ sw_D·D`.
    pub fn sw_divisor(&self) -> Result<QDivisor> {
        self.divisor_by(|ps| {
            ps.iter()
                .map(|p| p.log_slope * Rational::from_integer(p.mult as i64))
                .sum()
        })
    }

    /// The closed-form characteristic cycle of the extension by zero.
    pub fn cc_report(&self) -> Result<CCReport> {
        match self {
            SheafModel::KummerPushAS(k) => {
                let dir = format!("d{}", k.direction());
                let scale = k.r.pow(k.m() as u32 - 1) as i64;
                Ok(CCReport {
                    sign: parity_sign(k.n),
                    zero_section: k.rank(),
                    terms: k
                        .branch_names()
                        .into_iter()
                        .zip(&k.p_exps)
                        .map(|(d, &pi)| CCTerm {
                            divisor: d,
                            coeff: Rational::from_integer(scale * pi as i64),
                            direction: dir.clone(),
                        })
                        .collect(),
                })
            }
            SheafModel::GKPullback(g) => {
                let dir = format!("d{}", g.direction());
                let c = self.conductor_divisor()?;
                Ok(CCReport {
                    sign: parity_sign(g.n),
                    zero_section: 1,
                    terms: c
                        .coeffs()
                        .iter()
                        .map(|(d, v)| CCTerm {
                            divisor: d.clone(),
                            coeff: *v,
                            direction: dir.clone(),
                        })
                        .collect(),
                })
            }
            SheafModel::Tensor(..) => {
                let (g, f) = self.split_dominant();
                let mut cc = g.cc_report()?;
                let rk = f.rank();
                cc.zero_section *= rk;
                for t in &mut cc.terms {
                    t.coeff *= Rational::from_integer(rk as i64);
                }
                Ok(cc)
            }
        }
    }
}

impl GKPullback {
    /// Base character composed with the pulled-back parameter of a curve,
    /// given as a germ already known to the needed precision.
    pub(crate) fn compose_base(&self, s: &LaurentGerm) -> Result<ASChar> {
        Ok(ASChar::new(self.base.germ().compose(s)?))
    }
}
