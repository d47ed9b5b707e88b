use std::collections::BTreeMap;
use std::fmt;

use super::{CoeffField, FiniteField};
use crate::error::{Error, Result};

/// Precision of a germ whose every coefficient is known.
pub const EXACT: i64 = i64::MAX / 4;

fn clamp(n: i64) -> i64 {
    if n >= EXACT / 2 {
        EXACT
    } else {
        n
    }
}

fn add_prec(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        clamp(a.saturating_add(b))
    }
}

fn mul_prec(a: i64, k: i64) -> i64 {
    if a == EXACT {
        EXACT
    } else {
        clamp(a.saturating_mul(k))
    }
}

/// A Laurent series in `t` known modulo `t^precision`.
///
/// Stored exponents are all below the precision and no stored coefficient
/// is zero, so the least stored exponent is a certified valuation. A germ
/// with no stored terms is `O(t^precision)`.
#[derive(Clone, PartialEq)]
pub struct LaurentGerm<F: CoeffField = FiniteField> {
    field: F,
    terms: BTreeMap<i64, F::Elem>,
    precision: i64,
}

impl<F: CoeffField> LaurentGerm<F> {
    pub fn new(field: F, terms: impl IntoIterator<Item = (i64, F::Elem)>, precision: i64) -> Self {
        let precision = clamp(precision);
        let mut map: BTreeMap<i64, F::Elem> = BTreeMap::new();
        for (k, c) in terms {
            if k >= precision {
                continue;
            }
            let entry = map.entry(k).or_insert_with(|| field.zero());
            *entry = field.add(entry, &c);
        }
        map.retain(|_, c| !field.is_zero(c));
        Self {
            field,
            terms: map,
            precision,
        }
    }

    pub fn zero(field: F) -> Self {
        Self::big_o(field, EXACT)
    }

    /// `O(t^n)`: nothing known below `n`.
    pub fn big_o(field: F, n: i64) -> Self {
        Self {
            field,
            terms: BTreeMap::new(),
            precision: clamp(n),
        }
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        Self::monomial(field, one, 0)
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::monomial(field, c, 0)
    }

    /// The exact germ `c·t^k`.
    pub fn monomial(field: F, c: F::Elem, k: i64) -> Self {
        Self::new(field, [(k, c)], EXACT)
    }

    /// The uniformizer `t`.
    pub fn var(field: F) -> Self {
        let one = field.one();
        Self::monomial(field, one, 1)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision == EXACT
    }

    pub fn terms(&self) -> &BTreeMap<i64, F::Elem> {
        &self.terms
    }

    /// True for the exact zero germ only.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    /// Least exponent with a nonzero coefficient; `None` if no term is
    /// certified.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Valuation, failing when no term is certified.
    pub fn certified_valuation(&self) -> Result<i64> {
        self.valuation().ok_or_else(|| {
            Error::PrecisionExhausted(format!("germ O(t^{}) has no certified term", self.precision))
        })
    }

    pub fn leading(&self) -> Option<(i64, &F::Elem)> {
        self.terms.iter().next().map(|(k, c)| (*k, c))
    }

    /// Coefficient of `t^k`, or `None` when `k` is beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<F::Elem> {
        if k >= self.precision {
            return None;
        }
        Some(self.terms.get(&k).cloned().unwrap_or_else(|| self.field.zero()))
    }

    /// Largest stored exponent.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Forget everything from `t^n` on.
    pub fn truncate(&self, n: i64) -> Self {
        let precision = self.precision.min(clamp(n));
        Self {
            field: self.field.clone(),
            terms: self
                .terms
                .range(..precision)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            precision,
        }
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let precision = self.precision.min(other.precision);
        let mut terms: BTreeMap<i64, F::Elem> = self.terms.range(..precision).map(|(k, c)| (*k, c.clone())).collect();
        for (k, c) in other.terms.range(..precision) {
            match terms.get_mut(k) {
                Some(x) => *x = self.field.add(x, c),
                None => {
                    terms.insert(*k, c.clone());
                }
            }
        }
        terms.retain(|_, c| !self.field.is_zero(c));
        Ok(Self {
            field: self.field.clone(),
            terms,
            precision,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, self.field.neg(c))).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::big_o(self.field.clone(), EXACT);
        }
        Self {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, x)| (*k, self.field.mul(x, c))).collect(),
            precision: self.precision,
        }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            precision: add_prec(self.precision, k),
        }
    }

    // Valuation used for precision bookkeeping: a germ with no certified
    // term is only known to start at its precision.
    fn floor_valuation(&self) -> i64 {
        self.valuation().unwrap_or(self.precision)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let precision = add_prec(self.precision, other.floor_valuation())
            .min(add_prec(other.precision, self.floor_valuation()));
        let mut terms: BTreeMap<i64, F::Elem> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let k = i + j;
                if k >= precision {
                    break;
                }
                let prod = self.field.mul(a, b);
                match terms.get_mut(&k) {
                    Some(x) => *x = self.field.add(x, &prod),
                    None => {
                        terms.insert(k, prod);
                    }
                }
            }
        }
        terms.retain(|_, c| !self.field.is_zero(c));
        Ok(Self {
            field: self.field.clone(),
            terms,
            precision,
        })
    }

    /// Multiplicative inverse of a germ with a certified leading term.
    ///
    /// A germ `a·t^v + … + O(t^N)` inverts to precision `N − 2v`. Exact
    /// monomials invert exactly; other exact germs must be truncated first.
    pub fn invert_unit(&self) -> Result<Self> {
        let (v, lead) = self.leading().ok_or_else(|| {
            Error::PrecisionExhausted(format!("cannot invert O(t^{})", self.precision))
        })?;
        let lead_inv = self.field.inv(lead).expect("stored coefficients are nonzero");
        if self.terms.len() == 1 && self.is_exact() {
            return Ok(Self::monomial(self.field.clone(), lead_inv, -v));
        }
        if self.is_exact() {
            return Err(Error::PrecisionExhausted(
                "an exact germ with several terms has no finite inverse; truncate it first".into(),
            ));
        }
        let rel = self.precision - v;
        let h: Vec<(i64, F::Elem)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(k, c)| (k - v, self.field.mul(c, &lead_inv)))
            .collect();
        let mut w: Vec<F::Elem> = Vec::with_capacity(rel as usize);
        w.push(self.field.one());
        for k in 1..rel {
            let mut acc = self.field.zero();
            for (j, hj) in &h {
                if *j > k {
                    break;
                }
                let prev = &w[(k - j) as usize];
                if !self.field.is_zero(prev) {
                    acc = self.field.add(&acc, &self.field.mul(hj, prev));
                }
            }
            w.push(self.field.neg(&acc));
        }
        let terms = w
            .into_iter()
            .enumerate()
            .map(|(k, c)| (k as i64 - v, self.field.mul(&c, &lead_inv)));
        Ok(Self::new(self.field.clone(), terms, self.precision - 2 * v))
    }

    /// `f(t)^p`, computed coefficientwise.
    pub fn frobenius(&self) -> Self {
        let p = self.field.characteristic() as i64;
        Self {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k * p, self.field.pow(c, p).expect("nonnegative power")))
                .collect(),
            precision: mul_prec(self.precision, p),
        }
    }

    /// Integer power. The `p`-power part of the exponent goes through
    /// Frobenius, which keeps far more precision than repeated squaring.
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.invert_unit()?.pow(-n);
        }
        if n == 0 {
            return Ok(Self::one(self.field.clone()));
        }
        let p = self.field.characteristic() as i64;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base)?;
            }
        }
        let mut out = acc.expect("positive exponent");
        for _ in 0..k {
            out = out.frobenius();
        }
        Ok(out)
    }

    /// `f(t^e)` for `e ≥ 1`.
    pub fn substitute_power(&self, e: i64) -> Self {
        assert!(e >= 1, "substitute_power needs a positive exponent");
        Self {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, c)| (k * e, c.clone())).collect(),
            precision: mul_prec(self.precision, e),
        }
    }

    /// `f(s)` for a germ `s` of positive valuation.
    pub fn compose(&self, s: &Self) -> Result<Self> {
        self.check_field(s)?;
        let vs = s.certified_valuation()?;
        if vs < 1 {
            return Err(Error::InvalidCurve(format!(
                "substituted germ has valuation {vs}, need at least 1"
            )));
        }
        let cap = mul_prec(self.precision, vs);
        let (kmin, kmax) = match (self.valuation(), self.degree()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(Self::big_o(self.field.clone(), cap)),
        };
        let mut s = s.clone();
        if kmin < 0 && s.is_exact() && s.terms.len() > 1 {
            if self.is_exact() {
                return Err(Error::PrecisionExhausted(
                    "composing a pole with an exact non-monomial germ needs a working precision".into(),
                ));
            }
            s = s.truncate(mul_prec(self.precision - kmin + 1, vs));
        }
        let mut acc = Self::big_o(self.field.clone(), cap);
        let mut cur = s.pow(kmin)?;
        for k in kmin..=kmax {
            if let Some(c) = self.terms.get(&k) {
                acc = acc.add(&cur.scale(c))?;
            }
            if k < kmax {
                cur = cur.mul(&s)?;
            }
        }
        Ok(acc)
    }

    /// Apply `f` to every coefficient, landing in `target`.
    pub fn map_coeffs<G: CoeffField>(&self, target: G, f: impl Fn(&F::Elem) -> G::Elem) -> LaurentGerm<G> {
        let terms: Vec<(i64, G::Elem)> = self.terms.iter().map(|(k, c)| (*k, f(c))).collect();
        LaurentGerm::new(target, terms, self.precision)
    }

    /// Apply a fallible map to every coefficient.
    pub fn try_map_coeffs<G: CoeffField>(
        &self,
        target: G,
        f: impl Fn(&F::Elem) -> Option<G::Elem>,
    ) -> Option<LaurentGerm<G>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            terms.push((*k, f(c)?));
        }
        Some(LaurentGerm::new(target, terms, self.precision))
    }
}

impl LaurentGerm<FiniteField> {
    /// An `n`-th root of a germ of valuation 0, with `n` prime to `p`.
    ///
    /// The constant term's root is the one [`FiniteField::nth_root`]
    /// picks; higher terms follow by Newton iteration. The result is known
    /// modulo `t^min(self.precision, precision)`.
    pub fn unit_nth_root(&self, n: u64, precision: i64) -> Result<Self> {
        let f = self.field.clone();
        let p = f.characteristic() as u64;
        if n == 0 || n.is_multiple_of(p) {
            return Err(Error::InvalidModel(format!("root degree {n} must be prime to {p}")));
        }
        let (v, &u0) = self.leading().ok_or_else(|| {
            Error::PrecisionExhausted("cannot take a root of a germ with no certified term".into())
        })?;
        if v != 0 {
            return Err(Error::InvalidCurve(format!("germ of valuation {v} is not a unit")));
        }
        let z0 = f
            .nth_root(u0, n)
            .ok_or_else(|| Error::InvalidCurve(format!("{} has no {n}-th root in {f:?}", f.display(u0))))?;
        let target = self.precision.min(clamp(precision));
        if self.terms.len() == 1 && self.is_exact() && target == EXACT {
            return Ok(Self::constant(f, z0));
        }
        if target == EXACT {
            return Err(Error::PrecisionExhausted("root of an exact non-constant germ needs a working precision".into()));
        }
        let v = self.scale(&f.inv(u0).expect("nonzero"));
        let n_el = f.from_int(n as i64);
        let mut y = Self::one(f.clone());
        let mut k = 1;
        while k < target {
            k = (2 * k).min(target);
            let yk = y.truncate(k);
            let num = yk.pow(n as i64)?.sub(&v.truncate(k))?;
            let den = yk.pow(n as i64 - 1)?.scale(&n_el).invert_unit()?;
            // The iterate is correct mod t^k; reuse it as an exact polynomial.
            y = yk.sub(&num.mul(&den)?)?.truncate(k);
            y.precision = EXACT;
        }
        Ok(y.truncate(target).scale(&z0))
    }
}

impl<F: CoeffField> fmt::Display for LaurentGerm<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = self.field.one();
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in &self.terms {
            let coeff = self.field.display(c);
            let coeff = if coeff.contains(['+', '/']) { format!("({coeff})") } else { coeff };
            parts.push(match (*k, *c == one) {
                (0, _) => coeff,
                (1, true) => "t".into(),
                (1, false) => format!("{coeff}*t"),
                (_, true) => format!("t^{k}"),
                (_, false) => format!("{coeff}*t^{k}"),
            });
        }
        if !self.is_exact() {
            parts.push(format!("O(t^{})", self.precision));
        }
        if parts.is_empty() {
            return write!(out, "0");
        }
        write!(out, "{}", parts.join(" + "))
    }
}

impl<F: CoeffField> fmt::Debug for LaurentGerm<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "LaurentGerm({self})")
    }
}

/// A Laurent monomial `Π x_i^{e_i}` in named variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Monomial {
    exponents: BTreeMap<String, i64>,
}

impl Monomial {
    pub fn new(exponents: impl IntoIterator<Item = (String, i64)>) -> Self {
        let mut map = BTreeMap::new();
        for (name, e) in exponents {
            *map.entry(name).or_insert(0) += e;
        }
        map.retain(|_, e| *e != 0);
        Self { exponents: map }
    }

    pub fn exponents(&self) -> &BTreeMap<String, i64> {
        &self.exponents
    }

    /// Substitute a germ for every variable and multiply out.
    pub fn substitute<F: CoeffField>(
        &self,
        field: &F,
        bindings: &BTreeMap<String, LaurentGerm<F>>,
    ) -> Result<LaurentGerm<F>> {
        let mut acc = LaurentGerm::one(field.clone());
        for (name, &e) in &self.exponents {
            let g = bindings
                .get(name)
                .ok_or_else(|| Error::UnboundVariable(name.clone()))?;
            acc = acc.mul(&g.pow(e)?)?;
        }
        Ok(acc)
    }
}
