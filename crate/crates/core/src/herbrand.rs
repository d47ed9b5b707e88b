//! Lower-numbering ramification filtrations, the Herbrand function and
//! the conductor integral.
//!
//! Real indices use the ceiling convention: `G_u = G_{⌈u⌉}`, so `φ` has
//! slope `|G_i|/|G_0|` on `(i − 1, i]`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{CoeffField, LaurentGerm};
use crate::error::{Error, Result};
use crate::slopes::{fmt_rational, Rational};

/// Orders `|G_0| ≥ |G_1| ≥ …` of the lower-numbering subgroups of a
/// totally ramified Galois group. Trailing trivial groups are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamFiltration {
    order: u64,
    orders: Vec<u64>,
}

impl RamFiltration {
    /// `orders[i] = |G_i|`; `orders[0]` must be the group order.
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        let order = *orders
            .first()
            .ok_or_else(|| Error::InconsistentFiltration("no subgroup orders given".into()))?;
        if order == 0 {
            return Err(Error::InconsistentFiltration("group order 0".into()));
        }
        for (i, w) in orders.windows(2).enumerate() {
            if w[1] > w[0] {
                return Err(Error::InconsistentFiltration(format!(
                    "|G_{}| = {} exceeds |G_{i}| = {}",
                    i + 1,
                    w[1],
                    w[0]
                )));
            }
        }
        for (i, &g) in orders.iter().enumerate() {
            if g == 0 || order % g != 0 {
                return Err(Error::InconsistentFiltration(format!(
                    "|G_{i}| = {g} does not divide {order}"
                )));
            }
        }
        let mut orders = orders;
        while orders.len() > 1 && orders.last() == Some(&1) {
            orders.pop();
        }
        if orders == [1] {
            orders.clear();
        }
        Ok(Self { order, orders })
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        Self {
            order: 1,
            orders: Vec::new(),
        }
    }

    /// Filtration from the values `i_g` of the nontrivial elements:
    /// `|G_i| = 1 + #{g ≠ 1 : i_g ≥ i + 1}`.
    pub fn from_ig(igs: &[u64], n: u64) -> Result<Self> {
        if n == 0 || igs.len() as u64 != n - 1 {
            return Err(Error::InconsistentFiltration(format!(
                "a group of order {n} needs {} values of i_g, got {}",
                n.saturating_sub(1),
                igs.len()
            )));
        }
        if igs.contains(&0) {
            return Err(Error::InconsistentFiltration("i_g must be positive".into()));
        }
        let top = igs.iter().copied().max().unwrap_or(0);
        let orders = (0..top.max(1))
            .map(|i| 1 + igs.iter().filter(|&&ig| ig > i).count() as u64)
            .collect();
        Self::new(orders)
    }

    pub fn group_order(&self) -> u64 {
        self.order
    }

    /// `|G_i|`; negative indices give the whole group.
    pub fn subgroup_order(&self, i: i64) -> u64 {
        if i < 0 {
            return self.order;
        }
        self.orders.get(i as usize).copied().unwrap_or(1)
    }

    /// Indices `i` with `G_i ≠ G_{i+1}`.
    pub fn lower_breaks(&self) -> Vec<i64> {
        (0..self.orders.len() as i64)
            .filter(|&i| self.subgroup_order(i) != self.subgroup_order(i + 1))
            .collect()
    }

    /// Images of the lower breaks under `φ`.
    pub fn upper_breaks(&self) -> Vec<Rational> {
        let phi = self.phi();
        self.lower_breaks()
            .into_iter()
            .map(|i| phi.eval(Rational::from_integer(i)))
            .collect()
    }

    /// The Herbrand function `φ(u) = ∫_0^u |G_t|/|G_0| dt`.
    pub fn phi(&self) -> PLFunction {
        let g0 = self.subgroup_order(0) as i64;
        let mut points = vec![(Rational::zero(), Rational::zero())];
        let mut y = Rational::zero();
        for i in 1..self.orders.len() as i64 {
            y += Rational::new(self.subgroup_order(i) as i64, g0);
            if self.subgroup_order(i) != self.subgroup_order(i + 1) {
                points.push((Rational::from_integer(i), y));
            }
        }
        PLFunction {
            points,
            initial_slope: Rational::one(),
            final_slope: Rational::new(1, g0),
        }
    }

    /// `1 + ∫_0^n dt / [G : G_t]`.
    pub fn chi(&self, n: u64) -> Rational {
        let g = self.order as i64;
        (1..=n as i64).fold(Rational::one(), |acc, i| {
            acc + Rational::new(self.subgroup_order(i) as i64, g)
        })
    }
}

/// Continuous piecewise-linear function through `points`, extended by
/// `initial_slope` to the left and `final_slope` to the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    points: Vec<(Rational, Rational)>,
    initial_slope: Rational,
    final_slope: Rational,
}

impl Serialize for PLFunction {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            breakpoints: Vec<[String; 2]>,
            initial_slope: String,
            final_slope: String,
        }
        Repr {
            breakpoints: self
                .points
                .iter()
                .map(|(x, y)| [fmt_rational(x), fmt_rational(y)])
                .collect(),
            initial_slope: fmt_rational(&self.initial_slope),
            final_slope: fmt_rational(&self.final_slope),
        }
        .serialize(ser)
    }
}

impl PLFunction {
    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn final_slope(&self) -> Rational {
        self.final_slope
    }

    pub fn eval(&self, x: Rational) -> Rational {
        let (x0, y0) = self.points[0];
        if x <= x0 {
            return y0 + self.initial_slope * (x - x0);
        }
        for w in self.points.windows(2) {
            let ((a, fa), (b, fb)) = (w[0], w[1]);
            if x <= b {
                return fa + (fb - fa) / (b - a) * (x - a);
            }
        }
        let (xl, yl) = *self.points.last().expect("nonempty");
        yl + self.final_slope * (x - xl)
    }

    /// Segment slopes left to right, including both end slopes.
    pub fn slopes(&self) -> Vec<Rational> {
        let mut s = vec![self.initial_slope];
        s.extend(self.points.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)));
        s.push(self.final_slope);
        s
    }
}

/// `i_g = v(g(ϖ) − ϖ)` for each automorphism image of the uniformizer.
/// Images equal to `ϖ` are the identity and contribute nothing.
pub fn eisenstein_ig<F: CoeffField>(images: &[LaurentGerm<F>], uniformizer: &LaurentGerm<F>) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for img in images {
        let d = img.sub(uniformizer)?;
        if d.is_zero() {
            continue;
        }
        let v = d.certified_valuation()?;
        if v < 1 {
            return Err(Error::InconsistentFiltration(format!(
                "automorphism moves the uniformizer by valuation {v}"
            )));
        }
        out.push(v as u64);
    }
    Ok(out)
}
