use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::slopes::Rational;

/// Parameters of a Kummer pushforward whose branch conductors
/// `p^a·b_i / r` approximate prescribed rationals from above.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxParams {
    pub a: u32,
    pub r: u64,
    pub b: Vec<u64>,
}

impl ApproxParams {
    /// The branch exponents `p_i = p^a·b_i`.
    pub fn p_exps(&self, p: u64) -> Vec<u64> {
        self.b.iter().map(|b| p.pow(self.a) * b).collect()
    }
}

/// Parameters with `c_i < p^a·b_i/r < c_i + ε` that also make the
/// Kummer model valid.
///
/// `a` is least with `p^a > 1 + 2/ε`, then `r` is the least integer prime
/// to `p` above `max(4p^a/ε, p)`, and each `b_i` is the least integer prime
/// to `p` strictly between `(r/p^a)(c_i + ε/2)` and `(r/p^a)(c_i + ε)`.
/// That interval is longer than 2, so such a `b_i` exists. The result is
/// re-checked against [`approx_conditions`] before it is returned.
pub fn approx_params(c: &[Rational], eps: Rational, p: u64) -> Result<ApproxParams> {
    if !is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    if eps <= Rational::zero() {
        return Err(Error::InvalidApproxRequest("epsilon must be positive".into()));
    }
    if c.is_empty() {
        return Err(Error::InvalidApproxRequest("no targets given".into()));
    }
    if let Some(ci) = c.iter().find(|ci| **ci < Rational::one()) {
        return Err(Error::InvalidApproxRequest(format!("target {ci} is below 1")));
    }
    let pi = p as i64;
    let mut a = 1u32;
    let mut pa = pi;
    let floor = Rational::one() + Rational::from_integer(2) / eps;
    while Rational::from_integer(pa) <= floor {
        a += 1;
        pa = pa
            .checked_mul(pi)
            .ok_or_else(|| Error::InvalidApproxRequest("epsilon too small".into()))?;
    }
    let lower = (Rational::from_integer(4 * pa) / eps).max(Rational::from_integer(pi));
    let mut r = lower.floor().to_integer() + 1;
    while r % pi == 0 {
        r += 1;
    }
    let scale = Rational::new(r, pa);
    let half = eps / 2;
    let mut b = Vec::with_capacity(c.len());
    for ci in c {
        let lo = scale * (ci + half);
        let hi = scale * (ci + eps);
        let mut x = lo.floor().to_integer() + 1;
        while x % pi == 0 {
            x += 1;
        }
        debug_assert!(Rational::from_integer(x) < hi);
        b.push(x as u64);
    }
    let params = ApproxParams { a, r: r as u64, b };
    if let Some((name, _)) = approx_conditions(&params, c, eps, p).into_iter().find(|(_, ok)| !ok) {
        return Err(Error::InvalidApproxRequest(format!("construction violated `{name}`")));
    }
    Ok(params)
}

/// The five requirements on approximation parameters, each with its
/// verdict.
pub fn approx_conditions(params: &ApproxParams, c: &[Rational], eps: Rational, p: u64) -> Vec<(&'static str, bool)> {
    let pa = p.pow(params.a);
    let b = &params.b;
    let right_len = b.len() == c.len() && !b.is_empty();
    let exps = params.p_exps(p);
    vec![
        ("p < p^a b_i", right_len && exps.iter().all(|&e| p < e)),
        ("(b_i, p) = 1", right_len && b.iter().all(|&bi| bi.gcd(&p) == 1)),
        ("(r, p) = 1", params.r.gcd(&p) == 1),
        (
            "r < min(p^a b_i - b_i)",
            right_len && b.iter().all(|&bi| params.r < pa * bi - bi),
        ),
        (
            "c_i < p^a b_i / r < c_i + eps",
            right_len
                && exps.iter().zip(c).all(|(&e, ci)| {
                    let x = Rational::new(e as i64, params.r as i64);
                    *ci < x && x < ci + eps
                }),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn worked_example() {
        let got = approx_params(&[q(2, 1)], q(1, 2), 2).unwrap();
        assert_eq!(got, ApproxParams { a: 3, r: 65, b: vec![19] });
        assert!(approx_conditions(&got, &[q(2, 1)], q(1, 2), 2).iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn wide_window() {
        let c = [q(1, 1)];
        let got = approx_params(&c, q(3, 1), 3).unwrap();
        assert!(approx_conditions(&got, &c, q(3, 1), 3).iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn bad_requests() {
        assert!(matches!(approx_params(&[q(2, 1)], q(0, 1), 2), Err(Error::InvalidApproxRequest(_))));
        assert!(matches!(approx_params(&[q(1, 2)], q(1, 1), 2), Err(Error::InvalidApproxRequest(_))));
        assert!(matches!(approx_params(&[q(2, 1)], q(1, 1), 4), Err(Error::NonPrimeCharacteristic(4))));
    }

    #[test]
    fn checker_catches_violations() {
        let bad = ApproxParams { a: 1, r: 4, b: vec![3] };
        let verdicts = approx_conditions(&bad, &[q(1, 1)], q(1, 1), 2);
        assert!(!verdicts[2].1);
    }
}
