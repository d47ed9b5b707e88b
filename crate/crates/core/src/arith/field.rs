//! Finite fields `F_{p^d}` with table-driven multiplication.
//!
//! An element is stored as the base-`p` encoding of its coefficient vector
//! in `F_p[x]/(modulus)`: the element `a_0 + a_1 x + ... + a_{d-1} x^{d-1}`
//! is the integer `a_0 + a_1 p + ... + a_{d-1} p^{d-1}`. In particular the
//! prime subfield is encoded by `0..p` in every field of characteristic `p`.
//!
//! The modulus is the least irreducible monic polynomial of degree `d`,
//! ordering candidates by the encoding of their lower coefficients. The
//! multiplicative group is indexed by discrete logarithms relative to the
//! least primitive element `g`, which is also the element named `g` in germ
//! strings.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest field order for which log tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// An element of some [`FiniteField`], meaningful only together with it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fq(u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    /// The base-`p` encoding of the element.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldData {
    p: u32,
    degree: u32,
    order: u32,
    /// Monic modulus, low degree first, length `degree + 1`.
    modulus: Vec<u32>,
    generator: Fq,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_one: Fq,
}

/// The finite field `F_{p^d}`. Cheap to clone; instances of the same
/// `(p, d)` share their tables.
#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<FieldData>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.degree == other.inner.degree
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.degree == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(f, "F_{}^{}", self.inner.p, self.inner.degree)
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn field_cache() -> &'static Mutex<HashMap<(u32, u32), FiniteField>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), FiniteField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FiniteField {
    /// `F_{p^e}` for a prime `p` and `1 <= e <= 8`.
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if !(1..=8).contains(&e) {
            return Err(Error::UnsupportedDegree(e));
        }
        Self::with_degree(p as u32, e)
    }

    /// `F_{p^d}` for any degree whose order fits under [`MAX_FIELD_ORDER`].
    /// Used for the working fields of tame covers.
    pub fn with_degree(p: u32, degree: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeCharacteristic(p as u64));
        }
        if degree == 0 {
            return Err(Error::UnsupportedDegree(0));
        }
        let order = (p as u64).checked_pow(degree).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { p, degree });
        }
        let mut cache = field_cache().lock().expect("field cache poisoned");
        if let Some(f) = cache.get(&(p, degree)) {
            return Ok(f.clone());
        }
        let field = FiniteField {
            inner: Arc::new(build_field(p, degree, order as u32)),
        };
        cache.insert((p, degree), field.clone());
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    pub fn order(&self) -> u32 {
        self.inner.order
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn generator(&self) -> Fq {
        self.inner.generator
    }

    /// Element from its base-`p` encoding.
    pub fn element(&self, index: u32) -> Option<Fq> {
        (index < self.inner.order).then_some(Fq(index))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.inner.order).map(Fq)
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.inner.p as i64) as u32)
    }

    /// `g^j` for the distinguished generator `g`.
    pub fn gen_pow(&self, j: i64) -> Fq {
        let m = (self.inner.order - 1) as i64;
        Fq(self.inner.exp[j.rem_euclid(m) as usize])
    }

    /// Discrete logarithm to base `g`, `None` for zero.
    pub fn log(&self, a: Fq) -> Option<u32> {
        (!a.is_zero()).then(|| self.inner.log[a.0 as usize])
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let p = self.inner.p;
        if p == 2 {
            return Fq(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Fq(out)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Fq(out)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.is_zero() || b.is_zero() {
            return Fq::ZERO;
        }
        let d = &self.inner;
        let m = (d.order - 1) as u64;
        let s = (d.log[a.0 as usize] as u64 + d.log[b.0 as usize] as u64) % m;
        Fq(d.exp[s as usize])
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        let d = &self.inner;
        let m = d.order - 1;
        let l = d.log[a.0 as usize];
        Some(Fq(d.exp[((m - l) % m) as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^n`; negative powers of zero are reported as zero.
    pub fn pow(&self, a: Fq, n: i64) -> Fq {
        if n == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            return Fq::ZERO;
        }
        let d = &self.inner;
        let m = (d.order - 1) as i128;
        let s = (d.log[a.0 as usize] as i128 * n as i128).rem_euclid(m);
        Fq(d.exp[s as usize])
    }

    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.inner.p as i64)
    }

    /// The unique `y` with `y^p = a`, computed as `a^{p^{d-1}}`.
    pub fn pth_root(&self, a: Fq) -> Fq {
        let mut y = a;
        for _ in 1..self.inner.degree {
            y = self.frobenius(y);
        }
        y
    }

    /// Absolute trace to `F_p`, returned as an integer in `0..p`.
    pub fn trace(&self, a: Fq) -> u32 {
        let mut acc = Fq::ZERO;
        let mut x = a;
        for _ in 0..self.inner.degree {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        acc.0
    }

    /// A fixed element of absolute trace 1.
    pub fn trace_one(&self) -> Fq {
        self.inner.trace_one
    }

    /// Some `y` with `y^n = a`, choosing the one with the least logarithm.
    pub fn nth_root(&self, a: Fq, n: u64) -> Option<Fq> {
        if a.is_zero() {
            return Some(Fq::ZERO);
        }
        let m = (self.inner.order - 1) as u64;
        let k = self.inner.log[a.0 as usize] as u64;
        let g = num_integer::gcd(n, m);
        if !k.is_multiple_of(g) {
            return None;
        }
        let modulus = m / g;
        let j = if modulus == 1 {
            0
        } else {
            let inv = mod_inverse((n / g) % modulus, modulus)?;
            ((k / g) as u128 * inv as u128 % modulus as u128) as u64
        };
        Some(Fq(self.inner.exp[j as usize]))
    }

    /// All `x` with `x^n = 1`.
    pub fn roots_of_unity(&self, n: u64) -> Vec<Fq> {
        let m = (self.inner.order - 1) as u64;
        let g = num_integer::gcd(n, m);
        let step = m / g;
        (0..g).map(|i| Fq(self.inner.exp[(i * step) as usize])).collect()
    }

    /// `F_{p^{d k}}`.
    pub fn extension(&self, k: u32) -> Result<FiniteField> {
        Self::with_degree(self.inner.p, self.inner.degree * k)
    }

    /// The embedding of `self` into a field containing it.
    pub fn embedding_into(&self, target: &FiniteField) -> Result<FieldEmbedding> {
        let (p, d) = (self.inner.p, self.inner.degree);
        if target.inner.p != p || !target.inner.degree.is_multiple_of(d) {
            return Err(Error::FieldMismatch);
        }
        if d == 1 {
            return Ok(FieldEmbedding {
                target: target.clone(),
                basis: vec![Fq::ONE],
            });
        }
        let big = (target.inner.order - 1) as u64;
        let small = (self.inner.order - 1) as u64;
        let step = big / small;
        for j in 1..small {
            let h = target.gen_pow((j * step) as i64);
            let mut acc = Fq::ZERO;
            let mut hp = Fq::ONE;
            for &c in &self.inner.modulus {
                acc = target.add(acc, target.mul(target.from_int(c as i64), hp));
                hp = target.mul(hp, h);
            }
            if acc.is_zero() {
                let mut basis = Vec::with_capacity(d as usize);
                let mut hp = Fq::ONE;
                for _ in 0..d {
                    basis.push(hp);
                    hp = target.mul(hp, h);
                }
                return Ok(FieldEmbedding {
                    target: target.clone(),
                    basis,
                });
            }
        }
        Err(Error::FieldMismatch)
    }

    /// Human-readable element: an integer in prime fields, `g^j` otherwise.
    pub fn display(&self, a: Fq) -> String {
        if self.inner.degree == 1 {
            a.0.to_string()
        } else if a.is_zero() {
            "0".to_string()
        } else if a.0 < self.inner.p {
            a.0.to_string()
        } else {
            format!("g^{}", self.inner.log[a.0 as usize])
        }
    }
}

/// A field embedding `F_{p^d} -> F_{p^{dk}}` fixing the prime field.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    target: FiniteField,
    basis: Vec<Fq>,
}

impl FieldEmbedding {
    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    pub fn map(&self, a: Fq) -> Fq {
        let p = self.target.characteristic();
        let mut x = a.0;
        let mut acc = Fq::ZERO;
        for &b in &self.basis {
            let digit = x % p;
            x /= p;
            if digit != 0 {
                acc = self
                    .target
                    .add(acc, self.target.mul(self.target.from_int(digit as i64), b));
            }
        }
        acc
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

// Dense polynomials over F_p, constant term first.

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inverse(m[dm] as u64, p as u64).expect("nonzero leading coefficient") as u32;
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let t = (c as u64 * mi as u64 % p as u64) as u32;
                r[k + i] = (r[k + i] + p - t) % p;
            }
        }
        trim(&mut r);
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_pow_mod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = poly_rem(a, m, p);
    let mut acc = vec![1u32];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &base, m, p);
        }
        base = poly_mul_mod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn digits(mut x: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((x % p as u64) as u32);
        x /= p as u64;
    }
    out
}

fn encode(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// Irreducibility by trial division against every monic polynomial of
/// degree at most half the degree.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d <= 1 {
        return true;
    }
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for low in 0..count {
            let mut g = digits(low, p, k);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn build_field(p: u32, degree: u32, order: u32) -> FieldData {
    let d = degree as usize;
    let modulus = if d == 1 {
        vec![0, 1]
    } else {
        (0..(order as u64))
            .map(|low| {
                let mut f = digits(low, p, d);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial exists in every degree")
    };

    let group = (order - 1) as u64;
    let factors = prime_factors(group);
    let generator = (1..order)
        .find(|&cand| {
            let g = digits(cand as u64, p, d);
            let one = poly_pow_mod(&g, group, &modulus, p) == vec![1];
            one && factors
                .iter()
                .all(|&l| poly_pow_mod(&g, group / l, &modulus, p) != vec![1])
        })
        .expect("the multiplicative group is cyclic");

    let mut exp = vec![0u32; group as usize];
    let mut log = vec![0u32; order as usize];
    let g = digits(generator as u64, p, d);
    let mut cur = vec![1u32];
    for (i, slot) in exp.iter_mut().enumerate() {
        let enc = encode(&cur, p);
        *slot = enc;
        log[enc as usize] = i as u32;
        cur = poly_mul_mod(&cur, &g, &modulus, p);
    }

    let mut field = FiniteField {
        inner: Arc::new(FieldData {
            p,
            degree,
            order,
            modulus,
            generator: Fq(generator),
            exp,
            log,
            trace_one: Fq::ZERO,
        }),
    };
    let trace_one = field
        .elements()
        .find(|&a| field.trace(a) == 1)
        .expect("the trace is surjective");
    Arc::get_mut(&mut field.inner)
        .expect("freshly built field is unshared")
        .trace_one = trace_one;
    Arc::try_unwrap(field.inner).ok().expect("freshly built field is unshared")
}
