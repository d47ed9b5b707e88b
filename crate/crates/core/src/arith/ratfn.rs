//! The rational function field `F_q(l)` in one parameter.

use super::{CoeffField, FiniteField, Fq};

/// A reduced fraction of polynomials in `l`, coefficients constant term
/// first. The denominator is monic and coprime to the numerator; zero is
/// `0 / 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFn {
    num: Vec<Fq>,
    den: Vec<Fq>,
}

impl RatFn {
    pub fn numerator(&self) -> &[Fq] {
        &self.num
    }

    pub fn denominator(&self) -> &[Fq] {
        &self.den
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct RationalFunctionField {
    base: FiniteField,
}

impl RationalFunctionField {
    pub fn new(base: FiniteField) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn constant(&self, c: Fq) -> RatFn {
        self.normalize(vec![c], vec![Fq::ONE])
    }

    /// `num / den`; `None` when the denominator is zero.
    pub fn fraction(&self, num: Vec<Fq>, den: Vec<Fq>) -> Option<RatFn> {
        let mut d = den;
        trim(&mut d);
        if d.is_empty() {
            return None;
        }
        Some(self.normalize(num, d))
    }

    /// Value at `l = x`, `None` if `x` is a pole.
    pub fn eval(&self, a: &RatFn, x: Fq) -> Option<Fq> {
        let d = horner(&self.base, &a.den, x);
        self.base.div(horner(&self.base, &a.num, x), d)
    }

    pub fn is_constant(&self, a: &RatFn) -> bool {
        a.num.len() <= 1 && a.den.len() == 1
    }

    fn normalize(&self, num: Vec<Fq>, den: Vec<Fq>) -> RatFn {
        let f = &self.base;
        let mut num = num;
        trim(&mut num);
        if num.is_empty() {
            return RatFn {
                num: Vec::new(),
                den: vec![Fq::ONE],
            };
        }
        let g = poly_gcd(f, &num, &den);
        let (mut n, _) = poly_divrem(f, &num, &g);
        let (mut d, _) = poly_divrem(f, &den, &g);
        let lead = *d.last().expect("nonzero denominator");
        let li = f.inv(lead).expect("nonzero leading coefficient");
        for c in n.iter_mut().chain(d.iter_mut()) {
            *c = f.mul(*c, li);
        }
        trim(&mut n);
        RatFn { num: n, den: d }
    }
}

fn trim(v: &mut Vec<Fq>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn horner(f: &FiniteField, p: &[Fq], x: Fq) -> Fq {
    p.iter().rev().fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

fn poly_add(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    let n = a.len().max(b.len());
    let mut out: Vec<Fq> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Fq::ZERO);
            let y = b.get(i).copied().unwrap_or(Fq::ZERO);
            f.add(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_mul(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fq::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

fn poly_divrem(f: &FiniteField, a: &[Fq], b: &[Fq]) -> (Vec<Fq>, Vec<Fq>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let li = f.inv(b[db]).expect("nonzero divisor");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Fq::ZERO; r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = f.mul(*r.last().unwrap(), li);
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = f.sub(r[k + i], f.mul(c, bi));
        }
        trim(&mut r);
        if r.len() <= k + db && r.len() > db {
            continue;
        }
    }
    trim(&mut q);
    (q, r)
}

fn poly_gcd(f: &FiniteField, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(f, &x, &y);
        x = y;
        y = r;
    }
    let li = f.inv(*x.last().expect("gcd of nonzero polynomials")).unwrap();
    x.iter().map(|&c| f.mul(c, li)).collect()
}

impl CoeffField for RationalFunctionField {
    type Elem = RatFn;

    fn characteristic(&self) -> u32 {
        self.base.characteristic()
    }

    fn zero(&self) -> RatFn {
        RatFn {
            num: Vec::new(),
            den: vec![Fq::ONE],
        }
    }

    fn one(&self) -> RatFn {
        RatFn {
            num: vec![Fq::ONE],
            den: vec![Fq::ONE],
        }
    }

    fn is_zero(&self, a: &RatFn) -> bool {
        a.num.is_empty()
    }

    fn add(&self, a: &RatFn, b: &RatFn) -> RatFn {
        let f = &self.base;
        if a.den == b.den {
            return self.normalize(poly_add(f, &a.num, &b.num), a.den.clone());
        }
        let n = poly_add(f, &poly_mul(f, &a.num, &b.den), &poly_mul(f, &b.num, &a.den));
        self.normalize(n, poly_mul(f, &a.den, &b.den))
    }

    fn neg(&self, a: &RatFn) -> RatFn {
        RatFn {
            num: a.num.iter().map(|&c| self.base.neg(c)).collect(),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RatFn, b: &RatFn) -> RatFn {
        let f = &self.base;
        self.normalize(poly_mul(f, &a.num, &b.num), poly_mul(f, &a.den, &b.den))
    }

    fn inv(&self, a: &RatFn) -> Option<RatFn> {
        if a.num.is_empty() {
            return None;
        }
        Some(self.normalize(a.den.clone(), a.num.clone()))
    }

    fn from_int(&self, n: i64) -> RatFn {
        self.constant(self.base.from_int(n))
    }

    fn display(&self, a: &RatFn) -> String {
        let show = |p: &[Fq]| -> String {
            if p.is_empty() {
                return "0".into();
            }
            let parts: Vec<String> = p
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, &c)| match i {
                    0 => self.base.display(c),
                    1 => format!("{}*l", self.base.display(c)),
                    _ => format!("{}*l^{}", self.base.display(c), i),
                })
                .collect();
            parts.join(" + ")
        };
        if a.den.len() == 1 {
            show(&a.num)
        } else {
            format!("({})/({})", show(&a.num), show(&a.den))
        }
    }

    fn generator(&self) -> RatFn {
        self.constant(self.base.generator())
    }

    fn parameter(&self) -> Option<RatFn> {
        Some(RatFn {
            num: vec![Fq::ZERO, Fq::ONE],
            den: vec![Fq::ONE],
        })
    }
}
