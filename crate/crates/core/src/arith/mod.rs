//! Exact coefficient arithmetic: finite fields, one-parameter rational
//! function fields over them, and truncated Laurent germs.

mod field;
mod germ;
mod parse;
mod ratfn;

use std::fmt::Debug;

pub use field::{FieldEmbedding, FiniteField, Fq, MAX_FIELD_ORDER};
pub use germ::{LaurentGerm, Monomial, EXACT};
pub use parse::{parse_germ, parse_scalar};
pub use ratfn::{RatFn, RationalFunctionField};

pub(crate) use field::is_prime;

/// A coefficient field for [`LaurentGerm`]s.
pub trait CoeffField: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn characteristic(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: i64) -> Self::Elem;
    fn display(&self, a: &Self::Elem) -> String;

    /// The element named `g` in germ strings.
    fn generator(&self) -> Self::Elem;

    /// The transcendental parameter `l`, if the field has one.
    fn parameter(&self) -> Option<Self::Elem> {
        None
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, n: i64) -> Option<Self::Elem> {
        let mut base = if n < 0 { self.inv(a)? } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Some(acc)
    }
}

impl CoeffField for FiniteField {
    type Elem = Fq;

    fn characteristic(&self) -> u32 {
        FiniteField::characteristic(self)
    }
    fn zero(&self) -> Fq {
        Fq::ZERO
    }
    fn one(&self) -> Fq {
        Fq::ONE
    }
    fn is_zero(&self, a: &Fq) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        FiniteField::add(self, *a, *b)
    }
    fn neg(&self, a: &Fq) -> Fq {
        FiniteField::neg(self, *a)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        FiniteField::mul(self, *a, *b)
    }
    fn inv(&self, a: &Fq) -> Option<Fq> {
        FiniteField::inv(self, *a)
    }
    fn from_int(&self, n: i64) -> Fq {
        FiniteField::from_int(self, n)
    }
    fn display(&self, a: &Fq) -> String {
        FiniteField::display(self, *a)
    }
    fn generator(&self) -> Fq {
        FiniteField::generator(self)
    }
    fn pow(&self, a: &Fq, n: i64) -> Option<Fq> {
        if n < 0 && a.is_zero() {
            return None;
        }
        Some(FiniteField::pow(self, *a, n))
    }
}
