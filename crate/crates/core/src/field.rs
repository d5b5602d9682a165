//! The exact field abstraction shared by polynomials, matrices and homs.
//!
//! A [`Field`] value is a cheap descriptor (a unit struct for Q, an `Arc`
//! for number fields); elements are plain values and every operation goes
//! through the descriptor. All arithmetic is exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use num_rational::BigRational as Rational;

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_rational(&self, q: &Rational) -> Self::Elem;
    /// The distinguished generator: γ for Q[γ]/(f), t for Q(t), 1 for Q.
    fn generator(&self) -> Self::Elem;
    fn generator_name(&self) -> &str;
    /// False for Q, whose text syntax has no variable.
    fn has_generator(&self) -> bool {
        true
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Canonical text form, parseable by [`crate::parse::parse_elem`].
    fn format_elem(&self, a: &Self::Elem) -> String;
    /// A deterministic total order used for sorting factors and eigenvalues.
    fn cmp_elem(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    /// Whether `a` lies in the prime field Q.
    fn as_rational(&self, a: &Self::Elem) -> Option<Rational>;

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, &self.one()))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn scale_rational(&self, q: &Rational, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.from_rational(q), a)
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_rational(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn generator(&self) -> Rational {
        Rational::one()
    }
    fn generator_name(&self) -> &str {
        "g"
    }
    fn has_generator(&self) -> bool {
        false
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn format_elem(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn cmp_elem(&self, a: &Rational, b: &Rational) -> Ordering {
        a.cmp(b)
    }
    fn as_rational(&self, a: &Rational) -> Option<Rational> {
        Some(a.clone())
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// True when the string has no top-level `+`/`-` after an optional leading
/// sign, i.e. it can be used as a coefficient without parentheses.
pub(crate) fn is_atomic(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    let mut depth = 0i32;
    let bytes = body.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 => return false,
            _ => {}
        }
    }
    true
}
