//! Dense univariate polynomials over any [`Field`].

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{is_atomic, Field, Rational, Rationals};

/// Dense polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

/// Polynomials over Q.
pub type RatPoly = Poly<Rationals>;

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, coeffs: Vec<F::Elem>) -> Self {
        let mut p = Poly { field: field.clone(), coeffs };
        p.normalize();
        p
    }

    pub fn zero(field: &F) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// The polynomial `X`.
    pub fn x(field: &F) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `c * X^n`.
    pub fn monomial(field: &F, c: F::Elem, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        Self::new(field, coeffs)
    }

    /// `X - c`.
    pub fn linear(field: &F, c: &F::Elem) -> Self {
        Self::new(field, vec![field.neg(c), field.one()])
    }

    pub fn from_ints(field: &F, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    fn normalize(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if self.field.is_zero(last) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| self.field.is_one(c))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => f.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(f, coeffs)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Poly { field: f.clone(), coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiply by `X^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(&self.field, coeffs)
    }

    /// Euclidean division: `(quotient, remainder)` with `deg rem < deg divisor`.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZeroPoly)?;
        let lc_inv = f.inv(&divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(&rem[k + dd], &lc_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, d));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Exact quotient; `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        match self.divmod(divisor) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_some()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.leading()).expect("nonzero");
        self.scale(&inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let inv = f.inv(&r0.leading()).expect("nonzero");
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(&f.from_int(i as i64), c))
            .collect();
        Self::new(f, coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `self(inner(X))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(f), |acc, c| acc.mul(inner).add(&Self::constant(f, c.clone())))
    }

    /// Square-free decomposition (Yun): monic `a_i` with
    /// `self = lc * prod a_i^i`, returned as `(a_i, i)` for nonconstant `a_i`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = Vec::new();
        if self.is_constant() {
            return Ok(out);
        }
        let p = self.monic();
        let dp = p.derivative();
        let mut a = p.gcd(&dp)?;
        let mut b = p.exact_div(&a).expect("gcd divides");
        let mut c = dp.exact_div(&a).expect("gcd divides");
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            a = b.gcd(&d)?;
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a).expect("gcd divides");
            c = d.exact_div(&a).expect("gcd divides");
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Result<Self> {
        let f = &self.field;
        Ok(self
            .squarefree_decomposition()?
            .into_iter()
            .fold(Self::one(f), |acc, (a, _)| acc.mul(&a)))
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).map_or(false, |g| g.is_constant())
    }

    /// Order by degree, then coefficients from the constant term upward.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
                let o = self.field.cmp_elem(a, b);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }

    /// Apply a coefficient map into another field.
    pub fn map_coeffs<G: Field>(&self, target: &G, map: impl Fn(&F::Elem) -> G::Elem) -> Poly<G> {
        Poly::new(target, self.coeffs.iter().map(map).collect())
    }

    /// Text form in the given variable, highest degree first, e.g. `x^2 + g*x + g^2`.
    pub fn format_with(&self, var: &str) -> String {
        let f = &self.field;
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.format_elem(c);
            let atomic = is_atomic(&cs);
            let (negative, mag) = if atomic && cs.starts_with('-') {
                (true, cs[1..].to_string())
            } else {
                (false, cs)
            };
            let mag = if atomic { mag } else { format!("({mag})") };
            let term = match i {
                0 => mag,
                _ => {
                    let pw = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                    if mag == "1" {
                        pw
                    } else {
                        format!("{mag}*{pw}")
                    }
                }
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
                out.push_str(&term);
            } else {
                out.push_str(if negative { " - " } else { " + " });
                out.push_str(&term);
            }
        }
        out
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.write_str(&self.format_with("x"))
    }
}

impl RatPoly {
    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        Poly::new(&Rationals, coeffs)
    }

    pub fn ints(coeffs: &[i64]) -> Self {
        Poly::from_ints(&Rationals, coeffs)
    }
}

/// Resultant with the convention `res(p, q) = lc(q)^deg(p) * prod p(β)` over
/// the roots β of `q`. This equals the Sylvester determinant of `(q, p)`,
/// so `res(X - a, X - b) = b - a`. Zero if either argument is zero.
pub fn resultant<F: Field>(p: &Poly<F>, q: &Poly<F>) -> F::Elem {
    sylvester_resultant(q, p)
}

/// Classical resultant `Res(a, b) = lc(a)^deg(b) * prod b(α)` over the roots
/// α of `a` (Sylvester determinant of `(a, b)`), by the Euclidean remainder
/// sequence.
pub(crate) fn sylvester_resultant<F: Field>(a: &Poly<F>, b: &Poly<F>) -> F::Elem {
    let f = a.field().clone();
    let (Some(_), Some(_)) = (a.degree(), b.degree()) else {
        return f.zero();
    };
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = f.one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        if db == 0 {
            // Res(a, c) = c^deg(a) for a constant c.
            return f.mul(&acc, &f.pow(&b.leading(), da as u64));
        }
        if da == 0 {
            return f.mul(&acc, &f.pow(&a.leading(), db as u64));
        }
        if da < db {
            // Res(a, b) = (-1)^(da*db) Res(b, a)
            if (da * db) % 2 == 1 {
                acc = f.neg(&acc);
            }
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // da >= db: Res(a, b) = (-1)^(da*db) * lc(b)^(da - dr) * Res(b, r)
        // with r = a mod b, using Res(b, r) = lc(b)^dr' ... expressed via
        // Res(a, b) = (-1)^(da db) Res(b, a) and Res(b, a) = lc(b)^(da - dr) Res(b, r).
        let r = a.rem(&b).expect("b nonzero");
        if r.is_zero() {
            return f.zero();
        }
        let dr = r.degree().unwrap();
        let mut factor = f.pow(&b.leading(), (da - dr) as u64);
        if (da * db) % 2 == 1 {
            factor = f.neg(&factor);
        }
        acc = f.mul(&acc, &factor);
        a = b;
        b = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::ints(c)
    }

    #[test]
    fn divmod_difference_of_squares() {
        let (q, r) = p(&[-1, 0, 1]).divmod(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn divmod_cube_minus_two() {
        let (q, r) = p(&[-2, 0, 0, 1]).divmod(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1, 1]));
        assert_eq!(r, p(&[-1]));
    }

    #[test]
    fn divmod_by_zero_errors() {
        assert_eq!(p(&[1, 1]).divmod(&RatPoly::zero(&Rationals)), Err(Error::DivisionByZeroPoly));
    }

    #[test]
    fn multiply_by_zero() {
        assert!(p(&[3, 2, 1]).mul(&RatPoly::zero(&Rationals)).is_zero());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, -2, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(p(&[-2, 0, 0, 1]).gcd(&p(&[1, 0, 1])).unwrap(), p(&[1]));
        let q = p(&[4, 0, 2]);
        assert_eq!(q.gcd(&q).unwrap(), q.monic());
        let z = RatPoly::zero(&Rationals);
        assert_eq!(z.gcd(&z), Err(Error::BothZero));
    }

    #[test]
    fn resultant_examples() {
        // res(x - a, x - b) = b - a under the documented convention.
        let a = p(&[-3, 1]);
        let b = p(&[-7, 1]);
        assert_eq!(resultant(&a, &b), rat(4));
        assert_eq!(resultant(&a, &a), rat(0));
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), rat(1));
        assert_eq!(resultant(&p(&[1, 2, 3]), &RatPoly::zero(&Rationals)), rat(0));
    }

    #[test]
    fn resultant_matches_sylvester_determinant() {
        let cases = [
            (vec![1, -3, 0, 2], vec![5, 1]),
            (vec![2, 0, 1], vec![-1, 4, 0, 0, 3]),
            (vec![7], vec![1, 1, 1]),
            (vec![-2, 0, 0, 1], vec![1, 0, 1]),
        ];
        for (a, b) in cases {
            let (pa, pb) = (p(&a), p(&b));
            assert_eq!(resultant(&pa, &pb), sylvester_det(&pb, &pa), "{pa} / {pb}");
        }
    }

    /// Determinant of the Sylvester matrix of `(a, b)` by cofactor expansion.
    fn sylvester_det(a: &RatPoly, b: &RatPoly) -> Rational {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        let size = m + n;
        if size == 0 {
            return rat(1);
        }
        let mut rows = Vec::new();
        for i in 0..n {
            let mut row = vec![rat(0); size];
            for j in 0..=m {
                row[i + j] = a.coeff(m - j);
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![rat(0); size];
            for j in 0..=n {
                row[i + j] = b.coeff(n - j);
            }
            rows.push(row);
        }
        cofactor_det(&rows)
    }

    fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut acc = rat(0);
        for j in 0..m.len() {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn formatting() {
        let q = RatPoly::from_rationals(vec![ratio(-3, 4), rat(1), ratio(1, 2)]);
        assert_eq!(q.to_string(), "1/2*x^2 + x - 3/4");
        assert_eq!(p(&[-2, 0, 0, 1]).to_string(), "x^3 - 2");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn squarefree_decomposition_of_powers() {
        // (x - 1)^2 (x + 2)^3 x
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]).pow(3)).mul(&p(&[0, 1]));
        let sq = f.squarefree_decomposition().unwrap();
        assert_eq!(sq, vec![(p(&[0, 1]), 1), (p(&[-1, 1]), 2), (p(&[2, 1]), 3)]);
    }
}
