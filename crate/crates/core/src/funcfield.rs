//! The rational function field Q(t), Hasse derivatives, and linear
//! differential operators `sum c_j(t) D_j` built from them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{is_atomic, Field, Rational, Rationals};
use crate::linalg::Matrix;
use crate::poly::RatPoly;

/// `Q(t)`; the descriptor only carries the variable name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionField {
    name: Arc<str>,
}

impl Default for FunctionField {
    fn default() -> Self {
        FunctionField::new("t")
    }
}

impl FunctionField {
    pub fn new(name: &str) -> Self {
        FunctionField { name: Arc::from(name) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn t(&self) -> RatFunc {
        RatFunc::from_poly(RatPoly::x(&Rationals))
    }

    pub fn poly(&self, coeffs: &[i64]) -> RatFunc {
        RatFunc::from_poly(RatPoly::ints(coeffs))
    }
}

/// `num / den` in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    num: RatPoly,
    den: RatPoly,
}

impl RatFunc {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = crate::factor::gcd_over_q(&num, &den)?;
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let lc = den.leading();
        let inv = lc.recip();
        Ok(RatFunc { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: RatPoly) -> Self {
        RatFunc { num: p, den: RatPoly::one(&Rationals) }
    }

    pub fn constant(q: Rational) -> Self {
        Self::from_poly(RatPoly::constant(&Rationals, q))
    }

    pub fn zero() -> Self {
        Self::from_poly(RatPoly::zero(&Rationals))
    }

    pub fn one() -> Self {
        Self::from_poly(RatPoly::one(&Rationals))
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    fn of(num: RatPoly, den: RatPoly) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::of(self.num.add(&o.num), self.den.clone());
        }
        Self::of(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::of(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::of(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(q), den: self.den.clone() }
    }

    /// `self(g)` for a rational function `g`, i.e. the substitution `t -> g`.
    pub fn substitute(&self, g: &RatFunc) -> RatFunc {
        let eval = |p: &RatPoly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(RatFunc::zero(), |acc, c| acc.mul(g).add(&RatFunc::constant(c.clone())))
        };
        let d = eval(&self.den);
        let n = eval(&self.num);
        n.mul(&d.inv().expect("substitution hits a pole"))
    }

    /// Evaluate at a rational point, if it is not a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn format_with(&self, var: &str) -> String {
        let n = self.num.format_with(var);
        if self.is_poly() {
            return n;
        }
        let n = if is_atomic(&n) && !n.contains('/') { n } else { format!("({n})") };
        let d = self.den.format_with(var);
        let d = if is_atomic(&d) && !d.contains('*') && !d.contains('/') { d } else { format!("({d})") };
        format!("{n}/{d}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.write_str(&self.format_with("t"))
    }
}

impl Field for FunctionField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::zero()
    }
    fn one(&self) -> RatFunc {
        RatFunc::one()
    }
    fn from_rational(&self, q: &Rational) -> RatFunc {
        RatFunc::constant(q.clone())
    }
    fn generator(&self) -> RatFunc {
        self.t()
    }
    fn generator_name(&self) -> &str {
        &self.name
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        a.inv()
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn format_elem(&self, a: &RatFunc) -> String {
        a.format_with(&self.name)
    }
    fn cmp_elem(&self, a: &RatFunc, b: &RatFunc) -> Ordering {
        a.den.cmp_canonical(&b.den).then_with(|| a.num.cmp_canonical(&b.num))
    }
    fn as_rational(&self, a: &RatFunc) -> Option<Rational> {
        (a.is_poly() && a.num.degree().unwrap_or(0) == 0).then(|| a.num.coeff(0))
    }
    fn scale_rational(&self, q: &Rational, a: &RatFunc) -> RatFunc {
        a.scale(q)
    }
}

// ---------------------------------------------------------------------------
// Hasse derivatives

fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    Rational::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

/// `D_j` of a polynomial: `D_j(t^n) = C(n, j) t^(n - j)`.
pub fn hasse_poly(j: usize, p: &RatPoly) -> RatPoly {
    let coeffs: Vec<Rational> = p
        .coeffs()
        .iter()
        .enumerate()
        .skip(j)
        .map(|(n, c)| c * binomial(n, j))
        .collect();
    RatPoly::from_rationals(coeffs)
}

/// `[D_0(x), ..., D_order(x)]`. For `x = p/q` the Leibniz rule applied to
/// `p = x q` gives `D_l(x) = (D_l(p) - sum_{i<l} D_i(x) D_{l-i}(q)) / q`.
pub fn hasse_all(order: usize, x: &RatFunc) -> Vec<RatFunc> {
    if x.is_poly() {
        let c = x.den.coeff(0).recip();
        return (0..=order).map(|j| RatFunc::from_poly(hasse_poly(j, &x.num).scale(&c))).collect();
    }
    let qinv = RatFunc::from_poly(x.den.clone()).inv().expect("nonzero");
    let dq: Vec<RatFunc> = (0..=order).map(|j| RatFunc::from_poly(hasse_poly(j, &x.den))).collect();
    let mut out: Vec<RatFunc> = Vec::with_capacity(order + 1);
    for l in 0..=order {
        let mut acc = RatFunc::from_poly(hasse_poly(l, &x.num));
        for (i, di) in out.iter().enumerate() {
            acc = acc.sub(&di.mul(&dq[l - i]));
        }
        out.push(acc.mul(&qinv));
    }
    out
}

/// The `j`-th Hasse derivative `D_j(x)`.
pub fn hasse_apply(j: usize, x: &RatFunc) -> RatFunc {
    hasse_all(j, x).pop().unwrap()
}

// ---------------------------------------------------------------------------
// Differential operators

/// `sum_j c_j(t) D_j`, at most one term per order, zero terms dropped.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DiffOperator {
    terms: BTreeMap<usize, RatFunc>,
}

impl DiffOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `D_j`.
    pub fn hasse(j: usize) -> Self {
        Self::term(RatFunc::one(), j)
    }

    /// `c * D_j`.
    pub fn term(c: RatFunc, j: usize) -> Self {
        let mut op = Self::zero();
        op.add_term(c, j);
        op
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (RatFunc, usize)>) -> Self {
        let mut op = Self::zero();
        for (c, j) in terms {
            op.add_term(c, j);
        }
        op
    }

    fn add_term(&mut self, c: RatFunc, j: usize) {
        let sum = match self.terms.remove(&j) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(j, sum);
        }
    }

    /// `(coefficient, order)` pairs in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (&RatFunc, usize)> {
        self.terms.iter().map(|(j, c)| (c, *j))
    }

    pub fn coefficient(&self, j: usize) -> RatFunc {
        self.terms.get(&j).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest Hasse order present.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn apply(&self, x: &RatFunc) -> RatFunc {
        let Some(top) = self.order() else {
            return RatFunc::zero();
        };
        let ds = hasse_all(top, x);
        self.terms.iter().fold(RatFunc::zero(), |acc, (j, c)| acc.add(&c.mul(&ds[*j])))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (c, j) in o.terms() {
            out.add_term(c.clone(), j);
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        Self::from_terms(self.terms().map(|(a, j)| (a.mul(c), j)))
    }

    /// `self ∘ o`. Uses `D_a (c D_b) = sum_{i+j=a} D_i(c) C(j+b, j) D_{j+b}`.
    pub fn compose(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (a_coef, a) in self.terms() {
            for (c, b) in o.terms() {
                let dc = hasse_all(a, c);
                for (i, dci) in dc.iter().enumerate() {
                    let j = a - i;
                    let k = binomial(j + b, j);
                    out.add_term(a_coef.mul(dci).scale(&k), j + b);
                }
            }
        }
        out
    }

    pub fn format_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (c, j) in self.terms() {
            let cs = c.format_with(var);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) if is_atomic(&cs) => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            let mag = if is_atomic(&mag) { mag } else { format!("({mag})") };
            let term = if mag == "1" { format!("D{j}") } else { format!("{mag}*D{j}") };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.write_str(&self.format_with("t"))
    }
}

/// Find `L = sum_{j <= order} c_j D_j` with `L(x) = y` on every sample, for
/// the smallest order up to `max_order` at which the samples are consistent.
/// The samples must determine the coefficients uniquely.
pub fn fit_operator(samples: &[(RatFunc, RatFunc)], max_order: usize) -> Result<DiffOperator> {
    let features: Vec<Vec<RatFunc>> = samples.iter().map(|(x, _)| hasse_all(max_order, x)).collect();
    let ys: Vec<RatFunc> = samples.iter().map(|(_, y)| y.clone()).collect();
    let cs = fit_features(&features, &ys, max_order)?;
    Ok(DiffOperator::from_terms(cs.into_iter().enumerate().map(|(j, c)| (c, j))))
}

/// Solve `y_s = sum_{j <= order} c_j features[s][j]` over Q(t) for the
/// smallest consistent `order <= max_order`; `c` is returned with length
/// `order + 1`.
pub fn fit_features(features: &[Vec<RatFunc>], ys: &[RatFunc], max_order: usize) -> Result<Vec<RatFunc>> {
    let ff = FunctionField::default();
    if ys.is_empty() {
        return Err(Error::NoFit { max_order, reason: "no samples".into() });
    }
    for order in 0..=max_order {
        let cols = order + 1;
        let mut aug = Matrix::zeros(&ff, ys.len(), cols + 1);
        for (r, (y, fs)) in ys.iter().zip(features).enumerate() {
            for c in 0..cols {
                aug.set(r, c, fs[c].clone());
            }
            aug.set(r, cols, y.clone());
        }
        let rr = aug.rref();
        if rr.pivots.last() == Some(&cols) {
            continue;
        }
        if rr.rank < cols {
            return Err(Error::NoFit {
                max_order,
                reason: format!("samples do not determine an operator of order {order}"),
            });
        }
        return Ok((0..cols).map(|c| rr.reduced.get(c, cols).clone()).collect());
    }
    Err(Error::NoFit { max_order, reason: "samples are inconsistent with every order".into() })
}

/// Standard sample inputs: `t^0, ..., t^(n-1)` followed by a few fixed
/// rational functions.
pub fn standard_samples(n: usize) -> Vec<RatFunc> {
    let mut out: Vec<RatFunc> = (0..n).map(|k| RatFunc::from_poly(RatPoly::x(&Rationals).pow(k as u32))).collect();
    let t = RatPoly::x(&Rationals);
    out.push(RatFunc::of(RatPoly::one(&Rationals), t.clone()));
    out.push(RatFunc::of(RatPoly::ints(&[1, 0, 1]), RatPoly::ints(&[-1, 1])));
    out
}

/// A random rational function with small integer coefficients.
pub fn random_ratfunc<R: Rng>(rng: &mut R, max_degree: usize) -> RatFunc {
    let mut poly = |monic_nonzero: bool| {
        let d = rng.gen_range(0..=max_degree);
        let mut cs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-4..=4)).collect();
        if monic_nonzero {
            *cs.last_mut().unwrap() = 1;
        }
        RatPoly::ints(&cs)
    };
    let num = poly(false);
    let den = poly(true);
    RatFunc::of(num, den)
}

impl From<RatPoly> for RatFunc {
    fn from(p: RatPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::constant(Rational::from_integer(BigInt::from(n)))
    }
}

/// `t^n`.
pub fn t_pow(n: u32) -> RatFunc {
    RatFunc::from_poly(RatPoly::x(&Rationals).pow(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t() -> RatFunc {
        t_pow(1)
    }

    fn frac(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(RatPoly::ints(n), RatPoly::ints(d)).unwrap()
    }

    #[test]
    fn normalization_and_format() {
        let a = frac(&[0, 2], &[0, 0, 4]);
        assert_eq!(a, frac(&[1], &[0, 2]));
        assert_eq!(a.den(), &RatPoly::ints(&[0, 1]));
        assert_eq!(a.to_string(), "(1/2)/t");
        assert_eq!(frac(&[1, 0, 1], &[-1, 1]).to_string(), "(t^2 + 1)/(t - 1)");
        assert_eq!(frac(&[0, 3], &[1, 1]).to_string(), "3*t/(t + 1)");
        assert_eq!(RatFunc::new(RatPoly::ints(&[1]), RatPoly::ints(&[])), Err(Error::DivisionByZero));
    }

    #[test]
    fn hasse_examples() {
        assert_eq!(hasse_apply(1, &t_pow(3)), RatFunc::from(RatPoly::ints(&[0, 0, 3])));
        assert_eq!(hasse_apply(2, &t_pow(3)), RatFunc::from(RatPoly::ints(&[0, 3])));
        assert_eq!(hasse_apply(1, &frac(&[1], &[0, 1])), frac(&[-1], &[0, 0, 1]));
        assert_eq!(hasse_apply(0, &frac(&[1], &[0, 1])), frac(&[1], &[0, 1]));
    }

    #[test]
    fn operator_examples() {
        let t_d1 = DiffOperator::term(t(), 1);
        assert_eq!(t_d1.apply(&t_pow(2)), RatFunc::from(RatPoly::ints(&[0, 0, 2])));
        let x = frac(&[3, 1], &[1, 0, 1]);
        assert_eq!(DiffOperator::hasse(0).apply(&x), x);
        let op = DiffOperator::hasse(1).add(&DiffOperator::hasse(2));
        assert_eq!(op.apply(&t_pow(2)), RatFunc::from(RatPoly::ints(&[1, 2])));
        assert_eq!(op.to_string(), "D1 + D2");
        let mixed = DiffOperator::from_terms([(t(), 1), (RatFunc::from(2), 2)]);
        assert_eq!(mixed.to_string(), "t*D1 + 2*D2");
    }

    #[test]
    fn composition_of_hasse_derivatives() {
        for i in 0..4 {
            for j in 0..4 {
                let lhs = DiffOperator::hasse(i).compose(&DiffOperator::hasse(j));
                let rhs = DiffOperator::term(RatFunc::constant(binomial(i + j, i)), i + j);
                assert_eq!(lhs, rhs);
            }
        }
        // (D1 ∘ t D1)(t^2) = D1(2 t^2) = 4 t
        let comp = DiffOperator::hasse(1).compose(&DiffOperator::term(t(), 1));
        assert_eq!(comp.apply(&t_pow(2)), RatFunc::from(RatPoly::ints(&[0, 4])));
    }

    #[test]
    fn composition_matches_on_monomials_up_to_30() {
        for i in 0..4 {
            for j in 0..4 {
                for n in 0..=30u32 {
                    let x = t_pow(n);
                    let lhs = hasse_apply(i, &hasse_apply(j, &x));
                    let rhs = hasse_apply(i + j, &x).scale(&binomial(i + j, i));
                    assert_eq!(lhs, rhs, "i={i} j={j} n={n}");
                }
            }
        }
    }

    #[test]
    fn leibniz_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let x = random_ratfunc(&mut rng, 3);
            let y = random_ratfunc(&mut rng, 3);
            let dx = hasse_all(3, &x);
            let dy = hasse_all(3, &y);
            let dxy = hasse_all(3, &x.mul(&y));
            for l in 0..=3 {
                let rhs = (0..=l).fold(RatFunc::zero(), |acc, i| acc.add(&dx[i].mul(&dy[l - i])));
                assert_eq!(dxy[l], rhs);
            }
        }
    }

    #[test]
    fn fit_operator_examples() {
        let d1 = DiffOperator::hasse(1);
        let samples: Vec<_> = [1, 2, 3].iter().map(|&n| (t_pow(n), d1.apply(&t_pow(n)))).collect();
        assert_eq!(fit_operator(&samples, 3).unwrap(), d1);

        let two_t_d1 = DiffOperator::term(RatFunc::from(RatPoly::ints(&[0, 2])), 1);
        let samples: Vec<_> = standard_samples(4).into_iter().map(|x| (x.clone(), two_t_d1.apply(&x))).collect();
        assert_eq!(fit_operator(&samples, 2).unwrap(), two_t_d1);

        let samples: Vec<_> = standard_samples(6).into_iter().map(|x| (x.clone(), x.mul(&x))).collect();
        assert!(matches!(fit_operator(&samples, 3), Err(Error::NoFit { .. })));
    }

    #[test]
    fn substitution() {
        let x = frac(&[1, 0, 1], &[-1, 1]);
        let g = t_pow(2);
        assert_eq!(x.substitute(&g), frac(&[1, 0, 0, 0, 1], &[-1, 0, 1]));
    }
}
