//! Higher derivations of Q(t) and their Toeplitz homomorphisms.
//!
//! A higher derivation of order `m` is a list `d_0, ..., d_m` of Q-linear
//! maps with `d_l(xy) = sum_{i+j=l} d_i(x) d_j(y)`. Maps are kept as
//! expression trees over Hasse operators and substitutions so that products
//! stay exact; maps pulled out of a homomorphism without a closed form are
//! black boxes.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bimod::MatrixHom;
use crate::error::{Error, Result};
use crate::field::is_atomic;
use crate::funcfield::{random_ratfunc, t_pow, DiffOperator, FunctionField, RatFunc};
use crate::linalg::Matrix;
use crate::parse::{parse_field_header_at, tokenize, FieldSpec, Parser, Target};
use crate::Rational;

/// Black-box map `Q(t) -> Q(t)`.
pub type MapFn = Arc<dyn Fn(&RatFunc) -> Result<RatFunc> + Send + Sync>;

/// A Q-linear map on Q(t).
#[derive(Clone)]
pub enum MapExpr {
    Op(DiffOperator),
    /// `x -> x(g)`.
    Subst(RatFunc),
    /// `x -> c * m(x)`.
    Scaled(RatFunc, Box<MapExpr>),
    Sum(Vec<MapExpr>),
    /// `(f, g)` is `f ∘ g`.
    Compose(Box<MapExpr>, Box<MapExpr>),
    Opaque(MapFn),
}

impl fmt::Debug for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("t"))
    }
}

impl MapExpr {
    pub fn identity() -> Self {
        MapExpr::Op(DiffOperator::hasse(0))
    }

    pub fn zero() -> Self {
        MapExpr::Op(DiffOperator::zero())
    }

    pub fn hasse(j: usize) -> Self {
        MapExpr::Op(DiffOperator::hasse(j))
    }

    /// Substitution `t -> g`; the identity when `g = t`.
    pub fn subst(g: RatFunc) -> Self {
        if g == t_pow(1) {
            Self::identity()
        } else {
            MapExpr::Subst(g)
        }
    }

    pub fn opaque(f: impl Fn(&RatFunc) -> Result<RatFunc> + Send + Sync + 'static) -> Self {
        MapExpr::Opaque(Arc::new(f))
    }

    pub fn as_operator(&self) -> Option<&DiffOperator> {
        match self {
            MapExpr::Op(o) => Some(o),
            _ => None,
        }
    }

    /// Whether the map contains no black box.
    pub fn is_closed(&self) -> bool {
        match self {
            MapExpr::Op(_) | MapExpr::Subst(_) => true,
            MapExpr::Scaled(_, m) => m.is_closed(),
            MapExpr::Sum(ms) => ms.iter().all(|m| m.is_closed()),
            MapExpr::Compose(a, b) => a.is_closed() && b.is_closed(),
            MapExpr::Opaque(_) => false,
        }
    }

    fn is_zero_op(&self) -> bool {
        matches!(self, MapExpr::Op(o) if o.is_zero())
    }

    /// `c * D0` for an order-0 operator.
    fn as_multiplier(&self) -> Option<RatFunc> {
        match self {
            MapExpr::Op(o) if o.order().unwrap_or(0) == 0 => Some(o.coefficient(0)),
            _ => None,
        }
    }

    pub fn apply(&self, x: &RatFunc) -> Result<RatFunc> {
        Ok(match self {
            MapExpr::Op(o) => o.apply(x),
            MapExpr::Subst(g) => x.substitute(g),
            MapExpr::Scaled(c, m) => c.mul(&m.apply(x)?),
            MapExpr::Sum(ms) => {
                let mut acc = RatFunc::zero();
                for m in ms {
                    acc = acc.add(&m.apply(x)?);
                }
                acc
            }
            MapExpr::Compose(a, b) => a.apply(&b.apply(x)?)?,
            MapExpr::Opaque(f) => f(x)?,
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (a, b) if b.is_zero_op() => a.clone(),
            (a, b) if a.is_zero_op() => b.clone(),
            (MapExpr::Op(a), MapExpr::Op(b)) => MapExpr::Op(a.add(b)),
            (a, b) => {
                let mut parts = Vec::new();
                for m in [a, b] {
                    match m {
                        MapExpr::Sum(ms) => parts.extend(ms.iter().cloned()),
                        m => parts.push(m.clone()),
                    }
                }
                MapExpr::Sum(parts)
            }
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if *c == RatFunc::one() {
            return self.clone();
        }
        match self {
            MapExpr::Op(o) => MapExpr::Op(o.scale(c)),
            MapExpr::Scaled(c2, m) => MapExpr::Scaled(c.mul(c2), m.clone()),
            m => MapExpr::Scaled(c.clone(), Box::new(m.clone())),
        }
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        if self.is_zero_op() || o.is_zero_op() {
            return Self::zero();
        }
        if let (MapExpr::Op(a), MapExpr::Op(b)) = (self, o) {
            return MapExpr::Op(a.compose(b));
        }
        if let Some(c) = self.as_multiplier() {
            return o.scale(&c);
        }
        if o.as_multiplier() == Some(RatFunc::one()) {
            return self.clone();
        }
        MapExpr::Compose(Box::new(self.clone()), Box::new(o.clone()))
    }

    /// Printed in the hs-file syntax: `*` between maps is composition.
    pub fn format_with(&self, var: &str) -> String {
        match self {
            MapExpr::Op(o) => o.format_with(var),
            MapExpr::Subst(g) => format!("sub({})", g.format_with(var)),
            MapExpr::Scaled(c, m) => {
                let cs = c.format_with(var);
                let cs = if is_atomic(&cs) && !cs.starts_with('-') { cs } else { format!("({cs})") };
                format!("{cs}*{}", m.factor_string(var))
            }
            MapExpr::Sum(ms) => ms.iter().map(|m| m.format_with(var)).collect::<Vec<_>>().join(" + "),
            MapExpr::Compose(a, b) => format!("{}*{}", a.factor_string(var), b.factor_string(var)),
            MapExpr::Opaque(_) => "<opaque>".into(),
        }
    }

    fn factor_string(&self, var: &str) -> String {
        let s = self.format_with(var);
        let simple = match self {
            MapExpr::Subst(_) => true,
            MapExpr::Op(o) => o.terms().count() == 1 && is_atomic(&s) && !s.starts_with('-'),
            _ => false,
        };
        if simple {
            s
        } else {
            format!("({s})")
        }
    }
}

/// Sample set for the Leibniz check: all monomial pairs `t^a, t^b` with
/// `a + b <= max_degree`, plus `random_pairs` seeded random pairs.
#[derive(Clone, Copy, Debug)]
pub struct LeibnizSamples {
    pub max_degree: u32,
    pub random_pairs: usize,
    pub seed: u64,
}

impl Default for LeibnizSamples {
    fn default() -> Self {
        LeibnizSamples { max_degree: 30, random_pairs: 100, seed: 0x1eb2 }
    }
}

/// A higher derivation `(d_0, ..., d_m)` of Q(t).
#[derive(Clone, Debug)]
pub struct HigherDerivation {
    field: FunctionField,
    maps: Vec<MapExpr>,
}

impl HigherDerivation {
    /// Build and run the default Leibniz check.
    pub fn new(field: &FunctionField, maps: Vec<MapExpr>) -> Result<Self> {
        let d = Self::unchecked(field, maps)?;
        d.leibniz_check(&LeibnizSamples::default())?;
        Ok(d)
    }

    pub fn unchecked(field: &FunctionField, maps: Vec<MapExpr>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::DimensionMismatch("a higher derivation needs d_0".into()));
        }
        Ok(HigherDerivation { field: field.clone(), maps })
    }

    /// `(Id, D_1, ..., D_m)`, or any list of operators led by the identity.
    pub fn from_operators(field: &FunctionField, ops: Vec<DiffOperator>) -> Result<Self> {
        Self::new(field, ops.into_iter().map(MapExpr::Op).collect())
    }

    /// The Hasse derivation of order `m`.
    pub fn hasse(field: &FunctionField, m: usize) -> Self {
        HigherDerivation { field: field.clone(), maps: (0..=m).map(MapExpr::hasse).collect() }
    }

    pub fn field(&self) -> &FunctionField {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn maps(&self) -> &[MapExpr] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &MapExpr {
        &self.maps[i]
    }

    /// `d_0` is the identity.
    pub fn is_identity_led(&self) -> bool {
        self.maps[0].as_multiplier() == Some(RatFunc::one())
    }

    pub fn is_closed(&self) -> bool {
        self.maps.iter().all(MapExpr::is_closed)
    }

    pub fn eval(&self, i: usize, x: &RatFunc) -> Result<RatFunc> {
        self.maps[i].apply(x)
    }

    pub fn eval_all(&self, x: &RatFunc) -> Result<Vec<RatFunc>> {
        self.maps.iter().map(|m| m.apply(x)).collect()
    }

    /// Check `d_l(xy) = sum_{i+j=l} d_i(x) d_j(y)` on `samples`.
    pub fn leibniz_check(&self, samples: &LeibnizSamples) -> Result<()> {
        let mut cache: HashMap<u32, Vec<RatFunc>> = HashMap::new();
        for n in 0..=samples.max_degree {
            cache.insert(n, self.eval_all(&t_pow(n))?);
        }
        let var = self.field.name().to_string();
        for a in 0..=samples.max_degree {
            for b in a..=samples.max_degree - a {
                self.leibniz_at(&cache[&a], &cache[&b], &cache[&(a + b)], || {
                    format!("x = {var}^{a}, y = {var}^{b}")
                })?;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(samples.seed);
        for _ in 0..samples.random_pairs {
            let x = random_ratfunc(&mut rng, 3);
            let y = random_ratfunc(&mut rng, 3);
            let dx = self.eval_all(&x)?;
            let dy = self.eval_all(&y)?;
            let dxy = self.eval_all(&x.mul(&y))?;
            self.leibniz_at(&dx, &dy, &dxy, || {
                format!("x = {}, y = {}", x.format_with(&var), y.format_with(&var))
            })?;
        }
        Ok(())
    }

    fn leibniz_at(
        &self,
        dx: &[RatFunc],
        dy: &[RatFunc],
        dxy: &[RatFunc],
        witness: impl Fn() -> String,
    ) -> Result<()> {
        for l in 0..dxy.len() {
            let rhs = (0..=l).fold(RatFunc::zero(), |acc, i| acc.add(&dx[i].mul(&dy[l - i])));
            if rhs != dxy[l] {
                return Err(Error::LeibnizViolation { order: l, witness: witness() });
            }
        }
        Ok(())
    }

    /// Printed in the hs-file syntax, e.g.
    /// `hs over funcfield t: [D0; D1; t*D1 + 2*D2]`.
    pub fn to_file_string(&self) -> String {
        let var = self.field.name();
        let body: Vec<String> = self.maps.iter().map(|m| m.format_with(var)).collect();
        format!("hs over funcfield {var}: [{}]", body.join("; "))
    }
}

impl fmt::Display for HigherDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.field.name();
        let body: Vec<String> = self.maps.iter().map(|m| m.format_with(var)).collect();
        write!(f, "[{}]", body.join("; "))
    }
}

/// `delta_l = sum_{i+j=l} d_i ∘ e_j` for `l <= m + n` (with `d_i = 0` past
/// the order), re-verified against the Leibniz rule.
///
/// When both factors have positive order the zero extension is not itself a
/// higher derivation and the check fails at order `min(m, n) + 1`; use
/// [`hs_product_truncated`] for the group law of fixed order.
pub fn hs_product(d: &HigherDerivation, e: &HigherDerivation) -> Result<HigherDerivation> {
    let p = hs_product_unchecked(d, e)?;
    p.leibniz_check(&LeibnizSamples::default())?;
    Ok(p)
}

/// The sequence `delta_0, ..., delta_{m+n}` without the Leibniz check.
pub fn hs_product_unchecked(d: &HigherDerivation, e: &HigherDerivation) -> Result<HigherDerivation> {
    product_up_to(d, e, d.order() + e.order())
}

/// `delta_0, ..., delta_{min(m, n)}`, which is always a higher derivation.
pub fn hs_product_truncated(d: &HigherDerivation, e: &HigherDerivation) -> Result<HigherDerivation> {
    let p = product_up_to(d, e, d.order().min(e.order()))?;
    p.leibniz_check(&LeibnizSamples::default())?;
    Ok(p)
}

fn product_up_to(d: &HigherDerivation, e: &HigherDerivation, order: usize) -> Result<HigherDerivation> {
    if d.field != e.field {
        return Err(Error::FieldMismatch);
    }
    for (name, x) in [("left", d), ("right", e)] {
        if let Some(i) = x.maps.iter().position(|m| !m.is_closed()) {
            return Err(Error::NotComposable(format!("{name} map d_{i} has no closed form")));
        }
    }
    let mut maps = Vec::with_capacity(order + 1);
    for l in 0..=order {
        let mut acc = MapExpr::zero();
        for i in 0..=l.min(d.order()) {
            let j = l - i;
            if j > e.order() {
                continue;
            }
            acc = acc.add(&d.maps[i].compose(&e.maps[j]));
        }
        maps.push(acc);
    }
    HigherDerivation::unchecked(&d.field, maps)
}

/// The Toeplitz matrix with `(i, i+k)` entry `d_k(x)`.
pub fn toeplitz_matrix(d: &HigherDerivation, x: &RatFunc) -> Result<Matrix<FunctionField>> {
    let vals = d.eval_all(x)?;
    let n = vals.len();
    let mut m = Matrix::zeros(&d.field, n, n);
    for i in 0..n {
        for (k, v) in vals.iter().enumerate().take(n - i) {
            m.set(i, i + k, v.clone());
        }
    }
    Ok(m)
}

/// The homomorphism `x -> Toeplitz(d_0(x), ..., d_m(x))`, determined by the
/// image of `t` and validated as a homomorphism.
pub fn toeplitz_hom(d: &HigherDerivation) -> Result<MatrixHom<FunctionField>> {
    d.leibniz_check(&LeibnizSamples::default())?;
    let gen = toeplitz_matrix(d, &d.field.t())?;
    MatrixHom::checked(gen)
}

/// Certificate that `phi(d)` is similar to `phi(d')` for
/// `d' = (d_0, x d_1)`.
#[derive(Clone, Debug)]
pub struct ScaledSimilarity {
    pub conjugator: Matrix<FunctionField>,
    pub scaled: HigherDerivation,
}

/// For order-1 `d`, conjugation by `diag(x, 1)` turns `phi(d)` into
/// `phi(d_0, x d_1)`.
pub fn scaled_derivation_similar(d: &HigherDerivation, x: &RatFunc) -> Result<ScaledSimilarity> {
    if d.order() != 1 {
        return Err(Error::OrderMismatch { expected: 1, found: d.order() });
    }
    if x.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let f = &d.field;
    let p = Matrix::diagonal(f, vec![x.clone(), RatFunc::one()]);
    let scaled = HigherDerivation::unchecked(f, vec![d.maps[0].clone(), d.maps[1].scale(x)])?;
    let lhs = toeplitz_hom(d)?.conjugate(&p)?;
    let rhs = toeplitz_matrix(&scaled, &f.t())?;
    if *lhs.gen_image() != rhs {
        return Err(Error::NotAHomomorphism("scaled conjugation certificate".into()));
    }
    Ok(ScaledSimilarity { conjugator: p, scaled })
}

// ---------------------------------------------------------------------------
// hs files

#[derive(Clone)]
enum MapVal {
    Scalar(RatFunc),
    Map(MapExpr),
}

impl MapVal {
    fn into_map(self) -> MapExpr {
        match self {
            MapVal::Scalar(c) => MapExpr::Op(DiffOperator::term(c, 0)),
            MapVal::Map(m) => m,
        }
    }
}

struct MapTarget<'a> {
    field: &'a FunctionField,
}

impl Target for MapTarget<'_> {
    type V = MapVal;
    fn number(&self, q: Rational) -> MapVal {
        MapVal::Scalar(RatFunc::constant(q))
    }
    fn ident(&self, name: &str, offset: usize) -> Result<MapVal> {
        if name == self.field.name() {
            return Ok(MapVal::Scalar(self.field.t()));
        }
        if let Some(j) = name.strip_prefix('D').and_then(|d| d.parse::<usize>().ok()) {
            return Ok(MapVal::Map(MapExpr::hasse(j)));
        }
        Err(Error::parse(offset, format!("unknown symbol {name:?}")))
    }
    fn call(&self, name: &str, arg: MapVal, offset: usize) -> Result<MapVal> {
        match (name, arg) {
            ("sub", MapVal::Scalar(g)) => Ok(MapVal::Map(MapExpr::subst(g))),
            ("sub", MapVal::Map(_)) => Err(Error::parse(offset, "sub() takes a rational function")),
            _ => Err(Error::parse(offset, format!("unknown function {name:?}"))),
        }
    }
    fn add(&self, a: MapVal, b: MapVal, _: usize) -> Result<MapVal> {
        Ok(match (a, b) {
            (MapVal::Scalar(x), MapVal::Scalar(y)) => MapVal::Scalar(x.add(&y)),
            (a, b) => MapVal::Map(a.into_map().add(&b.into_map())),
        })
    }
    fn neg(&self, a: MapVal) -> MapVal {
        match a {
            MapVal::Scalar(x) => MapVal::Scalar(x.neg()),
            MapVal::Map(m) => MapVal::Map(m.scale(&RatFunc::from(-1))),
        }
    }
    fn mul(&self, a: MapVal, b: MapVal, _: usize) -> Result<MapVal> {
        Ok(match (a, b) {
            (MapVal::Scalar(x), MapVal::Scalar(y)) => MapVal::Scalar(x.mul(&y)),
            (MapVal::Scalar(c), MapVal::Map(m)) => MapVal::Map(m.scale(&c)),
            (a, b) => MapVal::Map(a.into_map().compose(&b.into_map())),
        })
    }
    fn div(&self, a: MapVal, b: MapVal, offset: usize) -> Result<MapVal> {
        let MapVal::Scalar(d) = b else {
            return Err(Error::parse(offset, "cannot divide by a map"));
        };
        let inv = d.inv().ok_or(Error::DivisionByZero)?;
        Ok(match a {
            MapVal::Scalar(x) => MapVal::Scalar(x.mul(&inv)),
            MapVal::Map(m) => MapVal::Map(m.scale(&inv)),
        })
    }
}

/// Parse `hs over funcfield t: [D0; D1; t*D1 + D2]`. Entries may use
/// `sub(g)` for the substitution `t -> g`; `*` between maps composes.
/// Parsing is syntactic only; call [`HigherDerivation::leibniz_check`] (or
/// [`toeplitz_hom`], which does) to validate.
pub fn parse_hs(text: &str) -> Result<HigherDerivation> {
    let lead = text.len() - text.trim_start().len();
    let body = &text[lead..];
    let Some(rest) = body.strip_prefix("hs") else {
        return Err(Error::parse(lead, "expected 'hs over <field>: [...]'"));
    };
    let rest_trim = rest.trim_start();
    let Some(after_over) = rest_trim.strip_prefix("over") else {
        return Err(Error::parse(lead + 2 + rest.len() - rest_trim.len(), "expected 'over'"));
    };
    let header_off = text.len() - after_over.len();
    let colon = after_over.find(':').ok_or_else(|| Error::parse(header_off, "expected ':' after the field"))?;
    let field = match parse_field_header_at(&after_over[..colon], header_off, usize::MAX)? {
        FieldSpec::Function(f) => f,
        FieldSpec::Number(_) => {
            return Err(Error::parse(header_off, "higher derivations are defined over funcfield only"))
        }
    };
    let list_off = header_off + colon + 1;
    let toks = tokenize(&text[list_off..], list_off)?;
    let mut p = Parser::new(&toks, text.len());
    let t = MapTarget { field: &field };
    p.expect('[')?;
    let mut maps = Vec::new();
    loop {
        maps.push(p.expr(&t)?.into_map());
        if p.eat(';') {
            continue;
        }
        p.expect(']')?;
        break;
    }
    p.expect_end()?;
    HigherDerivation::unchecked(&field, maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ff() -> FunctionField {
        FunctionField::default()
    }

    fn t() -> RatFunc {
        t_pow(1)
    }

    fn op(s: &str) -> DiffOperator {
        crate::parse::parse_operator(&ff(), s).unwrap()
    }

    fn mat(s: &str) -> Matrix<FunctionField> {
        crate::parse::parse_matrix(&ff(), s).unwrap()
    }

    #[test]
    fn products() {
        let d = HigherDerivation::from_operators(&ff(), vec![op("D0"), op("D1")]).unwrap();
        let dd = hs_product_unchecked(&d, &d).unwrap();
        assert_eq!(dd.order(), 2);
        assert_eq!(dd.to_string(), "[D0; 2*D1; 2*D2]");
        // D1 ∘ D1 = 2 D2: on t^2 both give 2.
        assert_eq!(op("D1*D1").apply(&t_pow(2)), RatFunc::from(2));
        // At x = y = t: delta_2(t^2) = 2 but delta_1(t)^2 = 4.
        assert_eq!(dd.eval(2, &t_pow(2)).unwrap(), RatFunc::from(2));
        assert_eq!(dd.eval(1, &t()).unwrap().mul(&dd.eval(1, &t()).unwrap()), RatFunc::from(4));
        assert!(matches!(hs_product(&d, &d), Err(Error::LeibnizViolation { order: 2, .. })));
        assert_eq!(hs_product_truncated(&d, &d).unwrap().to_string(), "[D0; 2*D1]");

        let id = HigherDerivation::hasse(&ff(), 0);
        let e = HigherDerivation::from_operators(&ff(), vec![op("D0"), op("t*D1 + D1")]).unwrap();
        assert_eq!(hs_product(&e, &id).unwrap().to_string(), e.to_string());
        assert_eq!(hs_product(&id, &e).unwrap().to_string(), e.to_string());

        // (Id, 0, D2) is not a higher derivation: d_2(t^2) = 1 but the
        // right-hand side is 2t * 0 ... = 2 * D2(t) * t = 0.
        let not_hs = vec![op("D0"), op("0"), op("D2")];
        assert!(matches!(
            HigherDerivation::from_operators(&ff(), not_hs.clone()),
            Err(Error::LeibnizViolation { order: 2, .. })
        ));
        let f = HigherDerivation::unchecked(&ff(), not_hs.into_iter().map(MapExpr::Op).collect()).unwrap();
        let p = hs_product_unchecked(&d, &f).unwrap();
        let expect = [op("D0"), op("D1"), op("D2"), op("D1*D2")];
        for (m, e) in p.maps().iter().zip(&expect) {
            assert_eq!(m.as_operator().unwrap(), e);
        }
        assert_eq!(p.order(), 3);

        // Zero extension breaks even a zero tail: (Id, 0) . (Id, D1, D2)
        // has delta_3 = 0 but D1(x) D2(y) + D2(x) D1(y) != 0.
        let trivial = HigherDerivation::from_operators(&ff(), vec![op("D0"), op("0")]).unwrap();
        let q = hs_product(&trivial, &HigherDerivation::hasse(&ff(), 2));
        assert!(matches!(q, Err(Error::LeibnizViolation { order: 3, .. })));
    }

    #[test]
    fn black_boxes_do_not_compose() {
        let d = HigherDerivation::unchecked(
            &ff(),
            vec![MapExpr::identity(), MapExpr::opaque(|x: &RatFunc| Ok(DiffOperator::hasse(1).apply(x)))],
        )
        .unwrap();
        d.leibniz_check(&LeibnizSamples::default()).unwrap();
        assert!(matches!(hs_product(&d, &d), Err(Error::NotComposable(_))));
    }

    #[test]
    fn leibniz_rejects_non_derivations() {
        let bad = HigherDerivation::unchecked(&ff(), vec![MapExpr::identity(), MapExpr::hasse(2)]).unwrap();
        match bad.leibniz_check(&LeibnizSamples::default()) {
            Err(Error::LeibnizViolation { order: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        // d_0 must be multiplicative.
        let scaled = HigherDerivation::unchecked(&ff(), vec![MapExpr::identity().scale(&RatFunc::from(2))]).unwrap();
        assert!(matches!(
            scaled.leibniz_check(&LeibnizSamples::default()),
            Err(Error::LeibnizViolation { order: 0, .. })
        ));
    }

    #[test]
    fn toeplitz_examples() {
        let d = HigherDerivation::hasse(&ff(), 1);
        let h = toeplitz_hom(&d).unwrap();
        assert_eq!(*h.gen_image(), mat("[[t, 1], [0, t]]"));
        assert_eq!(h.eval(&t_pow(2)).unwrap(), mat("[[t^2, 2*t], [0, t^2]]"));

        let d2 = HigherDerivation::hasse(&ff(), 2);
        let h2 = toeplitz_hom(&d2).unwrap();
        let c = h2.eval(&t_pow(3)).unwrap();
        assert_eq!(c, mat("[[t^3, 3*t^2, 3*t], [0, t^3, 3*t^2], [0, 0, t^3]]"));

        let dt = HigherDerivation::from_operators(&ff(), vec![op("D0"), op("t*D1")]).unwrap();
        assert_eq!(*toeplitz_hom(&dt).unwrap().gen_image(), mat("[[t, t], [0, t]]"));
    }

    #[test]
    fn toeplitz_hom_agrees_with_direct_evaluation() {
        let d = parse_hs("hs over funcfield t: [D0; t*D1; t^2*D2 + D1]").unwrap();
        let h = toeplitz_hom(&d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let x = random_ratfunc(&mut rng, 3);
            assert_eq!(h.eval(&x).unwrap(), toeplitz_matrix(&d, &x).unwrap());
        }
    }

    #[test]
    fn scaled_derivation_examples() {
        let d = HigherDerivation::hasse(&ff(), 1);
        let s = scaled_derivation_similar(&d, &t()).unwrap();
        assert_eq!(s.conjugator, mat("[[t, 0], [0, 1]]"));
        assert_eq!(s.scaled.to_string(), "[D0; t*D1]");
        let one = scaled_derivation_similar(&d, &RatFunc::one()).unwrap();
        assert!(one.conjugator.is_identity());
        assert_eq!(one.scaled.to_string(), "[D0; D1]");
        assert_eq!(scaled_derivation_similar(&d, &RatFunc::from(2)).unwrap().scaled.to_string(), "[D0; 2*D1]");
        assert!(matches!(
            scaled_derivation_similar(&HigherDerivation::hasse(&ff(), 2), &t()),
            Err(Error::OrderMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn substitution_led_derivations() {
        let d = parse_hs("hs over funcfield t: [sub(t^2); sub(t^2)*D1]").unwrap();
        assert!(!d.is_identity_led());
        assert_eq!(d.eval(1, &t_pow(3)).unwrap(), t_pow(4).scale(&Rational::from_integer(3.into())));
        let h = toeplitz_hom(&d).unwrap();
        assert_eq!(*h.gen_image(), mat("[[t^2, 1], [0, t^2]]"));
        // Substitution on either side composes through the expression tree.
        let shift = parse_hs("hs over funcfield t: [sub(t + 1)]").unwrap();
        let p = hs_product(&d, &shift).unwrap();
        let q = hs_product(&shift, &d).unwrap();
        assert_eq!(p.order(), 1);
        // d_1((t+1)^3) = 3 (t^2 + 1)^2 and sub(t+1)(3 t^4) = 3 (t + 1)^4
        let three = Rational::from_integer(3.into());
        let t2p1 = t_pow(2).add(&RatFunc::one());
        let tp1 = t().add(&RatFunc::one());
        assert_eq!(p.eval(1, &t_pow(3)).unwrap(), t2p1.mul(&t2p1).scale(&three));
        assert_eq!(q.eval(1, &t_pow(3)).unwrap(), tp1.mul(&tp1).mul(&tp1).mul(&tp1).scale(&three));
        let e = HigherDerivation::hasse(&ff(), 1);
        assert!(hs_product_truncated(&e, &d).is_ok());
    }

    #[test]
    fn hs_file_round_trip() {
        let src = "hs over funcfield t: [D0; D1; t*D1 + 2*D2]";
        let d = parse_hs(src).unwrap();
        assert_eq!(d.to_file_string(), src);
        // (Id, D1, t D1 + 2 D2) doubles the D1(x) D1(y) term; c^2 D2 is needed.
        assert!(matches!(d.leibniz_check(&LeibnizSamples::default()), Err(Error::LeibnizViolation { order: 2, .. })));
        let ok = parse_hs("hs over funcfield t: [D0; D1; t*D1 + D2]").unwrap();
        ok.leibniz_check(&LeibnizSamples::default()).unwrap();
        let s = parse_hs("hs over funcfield t: [sub(t + 1); (t + 1)*sub(t + 1)*D1]").unwrap();
        let again = parse_hs(&s.to_file_string()).unwrap();
        assert_eq!(again.to_file_string(), s.to_file_string());
        for k in 0..6 {
            let x = t_pow(k);
            assert_eq!(s.eval_all(&x).unwrap(), again.eval_all(&x).unwrap());
        }
    }

    #[test]
    fn hs_file_errors() {
        let e = parse_hs("hs over funcfield t: [D0; D1 +]").unwrap_err();
        assert!(e.is_parse());
        let e = parse_hs("hs over numberfield g: x^2 - 2: [D0]").unwrap_err();
        assert!(e.is_parse());
        let d = parse_hs("hs over funcfield t: [D0; D2]").unwrap();
        assert!(matches!(toeplitz_hom(&d), Err(Error::LeibnizViolation { .. })));
    }
}
