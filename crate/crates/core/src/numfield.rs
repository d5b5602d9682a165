//! Number fields `Q[g]/(f)`, factoring over them, and relative extensions
//! `K[X]/(h)` with structure constants.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::factor::factor_over_q;
use crate::field::{rat, Field, Rational, Rationals};
use crate::linalg::{columns_to_matrix, Matrix};
use crate::poly::{sylvester_resultant, Poly, RatPoly};

/// Default cap on `deg f`.
pub const MAX_FIELD_DEGREE: usize = 8;
/// Default cap on the degree of the norm polynomial built during factoring.
pub const MAX_NORM_DEGREE: usize = 64;

#[derive(Debug)]
struct Inner {
    modulus: RatPoly,
    name: String,
    degree: usize,
}

/// `Q[g]/(f)` for a monic irreducible `f`.
#[derive(Clone)]
pub struct NumberField(Arc<Inner>);

impl fmt::Debug for NumberField {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmt, "NumberField({}: {})", self.0.name, self.0.modulus)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.modulus == other.0.modulus && self.0.name == other.0.name)
    }
}

/// An element of a number field: coordinates on `1, g, ..., g^(d-1)`.
#[derive(Clone)]
pub struct NFElement {
    owner: NumberField,
    coords: Vec<Rational>,
}

impl fmt::Debug for NFElement {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.write_str(&self.owner.format_elem(self))
    }
}

impl PartialEq for NFElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.owner == other.owner
    }
}

impl NFElement {
    pub fn owner(&self) -> &NumberField {
        &self.owner
    }
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
    /// The element as a polynomial in the generator.
    pub fn to_poly(&self) -> RatPoly {
        RatPoly::from_rationals(self.coords.clone())
    }
}

impl fmt::Display for NFElement {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.write_str(&self.owner.format_elem(self))
    }
}

/// Binary operations for [`nf_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic between elements that carry their own field.
pub fn nf_arith(a: &NFElement, b: &NFElement, op: NfOp) -> Result<NFElement> {
    if a.owner != b.owner {
        return Err(Error::FieldMismatch);
    }
    let k = &a.owner;
    Ok(match op {
        NfOp::Add => k.add(a, b),
        NfOp::Sub => k.sub(a, b),
        NfOp::Mul => k.mul(a, b),
        NfOp::Div => k.div(a, b).ok_or(Error::DivisionByZero)?,
    })
}

impl NumberField {
    /// Build `Q[name]/(f)`, checking that `f` is monic and irreducible.
    pub fn new(f: &RatPoly, name: &str) -> Result<Self> {
        Self::with_cap(f, name, MAX_FIELD_DEGREE)
    }

    pub fn with_cap(f: &RatPoly, name: &str, max_degree: usize) -> Result<Self> {
        let Some(d) = f.degree() else {
            return Err(Error::NotIrreducible(f.to_string()));
        };
        if !f.is_monic() {
            return Err(Error::NotMonic(f.to_string()));
        }
        if d > max_degree {
            return Err(Error::DegreeCap(format!("field degree {d} exceeds {max_degree}")));
        }
        let factors = factor_over_q(f)?;
        if d == 0 || factors.len() != 1 || factors[0].1 != 1 {
            return Err(Error::NotIrreducible(f.to_string()));
        }
        Ok(NumberField(Arc::new(Inner { modulus: f.clone(), name: name.to_string(), degree: d })))
    }

    pub fn modulus(&self) -> &RatPoly {
        &self.0.modulus
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Element from coordinates (padded or checked to length `d`).
    pub fn elem(&self, mut coords: Vec<Rational>) -> NFElement {
        assert!(coords.len() <= self.degree(), "too many coordinates");
        coords.resize(self.degree(), Rational::zero());
        NFElement { owner: self.clone(), coords }
    }

    pub fn elem_ints(&self, coords: &[i64]) -> NFElement {
        self.elem(coords.iter().map(|&c| rat(c)).collect())
    }

    /// Reduce a polynomial in the generator modulo `f`.
    pub fn from_poly(&self, p: &RatPoly) -> NFElement {
        let r = p.rem(self.modulus()).expect("modulus nonzero");
        self.elem(r.into_coeffs())
    }

    /// Embed a polynomial over Q into `K[X]`.
    pub fn lift_poly(&self, p: &RatPoly) -> Poly<NumberField> {
        p.map_coeffs(self, |c| self.from_rational(c))
    }

    /// `Norm_{K/Q}(a)`, the determinant of multiplication by `a`.
    pub fn norm(&self, a: &NFElement) -> Rational {
        norm_of_poly(self.modulus(), &a.to_poly())
    }

    /// `f` as a polynomial over `K`; its factors over `K` are the orbits.
    pub fn modulus_over_self(&self) -> Poly<NumberField> {
        self.lift_poly(self.modulus())
    }

    /// `g` itself, for convenience.
    pub fn gen(&self) -> NFElement {
        self.generator()
    }
}

/// `Norm(a(g))` for `a` a polynomial representative, `f` monic.
fn norm_of_poly(f: &RatPoly, a: &RatPoly) -> Rational {
    let d = f.degree().unwrap_or(0) as u64;
    match a.degree() {
        None => Rational::zero(),
        Some(0) => Rationals.pow(&a.coeff(0), d),
        Some(_) => sylvester_resultant(f, a),
    }
}

impl Field for NumberField {
    type Elem = NFElement;

    fn zero(&self) -> NFElement {
        self.elem(Vec::new())
    }
    fn one(&self) -> NFElement {
        self.elem(vec![Rational::one()])
    }
    fn from_rational(&self, q: &Rational) -> NFElement {
        self.elem(vec![q.clone()])
    }
    fn generator(&self) -> NFElement {
        self.from_poly(&RatPoly::x(&Rationals))
    }
    fn generator_name(&self) -> &str {
        &self.0.name
    }
    fn add(&self, a: &NFElement, b: &NFElement) -> NFElement {
        debug_assert!(a.owner == *self && b.owner == *self);
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        NFElement { owner: self.clone(), coords }
    }
    fn sub(&self, a: &NFElement, b: &NFElement) -> NFElement {
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect();
        NFElement { owner: self.clone(), coords }
    }
    fn mul(&self, a: &NFElement, b: &NFElement) -> NFElement {
        if a.coords.iter().all(Zero::is_zero) || b.coords.iter().all(Zero::is_zero) {
            return self.zero();
        }
        self.from_poly(&a.to_poly().mul(&b.to_poly()))
    }
    fn neg(&self, a: &NFElement) -> NFElement {
        NFElement { owner: self.clone(), coords: a.coords.iter().map(|x| -x).collect() }
    }
    fn inv(&self, a: &NFElement) -> Option<NFElement> {
        let p = a.to_poly();
        if p.is_zero() {
            return None;
        }
        // s * p + t * f = 1
        let (g, s, _) = p.ext_gcd(self.modulus()).ok()?;
        debug_assert!(g.is_constant());
        Some(self.from_poly(&s))
    }
    fn is_zero(&self, a: &NFElement) -> bool {
        a.coords.iter().all(Zero::is_zero)
    }
    fn format_elem(&self, a: &NFElement) -> String {
        a.to_poly().format_with(&self.0.name)
    }
    fn cmp_elem(&self, a: &NFElement, b: &NFElement) -> Ordering {
        a.coords.cmp(&b.coords)
    }
    fn as_rational(&self, a: &NFElement) -> Option<Rational> {
        a.coords[1..].iter().all(Zero::is_zero).then(|| a.coords[0].clone())
    }
    fn from_int(&self, n: i64) -> NFElement {
        self.elem(vec![rat(n)])
    }
    fn scale_rational(&self, q: &Rational, a: &NFElement) -> NFElement {
        NFElement { owner: self.clone(), coords: a.coords.iter().map(|x| x * q).collect() }
    }
}

// ---------------------------------------------------------------------------
// Factoring over K

/// Limits applied while factoring over a number field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorCaps {
    pub max_poly_degree: usize,
    pub max_norm_degree: usize,
}

impl Default for FactorCaps {
    fn default() -> Self {
        FactorCaps { max_poly_degree: MAX_FIELD_DEGREE, max_norm_degree: MAX_NORM_DEGREE }
    }
}

type CachedFactors = Vec<(Vec<Vec<String>>, usize)>;

/// Memo cache for [`factor_over_k_cached`]. Entries are keyed by a digest of
/// the field and the input; with a directory set, entries are also written
/// as JSON files so later processes can reuse them.
#[derive(Debug, Default)]
pub struct FactorCache {
    memory: Mutex<HashMap<String, CachedFactors>>,
    dir: Option<PathBuf>,
}

impl FactorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        FactorCache { memory: Mutex::default(), dir: Some(dir.into()) }
    }

    /// Process-wide in-memory cache.
    pub fn global() -> &'static FactorCache {
        static GLOBAL: OnceLock<FactorCache> = OnceLock::new();
        GLOBAL.get_or_init(FactorCache::new)
    }

    pub fn len(&self) -> usize {
        self.memory.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn key(k: &NumberField, p: &Poly<NumberField>) -> String {
        let mut h = Sha256::new();
        h.update(k.modulus().to_string().as_bytes());
        h.update(b"|");
        for c in p.coeffs() {
            for q in c.coords() {
                h.update(q.to_string().as_bytes());
                h.update(b",");
            }
            h.update(b";");
        }
        hex::encode(h.finalize())
    }

    fn get(&self, key: &str) -> Option<CachedFactors> {
        if let Some(v) = self.memory.lock().expect("cache lock").get(key) {
            return Some(v.clone());
        }
        let path = self.dir.as_ref()?.join(format!("{key}.json"));
        let text = std::fs::read_to_string(path).ok()?;
        let v: CachedFactors = serde_json::from_str(&text).ok()?;
        self.memory.lock().expect("cache lock").insert(key.to_string(), v.clone());
        Some(v)
    }

    fn put(&self, key: &str, v: CachedFactors) {
        if let Some(dir) = &self.dir {
            // Best effort; a failed write only costs a recomputation.
            if std::fs::create_dir_all(dir).is_ok() {
                let path = dir.join(format!("{key}.json"));
                let tmp = dir.join(format!("{key}.json.{}", std::process::id()));
                if let Ok(text) = serde_json::to_string(&v) {
                    if std::fs::write(&tmp, text).is_ok() {
                        let _ = std::fs::rename(&tmp, &path);
                    }
                }
            }
        }
        self.memory.lock().expect("cache lock").entry(key.to_string()).or_insert(v);
    }
}

fn encode(factors: &[(Poly<NumberField>, usize)]) -> CachedFactors {
    factors
        .iter()
        .map(|(p, m)| {
            let coeffs = p
                .coeffs()
                .iter()
                .map(|c| c.coords().iter().map(|q| q.to_string()).collect())
                .collect();
            (coeffs, *m)
        })
        .collect()
}

fn decode(k: &NumberField, cached: &CachedFactors) -> Option<Vec<(Poly<NumberField>, usize)>> {
    cached
        .iter()
        .map(|(coeffs, m)| {
            let cs: Option<Vec<NFElement>> = coeffs
                .iter()
                .map(|c| {
                    let qs: Option<Vec<Rational>> = c.iter().map(|s| s.parse().ok()).collect();
                    qs.filter(|v| v.len() == k.degree()).map(|v| k.elem(v))
                })
                .collect();
            cs.map(|cs| (Poly::new(k, cs), *m))
        })
        .collect()
}

/// Factor `p` over `K` with default caps: monic irreducible factors with
/// multiplicities, sorted by degree then coefficients.
pub fn factor_over_k(p: &Poly<NumberField>) -> Result<Vec<(Poly<NumberField>, usize)>> {
    factor_over_k_with(p, FactorCaps::default())
}

/// As [`factor_over_k`], consulting `cache` first.
pub fn factor_over_k_cached(
    p: &Poly<NumberField>,
    caps: FactorCaps,
    cache: &FactorCache,
) -> Result<Vec<(Poly<NumberField>, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = p.field();
    let key = FactorCache::key(k, p);
    if let Some(hit) = cache.get(&key).and_then(|c| decode(k, &c)) {
        return Ok(hit);
    }
    let out = factor_over_k_with(p, caps)?;
    cache.put(&key, encode(&out));
    Ok(out)
}

/// Trager's method: square-free decomposition over `K`, then for each
/// square-free part shift `X -> X - s g` with the first `s = 0, 1, ...`
/// making the norm square-free, factor the norm over Q and take gcds.
pub fn factor_over_k_with(p: &Poly<NumberField>, caps: FactorCaps) -> Result<Vec<(Poly<NumberField>, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = p.field().clone();
    let deg = p.degree().unwrap();
    if deg > caps.max_poly_degree {
        return Err(Error::DegreeCap(format!("degree {deg} exceeds {}", caps.max_poly_degree)));
    }
    let mut out = Vec::new();
    for (a, mult) in p.squarefree_decomposition()? {
        for g in trager(&k, &a, caps)? {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// Whether `p` (nonconstant) is irreducible over its field.
pub fn is_irreducible_over_k(p: &Poly<NumberField>) -> Result<bool> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    let f = factor_over_k(p)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

/// Factor a monic square-free `a` over `k`.
fn trager(k: &NumberField, a: &Poly<NumberField>, caps: FactorCaps) -> Result<Vec<Poly<NumberField>>> {
    let m = a.degree().unwrap();
    if m == 1 {
        return Ok(vec![a.monic()]);
    }
    let norm_deg = m * k.degree();
    if norm_deg > caps.max_norm_degree {
        return Err(Error::DegreeCap(format!("norm degree {norm_deg} exceeds {}", caps.max_norm_degree)));
    }
    if k.degree() == 1 {
        // K = Q: factor directly.
        let q = a.map_coeffs(&Rationals, |c| c.coords()[0].clone());
        return Ok(factor_over_q(&q)?.into_iter().map(|(g, _)| k.lift_poly(&g)).collect());
    }
    let gen = k.generator();
    for s in 0i64.. {
        // b(X) = a(X - s g)
        let shift = Poly::new(k, vec![k.neg(&k.scale_rational(&rat(s), &gen)), k.one()]);
        let b = a.compose(&shift);
        let norm = norm_poly(k, &b);
        if !norm.is_squarefree() {
            continue;
        }
        let factors = factor_over_q(&norm)?;
        if factors.len() == 1 {
            return Ok(vec![a.monic()]);
        }
        let back = Poly::new(k, vec![k.scale_rational(&rat(s), &gen), k.one()]);
        let mut rest = b.clone();
        let mut out = Vec::with_capacity(factors.len());
        for (h, _) in factors {
            let g = rest.gcd(&k.lift_poly(&h))?;
            if g.is_constant() {
                continue;
            }
            rest = rest.exact_div(&g).expect("gcd divides");
            out.push(g.compose(&back).monic());
        }
        debug_assert!(rest.is_constant());
        return Ok(out);
    }
    unreachable!("some shift makes the norm square-free")
}

/// `Norm_{K(X)/Q(X)}(b)` as a polynomial in `X`, by evaluating at integer
/// points and interpolating.
fn norm_poly(k: &NumberField, b: &Poly<NumberField>) -> RatPoly {
    let deg = b.degree().unwrap() * k.degree();
    let xs: Vec<Rational> = (0..=deg as i64).map(rat).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let v = b.eval(&k.from_rational(x));
            norm_of_poly(k.modulus(), &v.to_poly())
        })
        .collect();
    interpolate(&xs, &ys)
}

/// Newton interpolation through `(xs[i], ys[i])`.
pub(crate) fn interpolate(xs: &[Rational], ys: &[Rational]) -> RatPoly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = RatPoly::zero(&Rationals);
    for i in (0..n).rev() {
        p = p.mul(&RatPoly::linear(&Rationals, &xs[i])).add(&RatPoly::constant(&Rationals, coef[i].clone()));
    }
    p
}

// ---------------------------------------------------------------------------
// Relative extensions

/// `K[X]/(h)` with a chosen `K`-basis, structure constants
/// `basis_i * basis_j = sum_k beta[i][j][k] basis_k`, and the coordinate maps
/// of the embedding `g -> X mod h`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeExtension {
    base: NumberField,
    modulus: Poly<NumberField>,
    basis: Vec<Poly<NumberField>>,
    /// Columns are the power-basis coordinates of the basis elements.
    to_power: Matrix<NumberField>,
    from_power: Matrix<NumberField>,
    beta: Vec<Vec<Vec<NFElement>>>,
}

impl RelativeExtension {
    /// Build `K[X]/(h)`. `basis` defaults to the power basis.
    pub fn new(base: &NumberField, h: &Poly<NumberField>, basis: Option<Vec<Poly<NumberField>>>) -> Result<Self> {
        if !h.is_monic() {
            return Err(Error::NotMonic(h.to_string()));
        }
        if !is_irreducible_over_k(h)? {
            return Err(Error::NotIrreducibleOverK(h.to_string()));
        }
        Self::new_unchecked(base, h, basis)
    }

    /// As [`Self::new`] but trusting that `h` is monic irreducible (used for
    /// factors that come straight out of [`factor_over_k`]).
    pub(crate) fn new_unchecked(
        base: &NumberField,
        h: &Poly<NumberField>,
        basis: Option<Vec<Poly<NumberField>>>,
    ) -> Result<Self> {
        let m = h.degree().unwrap();
        let basis: Vec<Poly<NumberField>> = match basis {
            None => (0..m).map(|i| Poly::monomial(base, base.one(), i)).collect(),
            Some(b) => {
                if b.len() != m {
                    return Err(Error::BadBasis(format!("expected {m} elements, got {}", b.len())));
                }
                b.iter().map(|p| p.rem(h)).collect::<Result<_>>()?
            }
        };
        let coords: Vec<Vec<NFElement>> = basis.iter().map(|p| power_coords(base, p, m)).collect();
        let to_power = columns_to_matrix(base, m, &coords);
        let from_power = to_power
            .inverse()
            .ok_or_else(|| Error::BadBasis("basis elements are linearly dependent".into()))?;
        let mut ext = RelativeExtension {
            base: base.clone(),
            modulus: h.clone(),
            basis,
            to_power,
            from_power,
            beta: Vec::new(),
        };
        let mut beta = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let prod = ext.basis[i].mul(&ext.basis[j]).rem(h)?;
                beta[i][j] = ext.basis_coords_of(&prod);
            }
        }
        ext.beta = beta;
        Ok(ext)
    }

    pub fn base(&self) -> &NumberField {
        &self.base
    }
    pub fn modulus(&self) -> &Poly<NumberField> {
        &self.modulus
    }
    pub fn basis(&self) -> &[Poly<NumberField>] {
        &self.basis
    }
    pub fn degree(&self) -> usize {
        self.basis.len()
    }
    /// `beta[i][j][k]`.
    pub fn beta(&self) -> &[Vec<Vec<NFElement>>] {
        &self.beta
    }
    pub fn change_of_basis(&self) -> &Matrix<NumberField> {
        &self.to_power
    }

    /// Coordinates of an element of `K[X]` (reduced mod `h`) in the basis.
    pub fn basis_coords_of(&self, p: &Poly<NumberField>) -> Vec<NFElement> {
        let m = self.degree();
        let r = p.rem(&self.modulus).expect("modulus nonzero");
        self.from_power.apply(&power_coords(&self.base, &r, m))
    }

    /// The element `sum c_i basis_i` as a reduced polynomial.
    pub fn from_basis_coords(&self, c: &[NFElement]) -> Poly<NumberField> {
        let k = &self.base;
        Poly::new(k, self.to_power.apply(c))
    }

    /// `(lambda_1(x), ..., lambda_m(x))`: basis coordinates of the image of
    /// `x` under `g -> X mod h`.
    pub fn lambda_coords(&self, x: &NFElement) -> Result<Vec<NFElement>> {
        if *x.owner() != self.base {
            return Err(Error::FieldMismatch);
        }
        Ok(self.basis_coords_of(&self.lambda_poly(x)))
    }

    /// The image of `x` under `g -> X mod h`, as a reduced polynomial.
    pub fn lambda_poly(&self, x: &NFElement) -> Poly<NumberField> {
        let k = &self.base;
        let img = self.base.lift_poly(&x.to_poly());
        img.rem(&self.modulus).unwrap_or_else(|_| Poly::zero(k))
    }

    /// Product in basis coordinates via the structure constants.
    pub fn mul_coords(&self, a: &[NFElement], b: &[NFElement]) -> Vec<NFElement> {
        let k = &self.base;
        let m = self.degree();
        let mut out = vec![k.zero(); m];
        for i in 0..m {
            if k.is_zero(&a[i]) {
                continue;
            }
            for j in 0..m {
                if k.is_zero(&b[j]) {
                    continue;
                }
                let ab = k.mul(&a[i], &b[j]);
                for (o, bk) in out.iter_mut().zip(&self.beta[i][j]) {
                    *o = k.add(o, &k.mul(&ab, bk));
                }
            }
        }
        out
    }

    /// Whether `h` divides `f`, i.e. `g -> X` really is a field embedding.
    pub fn embeds_base(&self) -> bool {
        self.modulus.divides(&self.base.modulus_over_self())
    }
}

fn power_coords(k: &NumberField, p: &Poly<NumberField>, m: usize) -> Vec<NFElement> {
    (0..m).map(|i| if i < p.coeffs().len() { p.coeff(i) } else { k.zero() }).collect()
}
