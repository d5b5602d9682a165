//! Matrix homomorphisms `K -> M_n(K)`, the orbit table of a number field,
//! the simple bimodule of each orbit, and its endomorphism ring.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::funcfield::{FunctionField, RatFunc};
use crate::linalg::{similarity_solve, Matrix};
use crate::numfield::{factor_over_k_cached, FactorCache, FactorCaps, NFElement, NumberField, RelativeExtension};
use crate::poly::{Poly, RatPoly};

/// `p(A)` for a polynomial with rational coefficients.
pub fn eval_rational_poly<F: Field>(a: &Matrix<F>, p: &RatPoly) -> Matrix<F> {
    let f = a.field();
    let n = a.rows();
    let mut acc = Matrix::zeros(f, n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mm(a);
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&Matrix::scalar(f, n, f.from_rational(c))).expect("same shape");
    }
    acc
}

/// Evidence that a generator image defines a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomCertificate {
    pub checked: String,
}

/// Fields whose homomorphisms into matrix rings are determined by the
/// image of one generator.
pub trait HomField: Field {
    /// `phi(x)` given `A = phi(generator)`.
    fn eval_hom(&self, a: &Matrix<Self>, x: &Self::Elem) -> Result<Matrix<Self>>;
    /// Check that `A` defines a homomorphism (on a test set where exact
    /// checking is impossible).
    fn validate_hom(&self, a: &Matrix<Self>) -> Result<HomCertificate>;
    /// Whether two homomorphisms give isomorphic bimodules.
    fn similar_homs(&self, a1: &Matrix<Self>, a2: &Matrix<Self>, seed: u64) -> Result<bool>;
}

impl HomField for NumberField {
    fn eval_hom(&self, a: &Matrix<Self>, x: &NFElement) -> Result<Matrix<Self>> {
        if x.owner() != self {
            return Err(Error::FieldMismatch);
        }
        Ok(eval_rational_poly(a, &x.to_poly()))
    }

    fn validate_hom(&self, a: &Matrix<Self>) -> Result<HomCertificate> {
        a.require_square()?;
        let fa = eval_rational_poly(a, self.modulus());
        if fa.is_zero() {
            Ok(HomCertificate { checked: format!("f(A) = 0 for f = {}", self.modulus()) })
        } else {
            Err(Error::NotAHomomorphism(format!("f(A) != 0 for f = {}", self.modulus())))
        }
    }

    fn similar_homs(&self, a1: &Matrix<Self>, a2: &Matrix<Self>, _seed: u64) -> Result<bool> {
        if a1.rows() != a2.rows() {
            return Ok(false);
        }
        let table = classify(self)?;
        let d1 = crate::tensor::decompose(&MatrixHom::new(a1.clone())?, &table)?;
        let d2 = crate::tensor::decompose(&MatrixHom::new(a2.clone())?, &table)?;
        Ok(d1 == d2)
    }
}

/// Denominators checked by [`HomField::validate_hom`] over Q(t).
pub fn default_denominators() -> Vec<RatPoly> {
    vec![
        RatPoly::ints(&[0, 1]),
        RatPoly::ints(&[1, 1]),
        RatPoly::ints(&[-1, 1]),
        RatPoly::ints(&[1, 0, 1]),
        RatPoly::ints(&[-2, 0, 1]),
    ]
}

/// Check that `q(A)` is invertible for each `q` in `denominators`.
pub fn validate_funcfield_hom(a: &Matrix<FunctionField>, denominators: &[RatPoly]) -> Result<HomCertificate> {
    a.require_square()?;
    for q in denominators {
        if !eval_rational_poly(a, q).is_invertible() {
            return Err(Error::NotAHomomorphism(format!("q(A) is singular for q = {}", q.format_with("t"))));
        }
    }
    let list: Vec<String> = denominators.iter().map(|q| q.format_with("t")).collect();
    Ok(HomCertificate { checked: format!("q(A) invertible for q in {{{}}}", list.join(", ")) })
}

impl HomField for FunctionField {
    fn eval_hom(&self, a: &Matrix<Self>, x: &RatFunc) -> Result<Matrix<Self>> {
        let p = eval_rational_poly(a, x.num());
        if x.is_poly() {
            return Ok(p.scale(&RatFunc::constant(x.den().coeff(0).recip())));
        }
        let q = eval_rational_poly(a, x.den());
        let qi = q
            .inverse()
            .ok_or_else(|| Error::NonInvertibleDenominator(x.den().format_with(self.name())))?;
        Ok(p.mm(&qi))
    }

    fn validate_hom(&self, a: &Matrix<Self>) -> Result<HomCertificate> {
        validate_funcfield_hom(a, &default_denominators())
    }

    fn similar_homs(&self, a1: &Matrix<Self>, a2: &Matrix<Self>, seed: u64) -> Result<bool> {
        if a1.rows() != a2.rows() {
            return Ok(false);
        }
        Ok(similarity_solve(a1, a2, seed)?.is_some())
    }
}

impl HomField for Rationals {
    fn eval_hom(&self, a: &Matrix<Self>, x: &crate::Rational) -> Result<Matrix<Self>> {
        Ok(Matrix::scalar(self, a.rows(), x.clone()))
    }

    fn validate_hom(&self, a: &Matrix<Self>) -> Result<HomCertificate> {
        let n = a.require_square()?;
        if a.is_identity() {
            Ok(HomCertificate { checked: "A = I".into() })
        } else {
            Err(Error::NotAHomomorphism(format!("the image of 1 must be I_{n}")))
        }
    }

    fn similar_homs(&self, a1: &Matrix<Self>, a2: &Matrix<Self>, _seed: u64) -> Result<bool> {
        Ok(a1.rows() == a2.rows())
    }
}

/// A homomorphism `K -> M_n(K)` stored as the image of the generator.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixHom<F: Field> {
    gen_image: Matrix<F>,
}

impl<F: HomField> MatrixHom<F> {
    /// Wrap a generator image without validating it.
    pub fn new(gen_image: Matrix<F>) -> Result<Self> {
        gen_image.require_square()?;
        Ok(MatrixHom { gen_image })
    }

    /// Wrap and validate.
    pub fn checked(gen_image: Matrix<F>) -> Result<Self> {
        let h = Self::new(gen_image)?;
        h.validate()?;
        Ok(h)
    }

    /// The 1x1 hom `x -> (x)`.
    pub fn identity(field: &F) -> Self {
        MatrixHom { gen_image: Matrix::scalar(field, 1, field.generator()) }
    }

    pub fn field(&self) -> &F {
        self.gen_image.field()
    }

    pub fn n(&self) -> usize {
        self.gen_image.rows()
    }

    pub fn gen_image(&self) -> &Matrix<F> {
        &self.gen_image
    }

    pub fn eval(&self, x: &F::Elem) -> Result<Matrix<F>> {
        self.field().eval_hom(&self.gen_image, x)
    }

    pub fn validate(&self) -> Result<HomCertificate> {
        self.field().validate_hom(&self.gen_image)
    }

    /// `P phi P^-1`.
    pub fn conjugate(&self, p: &Matrix<F>) -> Result<Self> {
        let pi = p
            .inverse()
            .ok_or_else(|| Error::DimensionMismatch("conjugator is not invertible".into()))?;
        Ok(MatrixHom { gen_image: p.mul(&self.gen_image)?.mm(&pi) })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(parts: &[Self]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::DimensionMismatch("empty direct sum".into()))?;
        let f = first.field().clone();
        if parts.iter().any(|h| *h.field() != f) {
            return Err(Error::FieldMismatch);
        }
        let blocks: Vec<Matrix<F>> = parts.iter().map(|h| h.gen_image.clone()).collect();
        Ok(MatrixHom { gen_image: Matrix::block_diagonal(&f, &blocks) })
    }
}

/// Whether two homs give isomorphic bimodules.
pub fn hom_similar<F: HomField>(h1: &MatrixHom<F>, h2: &MatrixHom<F>, seed: u64) -> Result<bool> {
    if h1.field() != h2.field() {
        return Err(Error::FieldMismatch);
    }
    h1.field().similar_homs(h1.gen_image(), h2.gen_image(), seed)
}

// ---------------------------------------------------------------------------
// Orbits

/// One embedding orbit: a monic irreducible factor of `f` over `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    /// 1-based.
    pub id: usize,
    pub factor: Poly<NumberField>,
    pub size: usize,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTable {
    pub field: NumberField,
    pub orbits: Vec<Orbit>,
}

impl OrbitTable {
    pub fn get(&self, id: usize) -> Result<&Orbit> {
        id.checked_sub(1).and_then(|i| self.orbits.get(i)).ok_or(Error::UnknownOrbit(id))
    }

    pub fn trivial(&self) -> &Orbit {
        self.orbits.iter().find(|o| o.trivial).expect("one trivial orbit")
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &Orbit> {
        self.orbits.iter().filter(|o| !o.trivial)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.size).collect()
    }
}

/// Orbits of embeddings of `K`, ordered by size, then trivial first, then
/// by factor coefficients.
pub fn classify(k: &NumberField) -> Result<OrbitTable> {
    classify_with(k, FactorCaps::default(), FactorCache::global())
}

pub fn classify_with(k: &NumberField, caps: FactorCaps, cache: &FactorCache) -> Result<OrbitTable> {
    let f = k.modulus_over_self();
    let trivial_factor = Poly::linear(k, &k.gen());
    let mut factors = factor_over_k_cached(&f, caps, cache)?;
    factors.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| (*b == trivial_factor).cmp(&(*a == trivial_factor)))
            .then_with(|| a.cmp_canonical(b))
    });
    let orbits: Vec<Orbit> = factors
        .into_iter()
        .enumerate()
        .map(|(i, (g, mult))| {
            assert_eq!(mult, 1, "f is square-free");
            Orbit { id: i + 1, size: g.degree().unwrap(), trivial: g == trivial_factor, factor: g }
        })
        .collect();
    assert_eq!(orbits.iter().filter(|o| o.trivial).count(), 1, "exactly one trivial orbit");
    assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), k.degree());
    Ok(OrbitTable { field: k.clone(), orbits })
}

// ---------------------------------------------------------------------------
// Simple bimodules

#[derive(Clone, Debug, PartialEq)]
pub struct SimpleBimodule {
    pub orbit: Orbit,
    pub ext: RelativeExtension,
    pub hom: MatrixHom<NumberField>,
}

impl SimpleBimodule {
    pub fn dim(&self) -> usize {
        self.hom.n()
    }
}

/// The simple bimodule of orbit `id`, with the hom
/// `phi_ij(x) = sum_k beta_{jki} lambda_k(x)` in the given basis of
/// `K[X]/(g)` (power basis by default).
pub fn simple_from_orbit(
    table: &OrbitTable,
    id: usize,
    basis: Option<Vec<Poly<NumberField>>>,
) -> Result<SimpleBimodule> {
    let orbit = table.get(id)?.clone();
    let k = &table.field;
    let ext = RelativeExtension::new_unchecked(k, &orbit.factor, basis)?;
    let m = ext.degree();
    let lam = ext.lambda_coords(&k.gen())?;
    let beta = ext.beta();
    let mut a = Matrix::zeros(k, m, m);
    for i in 0..m {
        for j in 0..m {
            let v = (0..m).fold(k.zero(), |acc, l| k.add(&acc, &k.mul(&beta[j][l][i], &lam[l])));
            a.set(i, j, v);
        }
    }
    let hom = MatrixHom::new(a)?;
    hom.validate().expect("constructed simple is a homomorphism");
    let s = SimpleBimodule { orbit, ext, hom };
    assert!(eigenvector_relation_holds(&s), "v phi(g) = X v");
    Ok(s)
}

/// `v * phi(g) = lambda(g) * v` in `K(lambda)` for `v = (alpha_1, ..., alpha_m)`.
pub fn eigenvector_relation_holds(s: &SimpleBimodule) -> bool {
    let k = s.ext.base();
    let a = s.hom.gen_image();
    let m = s.dim();
    let x_bar = s.ext.lambda_poly(&k.gen());
    (0..m).all(|j| {
        let lhs = (0..m).fold(Poly::zero(k), |acc, i| acc.add(&s.ext.basis()[i].scale(a.get(i, j))));
        let rhs = x_bar.mul(&s.ext.basis()[j]);
        lhs.sub(&rhs).rem(s.ext.modulus()).map_or(false, |r| r.is_zero())
    })
}

/// `M(p)_{ij} = beta_{pji}`: the endomorphism matrices matching `alpha_p`.
/// Commutation with `phi`, pairwise commutation, and the minimal
/// polynomial of each `alpha_p` are checked; failure is a bug and panics.
pub fn endomorphism_basis(s: &SimpleBimodule) -> Vec<Matrix<NumberField>> {
    let k = s.ext.base();
    let m = s.dim();
    let beta = s.ext.beta();
    let ms: Vec<Matrix<NumberField>> = (0..m)
        .map(|p| {
            let mut mp = Matrix::zeros(k, m, m);
            for i in 0..m {
                for j in 0..m {
                    mp.set(i, j, beta[p][j][i].clone());
                }
            }
            mp
        })
        .collect();
    let a = s.hom.gen_image();
    for (p, mp) in ms.iter().enumerate() {
        assert_eq!(mp.mm(a), a.mm(mp), "M({}) commutes with phi(g)", p + 1);
        for mq in &ms {
            assert_eq!(mp.mm(mq), mq.mm(mp), "endomorphisms commute");
        }
        let mu = element_min_poly(&s.ext, &s.ext.basis()[p]);
        assert!(mp.eval_poly(&mu).expect("square").is_zero(), "M({}) satisfies the minimal polynomial", p + 1);
    }
    ms
}

/// Minimal polynomial over `K` of an element of `K[X]/(g)`.
pub fn element_min_poly(ext: &RelativeExtension, a: &Poly<NumberField>) -> Poly<NumberField> {
    let k = ext.base();
    let m = ext.degree();
    let mut powers: Vec<Vec<NFElement>> = Vec::new();
    let mut cur = Poly::one(k);
    loop {
        powers.push(ext.basis_coords_of(&cur));
        let mat = crate::linalg::columns_to_matrix(k, m, &powers);
        if let Some(v) = mat.nullspace().first() {
            return Poly::new(k, v.clone()).monic();
        }
        cur = cur.mul(a).rem(ext.modulus()).expect("nonzero modulus");
    }
}

impl fmt::Display for OrbitTable {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.orbits {
            let tag = if o.trivial { " (trivial)" } else { "" };
            writeln!(fmt, "orbit {} size {}{}: {}", o.id, o.size, tag, o.factor)?;
        }
        Ok(())
    }
}
