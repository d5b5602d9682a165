//! Triangular and Jordan normal forms of homomorphisms with a single
//! eigenvalue: simultaneous triangularization, the homogeneous block
//! structure with its higher derivations, Jordan-ordered matrices and the
//! shape of the commutant of a Jordan matrix.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bimod::{HomField, MatrixHom};
use crate::error::{Error, Result};
use crate::factor::factor_over_q;
use crate::field::{Field, Rationals};
use crate::funcfield::{fit_features, hasse_all, random_ratfunc, standard_samples, FunctionField, RatFunc};
use crate::hs::{HigherDerivation, MapExpr};
use crate::linalg::{columns_to_matrix, diagonal_eigenvalues, jcf, jordan_block_sizes, jordan_matrix, Matrix};
use crate::numfield::{factor_over_k, NumberField};
use crate::poly::Poly;

/// Field-specific pieces of the canonical-form algorithms.
pub trait CanonicalField: HomField {
    /// Eigenvalues of `a` in the field, in a fixed order, or `DoesNotSplit`.
    fn split_eigenvalues(&self, a: &Matrix<Self>) -> Result<Vec<Self::Elem>>;

    /// A random element for sampled checks.
    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    /// Closed form for the derivation of one homogeneous block, if the field
    /// has one.
    fn fit_block(&self, _form: &HomogeneousForm<Self>, _block: usize) -> Option<HigherDerivation> {
        None
    }
}

fn roots_of_linear_factors<F: Field>(f: &F, factors: &[(Poly<F>, usize)]) -> Result<Vec<F::Elem>> {
    factors
        .iter()
        .map(|(g, _)| {
            if g.degree() != Some(1) {
                return Err(Error::DoesNotSplit(format!("irreducible factor {g} of the minimal polynomial")));
            }
            // monic: X + c has root -c
            Ok(f.neg(&g.coeff(0)))
        })
        .collect()
}

impl CanonicalField for NumberField {
    fn split_eigenvalues(&self, a: &Matrix<Self>) -> Result<Vec<Self::Elem>> {
        roots_of_linear_factors(self, &factor_over_k(&a.min_poly()?)?)
    }
    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        use rand::Rng;
        let coords: Vec<i64> = (0..self.degree()).map(|_| rng.gen_range(-4..=4)).collect();
        self.elem_ints(&coords)
    }
}

impl CanonicalField for Rationals {
    fn split_eigenvalues(&self, a: &Matrix<Self>) -> Result<Vec<Self::Elem>> {
        roots_of_linear_factors(self, &factor_over_q(&a.min_poly()?)?)
    }
    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        use rand::Rng;
        crate::field::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))
    }
}

impl CanonicalField for FunctionField {
    fn split_eigenvalues(&self, a: &Matrix<Self>) -> Result<Vec<Self::Elem>> {
        if a.is_upper_triangular() {
            return Ok(diagonal_eigenvalues(a));
        }
        Err(Error::DoesNotSplit(
            "over Q(t) the generator image must be upper triangular or eigenvalues must be supplied".into(),
        ))
    }
    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        random_ratfunc(rng, 3)
    }
    fn fit_block(&self, form: &HomogeneousForm<Self>, block: usize) -> Option<HigherDerivation> {
        Some(fit_funcfield_block(self, form, block))
    }
}

// ---------------------------------------------------------------------------
// Triangularization

/// `conjugator * A * conjugator^-1` is upper triangular.
#[derive(Clone, Debug)]
pub struct Triangularization<F: HomField> {
    pub conjugator: Matrix<F>,
    pub triangular: MatrixHom<F>,
    /// Diagonal of the triangular generator image.
    pub diagonal: Vec<F::Elem>,
}

/// Triangularize the image of `h` (generated by `A = h(gen)`), with
/// eigenvalues found in the field.
pub fn triangularize_commuting<F: CanonicalField>(h: &MatrixHom<F>) -> Result<Triangularization<F>> {
    let a = h.gen_image();
    if a.is_upper_triangular() {
        return triangularize_with(h, &[]);
    }
    let eigs = h.field().split_eigenvalues(a)?;
    triangularize_with(h, &eigs)
}

/// Triangularize with a supplied eigenvalue list; eigenvectors are taken for
/// the first listed eigenvalue that still has one.
pub fn triangularize_with<F: HomField>(h: &MatrixHom<F>, eigenvalues: &[F::Elem]) -> Result<Triangularization<F>> {
    let p = triangularizer(h.gen_image(), eigenvalues)?;
    let triangular = h.conjugate(&p)?;
    let t = triangular.gen_image();
    assert!(t.is_upper_triangular(), "triangularization certificate failed");
    let diagonal = (0..t.rows()).map(|i| t.get(i, i).clone()).collect();
    Ok(Triangularization { conjugator: p, triangular, diagonal })
}

fn triangularizer<F: Field>(a: &Matrix<F>, eigs: &[F::Elem]) -> Result<Matrix<F>> {
    let n = a.require_square()?;
    let f = a.field().clone();
    if a.is_upper_triangular() {
        return Ok(Matrix::identity(&f, n));
    }
    let v = eigs
        .iter()
        .find_map(|l| a.sub(&Matrix::scalar(&f, n, l.clone())).ok()?.nullspace().into_iter().next())
        .ok_or_else(|| Error::DoesNotSplit("no listed eigenvalue has an eigenvector".into()))?;
    // Complete v to a basis with standard vectors, leftmost first.
    let mut cols = vec![v];
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![f.zero(); n];
        e[j] = f.one();
        cols.push(e);
        if columns_to_matrix(&f, n, &cols).rank() < cols.len() {
            cols.pop();
        }
    }
    let s = columns_to_matrix(&f, n, &cols);
    let s_inv = s.inverse().expect("completed basis is invertible");
    let b = s_inv.mm(a).mm(&s);
    let rest = triangularizer(&b.submatrix(1, n, 1, n), eigs)?;
    let mut lift = Matrix::identity(&f, n);
    lift.set_block(1, 1, &rest);
    Ok(lift.mm(&s_inv))
}

// ---------------------------------------------------------------------------
// Homogeneous structure

/// Block form of an `a`-homogeneous hom: `conjugator * h * conjugator^-1` is
/// block upper triangular, each diagonal block the Toeplitz hom of a higher
/// derivation with `d_0 = a`.
#[derive(Clone, Debug)]
pub struct HomogeneousForm<F: HomField> {
    pub hom: MatrixHom<F>,
    /// The eigenvalue `a(gen)`.
    pub mu: F::Elem,
    pub conjugator: Matrix<F>,
    /// The conjugated hom.
    pub form: MatrixHom<F>,
    pub blocks: Vec<usize>,
    /// First-superdiagonal proportionality constants of each block after
    /// triangularization.
    pub alphas: Vec<Vec<F::Elem>>,
    /// Per block: a higher derivation with `phi(d) = ` the diagonal block
    /// (Q(t) only).
    pub derivations: Vec<Option<HigherDerivation>>,
}

impl<F: HomField> HomogeneousForm<F> {
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut s = 0;
        for b in &self.blocks {
            out.push(s);
            s += b;
        }
        out
    }

    /// `conjugator * h(x) * conjugator^-1`.
    pub fn eval(&self, x: &F::Elem) -> Result<Matrix<F>> {
        self.form.eval(x)
    }

    fn block_of(&self, m: &Matrix<F>, i: usize, j: usize) -> Matrix<F> {
        let off = self.offsets();
        m.submatrix(off[i], off[i] + self.blocks[i], off[j], off[j] + self.blocks[j])
    }

    /// The block map `A_ij(x)`.
    pub fn block(&self, x: &F::Elem, i: usize, j: usize) -> Result<Matrix<F>> {
        Ok(self.block_of(&self.eval(x)?, i, j))
    }

    /// `d_0(x), ..., d_{n-1}(x)` read off the first row of diagonal block `k`.
    pub fn derivation_values(&self, k: usize, x: &F::Elem) -> Result<Vec<F::Elem>> {
        let m = self.eval(x)?;
        let s = self.offsets()[k];
        Ok((0..self.blocks[k]).map(|i| m.get(s, s + i).clone()).collect())
    }

    /// Every diagonal block at `x` is the Toeplitz matrix of the extracted
    /// derivation values, and everything below the block diagonal is zero.
    pub fn diagonal_blocks_match(&self, x: &F::Elem) -> Result<bool> {
        let m = self.eval(x)?;
        let f = m.field().clone();
        let off = self.offsets();
        for (k, &n) in self.blocks.iter().enumerate() {
            let s = off[k];
            let vals: Vec<F::Elem> = (0..n).map(|i| m.get(s, s + i).clone()).collect();
            if self.block_of(&m, k, k) != toeplitz_from(&f, &vals) {
                return Ok(false);
            }
            for j in 0..k {
                if !self.block_of(&m, k, j).is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `A_ij(xy) = sum_l A_il(x) A_lj(y)` for all `i <= j`.
    pub fn cocycle_holds(&self, x: &F::Elem, y: &F::Elem) -> Result<bool> {
        let f = self.hom.field().clone();
        let mx = self.eval(x)?;
        let my = self.eval(y)?;
        let mxy = self.eval(&f.mul(x, y))?;
        let t = self.blocks.len();
        for i in 0..t {
            for j in i..t {
                let mut acc = Matrix::zeros(&f, self.blocks[i], self.blocks[j]);
                for l in i..=j {
                    acc = acc.add(&self.block_of(&mx, i, l).mm(&self.block_of(&my, l, j)))?;
                }
                if acc != self.block_of(&mxy, i, j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Per block and map: `"closed"` or `"closure"`.
    pub fn representations(&self) -> Vec<Vec<&'static str>> {
        self.derivations
            .iter()
            .zip(&self.blocks)
            .map(|(d, &n)| match d {
                Some(d) => d.maps().iter().map(|m| if m.is_closed() { "closed" } else { "closure" }).collect(),
                None => vec!["closure"; n],
            })
            .collect()
    }
}

impl HomogeneousForm<FunctionField> {
    /// Diagonal blocks equal `phi(d_k)(x)` for the stored derivations.
    pub fn fitted_blocks_match(&self, x: &RatFunc) -> Result<bool> {
        let m = self.eval(x)?;
        for (k, d) in self.derivations.iter().enumerate() {
            let Some(d) = d else { return Ok(false) };
            if self.block_of(&m, k, k) != crate::hs::toeplitz_matrix(d, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl<F: HomField> fmt::Display for HomogeneousForm<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.hom.field();
        writeln!(out, "eigenvalue: {}", f.format_elem(&self.mu))?;
        writeln!(out, "blocks: {:?}", self.blocks)?;
        writeln!(out, "conjugator: {}", self.conjugator)?;
        writeln!(out, "form:")?;
        for line in block_lines(self.form.gen_image(), &self.blocks) {
            writeln!(out, "  {line}")?;
        }
        for (k, d) in self.derivations.iter().enumerate() {
            match d {
                Some(d) => writeln!(out, "d{}: {}", k + 1, d)?,
                None => writeln!(out, "d{}: (read off block {} of the form)", k + 1, k + 1)?,
            }
        }
        Ok(())
    }
}

/// A square matrix laid out in aligned columns, with `|` and `-` rules
/// between the given diagonal blocks.
pub fn block_lines<F: Field>(m: &Matrix<F>, blocks: &[usize]) -> Vec<String> {
    let f = m.field();
    let cells: Vec<Vec<String>> =
        (0..m.rows()).map(|r| (0..m.cols()).map(|c| f.format_elem(m.get(r, c))).collect()).collect();
    let width: Vec<usize> =
        (0..m.cols()).map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(0)).collect();
    let mut ranges = Vec::new();
    let mut s = 0;
    for &b in blocks {
        ranges.push(s..s + b);
        s += b;
    }
    let rule: Vec<String> = ranges
        .iter()
        .map(|r| "-".repeat(r.clone().map(|c| width[c]).sum::<usize>() + r.len().saturating_sub(1)))
        .collect();
    let rule = rule.join("-+-");
    let mut out = Vec::new();
    for (bi, rr) in ranges.iter().enumerate() {
        if bi > 0 {
            out.push(rule.clone());
        }
        for r in rr.clone() {
            let parts: Vec<String> = ranges
                .iter()
                .map(|cr| {
                    let v: Vec<String> = cr.clone().map(|c| format!("{:>w$}", cells[r][c], w = width[c])).collect();
                    v.join(" ")
                })
                .collect();
            out.push(parts.join(" | "));
        }
    }
    out
}

fn toeplitz_from<F: Field>(f: &F, vals: &[F::Elem]) -> Matrix<F> {
    let n = vals.len();
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        for k in 0..n - i {
            m.set(i, i + k, vals[k].clone());
        }
    }
    m
}

/// Seed for the randomized proportionality confirmation.
const PROPORTIONALITY_SEED: u64 = 0xa1fa;

/// Block structure of an `a`-homogeneous hom `h`:
/// triangularize, split at zeros of the first superdiagonal, check the
/// superdiagonal proportionality, bring each block to a single Jordan block
/// and read the higher derivations off the block rows.
pub fn homogeneous_structure<F: CanonicalField>(h: &MatrixHom<F>, a: &MatrixHom<F>) -> Result<HomogeneousForm<F>> {
    if a.n() != 1 {
        return Err(Error::DimensionMismatch(format!("a must be 1-dimensional, got {}", a.n())));
    }
    if h.field() != a.field() {
        return Err(Error::FieldMismatch);
    }
    let f = h.field().clone();
    let mu = a.gen_image().get(0, 0).clone();
    let n = h.n();
    let nil = h.gen_image().sub(&Matrix::scalar(&f, n, mu.clone()))?;
    if !nil.pow(n as u32)?.is_zero() {
        return Err(Error::NotHomogeneous(format!(
            "the minimal polynomial is not a power of X - {}",
            f.format_elem(&mu)
        )));
    }
    let tri = triangularize_with(h, std::slice::from_ref(&mu))?;
    let b = tri.triangular.gen_image().clone();

    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 0..n {
        if i + 1 == n || f.is_zero(b.get(i, i + 1)) {
            blocks.push(i + 1 - start);
            start = i + 1;
        }
    }

    let mut alphas = Vec::with_capacity(blocks.len());
    let mut s = 0;
    for &len in &blocks {
        let mut al = Vec::new();
        for i in s..(s + len).saturating_sub(2) {
            let alpha = f.div(b.get(i + 1, i + 2), b.get(i, i + 1)).ok_or(Error::ProportionalityFailure(i, i + 1))?;
            if f.is_zero(&alpha) {
                return Err(Error::ProportionalityFailure(i + 1, i + 2));
            }
            al.push(alpha);
        }
        alphas.push(al);
        s += len;
    }
    if cfg!(debug_assertions) {
        confirm_proportionality(&tri.triangular, &blocks, &alphas)?;
    }

    let mut jordan_conj = Vec::with_capacity(blocks.len());
    let mut s = 0;
    for &len in &blocks {
        let sub = b.submatrix(s, s + len, s, s + len);
        let jf = jcf(&sub, Some(std::slice::from_ref(&mu)))?;
        if jf.blocks != vec![vec![len]] {
            return Err(Error::ProportionalityFailure(s, s + 1));
        }
        jordan_conj.push(jf.conjugator);
        s += len;
    }
    let conjugator = Matrix::block_diagonal(&f, &jordan_conj).mm(&tri.conjugator);
    let form = h.conjugate(&conjugator)?;
    let mut out =
        HomogeneousForm { hom: h.clone(), mu, conjugator, form, blocks, alphas, derivations: Vec::new() };
    out.derivations = (0..out.blocks.len()).map(|k| f.fit_block(&out, k)).collect();
    Ok(out)
}

fn confirm_proportionality<F: CanonicalField>(
    tri: &MatrixHom<F>,
    blocks: &[usize],
    alphas: &[Vec<F::Elem>],
) -> Result<()> {
    let f = tri.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(PROPORTIONALITY_SEED);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 20 && attempts < 60 {
        attempts += 1;
        let x = f.random_elem(&mut rng);
        let Ok(m) = tri.eval(&x) else { continue };
        checked += 1;
        let mut s = 0;
        for (&len, al) in blocks.iter().zip(alphas) {
            for (k, alpha) in al.iter().enumerate() {
                let i = s + k;
                if *m.get(i + 1, i + 2) != f.mul(alpha, m.get(i, i + 1)) {
                    return Err(Error::ProportionalityFailure(i, i + 1));
                }
            }
            s += len;
        }
    }
    Ok(())
}

fn fit_funcfield_block(f: &FunctionField, form: &HomogeneousForm<FunctionField>, k: usize) -> HigherDerivation {
    let size = form.blocks[k];
    let start = form.offsets()[k];
    let mu = form.mu.clone();
    let twist = MapExpr::subst(mu.clone());
    let samples: Vec<(RatFunc, Vec<RatFunc>)> = standard_samples(size + 2)
        .into_iter()
        .filter_map(|x| form.derivation_values(k, &x).ok().map(|v| (x, v)))
        .collect();
    let features: Vec<Vec<RatFunc>> = samples
        .iter()
        .map(|(x, _)| hasse_all(size - 1, x).into_iter().map(|d| d.substitute(&mu)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(PROPORTIONALITY_SEED ^ k as u64);
    let checks: Vec<RatFunc> = (0..4).map(|_| random_ratfunc(&mut rng, 3)).collect();
    let mut maps = vec![twist.clone()];
    for i in 1..size {
        let ys: Vec<RatFunc> = samples.iter().map(|(_, v)| v[i].clone()).collect();
        let fitted = fit_features(&features, &ys, size - 1).ok().map(|cs| {
            cs.iter().enumerate().fold(MapExpr::zero(), |acc, (j, c)| {
                acc.add(&twist.compose(&MapExpr::hasse(j)).scale(c))
            })
        });
        let agrees = |m: &MapExpr| {
            checks.iter().all(|x| match form.derivation_values(k, x) {
                Ok(v) => m.apply(x).map(|y| y == v[i]).unwrap_or(false),
                Err(_) => true,
            })
        };
        let map = match fitted {
            Some(m) if agrees(&m) => m,
            _ => {
                let hom = form.form.clone();
                MapExpr::opaque(move |x: &RatFunc| Ok(hom.eval(x)?.get(start, start + i).clone()))
            }
        };
        maps.push(map);
    }
    HigherDerivation::unchecked(f, maps).expect("nonempty")
}

// ---------------------------------------------------------------------------
// Jordan-ordered matrices

fn single_eigenvalue<F: Field>(a: &Matrix<F>) -> Result<F::Elem> {
    let n = a.require_square()?;
    if let Some((r, c)) = a.lower_witness() {
        return Err(Error::NotTriangular(r, c));
    }
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let l = a.get(0, 0).clone();
    if (1..n).any(|i| *a.get(i, i) != l) {
        return Err(Error::MultipleEigenvalues);
    }
    Ok(l)
}

/// Whether the upper triangular single-eigenvalue matrix `a` is
/// Jordan-ordered: for every `i`, the eigenspace of the leading `i x i`
/// minor has dimension equal to the least `j` with `n_1 + ... + n_j >= i`,
/// where `n_1 >= n_2 >= ...` are the Jordan block sizes of `a`.
pub fn is_jordan_ordered<F: Field>(a: &Matrix<F>) -> Result<bool> {
    let lambda = single_eigenvalue(a)?;
    Ok(first_unordered_minor(a, &lambda)?.is_none())
}

fn first_unordered_minor<F: Field>(a: &Matrix<F>, lambda: &F::Elem) -> Result<Option<usize>> {
    let n = a.rows();
    let f = a.field();
    let sizes = jordan_block_sizes(a, lambda)?;
    for i in 1..=n {
        let nullity = a.leading(i).sub(&Matrix::scalar(f, i, lambda.clone()))?.nullity();
        let mut acc = 0;
        let j = sizes
            .iter()
            .position(|&s| {
                acc += s;
                acc >= i
            })
            .map(|p| p + 1)
            .expect("block sizes sum to n");
        if nullity != j {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Result of [`jordan_order_conjugate`]: `conjugator * A * conjugator^-1 = jcf`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanOrdering<F: Field> {
    pub conjugator: Matrix<F>,
    pub jcf: Matrix<F>,
    pub blocks: Vec<usize>,
}

/// Upper triangular `P` with `P A P^-1` in Jordan form (decreasing blocks),
/// for Jordan-ordered `A`. Built one leading minor at a time: with the
/// `k x k` minor already in Jordan form `J`, the new column `a` must vanish
/// at every block end except the last; the shear `[[I, b], [0, 1]]` clears
/// the rest of it and `diag(1, ..., 1, c)` turns the remaining entry `c`
/// into 1.
pub fn jordan_order_conjugate<F: Field>(a: &Matrix<F>) -> Result<JordanOrdering<F>> {
    let lambda = single_eigenvalue(a)?;
    if let Some(i) = first_unordered_minor(a, &lambda)? {
        return Err(Error::NotJordanOrdered(format!("leading {i}x{i} minor")));
    }
    let f = a.field().clone();
    let n = a.rows();
    let mut p = Matrix::identity(&f, 1);
    let mut blocks = vec![1usize];
    for k in 1..n {
        let mut r = Matrix::identity(&f, k + 1);
        r.set_block(0, 0, &p);
        let r_inv = r.inverse().expect("triangular with nonzero diagonal");
        let ak = r.mm(&a.leading(k + 1)).mm(&r_inv);
        let col: Vec<F::Elem> = (0..k).map(|i| ak.get(i, k).clone()).collect();
        let mut ends = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for &b in &blocks {
            acc += b;
            ends.push(acc - 1);
        }
        let last_end = k - 1;
        // b_{i+1} = a_i off the block ends solves (lambda - J) b = -(a with ends zeroed).
        let mut shear = vec![f.zero(); k];
        for i in 0..k {
            if ends.contains(&i) {
                if i != last_end && !f.is_zero(&col[i]) {
                    return Err(Error::NotJordanOrdered(format!(
                        "leading {}x{} minor: new column is nonzero at block end {}",
                        k + 1,
                        k + 1,
                        i + 1
                    )));
                }
            } else {
                shear[i + 1] = col[i].clone();
            }
        }
        let mut s = Matrix::identity(&f, k + 1);
        for (i, v) in shear.into_iter().enumerate() {
            s.set(i, k, v);
        }
        let c = col[last_end].clone();
        let mut d = Matrix::identity(&f, k + 1);
        if f.is_zero(&c) {
            blocks.push(1);
        } else {
            d.set(k, k, c);
            *blocks.last_mut().unwrap() += 1;
            let m = blocks.len();
            if m >= 2 && blocks[m - 1] > blocks[m - 2] {
                return Err(Error::NotJordanOrdered(format!(
                    "leading {}x{} minor: block sizes would increase",
                    k + 1,
                    k + 1
                )));
            }
        }
        p = d.mm(&s).mm(&r);
        let layout: Vec<(F::Elem, usize)> = blocks.iter().map(|&b| (lambda.clone(), b)).collect();
        let pi = p.inverse().expect("triangular with nonzero diagonal");
        if p.mm(&a.leading(k + 1)).mm(&pi) != jordan_matrix(&f, &layout) {
            return Err(Error::NotJordanOrdered(format!("leading {}x{} minor", k + 1, k + 1)));
        }
    }
    let layout: Vec<(F::Elem, usize)> = blocks.iter().map(|&b| (lambda.clone(), b)).collect();
    let j = jordan_matrix(&f, &layout);
    assert!(p.is_upper_triangular());
    Ok(JordanOrdering { conjugator: p, jcf: j, blocks })
}

// ---------------------------------------------------------------------------
// Commutant shapes

/// Shape of one block `X_pq` of a matrix against a Jordan structure.
#[derive(Clone, Debug, PartialEq)]
pub enum CellShape<E> {
    /// Different eigenvalues; the block must vanish.
    Zero { ok: bool },
    /// Same eigenvalue: `(0 T)` when `n_p <= n_q`, `(T; 0)` otherwise, with
    /// `T` upper triangular Toeplitz with first row `coeffs`.
    Toeplitz { ok: bool, coeffs: Vec<E> },
}

impl<E> CellShape<E> {
    pub fn ok(&self) -> bool {
        match self {
            CellShape::Zero { ok } | CellShape::Toeplitz { ok, .. } => *ok,
        }
    }
}

/// Jordan blocks of `J` with the block grid of a candidate commuting matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzShape<F: Field> {
    /// `(eigenvalue, start, size)` per Jordan block.
    pub blocks: Vec<(F::Elem, usize, usize)>,
    pub cells: Vec<Vec<CellShape<F::Elem>>>,
}

impl<F: Field> ToeplitzShape<F> {
    pub fn ok(&self) -> bool {
        self.cells.iter().flatten().all(CellShape::ok)
    }
}

/// Jordan blocks `(eigenvalue, start, size)` of a matrix in Jordan form.
pub fn jcf_blocks<F: Field>(j: &Matrix<F>) -> Result<Vec<(F::Elem, usize, usize)>> {
    let n = j.require_square()?;
    let f = j.field();
    let mut out: Vec<(F::Elem, usize, usize)> = Vec::new();
    for i in 0..n {
        let lam = j.get(i, i).clone();
        let joined = i > 0 && f.is_one(j.get(i - 1, i));
        if i > 0 && !joined && !f.is_zero(j.get(i - 1, i)) {
            return Err(Error::NotJCF(format!("superdiagonal entry ({}, {}) is not 0 or 1", i, i + 1)));
        }
        if joined {
            let last = out.last_mut().unwrap();
            if last.0 != lam {
                return Err(Error::NotJCF(format!("a 1 at ({}, {}) joins different eigenvalues", i, i + 1)));
            }
            last.2 += 1;
        } else {
            out.push((lam, i, 1));
        }
    }
    for r in 0..n {
        for c in 0..n {
            if c != r && c != r + 1 && !f.is_zero(j.get(r, c)) {
                return Err(Error::NotJCF(format!("nonzero entry at ({}, {})", r + 1, c + 1)));
            }
        }
    }
    Ok(out)
}

/// Check `x` against the commutant shape of the Jordan matrix `j`: blocks
/// between different eigenvalues vanish and blocks between equal
/// eigenvalues are generalized upper triangular Toeplitz. For `j` in Jordan
/// form this holds exactly when `x` commutes with `j`.
pub fn commutant_shape_check<F: Field>(j: &Matrix<F>, x: &Matrix<F>) -> Result<(bool, ToeplitzShape<F>)> {
    let blocks = jcf_blocks(j)?;
    if x.rows() != j.rows() || x.cols() != j.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} against {}x{}",
            x.rows(),
            x.cols(),
            j.rows(),
            j.cols()
        )));
    }
    let f = j.field();
    let mut cells = Vec::with_capacity(blocks.len());
    for (lp, sp, np) in &blocks {
        let mut row = Vec::with_capacity(blocks.len());
        for (lq, sq, nq) in &blocks {
            let sub = x.submatrix(*sp, sp + np, *sq, sq + nq);
            if lp != lq {
                row.push(CellShape::Zero { ok: sub.is_zero() });
                continue;
            }
            let m = (*np).min(*nq);
            // T sits in the top-right m x m corner; everything else is zero.
            let (r0, c0) = (0, nq - m);
            let coeffs: Vec<F::Elem> = (0..m).map(|k| sub.get(r0, c0 + k).clone()).collect();
            let mut ok = true;
            for r in 0..*np {
                for c in 0..*nq {
                    let expect = if r < m && c >= c0 && c - c0 >= r {
                        coeffs[c - c0 - r].clone()
                    } else {
                        f.zero()
                    };
                    if *sub.get(r, c) != expect {
                        ok = false;
                    }
                }
            }
            row.push(CellShape::Toeplitz { ok, coeffs });
        }
        cells.push(row);
    }
    let shape = ToeplitzShape { blocks, cells };
    Ok((shape.ok(), shape))
}

/// A basis of `{X : XA = AX}` from the nullspace of `X -> XA - AX`.
pub fn commutant_basis<F: Field>(a: &Matrix<F>) -> Result<Vec<Matrix<F>>> {
    let n = a.require_square()?;
    let f = a.field().clone();
    // vec(X) indexed r*n + c; (XA - AX)[r][c] = sum_k X[r][k] A[k][c] - A[r][k] X[k][c]
    let mut sys = Matrix::zeros(&f, n * n, n * n);
    for r in 0..n {
        for c in 0..n {
            let row = r * n + c;
            for k in 0..n {
                let v = f.add(sys.get(row, r * n + k), a.get(k, c));
                sys.set(row, r * n + k, v);
                let w = f.sub(sys.get(row, k * n + c), a.get(r, k));
                sys.set(row, k * n + c, w);
            }
        }
    }
    Ok(sys.nullspace().into_iter().map(|v| Matrix::from_vec(&f, n, n, v)).collect())
}
