//! Exact dense linear algebra over any supported [`Field`].
//!
//! Matrices are row-major. Vectors passed to and returned from
//! [`Matrix::nullspace`] are column vectors (`M v = 0`).

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> PartialEq for Matrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

/// Result of row reduction: `transform * input = reduced`.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub reduced: Matrix<F>,
    pub transform: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::from_vec(field, r, c, rows.into_iter().flatten().collect()))
    }

    pub fn from_ints(field: &F, rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<F::Elem>> =
            rows.iter().map(|r| r.iter().map(|&v| field.from_int(v)).collect()).collect();
        Self::from_rows(field, data).expect("rectangular integer rows")
    }

    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Self::from_vec(field, rows, cols, vec![field.zero(); rows * cols])
    }

    pub fn identity(field: &F, n: usize) -> Self {
        Self::scalar(field, n, field.one())
    }

    pub fn scalar(field: &F, n: usize, c: F::Elem) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal(field: &F, diag: Vec<F::Elem>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Column vector.
    pub fn column(field: &F, v: Vec<F::Elem>) -> Self {
        let n = v.len();
        Self::from_vec(field, n, 1, v)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(&F::Elem) -> F::Elem) -> Self {
        Self::from_vec(&self.field, self.rows, self.cols, self.data.iter().map(f).collect())
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Ok(Self::from_vec(f, self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Ok(Self::from_vec(f, self.rows, self.cols, data))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        self.map(|a| f.mul(a, c))
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        self.map(|a| f.neg(a))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// `self * other`, panicking on shape mismatch. For internal use where
    /// shapes are known to agree.
    pub(crate) fn mm(&self, other: &Self) -> Self {
        self.mul(other).expect("compatible shapes")
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let n = self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(&self.field, n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mm(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mm(&base);
            }
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Kronecker product with multi-index `(i1, i2) -> i1 * other.rows + i2`.
    pub fn kron(&self, other: &Self) -> Self {
        let f = &self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(f, r, c);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(i1 * other.rows + i2, j1 * other.cols + j2, f.mul(a, other.get(i2, j2)));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.field.is_zero(a))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(&self.field, self.rows)
    }

    /// First nonzero strictly-lower entry, if any.
    pub fn lower_witness(&self) -> Option<(usize, usize)> {
        (0..self.rows)
            .flat_map(|r| (0..r.min(self.cols)).map(move |c| (r, c)))
            .find(|&(r, c)| !self.field.is_zero(self.get(r, c)))
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.lower_witness().is_none()
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for r in r0..r1 {
            data.extend_from_slice(&self.data[r * self.cols + c0..r * self.cols + c1]);
        }
        Self::from_vec(&self.field, r1 - r0, c1 - c0, data)
    }

    /// The `k x k` leading principal minor.
    pub fn leading(&self, k: usize) -> Self {
        self.submatrix(0, k, 0, k)
    }

    /// Copy `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block_diagonal(field: &F, blocks: &[Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, n, m);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Gauss-Jordan elimination. Pivot columns are taken leftmost first and
    /// the pivot row is the first row at or below the current one with a
    /// nonzero entry.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut a = self.clone();
        let mut t = Self::identity(f, self.rows);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !f.is_zero(a.get(r, col))) else {
                continue;
            };
            a.swap_rows(row, p);
            t.swap_rows(row, p);
            let inv = f.inv(a.get(row, col)).expect("pivot nonzero");
            a.scale_row(row, &inv);
            t.scale_row(row, &inv);
            for r in 0..self.rows {
                if r != row {
                    let factor = a.get(r, col).clone();
                    if !f.is_zero(&factor) {
                        a.add_row_multiple(r, row, &f.neg(&factor));
                        t.add_row_multiple(r, row, &f.neg(&factor));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { reduced: a, transform: t, rank: pivots.len(), pivots }
    }

    pub fn rank(&self) -> usize {
        self.row_echelon_rank()
    }

    /// Rank by forward elimination only (cheaper than a full [`Self::rref`]).
    fn row_echelon_rank(&self) -> usize {
        let f = &self.field;
        let mut a = self.clone();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !f.is_zero(a.get(r, col))) else {
                continue;
            };
            a.swap_rows(row, p);
            let inv = f.inv(a.get(row, col)).expect("pivot nonzero");
            for r in row + 1..self.rows {
                let factor = a.get(r, col).clone();
                if !f.is_zero(&factor) {
                    a.add_row_multiple(r, row, &f.neg(&f.mul(&factor, &inv)));
                }
            }
            row += 1;
        }
        row
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column, with a 1 in
    /// that free position and zeros in the other free positions.
    pub fn nullspace(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let rr = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !rr.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (i, &pc) in rr.pivots.iter().enumerate() {
                    v[pc] = f.neg(rr.reduced.get(i, fc));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.require_square().ok()?;
        let rr = self.rref();
        (rr.rank == n).then_some(rr.transform)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn det(&self) -> Result<F::Elem> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut a = self.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !f.is_zero(a.get(r, col))) else {
                return Ok(f.zero());
            };
            if p != col {
                a.swap_rows(p, col);
                det = f.neg(&det);
            }
            let pivot = a.get(col, col).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("nonzero");
            for r in col + 1..n {
                let factor = a.get(r, col).clone();
                if !f.is_zero(&factor) {
                    a.add_row_multiple(r, col, &f.neg(&f.mul(&factor, &inv)));
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn scale_row(&mut self, r: usize, c: &F::Elem) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = self.field.mul(&self.data[idx], c);
        }
    }

    /// row[target] += c * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, c: &F::Elem) {
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            if self.field.is_zero(&s) {
                continue;
            }
            let idx = target * self.cols + j;
            self.data[idx] = self.field.add(&self.data[idx], &self.field.mul(c, &s));
        }
    }

    /// col[target] += c * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, c: &F::Elem) {
        for r in 0..self.rows {
            let s = self.data[r * self.cols + source].clone();
            if self.field.is_zero(&s) {
                continue;
            }
            let idx = r * self.cols + target;
            self.data[idx] = self.field.add(&self.data[idx], &self.field.mul(c, &s));
        }
    }

    /// Monic characteristic polynomial `det(X I - M)`, via reduction to upper
    /// Hessenberg form followed by the standard determinant recurrence.
    pub fn charpoly(&self) -> Result<Poly<F>> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(i) = (j + 1..n).find(|&i| !f.is_zero(h.get(i, j))) else {
                continue;
            };
            if i != j + 1 {
                h.swap_rows(i, j + 1);
                h.swap_cols(i, j + 1);
            }
            let inv = f.inv(h.get(j + 1, j)).expect("nonzero");
            for k in j + 2..n {
                let u = f.mul(h.get(k, j), &inv);
                if f.is_zero(&u) {
                    continue;
                }
                h.add_row_multiple(k, j + 1, &f.neg(&u));
                h.add_col_multiple(j + 1, k, &u);
            }
        }
        let mut p: Vec<Poly<F>> = vec![Poly::one(f)];
        for m in 1..=n {
            let mut pm = Poly::linear(f, h.get(m - 1, m - 1)).mul(&p[m - 1]);
            let mut t = f.one();
            for i in 1..m {
                t = f.mul(&t, h.get(m - i, m - i - 1));
                let coef = f.mul(&t, h.get(m - i - 1, m - 1));
                pm = pm.sub(&p[m - i - 1].scale(&coef));
            }
            p.push(pm);
        }
        Ok(p.pop().unwrap())
    }

    /// Minimal polynomial: the first linear dependence among `I, M, M^2, ...`.
    pub fn min_poly(&self) -> Result<Poly<F>> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut powers: Vec<Vec<F::Elem>> = vec![Self::identity(f, n).data];
        let mut current = Self::identity(f, n);
        loop {
            current = current.mm(self);
            let k = powers.len();
            // Columns are vectorized powers I, M, ..., M^k.
            let mut sys = Self::zeros(f, n * n, k + 1);
            for (c, pw) in powers.iter().chain(std::iter::once(&current.data)).enumerate() {
                for (r, v) in pw.iter().enumerate() {
                    sys.set(r, c, v.clone());
                }
            }
            let ns = sys.nullspace();
            if let Some(v) = ns.first() {
                let poly = Poly::new(f, v.clone());
                return Ok(poly.monic());
            }
            powers.push(current.data.clone());
        }
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly<F>) -> Result<Self> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut acc = Self::zeros(f, n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mm(self);
            for i in 0..n {
                let idx = i * n + i;
                acc.data[idx] = f.add(&acc.data[idx], c);
            }
        }
        Ok(acc)
    }

    /// `self * v` for a column vector given as a slice.
    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    /// Solve `self * x = b` for one particular solution.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (r, v) in b.iter().enumerate() {
            aug.set(r, self.cols, v.clone());
        }
        let rr = aug.rref();
        if rr.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &pc) in rr.pivots.iter().enumerate() {
            x[pc] = rr.reduced.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn format(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let cells: Vec<String> = self.row(r).iter().map(|e| self.field.format_elem(e)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }

    /// One row per line, for multi-line reports.
    pub fn format_rows(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| {
                let cells: Vec<String> = self.row(r).iter().map(|e| self.field.format_elem(e)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect()
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.write_str(&self.format())
    }
}

/// Vectors as columns of a matrix.
pub fn columns_to_matrix<F: Field>(field: &F, n: usize, cols: &[Vec<F::Elem>]) -> Matrix<F> {
    let mut m = Matrix::zeros(field, n, cols.len());
    for (c, v) in cols.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            m.set(r, c, x.clone());
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Jordan canonical form

/// Jordan data with a certified conjugator: `conjugator * M * conjugator^-1 = jcf`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanForm<F: Field> {
    pub eigenvalues: Vec<F::Elem>,
    /// Block sizes per eigenvalue, decreasing.
    pub blocks: Vec<Vec<usize>>,
    pub conjugator: Matrix<F>,
    pub jcf: Matrix<F>,
}

impl<F: Field> JordanForm<F> {
    /// Multiset of `(eigenvalue index, block size)`.
    pub fn block_multiset(&self) -> Vec<(usize, usize)> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(i, bs)| bs.iter().map(move |&b| (i, b)))
            .collect()
    }
}

/// The Jordan block `J_n(lambda)` (ones on the superdiagonal).
pub fn jordan_block<F: Field>(field: &F, lambda: &F::Elem, n: usize) -> Matrix<F> {
    let mut m = Matrix::scalar(field, n, lambda.clone());
    for i in 0..n.saturating_sub(1) {
        m.set(i, i + 1, field.one());
    }
    m
}

/// Block-diagonal Jordan matrix from `(eigenvalue, size)` pairs in order.
pub fn jordan_matrix<F: Field>(field: &F, blocks: &[(F::Elem, usize)]) -> Matrix<F> {
    let bs: Vec<Matrix<F>> = blocks.iter().map(|(l, n)| jordan_block(field, l, *n)).collect();
    Matrix::block_diagonal(field, &bs)
}

/// Distinct diagonal entries in order of first appearance.
pub fn diagonal_eigenvalues<F: Field>(m: &Matrix<F>) -> Vec<F::Elem> {
    let mut out: Vec<F::Elem> = Vec::new();
    for i in 0..m.rows().min(m.cols()) {
        let d = m.get(i, i);
        if !out.contains(d) {
            out.push(d.clone());
        }
    }
    out
}

/// Jordan canonical form with eigenvalues taken from `eigenvalues` (or from
/// the diagonal when `m` is upper triangular and `eigenvalues` is `None`).
///
/// Eigenvalues are processed in the given order; within one eigenvalue,
/// chains are built from the highest nilpotency index downward by extending
/// a basis of `ker N^(k-1)` (plus the images of longer chains) with basis
/// vectors of `ker N^k` taken leftmost-pivot first.
pub fn jcf<F: Field>(m: &Matrix<F>, eigenvalues: Option<&[F::Elem]>) -> Result<JordanForm<F>> {
    let n = m.require_square()?;
    let f = m.field().clone();
    let eigs: Vec<F::Elem> = match eigenvalues {
        Some(e) => e.to_vec(),
        None => {
            if let Some((r, c)) = m.lower_witness() {
                return Err(Error::BadEigenvalueList(format!(
                    "no eigenvalues supplied and matrix is not upper triangular (entry ({r}, {c}))"
                )));
            }
            diagonal_eigenvalues(m)
        }
    };
    for (i, a) in eigs.iter().enumerate() {
        if eigs[..i].contains(a) {
            return Err(Error::BadEigenvalueList(format!("repeated eigenvalue {}", f.format_elem(a))));
        }
    }
    // Algebraic multiplicities from the characteristic polynomial.
    let mut rest = m.charpoly()?;
    let mut mults = Vec::with_capacity(eigs.len());
    for e in &eigs {
        let lin = Poly::linear(&f, e);
        let mut k = 0;
        while let Some(q) = rest.exact_div(&lin) {
            rest = q;
            k += 1;
        }
        if k == 0 {
            return Err(Error::BadEigenvalueList(format!("{} is not an eigenvalue", f.format_elem(e))));
        }
        mults.push(k);
    }
    if rest.degree() != Some(0) {
        return Err(Error::DoesNotSplit(format!("leftover factor {}", rest)));
    }

    let mut columns: Vec<Vec<F::Elem>> = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(eigs.len());
    let mut layout = Vec::new();
    for (e, &mult) in eigs.iter().zip(&mults) {
        let nmat = m.sub(&Matrix::scalar(&f, n, e.clone()))?;
        // Kernels of N^k until the generalized eigenspace is reached.
        let mut kernels: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new()];
        let mut power = Matrix::identity(&f, n);
        while kernels.last().unwrap().len() < mult {
            power = power.mm(&nmat);
            kernels.push(power.nullspace());
        }
        let top = kernels.len() - 1;
        let mut chains: Vec<(Vec<F::Elem>, usize)> = Vec::new();
        for k in (1..=top).rev() {
            let mut span: Vec<Vec<F::Elem>> = kernels[k - 1].clone();
            for (w, len) in &chains {
                // N^(len-k) w sits in ker N^k \ ker N^(k-1).
                let mut v = w.clone();
                for _ in 0..(len - k) {
                    v = nmat.apply(&v);
                }
                span.push(v);
            }
            let mut rank = columns_to_matrix(&f, n, &span).rank();
            for v in &kernels[k] {
                span.push(v.clone());
                let r = columns_to_matrix(&f, n, &span).rank();
                if r > rank {
                    rank = r;
                    chains.push((v.clone(), k));
                } else {
                    span.pop();
                }
            }
        }
        let mut sizes = Vec::new();
        for (w, len) in &chains {
            let mut chain = vec![w.clone()];
            for _ in 1..*len {
                let next = nmat.apply(chain.last().unwrap());
                chain.push(next);
            }
            chain.reverse();
            columns.extend(chain);
            sizes.push(*len);
            layout.push((e.clone(), *len));
        }
        blocks.push(sizes);
    }
    let s = columns_to_matrix(&f, n, &columns);
    let conjugator = s
        .inverse()
        .ok_or_else(|| Error::DoesNotSplit("generalized eigenvectors do not span".into()))?;
    let jcf = jordan_matrix(&f, &layout);
    let check = conjugator.mm(m).mm(&s);
    assert_eq!(check, jcf, "Jordan conjugator certificate failed");
    Ok(JordanForm { eigenvalues: eigs, blocks, conjugator, jcf })
}

/// Block sizes (decreasing) of the single-eigenvalue matrix `m` at `lambda`,
/// from the ranks of `(m - lambda)^k`.
pub fn jordan_block_sizes<F: Field>(m: &Matrix<F>, lambda: &F::Elem) -> Result<Vec<usize>> {
    let n = m.require_square()?;
    let f = m.field();
    let nmat = m.sub(&Matrix::scalar(f, n, lambda.clone()))?;
    // nullities d_k of N^k; number of blocks of size >= k is d_k - d_{k-1}.
    let mut d = vec![0usize];
    let mut power = Matrix::identity(f, n);
    loop {
        power = power.mm(&nmat);
        let nk = power.nullity();
        if nk == *d.last().unwrap() {
            break;
        }
        d.push(nk);
        if nk == n {
            break;
        }
    }
    let at_least: Vec<usize> = (1..d.len()).map(|k| d[k] - d[k - 1]).collect();
    let mut sizes = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat(k).take(exactly));
    }
    Ok(sizes)
}

// ---------------------------------------------------------------------------
// Similarity

/// Default number of random combinations tried by [`similarity_solve`].
pub const SIMILARITY_RANDOM_TRIES: usize = 64;

/// Search for an invertible `P` with `P * a1 = a2 * P`.
///
/// `Ok(None)` means provably not similar (an invariant differs);
/// [`Error::SimilarityUndecided`] means the bounded search found no
/// invertible element in the solution space.
pub fn similarity_solve<F: Field>(a1: &Matrix<F>, a2: &Matrix<F>, seed: u64) -> Result<Option<Matrix<F>>> {
    let n = a1.require_square()?;
    a1.same_shape(a2)?;
    let f = a1.field().clone();
    if a1 == a2 {
        return Ok(Some(Matrix::identity(&f, n)));
    }
    let cp = a1.charpoly()?;
    if cp != a2.charpoly()? {
        return Ok(None);
    }
    // Rank profiles of h(A)^k for the square-free pieces h of the charpoly.
    for (h, _) in cp.squarefree_decomposition()? {
        let (mut p1, mut p2) = (a1.eval_poly(&h)?, a2.eval_poly(&h)?);
        let (h1, h2) = (p1.clone(), p2.clone());
        for _ in 0..n {
            if p1.rank() != p2.rank() {
                return Ok(None);
            }
            p1 = p1.mm(&h1);
            p2 = p2.mm(&h2);
        }
    }
    // X -> X a1 - a2 X on vec(X), index (r, c) -> r * n + c.
    let nn = n * n;
    let mut sys = Matrix::zeros(&f, nn, nn);
    for r in 0..n {
        for c in 0..n {
            let row = r * n + c;
            for k in 0..n {
                // (X a1)_{rc} = sum_k X_{rk} a1_{kc}
                let idx = r * n + k;
                let v = f.add(sys.get(row, idx), a1.get(k, c));
                sys.set(row, idx, v);
                // (a2 X)_{rc} = sum_k a2_{rk} X_{kc}
                let idx = k * n + c;
                let v = f.sub(sys.get(row, idx), a2.get(r, k));
                sys.set(row, idx, v);
            }
        }
    }
    let basis = sys.nullspace();
    let as_matrix = |v: &[F::Elem]| Matrix::from_vec(&f, n, n, v.to_vec());
    for v in &basis {
        let p = as_matrix(v);
        if p.is_invertible() {
            return Ok(Some(p));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SIMILARITY_RANDOM_TRIES {
        let mut v = vec![f.zero(); nn];
        for b in &basis {
            let c = f.from_int(rng.gen_range(-3..=3));
            for (x, y) in v.iter_mut().zip(b) {
                *x = f.add(x, &f.mul(&c, y));
            }
        }
        let p = as_matrix(&v);
        if p.is_invertible() {
            return Ok(Some(p));
        }
    }
    Err(Error::SimilarityUndecided { budget: basis.len() + SIMILARITY_RANDOM_TRIES })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rationals};

    const Q: Rationals = Rationals;

    fn m(rows: &[&[i64]]) -> Matrix<Rationals> {
        Matrix::from_ints(&Q, rows)
    }

    #[test]
    fn nullspace_edge_cases() {
        assert_eq!(Matrix::zeros(&Q, 3, 3).nullspace().len(), 3);
        assert!(Matrix::identity(&Q, 4).nullspace().is_empty());
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        let ns = m(&[&[1, 2], &[2, 4]]).nullspace();
        assert_eq!(ns, vec![vec![rat(-2), rat(1)]]);
    }

    #[test]
    fn rref_transform_reproduces_reduced_form() {
        let a = m(&[&[0, 2, 4], &[1, 1, 1], &[2, 4, 6]]);
        let rr = a.rref();
        assert_eq!(rr.transform.mm(&a), rr.reduced);
        assert_eq!(rr.rank, 2);
        assert_eq!(rr.pivots, vec![0, 1]);
    }

    #[test]
    fn charpoly_examples() {
        let d = m(&[&[3, 0], &[0, 5]]);
        assert_eq!(d.charpoly().unwrap(), Poly::from_ints(&Q, &[15, -8, 1]));
        let j = jordan_block(&Q, &rat(2), 3);
        assert_eq!(j.charpoly().unwrap(), Poly::linear(&Q, &rat(2)).pow(3));
        assert!(matches!(m(&[&[1, 2, 3]]).charpoly(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn charpoly_matches_cofactor_determinant_at_sample_points() {
        let a = m(&[&[1, 2, 0, -1], &[3, 0, 1, 1], &[0, -2, 5, 2], &[1, 1, 1, 0]]);
        let cp = a.charpoly().unwrap();
        for x in -3..=3 {
            let xi = Matrix::scalar(&Q, 4, rat(x)).sub(&a).unwrap();
            assert_eq!(cp.eval(&rat(x)), xi.det().unwrap());
        }
    }

    #[test]
    fn jcf_examples() {
        let l = rat(7);
        let j2 = jordan_block(&Q, &l, 2);
        let jf = jcf(&j2, None).unwrap();
        assert_eq!(jf.blocks, vec![vec![2]]);
        assert!(jf.conjugator.is_identity());

        let a = m(&[&[7, 0, 1], &[0, 7, 0], &[0, 0, 7]]);
        let jf = jcf(&a, None).unwrap();
        assert_eq!(jf.blocks, vec![vec![2, 1]]);

        let d = m(&[&[1, 0], &[0, 2]]);
        let jf = jcf(&d, None).unwrap();
        assert_eq!(jf.blocks, vec![vec![1], vec![1]]);
    }

    #[test]
    fn jcf_rejects_bad_eigenvalues() {
        let a = m(&[&[0, 1], &[2, 0]]);
        assert!(matches!(jcf(&a, Some(&[])), Err(Error::DoesNotSplit(_))));
        assert!(matches!(jcf(&a, Some(&[rat(1)])), Err(Error::BadEigenvalueList(_))));
        let d = m(&[&[1, 0], &[0, 2]]);
        assert!(matches!(jcf(&d, Some(&[rat(1), rat(1)])), Err(Error::BadEigenvalueList(_))));
    }

    #[test]
    fn similarity_examples() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert!(similarity_solve(&a, &a, 1).unwrap().unwrap().is_identity());
        let n = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(similarity_solve(&n, &Matrix::zeros(&Q, 2, 2), 1).unwrap(), None);
        let d = m(&[&[1, 0], &[0, 2]]);
        let swap = m(&[&[0, 1], &[1, 0]]);
        let d2 = swap.mm(&d).mm(&swap.inverse().unwrap());
        let p = similarity_solve(&d, &d2, 1).unwrap().unwrap();
        assert_eq!(p.mm(&d), d2.mm(&p));
        assert!(p.is_invertible());
    }

    #[test]
    fn jordan_block_sizes_from_ranks() {
        let j = jordan_matrix(&Q, &[(rat(1), 3), (rat(1), 1), (rat(1), 2)]);
        assert_eq!(jordan_block_sizes(&j, &rat(1)).unwrap(), vec![3, 2, 1]);
    }
}
