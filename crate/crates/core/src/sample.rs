//! Seeded random instances for property suites and examples.

use rand::Rng;

use crate::field::Field;
use crate::linalg::Matrix;

/// Per-instance seed from a master seed and an index (splitmix64 step).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn random_int_matrix<F: Field, R: Rng>(f: &F, rows: usize, cols: usize, bound: i64, rng: &mut R) -> Matrix<F> {
    let data = (0..rows * cols).map(|_| f.from_int(rng.gen_range(-bound..=bound))).collect();
    Matrix::from_vec(f, rows, cols, data)
}

/// Random invertible integer matrix (rejection sampling).
pub fn random_invertible<F: Field, R: Rng>(f: &F, n: usize, bound: i64, rng: &mut R) -> Matrix<F> {
    loop {
        let m = random_int_matrix(f, n, n, bound, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Upper triangular with ones on the diagonal and integer entries above.
pub fn random_unipotent_upper<F: Field, R: Rng>(f: &F, n: usize, bound: i64, rng: &mut R) -> Matrix<F> {
    random_upper_with(f, n, rng, |_| f.one(), |r| f.from_int(r.gen_range(-bound..=bound)))
}

/// Upper triangular with nonzero integer diagonal.
pub fn random_upper_invertible<F: Field, R: Rng>(f: &F, n: usize, bound: i64, rng: &mut R) -> Matrix<F> {
    random_upper_with(
        f,
        n,
        rng,
        |r| {
            let v = r.gen_range(1..=bound.max(1));
            f.from_int(if r.gen_bool(0.5) { v } else { -v })
        },
        |r| f.from_int(r.gen_range(-bound..=bound)),
    )
}

/// Upper triangular matrix with entries drawn from the two closures; the
/// diagonal closure must return nonzero values.
pub fn random_upper_with<F: Field, R: Rng>(
    f: &F,
    n: usize,
    rng: &mut R,
    mut diag: impl FnMut(&mut R) -> F::Elem,
    mut above: impl FnMut(&mut R) -> F::Elem,
) -> Matrix<F> {
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        m.set(i, i, diag(rng));
        for j in i + 1..n {
            m.set(i, j, above(rng));
        }
    }
    m
}

/// Random partition of `n` in decreasing order.
pub fn random_partition<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}
