//! Matrices commuting with a Jordan matrix are built from upper triangular
//! Toeplitz cells.

use tsvs::canonical::{commutant_basis, commutant_shape_check};
use tsvs::field::rat;
use tsvs::linalg::jordan_matrix;
use tsvs::Rationals;

fn main() -> tsvs::Result<()> {
    let sizes = [3usize, 2, 1];
    let j = jordan_matrix(&Rationals, &sizes.map(|n| (rat(4), n)));
    let basis = commutant_basis(&j)?;
    let expected: usize = sizes.iter().flat_map(|&p| sizes.iter().map(move |&q| p.min(q))).sum();
    println!("J = {j}");
    println!("commutant dimension {} (sum of min(n_p, n_q) = {expected})", basis.len());
    let mut sum = basis[0].clone();
    for (i, b) in basis.iter().enumerate().skip(1) {
        sum = sum.add(&b.scale(&rat(i as i64 + 1)))?;
    }
    let (ok, _) = commutant_shape_check(&j, &sum)?;
    println!("a generic commuting matrix:");
    for row in sum.format_rows() {
        println!("  {row}");
    }
    println!("Toeplitz cell shape: {ok}");
    Ok(())
}
