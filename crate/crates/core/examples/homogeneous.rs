//! Block structure of a homogeneous hom over Q(t): triangularize, split into
//! Toeplitz blocks and read off the higher derivations.

use tsvs::bimod::MatrixHom;
use tsvs::canonical::homogeneous_structure;
use tsvs::funcfield::FunctionField;
use tsvs::hs::{toeplitz_hom, HigherDerivation};
use tsvs::linalg::Matrix;
use tsvs::parse::parse_matrix;

fn main() -> tsvs::Result<()> {
    let f = FunctionField::default();
    let d = HigherDerivation::hasse(&f, 2);
    let p = parse_matrix(&f, "[[1, 2, -1], [0, 3, 1], [0, 0, 1]]")?;
    let h = toeplitz_hom(&d)?.conjugate(&p)?;
    println!("h(t) = {}", h.gen_image());

    let a = MatrixHom::new(Matrix::scalar(&f, 1, f.t()))?;
    let form = homogeneous_structure(&h, &a)?;
    print!("{form}");

    let x = parse_matrix(&f, "[[(t^2 + 1)/t]]")?.get(0, 0).clone();
    let y = parse_matrix(&f, "[[t - 3]]")?.get(0, 0).clone();
    println!("cocycle relation at two points: {}", form.cocycle_holds(&x, &y)?);
    println!("blocks are phi(d_i): {}", form.fitted_blocks_match(&x)?);

    let h = MatrixHom::new(parse_matrix(&f, "[[t, 1, 0], [0, t, 0], [0, 0, t]]")?)?;
    println!();
    print!("{}", homogeneous_structure(&h, &a)?);
    Ok(())
}
