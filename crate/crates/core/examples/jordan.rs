//! Jordan forms: the general algorithm and the upper triangular conjugation
//! of Jordan-ordered matrices.

use tsvs::canonical::{is_jordan_ordered, jordan_order_conjugate};
use tsvs::linalg::{jcf, Matrix};
use tsvs::parse::parse_matrix;
use tsvs::Rationals;

fn main() -> tsvs::Result<()> {
    let a = parse_matrix(&Rationals, "[[2, 1, 3, 0], [0, 2, 1, 1], [0, 0, 2, 0], [0, 0, 0, 2]]")?;
    let j = jcf(&a, None)?;
    println!("A = {a}");
    println!("J = {}  blocks {:?}", j.jcf, j.blocks);

    println!("Jordan-ordered: {}", is_jordan_ordered(&a)?);
    let o = jordan_order_conjugate(&a)?;
    println!("P = {} (upper triangular: {})", o.conjugator, o.conjugator.is_upper_triangular());
    let p_inv = o.conjugator.inverse().expect("P is invertible");
    let check = o.conjugator.mul(&a)?.mul(&p_inv)?;
    println!("P A P^-1 = {check}");

    let bad: Matrix<Rationals> = parse_matrix(&Rationals, "[[2, 0, 1], [0, 2, 0], [0, 0, 2]]")?;
    match jordan_order_conjugate(&bad) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("{bad}: {}: {e}", e.name()),
    }
    Ok(())
}
