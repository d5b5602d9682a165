//! The 2-dimensional simple over Q(2^(1/3)) in two bases of K[X]/(g).

use tsvs::bimod::{classify, simple_from_orbit};
use tsvs::field::Field;
use tsvs::files::read_basis;
use tsvs::numfield::NumberField;
use tsvs::RatPoly;

fn main() -> tsvs::Result<()> {
    let k = NumberField::new(&RatPoly::ints(&[-2, 0, 0, 1]), "g")?;
    let table = classify(&k)?;

    // zeta = g^2 X / 2 is a primitive cube root of unity
    let s = simple_from_orbit(&table, 2, Some(read_basis(&k, "[1, 1/2*g^2*x]")?))?;
    let g = k.gen();
    println!("phi(g)   = {}", s.hom.eval(&g)?);
    println!("phi(g^2) = {}", s.hom.eval(&k.mul(&g, &g))?);

    // sqrt(-3) = 1 + g^2 X
    let s = simple_from_orbit(&table, 2, Some(read_basis(&k, "[1, 1 + g^2*x]")?))?;
    println!("basis {{1, sqrt(-3)}}: phi(g) = {}", s.hom.gen_image());
    let x = k.elem_ints(&[1, 2, 3]);
    println!("phi(1 + 2g + 3g^2) = {}", s.hom.eval(&x)?);
    Ok(())
}
