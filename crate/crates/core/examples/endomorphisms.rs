//! End(V) of the 2-dimensional simple over Q(2^(1/3)) is a copy of Q(2^(1/3), zeta).

use tsvs::bimod::{classify, endomorphism_basis, simple_from_orbit};
use tsvs::field::Field;
use tsvs::files::read_basis;
use tsvs::linalg::Matrix;
use tsvs::numfield::NumberField;
use tsvs::RatPoly;

fn main() -> tsvs::Result<()> {
    let k = NumberField::new(&RatPoly::ints(&[-2, 0, 0, 1]), "g")?;
    let table = classify(&k)?;
    let s = simple_from_orbit(&table, 2, Some(read_basis(&k, "[1, 1/2*g^2*x]")?))?;
    let basis = endomorphism_basis(&s);
    for (i, m) in basis.iter().enumerate() {
        println!("M({}) = {m}", i + 1);
    }
    let a = s.hom.gen_image();
    let commute = basis.iter().all(|m| m.mul(a).ok() == a.mul(m).ok());
    println!("commutes with phi(g): {commute}");
    let m2 = &basis[1];
    let rel = m2.mul(m2)?.add(m2)?.add(&Matrix::identity(&k, 2))?;
    println!("M(2)^2 + M(2) + I = {rel}");
    println!("M(2) has min poly {}", m2.min_poly()?);
    let _ = k.one();
    Ok(())
}
