//! Hasse derivatives of Q(t), their Toeplitz homs, products and the diag(x, 1)
//! similarity.

use tsvs::funcfield::{FunctionField, RatFunc};
use tsvs::hs::{hs_product, hs_product_truncated, parse_hs, scaled_derivation_similar, toeplitz_hom, HigherDerivation};
use tsvs::RatPoly;

fn main() -> tsvs::Result<()> {
    let f = FunctionField::default();
    let d = HigherDerivation::hasse(&f, 3);
    println!("d = {d}");
    let x = RatFunc::new(RatPoly::ints(&[1, 0, 0, 0, 1]), RatPoly::ints(&[-1, 1]))?;
    for (i, v) in d.eval_all(&x)?.iter().enumerate() {
        println!("  D{i}((t^4 + 1)/(t - 1)) = {v}");
    }
    let h = toeplitz_hom(&d)?;
    println!("phi(d)(t) = {}", h.gen_image());
    println!("phi(d) is a hom: {}", h.validate().is_ok());

    let e = parse_hs("hs over funcfield t: [D0; D1; t*D1 + D2]")?;
    println!("e = {e}, phi(e)(t) = {}", toeplitz_hom(&e)?.gen_image());

    let d1 = HigherDerivation::hasse(&f, 1);
    match hs_product(&d1, &d1) {
        Ok(p) => println!("d1 d1 = {p}"),
        Err(err) => println!("d1 d1 to order 2: {}: {err}", err.name()),
    }
    println!("d1 d1 truncated: {}", hs_product_truncated(&d1, &d1)?);

    let s = scaled_derivation_similar(&d1, &x)?;
    println!("conjugating by {} gives {}", s.conjugator, s.scaled);
    Ok(())
}
