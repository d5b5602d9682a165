//! Tensor squares of the nontrivial simples over Q(2^(1/p)) for p = 3, 5.

use tsvs::bimod::{classify, simple_from_orbit};
use tsvs::numfield::NumberField;
use tsvs::tensor::{decompose, kronecker_compose};
use tsvs::RatPoly;

fn main() -> tsvs::Result<()> {
    for p in [3usize, 5] {
        let mut coeffs = vec![0i64; p + 1];
        coeffs[0] = -2;
        coeffs[p] = 1;
        let k = NumberField::new(&RatPoly::ints(&coeffs), "g")?;
        let table = classify(&k)?;
        let s = simple_from_orbit(&table, 2, None)?;
        let sq = kronecker_compose(&s.hom, &s.hom)?;
        let d = decompose(&sq, &table)?;
        println!("p = {p}: V (x) V is {}x{}, decomposes as {d}", sq.n(), sq.n());
    }
    Ok(())
}
