//! Simple two-sided vector spaces over a few radical extensions.
//!
//! Run with `cargo run --example classify`.

use tsvs::bimod::classify;
use tsvs::numfield::NumberField;
use tsvs::RatPoly;

fn main() -> tsvs::Result<()> {
    for (name, coeffs) in [("Q(2^(1/3))", vec![-2, 0, 0, 1]), ("Q(2^(1/5))", vec![-2, 0, 0, 0, 0, 1]), ("Q(i)", vec![1, 0, 1])] {
        let k = NumberField::new(&RatPoly::ints(&coeffs), "g")?;
        let table = classify(&k)?;
        println!("{name}, f = {}", k.modulus());
        print!("{table}");
        println!("dimensions of the simples: {:?}\n", table.sizes());
    }
    Ok(())
}
