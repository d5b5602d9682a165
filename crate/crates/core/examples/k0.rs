//! Grothendieck rings of two-sided vector spaces.

use tsvs::numfield::NumberField;
use tsvs::tensor::k0_presentation;
use tsvs::RatPoly;

fn main() -> tsvs::Result<()> {
    let fields: [(&str, &[i64]); 4] = [
        ("Q(2^(1/3))", &[-2, 0, 0, 1]),
        ("Q(2^(1/5))", &[-2, 0, 0, 0, 0, 1]),
        ("Q(sqrt 2)", &[-2, 0, 1]),
        ("Q(i)", &[1, 0, 1]),
    ];
    for (name, coeffs) in fields {
        let k = NumberField::new(&RatPoly::ints(coeffs), "g")?;
        let k0 = k0_presentation(&k)?;
        print!("{name}: {}", k0.ring_text());
        match k0.group_ring_text() {
            Some(g) => println!(" = {g}"),
            None => println!(),
        }
        for line in k0.relation_lines() {
            println!("    {line}");
        }
    }
    Ok(())
}
