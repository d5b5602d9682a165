//! On-disk formats: field files, hom files, matrix files, basis files and hs
//! files. Each reader has a printer such that reading the printed text gives
//! back an equal value. Lines starting with `#` are comments.

use crate::bimod::MatrixHom;
use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::funcfield::FunctionField;
use crate::hs::{parse_hs, HigherDerivation};
use crate::linalg::Matrix;
use crate::numfield::NumberField;
use crate::parse::{blank_comments, parse_field_header_at, parse_matrix_at, parse_poly_list_at, split_header, FieldSpec};
use crate::poly::Poly;

/// `numberfield g: x^3 - 2` or `funcfield t`, with a degree cap for
/// number fields.
pub fn read_field(text: &str, max_degree: usize) -> Result<FieldSpec> {
    let text = blank_comments(text);
    let (off, header, body_off, body) = split_header(&text);
    if header.is_empty() {
        return Err(Error::parse(off, "empty field file"));
    }
    if let Some(pos) = body.find(|c: char| !c.is_whitespace()) {
        return Err(Error::parse(body_off + pos, "unexpected text after the field line"));
    }
    parse_field_header_at(header, off, max_degree)
}

pub fn write_field(f: &FieldSpec) -> String {
    format!("{}\n", f.header())
}

/// A homomorphism given by its generator image.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyHom {
    Number(MatrixHom<NumberField>),
    Function(MatrixHom<FunctionField>),
}

impl AnyHom {
    pub fn header(&self) -> String {
        match self {
            AnyHom::Number(h) => FieldSpec::Number(h.field().clone()).header(),
            AnyHom::Function(h) => FieldSpec::Function(h.field().clone()).header(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyHom::Number(h) => h.n(),
            AnyHom::Function(h) => h.n(),
        }
    }
}

/// Field header line followed by the generator image, e.g.
/// `numberfield g: x^3 - 2` then `[[0, -g], [g, -g]]`.
pub fn read_hom(text: &str, max_degree: usize) -> Result<AnyHom> {
    let text = blank_comments(text);
    let (off, header, body_off, body) = split_header(&text);
    if header.is_empty() {
        return Err(Error::parse(off, "empty hom file"));
    }
    Ok(match parse_field_header_at(header, off, max_degree)? {
        FieldSpec::Number(k) => AnyHom::Number(MatrixHom::new(parse_matrix_at(&k, body, body_off)?)?),
        FieldSpec::Function(f) => AnyHom::Function(MatrixHom::new(parse_matrix_at(&f, body, body_off)?)?),
    })
}

pub fn write_hom(h: &AnyHom) -> String {
    let m = match h {
        AnyHom::Number(h) => h.gen_image().format(),
        AnyHom::Function(h) => h.gen_image().format(),
    };
    format!("{}\n{}\n", h.header(), m)
}

/// A matrix over Q, a number field or Q(t).
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Rational(Matrix<Rationals>),
    Number(Matrix<NumberField>),
    Function(Matrix<FunctionField>),
}

/// A matrix with an optional field header line; without one the entries
/// are rationals.
pub fn read_matrix(text: &str, max_degree: usize) -> Result<AnyMatrix> {
    let text = blank_comments(text);
    let (off, header, body_off, body) = split_header(&text);
    if header.starts_with('[') || header.is_empty() {
        return Ok(AnyMatrix::Rational(parse_matrix_at(&Rationals, &text[off..], off)?));
    }
    Ok(match parse_field_header_at(header, off, max_degree)? {
        FieldSpec::Number(k) => AnyMatrix::Number(parse_matrix_at(&k, body, body_off)?),
        FieldSpec::Function(f) => AnyMatrix::Function(parse_matrix_at(&f, body, body_off)?),
    })
}

pub fn write_matrix(m: &AnyMatrix) -> String {
    match m {
        AnyMatrix::Rational(m) => format!("{}\n", m.format()),
        AnyMatrix::Number(m) => format!("{}\n{}\n", FieldSpec::Number(m.field().clone()).header(), m.format()),
        AnyMatrix::Function(m) => format!("{}\n{}\n", FieldSpec::Function(m.field().clone()).header(), m.format()),
    }
}

/// A basis of `K[X]/(g)` written as polynomials in `x` over `k`, e.g.
/// `[1, 1/2*g^2*x]`.
pub fn read_basis(k: &NumberField, text: &str) -> Result<Vec<Poly<NumberField>>> {
    let text = blank_comments(text);
    parse_poly_list_at(k, &text, "x", 0)
}

pub fn write_basis(basis: &[Poly<NumberField>]) -> String {
    let items: Vec<String> = basis.iter().map(|p| p.format_with("x")).collect();
    format!("[{}]\n", items.join(", "))
}

pub fn read_hs(text: &str) -> Result<HigherDerivation> {
    parse_hs(&blank_comments(text))
}

pub fn write_hs(d: &HigherDerivation) -> String {
    format!("{}\n", d.to_file_string())
}

/// Reject matrices above the configured size.
pub fn check_size(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::DegreeCap(format!("matrix size {n} exceeds the cap {cap}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let f = read_field("# comment\nnumberfield g: x^3 - 2\n", 8).unwrap();
        assert_eq!(read_field(&write_field(&f), 8).unwrap(), f);

        let h = read_hom("numberfield g: x^3 - 2\n[[0, -g], [g, -g]]\n", 8).unwrap();
        assert_eq!(read_hom(&write_hom(&h), 8).unwrap(), h);
        let h = read_hom("funcfield t\n[[t, 1], [0, t]]", 8).unwrap();
        assert_eq!(read_hom(&write_hom(&h), 8).unwrap(), h);

        for src in ["[[2,0,1],[0,2,0],[0,0,2]]", "funcfield t\n[[t, 1/t]]", "numberfield g: x^2 + 1\n[[g]]"] {
            let m = read_matrix(src, 8).unwrap();
            assert_eq!(read_matrix(&write_matrix(&m), 8).unwrap(), m);
        }

        let FieldSpec::Number(k) = f else { unreachable!() };
        let b = read_basis(&k, "[1, 1/2*g^2*x]").unwrap();
        assert_eq!(read_basis(&k, &write_basis(&b)).unwrap(), b);
    }

    #[test]
    fn offsets_point_into_the_file() {
        let e = read_hom("numberfield g: x^3 - 2\n[[0, -g], [g, -q]]\n", 8).unwrap_err();
        assert_eq!(e, Error::Parse { offset: 38, message: "unknown variable \"q\"".into() });
        assert!(read_field("numberfield g: x^9 - 2", 8).is_err());
        assert!(read_field("funcfield t\nextra", 8).unwrap_err().is_parse());
    }
}
