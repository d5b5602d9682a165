//! Text syntax for polynomials, field elements, matrices and operators.
//!
//! Expressions use `+ - * / ^`, parentheses and integer literals; `/`
//! between integers gives rationals. Errors report a byte offset into the
//! input.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::funcfield::{DiffOperator, FunctionField, RatFunc};
use crate::linalg::Matrix;
use crate::numfield::NumberField;
use crate::poly::{Poly, RatPoly};
use crate::field::Rationals;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

pub(crate) fn tokenize(s: &str, base: usize) -> Result<Vec<Token>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = s[start..i].parse().expect("digits");
            out.push(Token { tok: Tok::Num(n), offset: base + start });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(s[start..i].to_string()), offset: base + start });
        } else if b"+-*/^()[],;:".contains(&c) {
            out.push(Token { tok: Tok::Sym(c as char), offset: base + i });
            i += 1;
        } else {
            let ch = s[i..].chars().next().unwrap();
            return Err(Error::parse(base + i, format!("unexpected character {ch:?}")));
        }
    }
    Ok(out)
}

/// What an expression evaluates into.
pub(crate) trait Target {
    type V: Clone;
    fn number(&self, q: Rational) -> Self::V;
    fn ident(&self, name: &str, offset: usize) -> Result<Self::V>;
    fn add(&self, a: Self::V, b: Self::V, offset: usize) -> Result<Self::V>;
    fn neg(&self, a: Self::V) -> Self::V;
    fn mul(&self, a: Self::V, b: Self::V, offset: usize) -> Result<Self::V>;
    fn div(&self, a: Self::V, b: Self::V, offset: usize) -> Result<Self::V>;
    /// `name(arg)`; no functions unless a target defines them.
    fn call(&self, name: &str, _arg: Self::V, offset: usize) -> Result<Self::V> {
        Err(Error::parse(offset, format!("unknown function {name:?}")))
    }
    fn one(&self) -> Self::V {
        self.number(Rational::from_integer(1.into()))
    }
}

pub(crate) struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token], end: usize) -> Self {
        Parser { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.offset)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.offset(), format!("expected '{c}'")))
        }
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(Error::parse(self.offset(), "unexpected trailing input"))
        }
    }

    pub fn ident(&mut self) -> Option<String> {
        if let Some(Tok::Ident(s)) = self.peek() {
            let s = s.clone();
            self.pos += 1;
            Some(s)
        } else {
            None
        }
    }

    pub fn expr<T: Target>(&mut self, t: &T) -> Result<T::V> {
        let mut acc = self.term(t)?;
        loop {
            let off = self.offset();
            if self.eat('+') {
                let rhs = self.term(t)?;
                acc = t.add(acc, rhs, off)?;
            } else if self.eat('-') {
                let rhs = self.term(t)?;
                acc = t.add(acc, t.neg(rhs), off)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<T: Target>(&mut self, t: &T) -> Result<T::V> {
        let mut acc = self.unary(t)?;
        loop {
            let off = self.offset();
            if self.eat('*') {
                let rhs = self.unary(t)?;
                acc = t.mul(acc, rhs, off)?;
            } else if self.eat('/') {
                let rhs = self.unary(t)?;
                acc = t.div(acc, rhs, off)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<T: Target>(&mut self, t: &T) -> Result<T::V> {
        if self.eat('-') {
            let v = self.unary(t)?;
            return Ok(t.neg(v));
        }
        if self.eat('+') {
            return self.unary(t);
        }
        self.power(t)
    }

    fn power<T: Target>(&mut self, t: &T) -> Result<T::V> {
        let base = self.atom(t)?;
        let off = self.offset();
        if !self.eat('^') {
            return Ok(base);
        }
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Err(Error::parse(self.offset(), "expected a nonnegative integer exponent"));
        };
        self.pos += 1;
        let e: u32 = n
            .try_into()
            .map_err(|_| Error::parse(off, "exponent too large"))?;
        let mut acc = t.one();
        let mut b = base;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = t.mul(acc, b.clone(), off)?;
            }
            e >>= 1;
            if e > 0 {
                b = t.mul(b.clone(), b, off)?;
            }
        }
        Ok(acc)
    }

    fn atom<T: Target>(&mut self, t: &T) -> Result<T::V> {
        let off = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(t.number(Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let arg = self.expr(t)?;
                    self.expect(')')?;
                    return t.call(&name, arg, off);
                }
                t.ident(&name, off)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr(t)?;
                self.expect(')')?;
                Ok(v)
            }
            Some(_) => Err(Error::parse(off, "expected a number, a variable or '('")),
            None => Err(Error::parse(off, "unexpected end of input")),
        }
    }
}

// ---------------------------------------------------------------------------
// Targets

/// Elements of a field, with its generator as the only variable.
struct ElemTarget<'a, F: Field> {
    field: &'a F,
}

impl<F: Field> Target for ElemTarget<'_, F> {
    type V = F::Elem;
    fn number(&self, q: Rational) -> F::Elem {
        self.field.from_rational(&q)
    }
    fn ident(&self, name: &str, offset: usize) -> Result<F::Elem> {
        if self.field.has_generator() && name == self.field.generator_name() {
            Ok(self.field.generator())
        } else {
            Err(Error::parse(offset, format!("unknown variable {name:?}")))
        }
    }
    fn add(&self, a: F::Elem, b: F::Elem, _: usize) -> Result<F::Elem> {
        Ok(self.field.add(&a, &b))
    }
    fn neg(&self, a: F::Elem) -> F::Elem {
        self.field.neg(&a)
    }
    fn mul(&self, a: F::Elem, b: F::Elem, _: usize) -> Result<F::Elem> {
        Ok(self.field.mul(&a, &b))
    }
    fn div(&self, a: F::Elem, b: F::Elem, _: usize) -> Result<F::Elem> {
        self.field.div(&a, &b).ok_or(Error::DivisionByZero)
    }
}

/// Polynomials over a field in `var`; the field generator (if any) may
/// appear in coefficients.
struct PolyTarget<'a, F: Field> {
    field: &'a F,
    var: &'a str,
}

impl<F: Field> Target for PolyTarget<'_, F> {
    type V = Poly<F>;
    fn number(&self, q: Rational) -> Poly<F> {
        Poly::constant(self.field, self.field.from_rational(&q))
    }
    fn ident(&self, name: &str, offset: usize) -> Result<Poly<F>> {
        if name == self.var {
            Ok(Poly::x(self.field))
        } else if self.field.has_generator() && name == self.field.generator_name() {
            Ok(Poly::constant(self.field, self.field.generator()))
        } else {
            Err(Error::parse(offset, format!("unknown variable {name:?}")))
        }
    }
    fn add(&self, a: Poly<F>, b: Poly<F>, _: usize) -> Result<Poly<F>> {
        Ok(a.add(&b))
    }
    fn neg(&self, a: Poly<F>) -> Poly<F> {
        a.neg()
    }
    fn mul(&self, a: Poly<F>, b: Poly<F>, _: usize) -> Result<Poly<F>> {
        Ok(a.mul(&b))
    }
    fn div(&self, a: Poly<F>, b: Poly<F>, offset: usize) -> Result<Poly<F>> {
        if !b.is_constant() {
            return Err(Error::parse(offset, "division by a non-constant polynomial"));
        }
        let inv = self.field.inv(&b.coeff(0)).ok_or(Error::DivisionByZero)?;
        Ok(a.scale(&inv))
    }
}

/// Operator expressions `sum c_j(t) D_j`.
#[derive(Clone)]
enum OpVal {
    Scalar(RatFunc),
    Op(DiffOperator),
}

struct OpTarget<'a> {
    field: &'a FunctionField,
}

impl OpTarget<'_> {
    fn as_op(v: OpVal) -> DiffOperator {
        match v {
            OpVal::Op(o) => o,
            OpVal::Scalar(c) => DiffOperator::term(c, 0),
        }
    }
}

impl Target for OpTarget<'_> {
    type V = OpVal;
    fn number(&self, q: Rational) -> OpVal {
        OpVal::Scalar(RatFunc::constant(q))
    }
    fn ident(&self, name: &str, offset: usize) -> Result<OpVal> {
        if name == self.field.name() {
            return Ok(OpVal::Scalar(self.field.t()));
        }
        if let Some(j) = name.strip_prefix('D').and_then(|d| d.parse::<usize>().ok()) {
            return Ok(OpVal::Op(DiffOperator::hasse(j)));
        }
        Err(Error::parse(offset, format!("unknown symbol {name:?}")))
    }
    fn add(&self, a: OpVal, b: OpVal, _: usize) -> Result<OpVal> {
        Ok(match (a, b) {
            (OpVal::Scalar(x), OpVal::Scalar(y)) => OpVal::Scalar(x.add(&y)),
            (a, b) => OpVal::Op(Self::as_op(a).add(&Self::as_op(b))),
        })
    }
    fn neg(&self, a: OpVal) -> OpVal {
        match a {
            OpVal::Scalar(x) => OpVal::Scalar(x.neg()),
            OpVal::Op(o) => OpVal::Op(o.scale(&RatFunc::from(-1))),
        }
    }
    fn mul(&self, a: OpVal, b: OpVal, _: usize) -> Result<OpVal> {
        Ok(match (a, b) {
            (OpVal::Scalar(x), OpVal::Scalar(y)) => OpVal::Scalar(x.mul(&y)),
            (OpVal::Scalar(c), OpVal::Op(o)) => OpVal::Op(o.scale(&c)),
            // Operator products are compositions.
            (a, b) => OpVal::Op(Self::as_op(a).compose(&Self::as_op(b))),
        })
    }
    fn div(&self, a: OpVal, b: OpVal, offset: usize) -> Result<OpVal> {
        let OpVal::Scalar(d) = b else {
            return Err(Error::parse(offset, "cannot divide by an operator"));
        };
        let inv = d.inv().ok_or(Error::DivisionByZero)?;
        Ok(match a {
            OpVal::Scalar(x) => OpVal::Scalar(x.mul(&inv)),
            OpVal::Op(o) => OpVal::Op(o.scale(&inv)),
        })
    }
}

// ---------------------------------------------------------------------------
// Public entry points

fn parse_whole<T: Target>(s: &str, t: &T) -> Result<T::V> {
    let toks = tokenize(s, 0)?;
    let mut p = Parser::new(&toks, s.len());
    let v = p.expr(t)?;
    p.expect_end()?;
    Ok(v)
}

/// A polynomial over Q in `x`, e.g. `1/2*x^2 + x - 3/4`.
pub fn parse_ratpoly(s: &str) -> Result<RatPoly> {
    parse_poly(&Rationals, s, "x")
}

/// A polynomial over `field` in `var`.
pub fn parse_poly<F: Field>(field: &F, s: &str, var: &str) -> Result<Poly<F>> {
    parse_whole(s, &PolyTarget { field, var })
}

/// A field element written in the field's generator, e.g. `1/2*g^2 + 1`
/// or `(t^2+1)/(t-1)`.
pub fn parse_elem<F: Field>(field: &F, s: &str) -> Result<F::Elem> {
    parse_whole(s, &ElemTarget { field })
}

/// A differential operator such as `t*D1 + 2*D2`.
pub fn parse_operator(field: &FunctionField, s: &str) -> Result<DiffOperator> {
    parse_whole(s, &OpTarget { field }).map(OpTarget::as_op)
}

/// A matrix `[[a, b], [c, d]]` with entries in `field`'s element syntax.
pub fn parse_matrix<F: Field>(field: &F, s: &str) -> Result<Matrix<F>> {
    parse_matrix_at(field, s, 0)
}

pub(crate) fn parse_matrix_at<F: Field>(field: &F, s: &str, base: usize) -> Result<Matrix<F>> {
    let toks = tokenize(s, base)?;
    let mut p = Parser::new(&toks, base + s.len());
    let t = ElemTarget { field };
    let start = p.offset();
    p.expect('[')?;
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    loop {
        let row_off = p.offset();
        p.expect('[')?;
        let mut row = Vec::new();
        loop {
            row.push(p.expr(&t)?);
            if p.eat(',') {
                continue;
            }
            p.expect(']')?;
            break;
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::parse(row_off, "rows have different lengths"));
            }
        }
        rows.push(row);
        if p.eat(',') {
            continue;
        }
        p.expect(']')?;
        break;
    }
    p.expect_end()?;
    if rows.is_empty() {
        return Err(Error::parse(start, "empty matrix"));
    }
    Matrix::from_rows(field, rows)
}

/// A bracketed list `[a, b, ...]` of polynomials over `field` in `var`.
pub fn parse_poly_list<F: Field>(field: &F, s: &str, var: &str) -> Result<Vec<Poly<F>>> {
    parse_poly_list_at(field, s, var, 0)
}

pub(crate) fn parse_poly_list_at<F: Field>(field: &F, s: &str, var: &str, base: usize) -> Result<Vec<Poly<F>>> {
    let toks = tokenize(s, base)?;
    let mut p = Parser::new(&toks, base + s.len());
    let t = PolyTarget { field, var };
    p.expect('[')?;
    let mut out = Vec::new();
    if !p.eat(']') {
        loop {
            out.push(p.expr(&t)?);
            if p.eat(',') {
                continue;
            }
            p.expect(']')?;
            break;
        }
    }
    p.expect_end()?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Field headers

/// A parsed field header line.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldSpec {
    Number(NumberField),
    Function(FunctionField),
}

impl FieldSpec {
    /// The header line, e.g. `numberfield g: x^3 - 2`.
    pub fn header(&self) -> String {
        match self {
            FieldSpec::Number(k) => format!("numberfield {}: {}", k.name(), k.modulus()),
            FieldSpec::Function(f) => format!("funcfield {}", f.name()),
        }
    }
}

/// Parse `numberfield g: x^3 - 2` or `funcfield t`. `base` is the byte
/// offset of `s` within its file.
pub fn parse_field_header(s: &str) -> Result<FieldSpec> {
    parse_field_header_at(s, 0, usize::MAX)
}

pub(crate) fn parse_field_header_at(s: &str, base: usize, max_degree: usize) -> Result<FieldSpec> {
    let toks = tokenize(s, base)?;
    let mut p = Parser::new(&toks, base + s.len());
    let off = p.offset();
    match p.ident().as_deref() {
        Some("numberfield") => {
            let name_off = p.offset();
            let name = p.ident().ok_or_else(|| Error::parse(name_off, "expected a generator name"))?;
            if name == "x" {
                return Err(Error::parse(name_off, "the generator cannot be called x"));
            }
            p.expect(':')?;
            let t = PolyTarget { field: &Rationals, var: "x" };
            let f = p.expr(&t)?;
            p.expect_end()?;
            let cap = if max_degree == usize::MAX { crate::numfield::MAX_FIELD_DEGREE } else { max_degree };
            Ok(FieldSpec::Number(NumberField::with_cap(&f, &name, cap)?))
        }
        Some("funcfield") => {
            let name_off = p.offset();
            let name = p.ident().ok_or_else(|| Error::parse(name_off, "expected a variable name"))?;
            if name.starts_with('D') && name[1..].chars().all(|c| c.is_ascii_digit()) {
                return Err(Error::parse(name_off, "variable name clashes with operator syntax"));
            }
            p.expect_end()?;
            Ok(FieldSpec::Function(FunctionField::new(&name)))
        }
        _ => Err(Error::parse(off, "expected 'numberfield' or 'funcfield'")),
    }
}

/// Split file text into its first non-empty line (with byte offset) and the
/// remainder (with byte offset).
pub(crate) fn split_header(text: &str) -> (usize, &str, usize, &str) {
    let mut off = 0;
    for line in text.split_inclusive('\n') {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            off += line.len();
            continue;
        }
        let body_off = off + line.len();
        let lead = line.len() - line.trim_start().len();
        return (off + lead, line.trim(), body_off, &text[body_off..]);
    }
    (text.len(), "", text.len(), "")
}

/// Strip `#` comment lines, keeping byte offsets intact by blanking them.
pub(crate) fn blank_comments(text: &str) -> String {
    text.split_inclusive('\n')
        .map(|line| {
            if line.trim_start().starts_with('#') {
                line.chars().map(|c| if c == '\n' { '\n' } else { ' ' }).collect()
            } else {
                line.to_string()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn polynomials() {
        assert_eq!(parse_ratpoly("x^3 - 2").unwrap(), RatPoly::ints(&[-2, 0, 0, 1]));
        let p = parse_ratpoly(" 1/2*x^2+x -3/4").unwrap();
        assert_eq!(p, RatPoly::from_rationals(vec![ratio(-3, 4), rat(1), ratio(1, 2)]));
        assert_eq!(p.to_string(), "1/2*x^2 + x - 3/4");
        assert_eq!(parse_ratpoly("(x-1)*(x+1)").unwrap(), RatPoly::ints(&[-1, 0, 1]));
        assert_eq!(parse_ratpoly("-x^2").unwrap(), RatPoly::ints(&[0, 0, -1]));
    }

    #[test]
    fn errors_report_offsets() {
        assert_eq!(parse_ratpoly("x^3 - $"), Err(Error::parse(6, "unexpected character '$'")));
        assert!(matches!(parse_ratpoly("x + y"), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(parse_ratpoly("x +"), Err(Error::Parse { offset: 3, .. })));
        assert!(matches!(parse_ratpoly("x / x"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_ratpoly("(x"), Err(Error::Parse { offset: 2, .. })));
    }

    #[test]
    fn field_headers_and_elements() {
        let FieldSpec::Number(k) = parse_field_header("numberfield g: x^3 - 2").unwrap() else {
            panic!("number field expected");
        };
        assert_eq!(k.degree(), 3);
        let e = parse_elem(&k, "1/2*g^2 + 1").unwrap();
        assert_eq!(e, k.elem(vec![rat(1), rat(0), ratio(1, 2)]));
        assert_eq!(parse_elem(&k, "g^3").unwrap(), k.from_int(2));
        assert_eq!(parse_elem(&k, "1/g").unwrap(), k.elem(vec![rat(0), rat(0), ratio(1, 2)]));
        assert!(matches!(parse_field_header("numberfield g: x^2 - 1"), Err(Error::NotIrreducible(_))));
        assert!(matches!(parse_field_header("field t"), Err(Error::Parse { offset: 0, .. })));
        let FieldSpec::Function(f) = parse_field_header("funcfield t").unwrap() else {
            panic!("function field expected");
        };
        let r = parse_elem(&f, "(t^2+1)/(t-1)").unwrap();
        assert_eq!(r.to_string(), "(t^2 + 1)/(t - 1)");
    }

    #[test]
    fn matrices() {
        let FieldSpec::Number(k) = parse_field_header("numberfield g: x^3 - 2").unwrap() else {
            unreachable!()
        };
        let m = parse_matrix(&k, "[[0, -g], [g, -g]]").unwrap();
        assert_eq!(m.format(), "[[0, -g], [g, -g]]");
        assert!(matches!(parse_matrix(&k, "[[0, 1], [1]]"), Err(Error::Parse { offset: 9, .. })));
    }

    #[test]
    fn operators() {
        let f = FunctionField::default();
        let op = parse_operator(&f, "t*D1 + 2*D2").unwrap();
        assert_eq!(op.to_string(), "t*D1 + 2*D2");
        assert_eq!(parse_operator(&f, "D0").unwrap(), DiffOperator::hasse(0));
        // D1*D1 = 2 D2
        assert_eq!(parse_operator(&f, "D1*D1").unwrap(), DiffOperator::term(RatFunc::from(2), 2));
    }

    proptest! {
        #[test]
        fn ratpoly_print_parse_round_trip(cs in proptest::collection::vec((-20i64..20, 1i64..6), 0..7)) {
            let p = RatPoly::from_rationals(cs.iter().map(|&(n, d)| ratio(n, d)).collect());
            prop_assert_eq!(parse_ratpoly(&p.to_string()).unwrap(), p);
        }

        #[test]
        fn ratfunc_print_parse_round_trip(
            n in proptest::collection::vec(-9i64..9, 1..4),
            d in proptest::collection::vec(-9i64..9, 1..4),
        ) {
            prop_assume!(d.iter().any(|&c| c != 0));
            let f = FunctionField::default();
            let x = RatFunc::new(RatPoly::ints(&n), RatPoly::ints(&d)).unwrap();
            prop_assert_eq!(parse_elem(&f, &f.format_elem(&x)).unwrap(), x);
        }
    }
}
