//! Kronecker composition of homs, decomposition into simples, and the
//! Grothendieck ring presentation.

use std::fmt;

use rayon::prelude::*;

use crate::bimod::{classify, simple_from_orbit, HomField, MatrixHom, OrbitTable};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::numfield::NumberField;
use crate::poly::RatPoly;

/// The block matrix with `((i1, i2), (j1, j2))` entry `map(B_{i2 j2})_{i1 j1}`,
/// rows and columns indexed by `i1 * n + i2`. With `map = phi` this is
/// `phi ⊗ B`.
pub fn kron_apply<F: Field>(
    m: usize,
    b: &Matrix<F>,
    map: impl Fn(&F::Elem) -> Result<Matrix<F>>,
) -> Result<Matrix<F>> {
    let f = b.field();
    let (r, c) = (b.rows(), b.cols());
    let mut out = Matrix::zeros(f, m * r, m * c);
    for i2 in 0..r {
        for j2 in 0..c {
            let e = map(b.get(i2, j2))?;
            if e.rows() != m || e.cols() != m {
                return Err(Error::DimensionMismatch(format!("map returned {}x{}, expected {m}x{m}", e.rows(), e.cols())));
            }
            for i1 in 0..m {
                for j1 in 0..m {
                    out.set(i1 * r + i2, j1 * c + j2, e.get(i1, j1).clone());
                }
            }
        }
    }
    Ok(out)
}

/// `phi ⊗ B` for a hom `phi` and any matrix `B`.
pub fn hom_kron_matrix<F: HomField>(h: &MatrixHom<F>, b: &Matrix<F>) -> Result<Matrix<F>> {
    if h.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    kron_apply(h.n(), b, |x| h.eval(x))
}

/// `phi ⊗ psi`: the hom with generator image `phi ⊗ psi(g)`.
pub fn kronecker_compose<F: HomField>(h1: &MatrixHom<F>, h2: &MatrixHom<F>) -> Result<MatrixHom<F>> {
    MatrixHom::new(hom_kron_matrix(h1, h2.gen_image())?)
}

/// Multiplicities of simples in a semisimple hom over a number field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `(orbit id, multiplicity)`, sorted by orbit id, multiplicities >= 1.
    pub parts: Vec<(usize, usize)>,
}

impl Decomposition {
    pub fn multiplicity(&self, id: usize) -> usize {
        self.parts.iter().find(|(o, _)| *o == id).map_or(0, |(_, m)| *m)
    }

    pub fn dimension(&self, table: &OrbitTable) -> usize {
        self.parts.iter().map(|(o, m)| m * table.orbits[o - 1].size).sum()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|(o, m)| format!("orbit {o}^{m}")).collect();
        fmt.write_str(&parts.join(" + "))
    }
}

/// `m_g = nullity(g(A)) / deg g` for every orbit factor `g`.
pub fn decompose(h: &MatrixHom<NumberField>, table: &OrbitTable) -> Result<Decomposition> {
    if *h.field() != table.field {
        return Err(Error::FieldMismatch);
    }
    h.validate()?;
    let a = h.gen_image();
    let mut parts = Vec::new();
    let mut total = 0;
    for o in &table.orbits {
        let nullity = a.eval_poly(&o.factor)?.nullity();
        if nullity % o.size != 0 {
            return Err(Error::NotSemisimple(format!(
                "nullity {nullity} of orbit {} factor is not a multiple of {}",
                o.id, o.size
            )));
        }
        if nullity > 0 {
            parts.push((o.id, nullity / o.size));
            total += nullity;
        }
    }
    if total != h.n() {
        return Err(Error::NotSemisimple(format!("multiplicities account for {total} of {} dimensions", h.n())));
    }
    Ok(Decomposition { parts })
}

// ---------------------------------------------------------------------------
// Grothendieck ring

/// `x_i x_j = sum_l alpha[i][j].1[l] x_l + alpha[i][j].0`, indices 0-based
/// over the nontrivial orbits.
#[derive(Clone, Debug, PartialEq)]
pub struct K0Presentation {
    pub field: NumberField,
    /// Orbit id of each generator `x_{i+1}`.
    pub generator_orbits: Vec<usize>,
    pub sizes: Vec<usize>,
    pub alpha: Vec<Vec<(i64, Vec<i64>)>>,
    /// `Some(n)` when every orbit is a singleton (the ring is a group ring
    /// of an order-`n` group); the flag says whether that group is cyclic.
    pub group: Option<(usize, bool)>,
}

/// Decompose every `simple_i ⊗ simple_j` for nontrivial orbits.
pub fn k0_presentation(k: &NumberField) -> Result<K0Presentation> {
    let table = classify(k)?;
    k0_presentation_for(&table)
}

pub fn k0_presentation_for(table: &OrbitTable) -> Result<K0Presentation> {
    let gens: Vec<usize> = table.nontrivial().map(|o| o.id).collect();
    let sizes: Vec<usize> = table.nontrivial().map(|o| o.size).collect();
    let simples = gens
        .iter()
        .map(|&id| simple_from_orbit(table, id, None))
        .collect::<Result<Vec<_>>>()?;
    let r = gens.len();
    let cells: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).collect();
    let results: Vec<Result<Decomposition>> = cells
        .par_iter()
        .map(|&(i, j)| decompose(&kronecker_compose(&simples[i].hom, &simples[j].hom)?, table))
        .collect();
    let trivial = table.trivial().id;
    let mut alpha = vec![vec![(0i64, vec![0i64; r]); r]; r];
    for (&(i, j), res) in cells.iter().zip(results) {
        let d = res?;
        let lin = gens.iter().map(|&id| d.multiplicity(id) as i64).collect();
        alpha[i][j] = (d.multiplicity(trivial) as i64, lin);
    }
    let group = (table.orbits.iter().all(|o| o.size == 1)).then(|| {
        let n = table.orbits.len();
        (n, has_element_of_order(&alpha, n))
    });
    let pres = K0Presentation { field: table.field.clone(), generator_orbits: gens, sizes, alpha, group };
    assert!(pres.dimension_counts_hold(), "dimension count");
    Ok(pres)
}

/// With all orbits singletons the products permute basis elements; look
/// for a generator whose powers reach every element.
fn has_element_of_order(alpha: &[Vec<(i64, Vec<i64>)>], n: usize) -> bool {
    if n <= 1 {
        return true;
    }
    let r = alpha.len();
    // Basis element index: 0 = trivial, i + 1 = x_{i+1}.
    let mul = |a: usize, b: usize| -> usize {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let (c, lin) = &alpha[a - 1][b - 1];
        if *c == 1 {
            0
        } else {
            lin.iter().position(|&v| v == 1).map_or(usize::MAX, |l| l + 1)
        }
    };
    (1..=r).any(|g| {
        let mut x = g;
        let mut order = 1;
        while x != 0 && x != usize::MAX && order <= n {
            x = mul(x, g);
            order += 1;
        }
        x == 0 && order == n
    })
}

impl K0Presentation {
    pub fn rank(&self) -> usize {
        self.generator_orbits.len()
    }

    /// `|o_i| |o_j| = alpha_ij + sum_l alpha_ijl |o_l|` for every cell.
    pub fn dimension_counts_hold(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| {
            (0..r).all(|j| {
                let (c, lin) = &self.alpha[i][j];
                let rhs = *c + lin.iter().zip(&self.sizes).map(|(a, s)| a * *s as i64).sum::<i64>();
                rhs == (self.sizes[i] * self.sizes[j]) as i64
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| (0..r).all(|j| self.alpha[i][j] == self.alpha[j][i]))
    }

    /// Product of two elements of the free module on `1, x_1, ..., x_r`.
    pub fn multiply(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let r = self.rank();
        let mut out = vec![0i64; r + 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                let c = ai * bj;
                if c == 0 {
                    continue;
                }
                match (i, j) {
                    (0, _) => out[j] += c,
                    (_, 0) => out[i] += c,
                    _ => {
                        let (k0, lin) = &self.alpha[i - 1][j - 1];
                        out[0] += c * k0;
                        for (l, v) in lin.iter().enumerate() {
                            out[l + 1] += c * v;
                        }
                    }
                }
            }
        }
        out
    }

    /// `(x_i x_j) x_k = x_i (x_j x_k)` on all basis triples.
    pub fn is_associative(&self) -> bool {
        let r = self.rank();
        let e = |i: usize| {
            let mut v = vec![0i64; r + 1];
            v[i] = 1;
            v
        };
        (0..=r).all(|i| {
            (0..=r).all(|j| {
                (0..=r).all(|k| {
                    self.multiply(&self.multiply(&e(i), &e(j)), &e(k))
                        == self.multiply(&e(i), &self.multiply(&e(j), &e(k)))
                })
            })
        })
    }

    fn linear_form(&self, c: i64, lin: &[i64]) -> String {
        let coeffs: Vec<_> = std::iter::once(c).chain(lin.iter().copied()).collect();
        let mut out = String::new();
        for (idx, &v) in coeffs.iter().enumerate().skip(1).chain(coeffs.iter().enumerate().take(1)) {
            if v == 0 {
                continue;
            }
            let mag = v.unsigned_abs();
            let term = match (idx, mag) {
                (0, _) => mag.to_string(),
                (_, 1) => format!("x{idx}"),
                _ => format!("{mag}*x{idx}"),
            };
            if out.is_empty() {
                if v < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if v < 0 { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// The ring presentation line, e.g. `Z[x1]/(x1^2 - x1 - 2)`.
    pub fn ring_text(&self) -> String {
        let r = self.rank();
        if r == 0 {
            return "Z".into();
        }
        if r == 1 {
            let (c, lin) = &self.alpha[0][0];
            let p = RatPoly::ints(&[-c, -lin[0], 1]);
            return format!("Z[x1]/({})", p.format_with("x1"));
        }
        let gens: Vec<String> = (1..=r).map(|i| format!("x{i}")).collect();
        let mut rels = Vec::new();
        for i in 0..r {
            for j in 0..r {
                let (c, lin) = &self.alpha[i][j];
                rels.push(format!("x{}*x{} - ({})", i + 1, j + 1, self.linear_form(*c, lin)));
            }
        }
        format!("Z<{}> / ( {} )", gens.join(","), rels.join(", "))
    }

    /// `Z[Cn]` (or `Z[G], |G| = n`) when every orbit is a singleton.
    pub fn group_ring_text(&self) -> Option<String> {
        self.group.map(|(n, cyclic)| if cyclic { format!("Z[C{n}]") } else { format!("Z[G], |G| = {n}") })
    }

    /// One line per relation: `x1*x1 = x1 + 2`.
    pub fn relation_lines(&self) -> Vec<String> {
        let r = self.rank();
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..r {
                let (c, lin) = &self.alpha[i][j];
                out.push(format!("x{}*x{} = {}", i + 1, j + 1, self.linear_form(*c, lin)));
            }
        }
        out
    }
}

/// Summand fields `K(lambda)` of `K_0`, one per orbit.
pub fn k0_group_structure(table: &OrbitTable) -> Vec<(usize, String)> {
    table
        .orbits
        .iter()
        .map(|o| {
            let desc = if o.size == 1 {
                "K".to_string()
            } else {
                format!("K[X]/({})", o.factor.format_with("X"))
            };
            (o.id, desc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimod::tests::{radical_field, zeta_basis};
    use crate::bimod::simple_from_orbit;
    use crate::field::Rationals;

    #[test]
    fn one_by_one_composition_is_composite_map() {
        let k = NumberField::new(&RatPoly::ints(&[-2, 0, 1]), "g").unwrap();
        // phi(g) = -g (the conjugation), psi = phi: composite is the identity.
        let phi = MatrixHom::new(Matrix::scalar(&k, 1, k.neg(&k.gen()))).unwrap();
        let comp = kronecker_compose(&phi, &phi).unwrap();
        assert_eq!(comp, MatrixHom::identity(&k));
    }

    #[test]
    fn trivial_simple_is_the_unit() {
        let k = radical_field(3);
        let t = classify(&k).unwrap();
        let s = simple_from_orbit(&t, 2, Some(zeta_basis(&k))).unwrap();
        let triv = MatrixHom::identity(&k);
        assert_eq!(kronecker_compose(&s.hom, &triv).unwrap(), s.hom);
        assert_eq!(kronecker_compose(&triv, &s.hom).unwrap(), s.hom);
    }

    #[test]
    fn cube_root_square_decomposes() {
        let k = radical_field(3);
        let t = classify(&k).unwrap();
        let s = simple_from_orbit(&t, 2, None).unwrap();
        assert_eq!(decompose(&s.hom, &t).unwrap().parts, vec![(2, 1)]);
        let sq = kronecker_compose(&s.hom, &s.hom).unwrap();
        assert!(sq.validate().is_ok());
        assert_eq!(decompose(&sq, &t).unwrap().parts, vec![(1, 2), (2, 1)]);
        assert_eq!(decompose(&MatrixHom::identity(&k), &t).unwrap().parts, vec![(1, 1)]);
    }

    #[test]
    fn presentations() {
        let p = k0_presentation(&radical_field(3)).unwrap();
        assert_eq!(p.ring_text(), "Z[x1]/(x1^2 - x1 - 2)");
        assert_eq!(p.group_ring_text(), None);
        assert!(p.is_commutative() && p.is_associative());
        let q2 = NumberField::new(&RatPoly::ints(&[-2, 0, 1]), "g").unwrap();
        let p = k0_presentation(&q2).unwrap();
        assert_eq!(p.ring_text(), "Z[x1]/(x1^2 - 1)");
        assert_eq!(p.group_ring_text().as_deref(), Some("Z[C2]"));
        let q = NumberField::new(&RatPoly::ints(&[-1, 1]), "g").unwrap();
        assert_eq!(k0_presentation(&q).unwrap().ring_text(), "Z");
    }

    #[test]
    fn group_structure() {
        let k = radical_field(3);
        let t = classify(&k).unwrap();
        assert_eq!(
            k0_group_structure(&t),
            vec![(1, "K".to_string()), (2, "K[X]/(X^2 + g*X + g^2)".to_string())]
        );
    }

    #[test]
    fn kron_apply_matches_matrix_kron_for_scalar_maps() {
        let a = Matrix::from_ints(&Rationals, &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_ints(&Rationals, &[&[0, 1], &[5, 2]]);
        let via_map = kron_apply(2, &b, |x| Ok(a.scale(x))).unwrap();
        assert_eq!(via_map, a.kron(&b));
    }
}
