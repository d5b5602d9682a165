//! Acceptance suite: one line per criterion, exact comparisons, wall-clock
//! limits. Runs as a plain binary (`harness = false`).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tsvs::bimod::{classify, endomorphism_basis, hom_similar, simple_from_orbit, MatrixHom, OrbitTable};
use tsvs::canonical::{commutant_basis, commutant_shape_check, homogeneous_structure, is_jordan_ordered, jordan_order_conjugate};
use tsvs::field::{rat, Field};
use tsvs::files::read_basis;
use tsvs::funcfield::{random_ratfunc, FunctionField, RatFunc};
use tsvs::hs::{hs_product, scaled_derivation_similar, toeplitz_hom, toeplitz_matrix, HigherDerivation, LeibnizSamples, MapExpr};
use tsvs::linalg::{jordan_matrix, Matrix};
use tsvs::numfield::NumberField;
use tsvs::parse::parse_matrix;
use tsvs::sample::{derive_seed, random_invertible, random_partition, random_unipotent_upper, random_upper_with};
use tsvs::tensor::{decompose, hom_kron_matrix, k0_presentation, kron_apply, kronecker_compose};
use tsvs::{Poly, RatPoly, Rationals};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn radical(p: usize) -> NumberField {
    let mut cs = vec![0i64; p + 1];
    cs[0] = -2;
    cs[p] = 1;
    NumberField::new(&RatPoly::ints(&cs), "g").unwrap()
}

fn quadratic(c: i64) -> NumberField {
    NumberField::new(&RatPoly::ints(&[c, 0, 1]), "g").unwrap()
}

fn random_k_matrix<R: Rng>(k: &NumberField, rows: usize, cols: usize, rng: &mut R) -> Matrix<NumberField> {
    let data = (0..rows * cols)
        .map(|_| {
            let coords: Vec<i64> = (0..k.degree()).map(|_| rng.gen_range(-3..=3)).collect();
            k.elem_ints(&coords)
        })
        .collect();
    Matrix::from_vec(k, rows, cols, data)
}

// 1 -------------------------------------------------------------------------

fn classification() -> Check {
    let k = radical(3);
    let t = e(classify(&k))?;
    ensure!(t.sizes() == vec![1, 2], "orbit sizes {:?}", t.sizes());
    ensure!(t.orbits[0].trivial && !t.orbits[1].trivial, "trivial orbit not first");
    // Oracle: the factors multiply back to x^3 - 2 over K.
    let prod = t.orbits.iter().fold(Poly::one(&k), |acc, o| acc.mul(&o.factor));
    ensure!(prod == Poly::from_ints(&k, &[-2, 0, 0, 1]), "factors multiply to {prod}");
    Ok(())
}

// 2 -------------------------------------------------------------------------

fn closed_form_matrices() -> Check {
    let k = radical(3);
    let t = e(classify(&k))?;
    let s = e(simple_from_orbit(&t, 2, Some(e(read_basis(&k, "[1, 1/2*g^2*x]"))?)))?;
    let rho = k.gen();
    let rho2 = k.mul(&rho, &rho);
    let want1 = e(parse_matrix(&k, "[[0, -g], [g, -g]]"))?;
    let want2 = e(parse_matrix(&k, "[[-g^2, g^2], [-g^2, 0]]"))?;
    ensure!(e(s.hom.eval(&rho))? == want1, "phi(rho) = {}", e(s.hom.eval(&rho))?);
    ensure!(e(s.hom.eval(&rho2))? == want2, "phi(rho^2) = {}", e(s.hom.eval(&rho2))?);

    // {1, sqrt(-3)} with sqrt(-3) = 1 + g^2 X: phi(x) = [[a, -3b], [b, a]] for
    // lambda(x) = a + b sqrt(-3), lambda(x) computed as x(X) mod g.
    let s = e(simple_from_orbit(&t, 2, Some(e(read_basis(&k, "[1, 1 + g^2*x]"))?)))?;
    let g = t.orbits[1].factor.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-5..=5)).collect();
        let x = k.elem_ints(&c);
        let lam = e(Poly::from_ints(&k, &c).rem(&g))?;
        let b = k.div(&lam.coeff(1), &rho2).ok_or("division by zero")?;
        let a = k.sub(&lam.coeff(0), &b);
        let want = Matrix::from_vec(&k, 2, 2, vec![a.clone(), k.mul(&k.from_int(-3), &b), b, a]);
        let got = e(s.hom.eval(&x))?;
        ensure!(got == want, "phi({}) = {got}, expected {want}", k.format_elem(&x));
    }
    Ok(())
}

// 3 -------------------------------------------------------------------------

fn endomorphisms() -> Check {
    let k = radical(3);
    let t = e(classify(&k))?;
    let s = e(simple_from_orbit(&t, 2, Some(e(read_basis(&k, "[1, 1/2*g^2*x]"))?)))?;
    let ms = endomorphism_basis(&s);
    ensure!(ms.len() == 2, "End basis has {} elements", ms.len());
    let a = s.hom.gen_image();
    for m in &ms {
        ensure!(e(m.mul(a))? == e(a.mul(m))?, "{m} does not commute with phi(g)");
        for n in &ms {
            ensure!(e(m.mul(n))? == e(n.mul(m))?, "basis elements do not commute");
        }
    }
    let m2 = &ms[1];
    let rel = e(e(e(m2.mul(m2))?.add(m2))?.add(&Matrix::identity(&k, 2)))?;
    ensure!(rel.is_zero(), "M(2)^2 + M(2) + I = {rel}");
    Ok(())
}

// 4 -------------------------------------------------------------------------

fn tensor_squares() -> Check {
    for (p, parts, n) in [(3, vec![(1, 2), (2, 1)], 4), (5, vec![(1, 4), (2, 3)], 16)] {
        let k = radical(p);
        let t = e(classify(&k))?;
        let s = e(simple_from_orbit(&t, 2, None))?;
        let sq = e(kronecker_compose(&s.hom, &s.hom))?;
        ensure!(sq.n() == n, "p = {p}: tensor square is {}x{}", sq.n(), sq.n());
        let d = e(decompose(&sq, &t))?;
        ensure!(d.parts == parts, "p = {p}: {d}");
    }
    Ok(())
}

// 5 -------------------------------------------------------------------------

fn k0_rings() -> Check {
    for (k, ring, group) in [
        (radical(3), "Z[x1]/(x1^2 - x1 - 2)", None),
        (radical(5), "Z[x1]/(x1^2 - 3*x1 - 4)", None),
        (quadratic(-2), "Z[x1]/(x1^2 - 1)", Some("Z[C2]")),
        (quadratic(1), "Z[x1]/(x1^2 - 1)", Some("Z[C2]")),
    ] {
        let p = e(k0_presentation(&k))?;
        ensure!(p.ring_text() == ring, "{}: {}", k.modulus(), p.ring_text());
        ensure!(p.group_ring_text().as_deref() == group, "{}: group ring {:?}", k.modulus(), p.group_ring_text());
        ensure!(p.is_commutative() && p.is_associative(), "{}: structure constants", k.modulus());
    }
    Ok(())
}

// 6 -------------------------------------------------------------------------

fn random_hom<R: Rng>(table: &OrbitTable, max_n: usize, rng: &mut R) -> MatrixHom<NumberField> {
    let k = &table.field;
    loop {
        let mut parts = Vec::new();
        let mut n = 0;
        let count = rng.gen_range(1..=2);
        for _ in 0..count {
            let o = &table.orbits[rng.gen_range(0..table.orbits.len())];
            if n + o.size <= max_n {
                n += o.size;
                parts.push(simple_from_orbit(table, o.id, None).unwrap().hom);
            }
        }
        if parts.is_empty() {
            continue;
        }
        let h = MatrixHom::direct_sum(&parts).unwrap();
        let p = random_invertible(k, h.n(), 2, rng);
        return h.conjugate(&p).unwrap();
    }
}

fn kronecker_identities() -> Check {
    let k = radical(3);
    let table = e(classify(&k))?;
    for i in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(6, i));
        let phi = random_hom(&table, 3, &mut rng);
        let n = rng.gen_range(1..=3);
        let b = random_k_matrix(&k, n, n, &mut rng);
        let c = random_k_matrix(&k, n, n, &mut rng);
        let lhs = e(e(hom_kron_matrix(&phi, &b))?.mul(&e(hom_kron_matrix(&phi, &c))?))?;
        let rhs = e(hom_kron_matrix(&phi, &e(b.mul(&c))?))?;
        ensure!(lhs == rhs, "instance {i}: (phi x B)(phi x C) != phi x BC");
    }
    for i in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(60, i));
        let phi = random_hom(&table, 3, &mut rng);
        let m = phi.n();
        let n = rng.gen_range(1..=3);
        let a = random_k_matrix(&k, m, m, &mut rng);
        let b = random_k_matrix(&k, n, n, &mut rng);
        let lhs = e(a.kron(&Matrix::identity(&k, n)).mul(&e(hom_kron_matrix(&phi, &b))?))?;
        let rhs = e(kron_apply(m, &b, |x| a.mul(&phi.eval(x)?)))?;
        ensure!(lhs == rhs, "instance {i}: (A x I)(phi x B) != (A phi) x B");
    }
    Ok(())
}

// 7 -------------------------------------------------------------------------

fn semisimple_round_trip() -> Check {
    let fields = [radical(3), quadratic(-2)];
    let tables: Vec<OrbitTable> = fields.iter().map(|k| classify(k).unwrap()).collect();
    for i in 0..50u64 {
        let table = &tables[i as usize % 2];
        let k = &table.field;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(7, i));
        let mult: Vec<usize> = loop {
            let m: Vec<usize> = table.orbits.iter().map(|_| rng.gen_range(0..=2)).collect();
            if m.iter().any(|&x| x > 0) {
                break m;
            }
        };
        let mut parts = Vec::new();
        for (o, &m) in table.orbits.iter().zip(&mult) {
            for _ in 0..m {
                parts.push(e(simple_from_orbit(table, o.id, None))?.hom);
            }
        }
        let sum = e(MatrixHom::direct_sum(&parts))?;
        let p = random_invertible(k, sum.n(), 3, &mut rng);
        let h = e(sum.conjugate(&p))?;
        let want: Vec<(usize, usize)> =
            table.orbits.iter().zip(&mult).filter(|(_, &m)| m > 0).map(|(o, &m)| (o.id, m)).collect();
        let d = e(decompose(&h, table))?;
        ensure!(d.parts == want, "instance {i}: {d}, expected {want:?}");
    }
    // Block upper triangular homs split.
    for i in 0..10u64 {
        let table = &tables[i as usize % 2];
        let k = &table.field;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(70, i));
        let h1 = random_hom(table, 3, &mut rng);
        let h2 = random_hom(table, 3, &mut rng);
        let (n1, n2) = (h1.n(), h2.n());
        let diag = e(MatrixHom::direct_sum(&[h1, h2]))?;
        let mut u = Matrix::identity(k, n1 + n2);
        u.set_block(0, n1, &random_k_matrix(k, n1, n2, &mut rng));
        let upper = e(diag.conjugate(&u))?;
        let a = upper.gen_image();
        ensure!(a.submatrix(n1, n1 + n2, 0, n1).is_zero(), "instance {i}: not block upper triangular");
        ensure!(e(upper.validate()).is_ok(), "instance {i}: not a hom");
        let d_upper = e(decompose(&upper, table))?;
        let d_diag = e(decompose(&diag, table))?;
        ensure!(d_upper == d_diag, "instance {i}: {d_upper} vs {d_diag}");
        if i < 4 {
            ensure!(e(hom_similar(&upper, &diag, derive_seed(71, i)))?, "instance {i}: no splitting conjugator found");
        }
    }
    Ok(())
}

// 8 -------------------------------------------------------------------------

fn jordan_ordered_suite() -> Check {
    for i in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(8, i));
        let n = rng.gen_range(1..=8);
        let lam = rat(rng.gen_range(-3..=3));
        let layout: Vec<_> = random_partition(n, &mut rng).into_iter().map(|p| (lam.clone(), p)).collect();
        let j0 = jordan_matrix(&Rationals, &layout);
        let u = random_unipotent_upper(&Rationals, n, 3, &mut rng);
        let a = e(e(u.mul(&j0))?.mul(&u.inverse().unwrap()))?;
        let r = e(jordan_order_conjugate(&a))?;
        ensure!(r.conjugator.is_upper_triangular(), "instance {i}: P not upper triangular");
        let p_inv = r.conjugator.inverse().ok_or("P singular")?;
        let got = e(e(r.conjugator.mul(&a))?.mul(&p_inv))?;
        ensure!(got == j0, "instance {i}: P A P^-1 = {got}, expected {j0}");
    }
    let bad = e(parse_matrix(&Rationals, "[[5, 0, 1], [0, 5, 0], [0, 0, 5]]"))?;
    ensure!(!e(is_jordan_ordered(&bad))?, "fixture reported Jordan-ordered");
    match jordan_order_conjugate(&bad) {
        Err(tsvs::Error::NotJordanOrdered(_)) => Ok(()),
        other => Err(format!("fixture: {other:?}")),
    }
}

// 9 -------------------------------------------------------------------------

fn commutant_suite() -> Check {
    for i in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(9, i));
        let n = rng.gen_range(1..=6);
        let parts = random_partition(n, &mut rng);
        let lam = rat(rng.gen_range(-3..=3));
        let j = jordan_matrix(&Rationals, &parts.iter().map(|&p| (lam.clone(), p)).collect::<Vec<_>>());
        let basis = e(commutant_basis(&j))?;
        let expect: usize = parts.iter().flat_map(|&p| parts.iter().map(move |&q| p.min(q))).sum();
        ensure!(basis.len() == expect, "instance {i}: dimension {} vs {expect}", basis.len());
        for x in &basis {
            ensure!(e(x.mul(&j))? == e(j.mul(x))?, "instance {i}: basis element does not commute");
            ensure!(e(commutant_shape_check(&j, x))?.0, "instance {i}: shape check fails on {x}");
        }
    }
    Ok(())
}

// 10 ------------------------------------------------------------------------

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn higher_derivations() -> Check {
    let f = FunctionField::default();
    let t = f.t();
    let d = HigherDerivation::hasse(&f, 4);
    e(d.leibniz_check(&LeibnizSamples { max_degree: 30, random_pairs: 100, seed: 10 }))?;
    // Oracle: D_j(t^n) = C(n, j) t^(n-j).
    for n in 0..=30u32 {
        let x = RatFunc::from(RatPoly::monomial(&Rationals, rat(1), n as usize));
        for j in 0..=4u32 {
            let want = if j > n {
                RatFunc::zero()
            } else {
                RatFunc::from(RatPoly::monomial(&Rationals, rat(binomial(n, j)), (n - j) as usize))
            };
            ensure!(e(d.eval(j as usize, &x))? == want, "D{j}(t^{n})");
        }
    }

    for m in 0..=4 {
        let h = e(toeplitz_hom(&HigherDerivation::hasse(&f, m)))?;
        ensure!(h.validate().is_ok(), "toeplitz_hom of order {m} fails hom_validate");
    }
    let twisted = e(tsvs::hs::parse_hs("hs over funcfield t: [D0; D1; t*D1 + D2]"))?;
    ensure!(e(toeplitz_hom(&twisted))?.validate().is_ok(), "twisted toeplitz_hom fails hom_validate");

    let d1 = HigherDerivation::hasse(&f, 1);
    let id = e(HigherDerivation::unchecked(&f, vec![MapExpr::identity()]))?;
    let right_unit = e(hs_product(&d1, &id))?;
    ensure!(right_unit.to_string() == d1.to_string(), "d . Id = {right_unit}");
    let mut product_failures = Vec::new();
    let zero_d2 = e(HigherDerivation::unchecked(&f, vec![MapExpr::identity(), MapExpr::zero(), MapExpr::hasse(2)]))?;
    for (name, a, b, order) in [("{Id, D1}.{Id, D1}", &d1, &d1, 2), ("{Id, D1}.{Id, 0, D2}", &d1, &zero_d2, 3)] {
        match hs_product(a, b) {
            Ok(p) if p.order() == order => {}
            Ok(p) => product_failures.push(format!("{name}: order {}", p.order())),
            Err(err) => product_failures.push(format!("{name}: {}: {err}", err.name())),
        }
    }

    let x = t.add(&RatFunc::from(3)).mul(&t);
    let s = e(scaled_derivation_similar(&d1, &x))?;
    ensure!(s.conjugator == Matrix::diagonal(&f, vec![x.clone(), RatFunc::one()]), "conjugator {}", s.conjugator);
    let phi = e(toeplitz_hom(&d1))?;
    let p_inv = s.conjugator.inverse().ok_or("diag(x, 1) singular")?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..5 {
        let y = random_ratfunc(&mut rng, 2);
        let lhs = e(e(s.conjugator.mul(&e(phi.eval(&y))?))?.mul(&p_inv))?;
        let rhs = Matrix::from_vec(&f, 2, 2, vec![y.clone(), x.mul(&e(d1.eval(1, &y))?), RatFunc::zero(), y.clone()]);
        ensure!(lhs == rhs && e(toeplitz_matrix(&s.scaled, &y))? == rhs, "diag(x, 1) certificate at {y}");
    }

    ensure!(product_failures.is_empty(), "hs_product: {}", product_failures.join("; "));
    Ok(())
}

// 11 ------------------------------------------------------------------------

fn homogeneous_round_trip() -> Check {
    let f = FunctionField::default();
    let a = MatrixHom::identity(&f);
    for i in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(11, i));
        let n = rng.gen_range(1..=4);
        // d_j = c^j D_j is a higher derivation for any c.
        let c = loop {
            let c = random_ratfunc(&mut rng, 1);
            if !c.is_zero() {
                break c;
            }
        };
        let maps = (0..n)
            .map(|j| MapExpr::hasse(j).scale(&(0..j).fold(RatFunc::one(), |acc, _| acc.mul(&c))))
            .collect();
        let d = e(HigherDerivation::new(&f, maps))?;
        let h0 = e(toeplitz_hom(&d))?;
        let u = random_upper_with(&f, n, &mut rng, |r| RatFunc::from(r.gen_range(1..=3)), |r| random_ratfunc(r, 1));
        let h = e(h0.conjugate(&u))?;
        let form = e(homogeneous_structure(&h, &a))?;
        ensure!(form.blocks == vec![n], "instance {i}: blocks {:?}", form.blocks);
        let conj_inv = form.conjugator.inverse().ok_or("singular conjugator")?;
        for _ in 0..3 {
            let x = random_ratfunc(&mut rng, 2);
            let direct = e(e(form.conjugator.mul(&e(h.eval(&x))?))?.mul(&conj_inv))?;
            ensure!(direct == e(form.eval(&x))?, "instance {i}: form is not the conjugated hom");
            ensure!(e(form.fitted_blocks_match(&x))?, "instance {i}: diagonal block is not phi(d)");
        }
        let fitted = form.derivations[0].as_ref().ok_or("no derivation recovered")?;
        e(fitted.leibniz_check(&LeibnizSamples { max_degree: 12, random_pairs: 10, seed: i }))?;
        for _ in 0..50 {
            let x = random_ratfunc(&mut rng, 2);
            let y = random_ratfunc(&mut rng, 2);
            ensure!(e(form.cocycle_holds(&x, &y))?, "instance {i}: cocycle relation fails");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "classification of Q(2^(1/3))", limit: s(1), run: classification },
        Criterion { id: 2, name: "closed-form matrices in the zeta and sqrt(-3) bases", limit: s(1), run: closed_form_matrices },
        Criterion { id: 3, name: "endomorphism ring", limit: s(1), run: endomorphisms },
        Criterion { id: 4, name: "tensor decomposition, p = 3 and 5", limit: s(30), run: tensor_squares },
        Criterion { id: 5, name: "K0 presentations", limit: s(60), run: k0_rings },
        Criterion { id: 6, name: "Kronecker identities", limit: s(10), run: kronecker_identities },
        Criterion { id: 7, name: "semisimplicity round trip", limit: s(60), run: semisimple_round_trip },
        Criterion { id: 8, name: "Jordan-ordered suite", limit: s(30), run: jordan_ordered_suite },
        Criterion { id: 9, name: "commutant shape", limit: s(30), run: commutant_suite },
        Criterion { id: 10, name: "higher-derivation suite", limit: s(30), run: higher_derivations },
        Criterion { id: 11, name: "homogeneous structure round trip", limit: s(60), run: homogeneous_round_trip },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            if elapsed > c.limit {
                Err(format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), c.limit.as_secs()))
            } else {
                Ok(())
            }
        });
        let secs = elapsed.as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {} ({secs:.2} s)", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {} ({secs:.2} s): {why}", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
