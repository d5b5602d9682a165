//! Factorization of univariate polynomials over Q.
//!
//! The production path is Zassenhaus: square-free decomposition, a
//! factorization modulo a small prime (distinct-degree followed by
//! Cantor-Zassenhaus equal-degree splitting), quadratic Hensel lifting past
//! the Mignotte bound and subset recombination. The Kronecker method is an
//! independent exhaustive search kept as a cross-check for small degrees.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Rational, Rationals};
use crate::poly::RatPoly;

/// Which algorithm [`factor_over_q_with`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FactorMethod {
    #[default]
    Zassenhaus,
    /// Exhaustive integer-value search; limited to degree
    /// [`KRONECKER_MAX_DEGREE`] per square-free part.
    Kronecker,
}

pub const KRONECKER_MAX_DEGREE: usize = 6;

/// Monic irreducible factors with multiplicities, sorted by degree and then
/// lexicographically by coefficients (constant term first).
pub fn factor_over_q(p: &RatPoly) -> Result<Vec<(RatPoly, usize)>> {
    factor_over_q_with(p, FactorMethod::Zassenhaus)
}

pub fn factor_over_q_with(p: &RatPoly, method: FactorMethod) -> Result<Vec<(RatPoly, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (part, mult) in p.squarefree_decomposition()? {
        let z = primitive_integer(&part);
        let factors = match method {
            FactorMethod::Zassenhaus => zassenhaus(&z),
            FactorMethod::Kronecker => {
                if z.len() - 1 > KRONECKER_MAX_DEGREE {
                    return Err(Error::DegreeCap(format!(
                        "Kronecker factoring is limited to degree {KRONECKER_MAX_DEGREE}"
                    )));
                }
                kronecker(&z)
            }
        };
        for fz in factors {
            out.push((to_ratpoly(&fz).monic(), mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

pub fn is_irreducible_over_q(p: &RatPoly) -> Result<bool> {
    let f = factor_over_q(p)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

type ZPoly = Vec<BigInt>;

fn to_ratpoly(z: &[BigInt]) -> RatPoly {
    RatPoly::from_rationals(z.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

/// Scale to integer coefficients with content 1 and positive leading term.
pub(crate) fn primitive_integer(p: &RatPoly) -> ZPoly {
    let den = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut z: ZPoly = p.coeffs().iter().map(|c| (c * &den).to_integer()).collect();
    let content = z.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if z.last().map_or(false, |c| c.is_negative()) { -1 } else { 1 };
    let content = content * sign;
    for c in z.iter_mut() {
        *c = &*c / &content;
    }
    z
}

/// Monic gcd over Q via the primitive remainder sequence over Z, which
/// keeps coefficients small where plain Euclid over Q blows up.
pub(crate) fn gcd_over_q(a: &RatPoly, b: &RatPoly) -> Result<RatPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    if a.is_zero() || b.is_zero() {
        return Ok(if a.is_zero() { b.monic() } else { a.monic() });
    }
    let (mut x, mut y) = (primitive_integer(a), primitive_integer(b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while y.len() > 1 {
        let r = trim(zprem(&x, &y));
        x = y;
        y = if r.is_empty() { r } else { zprimitive(r) };
    }
    if y.len() == 1 {
        return Ok(RatPoly::one(&Rationals));
    }
    Ok(to_ratpoly(&x).monic())
}

/// Pseudo-remainder of `a` by `b` (`deg a >= deg b`, `b` nonconstant).
fn zprem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().clone();
        for x in r.iter_mut() {
            *x *= lc;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        r = trim(r);
    }
    r
}

fn trim(mut z: ZPoly) -> ZPoly {
    while z.last().map_or(false, |c| c.is_zero()) {
        z.pop();
    }
    z
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division over Z, `None` if `d` does not divide `n`.
fn zdiv_exact(n: &[BigInt], d: &[BigInt]) -> Option<ZPoly> {
    let dd = d.len() - 1;
    if n.len() < d.len() {
        return if n.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut rem = n.to_vec();
    let mut q = vec![BigInt::zero(); n.len() - dd];
    let lc = &d[dd];
    for k in (0..q.len()).rev() {
        let (c, r) = rem[k + dd].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, dj) in d.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        q[k] = c;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(trim(q))
    } else {
        None
    }
}

fn zprimitive(z: ZPoly) -> ZPoly {
    let content = z.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if z.last().map_or(false, |c| c.is_negative()) { -1 } else { 1 };
    let content = content * sign;
    z.into_iter().map(|c| c / &content).collect()
}

// ---------------------------------------------------------------------------
// Arithmetic in (Z/p)[x] for word-sized primes.

mod modp {
    pub type MPoly = Vec<u64>;

    pub fn trim(mut a: MPoly) -> MPoly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> MPoly {
        let n = a.len().max(b.len());
        trim((0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect())
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> MPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn scale(a: &[u64], c: u64, p: u64) -> MPoly {
        trim(a.iter().map(|&x| x * c % p).collect())
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (MPoly, MPoly) {
        let db = b.len() - 1;
        if a.len() <= db {
            return (Vec::new(), a.to_vec());
        }
        let li = inv(b[db], p);
        let mut rem = a.to_vec();
        let mut q = vec![0u64; a.len() - db];
        for k in (0..q.len()).rev() {
            let c = rem[k + db] * li % p;
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - c * bj % p) % p;
            }
            q[k] = c;
        }
        rem.truncate(db);
        (trim(q), trim(rem))
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> MPoly {
        divrem(a, b, p).1
    }

    pub fn monic(a: &[u64], p: u64) -> MPoly {
        match a.last() {
            Some(&l) => scale(a, inv(l, p), p),
            None => Vec::new(),
        }
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> MPoly {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        monic(&a, p)
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (MPoly, MPoly, MPoly) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            let t2 = sub(&t0, &mul(&q, &t1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let li = inv(*r0.last().unwrap(), p);
        (scale(&r0, li, p), scale(&s0, li, p), scale(&t0, li, p))
    }

    /// `base^e mod m` with a big exponent given as little-endian bits.
    pub fn powmod_poly(base: &[u64], e: &num_bigint::BigUint, m: &[u64], p: u64) -> MPoly {
        let mut acc = vec![1u64];
        let b = rem(base, m, p);
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = rem(&mul(&acc, &acc, p), m, p);
            if e.bit(i) {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
        }
        acc
    }
}

fn reduce_mod_p(z: &[BigInt], p: u64) -> modp::MPoly {
    let pb = BigInt::from(p);
    modp::trim(z.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

/// Factor a square-free monic polynomial over F_p into monic irreducibles.
fn factor_mod_p(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<modp::MPoly> {
    // Distinct-degree factorization.
    let mut ddf: Vec<(modp::MPoly, usize)> = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0usize;
    let pbig = BigUint::from(p);
    while rest.len() - 1 >= 2 * (d + 1) {
        d += 1;
        h = modp::powmod_poly(&h, &pbig, &rest, p);
        let g = modp::gcd(&rest, &modp::sub(&h, &x, p), p);
        if g.len() > 1 {
            ddf.push((g.clone(), d));
            rest = modp::divrem(&rest, &g, p).0;
            h = modp::rem(&h, &rest, p);
        }
    }
    if rest.len() > 1 {
        let deg = rest.len() - 1;
        ddf.push((rest, deg));
    }
    let mut out = Vec::new();
    for (g, d) in ddf {
        equal_degree_split(&g, d, p, rng, &mut out);
    }
    out
}

fn equal_degree_split(g: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<modp::MPoly>) {
    let n = g.len() - 1;
    if n == d {
        out.push(g.to_vec());
        return;
    }
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: modp::MPoly = modp::trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = modp::powmod_poly(&a, &exp, g, p);
        let c = modp::gcd(g, &modp::sub(&b, &[1], p), p);
        if c.len() > 1 && c.len() < g.len() {
            let other = modp::divrem(g, &c, p).0;
            equal_degree_split(&c, d, p, rng, out);
            equal_degree_split(&other, d, p, rng, out);
            return;
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// Hensel lifting over Z/m with BigInt coefficients.

fn mod_sym(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn zreduce(a: &[BigInt], m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect())
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect())
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    let mut rem = zreduce(a, m);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = rem[k + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] = (&rem[k + j] - &c * bj).mod_floor(m);
        }
        q[k] = c;
    }
    rem.truncate(db);
    (trim(q), trim(rem))
}

fn to_z(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from `f = g h`, `s g + t h = 1` mod `m` to the
/// same relations mod `m^2`, keeping `h` monic.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zreduce(&zsub(f, &zmul(g, h)), &m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, &m2);
    let g1 = zreduce(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), &m2);
    let h1 = zreduce(&zadd(h, &r), &m2);
    let b = zreduce(&zsub(&zadd(&zmul(s, &g1), &zmul(t, &h1)), &[BigInt::one()]), &m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h1, &m2);
    let s1 = zreduce(&zsub(s, &d), &m2);
    let t1 = zreduce(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g1)), &m2);
    (g1, h1, s1, t1)
}

/// Lift `f = lc * prod(factors)` mod p to mod `p^(2^j) >= bound`.
fn hensel_lift(f: &[BigInt], factors: &[modp::MPoly], p: u64, bound: &BigInt) -> (Vec<ZPoly>, BigInt) {
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while &modulus <= bound {
        modulus = &modulus * &modulus;
    }
    let mut lifted = Vec::with_capacity(factors.len());
    let mut current = f.to_vec();
    for i in (1..factors.len()).rev() {
        // current = G * h with h = factors[i] monic and G carrying the rest.
        let h0 = &factors[i];
        let g0 = modp::trim(
            factors[..i]
                .iter()
                .fold(vec![lead_mod(&current, p)], |acc, fi| modp::mul(&acc, fi, p)),
        );
        let (_, s0, t0) = modp::ext_gcd(&g0, h0, p);
        let (mut g, mut h, mut s, mut t) = (to_z(&g0), to_z(h0), to_z(&s0), to_z(&t0));
        let mut m = pb.clone();
        while m < modulus {
            let next = hensel_step(&current, &g, &h, &s, &t, &m);
            g = next.0;
            h = next.1;
            s = next.2;
            t = next.3;
            m = &m * &m;
        }
        lifted.push(h);
        current = g.iter().map(|c| mod_sym(c, &modulus)).collect();
    }
    // The remaining factor carries lc; make it monic mod modulus.
    let lc = current.last().cloned().unwrap();
    let lc_inv = lc.modinv(&modulus).expect("leading coefficient invertible mod p");
    let first: ZPoly = zreduce(&current.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), &modulus);
    lifted.push(first);
    lifted.reverse();
    (lifted, modulus)
}

fn lead_mod(f: &[BigInt], p: u64) -> u64 {
    f.last().unwrap().mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Bound on the coefficients of any factor of `f` (Mignotte), times `lc(f)`.
fn factor_coefficient_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    let binom_max = BigInt::one() << n;
    let lc = f.last().unwrap().abs();
    norm * binom_max * &lc * 2
}

fn zassenhaus(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    let df: ZPoly = trim(f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect());
    let mut rng = ChaCha8Rng::seed_from_u64(0x7453_5653);

    // Try several good primes and keep the one with the fewest modular factors.
    let mut best: Option<(u64, Vec<modp::MPoly>)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 8 {
        p += 2;
        if !is_prime(p) || (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce_mod_p(f, p);
        let dfp = reduce_mod_p(&df, p);
        if modp::gcd(&fp, &dfp, p).len() != 1 {
            continue;
        }
        tried += 1;
        let facs = factor_mod_p(&modp::monic(&fp, p), p, &mut rng);
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, mut modular) = best.unwrap();
    modular.sort();
    let bound = factor_coefficient_bound(f);
    let (mut lifted, modulus) = hensel_lift(f, &modular, p, &bound);

    let mut found = Vec::new();
    let mut rest = f.to_vec();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let r = lifted.len();
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let lc_rest = rest.last().unwrap().clone();
            // Constant-term filter before forming the full product.
            let c0 = subset
                .iter()
                .fold(lc_rest.clone(), |acc, &i| (acc * lifted[i].first().cloned().unwrap_or_default()).mod_floor(&modulus));
            let c0 = mod_sym(&c0, &modulus);
            let rest0 = rest.first().cloned().unwrap_or_default() * &lc_rest;
            if c0.is_zero() && !rest0.is_zero() || !c0.is_zero() && !(&rest0 % &c0).is_zero() {
                // skip
            } else {
                let prod = subset
                    .iter()
                    .fold(vec![lc_rest.clone()], |acc, &i| zreduce(&zmul(&acc, &lifted[i]), &modulus));
                let cand: ZPoly = prod.iter().map(|c| mod_sym(c, &modulus)).collect();
                let cand = zprimitive(trim(cand));
                if let Some(q) = zdiv_exact(&rest, &cand) {
                    found.push(cand);
                    rest = q;
                    let keep: Vec<ZPoly> = lifted
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !subset.contains(i))
                        .map(|(_, g)| g.clone())
                        .collect();
                    lifted = keep;
                    continue 'outer;
                }
            }
            if !next_subset(&mut subset, r) {
                break;
            }
        }
        size += 1;
    }
    found.push(zprimitive(rest));
    found
}

/// Advance to the next k-subset of `0..n` in lexicographic order.
fn next_subset(s: &mut [usize], n: usize) -> bool {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] < n - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Kronecker's method.

fn zeval(f: &[BigInt], x: i64) -> BigInt {
    let xb = BigInt::from(x);
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * &xb + c)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs().to_u64().expect("value fits in u64 for Kronecker search");
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i * i != n {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    out
}

fn kronecker(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    for d in 1..=n / 2 {
        if let Some(g) = kronecker_find(f, d) {
            let q = zdiv_exact(f, &g).expect("found factor divides");
            let mut out = kronecker(&g);
            out.extend(kronecker(&zprimitive(q)));
            return out;
        }
    }
    vec![f.to_vec()]
}

/// Search for a factor of exact degree `d` by interpolating through divisors
/// of `f` at `d + 1` integer points.
fn kronecker_find(f: &[BigInt], d: usize) -> Option<ZPoly> {
    let mut points = Vec::new();
    let mut x = 0i64;
    while points.len() < d + 1 {
        let v = zeval(f, x);
        if v.is_zero() {
            if d == 1 {
                return Some(vec![BigInt::from(-x), BigInt::one()]);
            }
        } else {
            points.push((x, v));
        }
        x = if x <= 0 { -x + 1 } else { -x };
    }
    let choices: Vec<Vec<BigInt>> = points
        .iter()
        .enumerate()
        .map(|(i, (_, v))| {
            let ds = divisors(v);
            if i == 0 {
                ds
            } else {
                ds.iter().flat_map(|x| [x.clone(), -x.clone()]).collect()
            }
        })
        .collect();
    let mut idx = vec![0usize; d + 1];
    loop {
        let values: Vec<Rational> = idx.iter().enumerate().map(|(i, &j)| Rational::from_integer(choices[i][j].clone())).collect();
        let xs: Vec<i64> = points.iter().map(|(x, _)| *x).collect();
        let g = lagrange(&xs, &values);
        if g.degree() == Some(d) && g.coeffs().iter().all(|c| c.is_integer()) {
            let gz = zprimitive(g.coeffs().iter().map(|c| c.to_integer()).collect());
            if zdiv_exact(f, &gz).is_some() {
                return Some(gz);
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn lagrange(xs: &[i64], ys: &[Rational]) -> RatPoly {
    let q = Rationals;
    let mut acc = RatPoly::zero(&q);
    for (i, (&xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut term = RatPoly::constant(&q, yi.clone());
        for (j, &xj) in xs.iter().enumerate() {
            if i != j {
                let denom = Rational::from_integer(BigInt::from(xi - xj));
                term = term
                    .mul(&RatPoly::ints(&[-xj, 1]))
                    .scale(&denom.recip());
            }
        }
        acc = acc.add(&term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::ints(c)
    }

    fn check_product(input: &RatPoly, factors: &[(RatPoly, usize)]) {
        let prod = factors
            .iter()
            .fold(RatPoly::constant(&Rationals, input.leading()), |acc, (f, m)| acc.mul(&f.pow(*m as u32)));
        assert_eq!(&prod, input);
    }

    #[test]
    fn x_squared_minus_one() {
        let f = factor_over_q(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(f, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn cube_root_of_two_is_irreducible() {
        // Oracle: no rational root among the candidates ±1, ±2, and no
        // quadratic factor since any factorization of a cubic has a linear piece.
        let f = p(&[-2, 0, 0, 1]);
        for r in [-2i64, -1, 1, 2] {
            assert!(!f.eval(&crate::field::rat(r)).is_zero());
        }
        assert_eq!(factor_over_q(&f).unwrap(), vec![(f.clone(), 1)]);
    }

    #[test]
    fn x_fourth_minus_one() {
        let f = factor_over_q(&p(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(f, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1), (p(&[1, 0, 1]), 1)]);
        // Oracle: exhaustive integer search agrees.
        let k = factor_over_q_with(&p(&[-1, 0, 0, 0, 1]), FactorMethod::Kronecker).unwrap();
        assert_eq!(f, k);
    }

    #[test]
    fn zero_errors() {
        assert_eq!(factor_over_q(&RatPoly::zero(&Rationals)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn repeated_and_rational_coefficients() {
        // 3 (x - 1/2)^2 (x^2 + 1)
        let f = p(&[-1, 2])
            .pow(2)
            .mul(&p(&[1, 0, 1]))
            .scale(&crate::field::ratio(3, 4));
        let fac = factor_over_q(&f).unwrap();
        check_product(&f, &fac);
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0].1, 2);
    }

    #[test]
    fn swinnerton_dyer_like_splits_modularly_but_not_over_q() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits mod every prime.
        let f = p(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_over_q(&f).unwrap(), vec![(f.clone(), 1)]);
        let g = p(&[1, 0, -10, 0, 1]).mul(&p(&[-2, 0, 0, 1]));
        let fac = factor_over_q(&g).unwrap();
        assert_eq!(fac.len(), 2);
        check_product(&g, &fac);
    }

    #[test]
    fn degree_twenty_product() {
        // (x^5 - 2)(x^4 + x^3 + x^2 + x + 1)(x^11 - 3x + 1)
        let a = p(&[-2, 0, 0, 0, 0, 1]);
        let b = p(&[1, 1, 1, 1, 1]);
        let c = p(&[1, -3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let f = a.mul(&b).mul(&c);
        let fac = factor_over_q(&f).unwrap();
        check_product(&f, &fac);
        assert_eq!(fac.len(), 3);
    }

    #[test]
    fn kronecker_rejects_large_degree() {
        let f = p(&[1, 0, 0, 0, 0, 0, 0, 1]);
        assert!(matches!(factor_over_q_with(&f, FactorMethod::Kronecker), Err(Error::DegreeCap(_))));
    }
}
