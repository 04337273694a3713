//! Irreducibility and factorization over the rationals.
//!
//! The cheap certificates come first: squarefreeness, rational roots, and
//! the degree patterns of factorizations modulo several primes. A degree
//! that no prime can realize as a factor degree is excluded; if only `0`
//! and `n` survive the polynomial is irreducible. Polynomials that defeat
//! this (every biquadratic field, e.g. `X^4 + 1`, splits modulo every
//! prime) fall through to Hensel lifting and exhaustive recombination.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use super::modp::{PolyP, SMALL_PRIMES};
use super::poly::Poly;
use crate::error::{Error, Result};

/// True iff `f` has no factorization into polynomials of lower degree.
pub fn irreducible_over_rationals(f: &Poly) -> Result<bool> {
    match f.degree() {
        None => Err(Error::invalid("zero polynomial has no irreducibility status")),
        Some(0) => Err(Error::invalid(format!("constant polynomial {f}"))),
        Some(1) => Ok(true),
        Some(_) => {
            if !f.is_squarefree() || !f.rational_roots().is_empty() {
                return Ok(false);
            }
            if degree_pattern_certificate(f) {
                return Ok(true);
            }
            Ok(factor_squarefree(f).len() == 1)
        }
    }
}

/// Primes `p` for which `f mod p` is defined, has the same degree, and is
/// squarefree, paired with the reduction.
fn good_primes(f: &Poly, ints: &[BigInt], want: usize) -> Vec<PolyP> {
    let n = f.deg();
    let mut out = Vec::new();
    for &p in SMALL_PRIMES.iter().chain(&[181, 191, 193, 197, 199, 211, 223, 227, 229, 233]) {
        let fp = PolyP::from_ints(ints, p);
        if fp.deg() != n || fp.c.len() != n + 1 || !fp.is_squarefree() {
            continue;
        }
        out.push(fp);
        if out.len() == want {
            break;
        }
    }
    out
}

/// Degrees `0..=n` realizable as sums of sub-multisets of `degs`.
fn subset_sums(degs: &[usize], n: usize) -> Vec<bool> {
    let mut ok = vec![false; n + 1];
    ok[0] = true;
    for &d in degs {
        for s in (d..=n).rev() {
            if ok[s - d] {
                ok[s] = true;
            }
        }
    }
    ok
}

fn ddf_degrees(fp: &PolyP) -> Vec<usize> {
    let mut degs = Vec::new();
    for (d, g) in fp.ddf() {
        for _ in 0..g.deg() / d {
            degs.push(d);
        }
    }
    degs
}

/// True when the modular degree patterns alone prove irreducibility.
fn degree_pattern_certificate(f: &Poly) -> bool {
    let n = f.deg();
    let ints = f.primitive_integer();
    let mut possible = vec![true; n + 1];
    for fp in good_primes(f, &ints, 12) {
        let ok = subset_sums(&ddf_degrees(&fp), n);
        for (a, b) in possible.iter_mut().zip(ok) {
            *a = *a && b;
        }
        if possible[1..n].iter().all(|x| !x) {
            return true;
        }
    }
    false
}

/// Factors a squarefree nonconstant polynomial into monic irreducibles over
/// the rationals (Zassenhaus: factor mod p, Hensel lift, recombine).
pub fn factor_squarefree(f: &Poly) -> Vec<Poly> {
    assert!(f.deg() >= 1, "factor of a constant");
    let mut out = Vec::new();
    let mut ints = f.primitive_integer();
    if ints[0].is_zero() {
        out.push(Poly::x());
        ints.remove(0);
    }
    if ints.len() == 2 {
        out.push(Poly::from_integers(&ints).monic());
    } else if ints.len() > 2 {
        for g in zassenhaus(&ints) {
            out.push(Poly::from_integers(&g).monic());
        }
    }
    out
}

/// Factors a squarefree primitive integer polynomial with nonzero constant
/// term; returns primitive integer factors.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let fpoly = Poly::from_integers(f);
    let candidates = good_primes(&fpoly, f, 6);
    assert!(!candidates.is_empty(), "no good prime for a squarefree polynomial");
    let mut best: Option<(usize, PolyP)> = None;
    let mut possible = vec![true; n + 1];
    for fp in candidates {
        let degs = ddf_degrees(&fp);
        let ok = subset_sums(&degs, n);
        for (a, b) in possible.iter_mut().zip(ok) {
            *a = *a && b;
        }
        if best.as_ref().is_none_or(|(k, _)| degs.len() < *k) {
            best = Some((degs.len(), fp));
        }
    }
    if possible[1..n].iter().all(|x| !x) {
        return vec![f.to_vec()];
    }
    let (_, fp) = best.unwrap();
    let p = fp.p;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let modular = fp.factor_squarefree(&mut rng);
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }

    // p^k > 2 |lc| 2^n ||f||_2 covers every coefficient of lc * (monic factor).
    let lc = f[n].clone();
    let norm2: BigInt = f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm2;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(f, &modular, p, k, &modulus);
    recombine(f.to_vec(), lifted, &modulus)
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zmod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    a.iter().map(|c| c.mod_floor(m)).collect()
}

fn zsym(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

fn from_p(a: &PolyP) -> Vec<BigInt> {
    a.c.iter().map(|&x| BigInt::from(x)).collect()
}

fn add_scaled(a: &mut Vec<BigInt>, b: &[u64], s: &BigInt) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, &y) in a.iter_mut().zip(b) {
        if y != 0 {
            *x += s * BigInt::from(y);
        }
    }
}

fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "leading coefficient not invertible");
    e.x.mod_floor(m)
}

/// Lifts `f = lc * prod(factors) mod p` to monic factors mod `modulus = p^k`.
fn hensel_lift(f: &[BigInt], factors: &[PolyP], p: u64, k: u32, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        let lc = f.last().unwrap();
        let inv = modinv(lc, modulus);
        let g: Vec<BigInt> = f.iter().map(|c| c * &inv).collect();
        return vec![zmod(&g, modulus)];
    }
    let half = factors.len() / 2;
    let (left, right) = factors.split_at(half);
    let fp = PolyP::from_ints(f, p);
    let g0 = left.iter().fold(PolyP::one(p), |a, b| a.mul(b));
    let (h0, r0) = fp.divrem(&g0);
    debug_assert!(r0.is_zero());
    let (one, _, t) = PolyP::xgcd(&g0, &h0);
    debug_assert_eq!(one, PolyP::one(p));

    let pb = BigInt::from(p);
    let mut g = from_p(&g0);
    let mut h = from_p(&h0);
    let mut q = pb.clone();
    for _ in 1..k {
        let gh = zmul(&g, &h);
        let mut e: Vec<BigInt> = f.to_vec();
        if e.len() < gh.len() {
            e.resize(gh.len(), BigInt::zero());
        }
        for (x, y) in e.iter_mut().zip(&gh) {
            *x -= y;
        }
        for x in e.iter_mut() {
            debug_assert!((&*x % &q).is_zero());
            *x = &*x / &q;
        }
        let ep = PolyP::from_ints(&e, p);
        let tau = t.mul(&ep).rem(&g0);
        let (sigma, rem) = ep.sub(&tau.mul(&h0)).divrem(&g0);
        debug_assert!(rem.is_zero());
        add_scaled(&mut g, &tau.c, &q);
        add_scaled(&mut h, &sigma.c, &q);
        q *= &pb;
    }
    let g = zmod(&g, modulus);
    let h = zmod(&h, modulus);
    let mut out = hensel_lift(&g, left, p, k, modulus);
    out.extend(hensel_lift(&h, right, p, k, modulus));
    out
}

fn primitive_part(a: &[BigInt]) -> Vec<BigInt> {
    let mut a: Vec<BigInt> = a.to_vec();
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    let g = a.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let sign = if a.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    a.iter().map(|c| c / &g * &sign).collect()
}

/// Exact integer quotient `f / g` if `g` divides `f` in `Z[X]`.
fn zdiv_exact(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let fq = Poly::from_integers(f);
    let gq = Poly::from_integers(g);
    let q = fq.exact_div(&gq)?;
    q.coeffs().iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
}

fn recombine(mut f: Vec<BigInt>, mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= lifted.len() {
        let m = lifted.len();
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let lc = f.last().unwrap().clone();
            let mut g = vec![lc];
            for &i in &idx {
                g = zmod(&zmul(&g, &lifted[i]), modulus);
            }
            let cand = primitive_part(&zsym(&g, modulus));
            // cheap filter: constant term must divide
            let f0 = &f[0];
            let c0 = &cand[0];
            if !c0.is_zero() && (f0 % c0).is_zero() {
                if let Some(quot) = zdiv_exact(&f, &cand) {
                    out.push(cand);
                    f = quot;
                    let mut k = 0;
                    lifted.retain(|_| {
                        let keep = !idx.contains(&k);
                        k += 1;
                        keep
                    });
                    continue 'outer;
                }
            }
            // next combination
            let mut i = s;
            loop {
                if i == 0 {
                    s += 1;
                    continue 'outer;
                }
                i -= 1;
                if idx[i] < m - s + i {
                    idx[i] += 1;
                    for j in i + 1..s {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    if f.len() > 1 {
        out.push(primitive_part(&f));
    }
    out
}
