//! Polynomials over a small prime field `F_p` (`p < 2^31`), used for degree
//! patterns, Cantor-Zassenhaus splitting and residue tests.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use super::poly::Poly;
use super::rational::Rational;

pub(crate) const SMALL_PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

pub(crate) fn mulm(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn invm(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powm(a, p - 2, p)
}

pub(crate) fn int_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// `q mod p`, or `None` when `p` divides the denominator.
pub(crate) fn rat_mod(q: &Rational, p: u64) -> Option<u64> {
    let d = int_mod(q.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mulm(int_mod(q.numer(), p), invm(d, p), p))
}

/// Is `a` a nonzero square mod odd `p`?
pub(crate) fn is_qr(a: u64, p: u64) -> bool {
    a % p != 0 && powm(a, (p - 1) / 2, p) == 1
}

/// Polynomial over `F_p`, lowest degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PolyP {
    pub c: Vec<u64>,
    pub p: u64,
}

impl PolyP {
    pub fn new(mut c: Vec<u64>, p: u64) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyP { c, p }
    }

    /// Reduction of a rational polynomial; `None` if `p` divides a denominator.
    pub fn from_poly(f: &Poly, p: u64) -> Option<Self> {
        let c = f.coeffs().iter().map(|q| rat_mod(q, p)).collect::<Option<Vec<_>>>()?;
        Some(PolyP::new(c, p))
    }

    pub fn from_ints(f: &[BigInt], p: u64) -> Self {
        PolyP::new(f.iter().map(|c| int_mod(c, p)).collect(), p)
    }

    pub fn zero(p: u64) -> Self {
        PolyP { c: Vec::new(), p }
    }

    pub fn one(p: u64) -> Self {
        PolyP::new(vec![1], p)
    }

    pub fn x(p: u64) -> Self {
        PolyP::new(vec![0, 1], p)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.c.iter().rev() {
            acc = (mulm(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invm(self.lead(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, s: u64) -> Self {
        PolyP::new(self.c.iter().map(|&x| mulm(x, s, self.p)).collect(), self.p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let g = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        PolyP::new(
            (0..n).map(|i| (g(&self.c, i) + self.p - g(&o.c, i)) % self.p).collect(),
            self.p,
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return PolyP::zero(self.p);
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + mulm(a, b, self.p)) % self.p;
            }
        }
        PolyP::new(out, self.p)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (PolyP::zero(p), self.clone());
        }
        let dd = d.deg();
        let inv = invm(d.lead(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mulm(r[k + dd], inv, p);
            if c != 0 {
                for (j, &dj) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mulm(c, dj, p)) % p;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (PolyP::new(q, p), PolyP::new(r, p))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn xgcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let p = a.p;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (PolyP::one(p), PolyP::zero(p));
        let (mut t0, mut t1) = (PolyP::zero(p), PolyP::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
            t0 = core::mem::replace(&mut t1, t2);
        }
        let inv = invm(r0.lead(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        PolyP::new(
            self.c.iter().enumerate().skip(1).map(|(i, &c)| mulm(c, i as u64 % self.p, self.p)).collect(),
            self.p,
        )
    }

    /// `self^e mod m`
    pub fn powmod(&self, mut e: BigInt, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut r = PolyP::one(self.p).rem(m);
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                r = r.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e /= &two;
        }
        r
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && PolyP::gcd(self, &self.derivative()).deg() == 0
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(d, g_d)` where `g_d` is the product of the degree-`d` factors.
    pub fn ddf(&self) -> Vec<(usize, Self)> {
        let p = self.p;
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = PolyP::x(p);
        let mut h = x.clone();
        let mut d = 0;
        while f.deg() >= 2 * (d + 1) {
            d += 1;
            h = h.powmod(BigInt::from(p), &f);
            let g = PolyP::gcd(&f, &h.sub(&x));
            if g.deg() > 0 {
                f = f.divrem(&g).0;
                h = h.rem(&f);
                out.push((d, g));
            }
        }
        if f.deg() > 0 {
            out.push((f.deg(), f));
        }
        out
    }

    /// Splits a monic product of distinct degree-`d` irreducibles (odd `p`).
    pub fn edf(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<Self> {
        let p = self.p;
        let n = self.deg();
        if n == d {
            return vec![self.clone()];
        }
        let e: BigInt = (num_traits::pow(BigInt::from(p), d) - 1) / 2;
        loop {
            let a = PolyP::new((0..n).map(|_| rng.next_u64() % p).collect(), p);
            if a.deg() == 0 {
                continue;
            }
            let b = a.powmod(e.clone(), self).sub(&PolyP::one(p));
            let g = PolyP::gcd(self, &b);
            if g.deg() > 0 && g.deg() < n {
                let h = self.divrem(&g).0;
                let mut v = g.edf(d, rng);
                v.extend(h.monic().edf(d, rng));
                return v;
            }
        }
    }

    /// Full factorization of a squarefree polynomial into monic irreducibles.
    pub fn factor_squarefree(&self, rng: &mut ChaCha8Rng) -> Vec<Self> {
        let mut out = Vec::new();
        for (d, g) in self.monic().ddf() {
            out.extend(g.edf(d, rng));
        }
        out
    }

    /// Roots in `F_p` of a nonzero polynomial (brute force; `p` is small).
    pub fn roots(&self) -> Vec<u64> {
        (0..self.p).filter(|&x| self.eval(x) == 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::SeedableRng;

    #[test]
    fn x4_plus_1_splits_mod_every_prime() {
        let f = Poly::from_i64s(&[1, 0, 0, 0, 1]);
        for &p in &SMALL_PRIMES[..10] {
            let fp = PolyP::from_poly(&f, p).unwrap();
            assert!(fp.ddf().iter().all(|(d, _)| *d <= 2), "p={p}");
        }
    }

    #[test]
    fn factorization_multiplies_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = Poly::from_i64s(&[3, 1, 4, 1, 5, 9, 2, 6, 1]);
        for &p in &SMALL_PRIMES[..8] {
            let fp = PolyP::from_poly(&f, p).unwrap();
            if !fp.is_squarefree() {
                continue;
            }
            let fs = fp.factor_squarefree(&mut rng);
            let prod = fs.iter().fold(PolyP::one(p), |a, b| a.mul(b));
            assert_eq!(prod, fp.monic());
        }
    }

    #[test]
    fn residues() {
        assert!(is_qr(2, 7));
        assert!(!is_qr(3, 7));
        assert_eq!(rat_mod(&Rational::new(1.into(), 2.into()), 5), Some(3));
        assert_eq!(rat_mod(&Rational::new(1.into(), 5.into()), 5), None);
    }
}
