//! Sturm sequences, real root isolation, and sign evaluation at real roots
//! by rational interval arithmetic.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rational::{rat, ratio, Rational};
use crate::error::{Error, Result};

/// An isolating interval: the open interval `(lo, hi)` with `f(lo)`, `f(hi)`
/// nonzero, or the single point `lo == hi` when the root is rational and was
/// hit exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.is_exact() {
            x == &self.lo
        } else {
            &self.lo < x && x < &self.hi
        }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn of(q: &Rational) -> Option<Sign> {
        match q.cmp(&Rational::zero()) {
            Ordering::Less => Some(Sign::Negative),
            Ordering::Greater => Some(Sign::Positive),
            Ordering::Equal => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Positive => '+',
        }
    }
}

/// Sturm count with isolating intervals for the squarefree part of a
/// polynomial. Intervals are sorted and pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRootCertificate {
    /// Squarefree part actually analysed.
    pub polynomial: Poly,
    pub count: usize,
    pub isolating_intervals: Vec<RootInterval>,
}

impl RealRootCertificate {
    /// Shrinks every interval to width at most `w`.
    pub fn refine_to(&mut self, w: &Rational) {
        for iv in self.isolating_intervals.iter_mut() {
            refine_interval(&self.polynomial, iv, w);
        }
    }
}

pub fn sturm_sequence(f: &Poly) -> Vec<Poly> {
    let mut seq = alloc::vec![f.clone(), f.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        seq.push(-&r);
    }
    seq.pop();
    seq
}

fn sign_changes(seq: &[Poly], x: &Rational) -> usize {
    let mut changes = 0;
    let mut last: Option<bool> = None;
    for p in seq {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if last.is_some_and(|l| l != pos) {
            changes += 1;
        }
        last = Some(pos);
    }
    changes
}

fn sign_changes_at_infinity(seq: &[Poly], positive: bool) -> usize {
    let mut changes = 0;
    let mut last: Option<bool> = None;
    for p in seq {
        let lc_pos = p.leading().is_positive();
        let odd = p.deg() % 2 == 1;
        let pos = if positive || !odd { lc_pos } else { !lc_pos };
        if last.is_some_and(|l| l != pos) {
            changes += 1;
        }
        last = Some(pos);
    }
    changes
}

/// Number of distinct real roots of a nonzero polynomial.
pub fn real_root_count(f: &Poly) -> usize {
    let g = f.squarefree_part();
    if g.deg() == 0 {
        return 0;
    }
    let seq = sturm_sequence(&g);
    sign_changes_at_infinity(&seq, false) - sign_changes_at_infinity(&seq, true)
}

/// `1 + max |a_i / a_n|`: every root has absolute value below it.
pub fn cauchy_bound(f: &Poly) -> Rational {
    let lc = f.leading().abs();
    let m = f.coeffs()[..f.deg()].iter().map(|c| c.abs() / &lc).max().unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// A split point in `(lo, hi)` that is not a root of `f`.
fn split_point(f: &Poly, lo: &Rational, hi: &Rational) -> Rational {
    let w = hi - lo;
    for (a, b) in [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (3, 5)] {
        let m = lo + &w * ratio(a, b);
        if !f.eval(&m).is_zero() {
            return m;
        }
    }
    // f has at most deg f roots; one of these must work.
    let mut k = 5i64;
    loop {
        let m = lo + &w * ratio(1, k);
        if !f.eval(&m).is_zero() {
            return m;
        }
        k += 1;
    }
}

/// Sturm count and isolating intervals of the squarefree part of `f`.
pub fn count_real_roots(f: &Poly) -> RealRootCertificate {
    assert!(!f.is_zero(), "real roots of the zero polynomial");
    let g = f.squarefree_part();
    if g.deg() == 0 {
        return RealRootCertificate { polynomial: g, count: 0, isolating_intervals: Vec::new() };
    }
    let seq = sturm_sequence(&g);
    let b = cauchy_bound(&g);
    let mut out = Vec::new();
    let lo = -b.clone();
    let vlo = sign_changes(&seq, &lo);
    let vhi = sign_changes(&seq, &b);
    isolate(&g, &seq, lo, vlo, b, vhi, &mut out);
    let count = out.len();
    debug_assert_eq!(
        count,
        sign_changes_at_infinity(&seq, false) - sign_changes_at_infinity(&seq, true)
    );
    RealRootCertificate { polynomial: g, count, isolating_intervals: out }
}

fn isolate(
    f: &Poly,
    seq: &[Poly],
    lo: Rational,
    vlo: usize,
    hi: Rational,
    vhi: usize,
    out: &mut Vec<RootInterval>,
) {
    let n = vlo - vhi;
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push(RootInterval { lo, hi });
        return;
    }
    let m = split_point(f, &lo, &hi);
    let vm = sign_changes(seq, &m);
    isolate(f, seq, lo, vlo, m.clone(), vm, out);
    isolate(f, seq, m, vm, hi, vhi, out);
}

/// Bisects an isolating interval of the squarefree `f` until its width is at
/// most `w` (or the root is hit exactly).
pub fn refine_interval(f: &Poly, iv: &mut RootInterval, w: &Rational) {
    if iv.is_exact() {
        return;
    }
    let mut slo = f.eval(&iv.lo).is_positive();
    while &iv.width() > w {
        let m = iv.midpoint();
        let v = f.eval(&m);
        if v.is_zero() {
            iv.lo = m.clone();
            iv.hi = m;
            return;
        }
        if v.is_positive() == slo {
            iv.lo = m;
            slo = v.is_positive();
        } else {
            iv.hi = m;
        }
    }
}

/// Range enclosure of `h` over `[lo, hi]` by interval Horner evaluation.
pub fn eval_interval(h: &Poly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mut a = Rational::zero();
    let mut b = Rational::zero();
    for c in h.coeffs().iter().rev() {
        let ps = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mut mn = ps[0].clone();
        let mut mx = ps[0].clone();
        for p in &ps[1..] {
            if p < &mn {
                mn = p.clone();
            }
            if p > &mx {
                mx = p.clone();
            }
        }
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

/// Sign of `h(theta)` for the root `theta` of the squarefree `f` isolated by
/// `iv`, which is refined in place. The caller guarantees `h(theta) != 0`.
/// Widths shrink through `2^-16, 2^-32, ...` up to `2^-cap_bits`.
pub fn sign_at_root(f: &Poly, h: &Poly, iv: &mut RootInterval, cap_bits: u32) -> Result<Sign> {
    let mut bits = 8u32;
    loop {
        if iv.is_exact() {
            return Sign::of(&h.eval(&iv.lo)).ok_or(Error::IdenticallyZero);
        }
        let (a, b) = eval_interval(h, &iv.lo, &iv.hi);
        if a.is_positive() {
            return Ok(Sign::Positive);
        }
        if b.is_negative() {
            return Ok(Sign::Negative);
        }
        if bits >= cap_bits {
            return Err(Error::PrecisionExhausted { bits: cap_bits });
        }
        bits = (bits * 2).min(cap_bits);
        let w = Rational::new(One::one(), num_bigint::BigInt::one() << bits);
        refine_interval(f, iv, &w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_i64s(cs)
    }

    #[test]
    fn counts() {
        assert_eq!(count_real_roots(&p(&[1, 0, 1])).count, 0);
        assert_eq!(count_real_roots(&p(&[-2, 0, 1])).count, 2);
        assert_eq!(count_real_roots(&p(&[1, 1, 1, 1, 1])).count, 0);
        assert_eq!(real_root_count(&p(&[-1, -1, 0, 0, 0, 1])), 1);
        // (X-1)^2 (X+2): squarefree part has two roots
        let c = count_real_roots(&(p(&[-1, 1]) * p(&[-1, 1]) * p(&[2, 1])));
        assert_eq!(c.count, 2);
    }

    #[test]
    fn rational_roots_hit_exactly() {
        let mut c = count_real_roots(&(p(&[0, 1]) * p(&[-1, 2]) * p(&[3, 1])));
        assert_eq!(c.count, 3);
        c.refine_to(&ratio(1, 1 << 20));
        let roots = [rat(-3), rat(0), ratio(1, 2)];
        for (iv, r) in c.isolating_intervals.iter().zip(&roots) {
            assert!(iv.contains(r) || (&iv.lo <= r && r <= &iv.hi));
        }
    }

    #[test]
    fn signs_at_golden_ratio_roots() {
        let f = p(&[-1, 1, 1]);
        let c = count_real_roots(&f);
        let signs: Vec<Sign> = c
            .isolating_intervals
            .iter()
            .map(|iv| sign_at_root(&f, &Poly::x(), &mut iv.clone(), 4096).unwrap())
            .collect();
        assert_eq!(signs, alloc::vec![Sign::Negative, Sign::Positive]);
        // X - 0.618 is tiny near the positive root: needs refinement
        let h = Poly::new(alloc::vec![ratio(-618034, 1000000), rat(1)]);
        let mut iv = c.isolating_intervals[1].clone();
        assert_eq!(sign_at_root(&f, &h, &mut iv, 4096).unwrap(), Sign::Negative);
    }
}
