//! Period values modulo algebraic scalars, as formal monomials.
//!
//! `C*/Qbar*` is modelled by the free abelian group on period symbols.
//! Algebraic numbers are the identity. Nothing here is numeric: a coset is a
//! finite map from symbols to nonzero integer exponents.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::twistor::Normalization;

/// A transcendental generator such as `r_sigma`, optionally paired with its
/// complex conjugate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodSymbol {
    pub name: String,
    /// Name of the conjugate symbol. `None` means self-conjugate.
    pub conjugate_of: Option<String>,
}

impl PeriodSymbol {
    /// A real (self-conjugate) symbol.
    pub fn real(name: &str) -> Self {
        PeriodSymbol { name: name.into(), conjugate_of: None }
    }

    /// `r_name` and `rbar_name`, conjugate to each other.
    pub fn pair(name: &str) -> (Self, Self) {
        let r = format!("r_{name}");
        let rb = format!("rbar_{name}");
        (
            PeriodSymbol { name: r.clone(), conjugate_of: Some(rb.clone()) },
            PeriodSymbol { name: rb, conjugate_of: Some(r) },
        )
    }

    pub fn conjugate(&self) -> Self {
        match &self.conjugate_of {
            None => self.clone(),
            Some(c) => PeriodSymbol { name: c.clone(), conjugate_of: Some(self.name.clone()) },
        }
    }
}

impl fmt::Display for PeriodSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An element of `C*/Qbar*` in the subgroup generated by the symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodValueCoset {
    exponents: BTreeMap<PeriodSymbol, i64>,
}

impl PeriodValueCoset {
    /// The coset of any nonzero algebraic number.
    pub fn identity() -> Self {
        PeriodValueCoset::default()
    }

    pub fn symbol(s: &PeriodSymbol) -> Self {
        Self::power(s, 1)
    }

    pub fn power(s: &PeriodSymbol, e: i64) -> Self {
        Self::from_exponents([(s.clone(), e)])
    }

    /// Zero exponents are dropped; repeated symbols are added.
    pub fn from_exponents(it: impl IntoIterator<Item = (PeriodSymbol, i64)>) -> Self {
        let mut u = PeriodValueCoset::identity();
        for (s, e) in it {
            u.add_exponent(s, e);
        }
        u
    }

    fn add_exponent(&mut self, s: PeriodSymbol, e: i64) {
        let v = self.exponents.entry(s).or_insert(0);
        *v += e;
        if *v == 0 {
            self.exponents.retain(|_, v| *v != 0);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, s: &PeriodSymbol) -> i64 {
        self.exponents.get(s).copied().unwrap_or(0)
    }

    /// Sorted `(symbol, exponent)` pairs with nonzero exponents.
    pub fn exponents(&self) -> impl Iterator<Item = (&PeriodSymbol, i64)> {
        self.exponents.iter().map(|(s, e)| (s, *e))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut u = self.clone();
        for (s, e) in &o.exponents {
            u.add_exponent(s.clone(), *e);
        }
        u
    }

    pub fn inv(&self) -> Self {
        PeriodValueCoset { exponents: self.exponents.iter().map(|(s, e)| (s.clone(), -e)).collect() }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::from_exponents(self.exponents.iter().map(|(s, e)| (s.clone(), e * k)))
    }

    pub fn conjugate(&self) -> Self {
        Self::from_exponents(self.exponents.iter().map(|(s, e)| (s.conjugate(), *e)))
    }

    /// Sends `s` and its conjugate to the identity, as happens when `sigma`
    /// has algebraic coordinates.
    pub fn specialize_algebraic(&self, s: &PeriodSymbol) -> Self {
        let sb = s.conjugate();
        Self::from_exponents(self.exponents.iter().filter(|(t, _)| **t != *s && **t != sb).map(|(t, e)| (t.clone(), *e)))
    }
}

impl fmt::Display for PeriodValueCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (s, e) in &self.exponents {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn coset_mul(u: &PeriodValueCoset, v: &PeriodValueCoset) -> PeriodValueCoset {
    u.mul(v)
}

pub fn coset_inv(u: &PeriodValueCoset) -> PeriodValueCoset {
    u.inv()
}

pub fn conjugate(u: &PeriodValueCoset) -> PeriodValueCoset {
    u.conjugate()
}

/// A change of the `Qbar`-line by a scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rescale {
    Algebraic,
    Symbol(PeriodSymbol),
}

/// `r_{lambda Sigma} = lambda r_Sigma`.
pub fn rescale_line(u: &PeriodValueCoset, lambda: &Rescale) -> PeriodValueCoset {
    match lambda {
        Rescale::Algebraic => u.clone(),
        Rescale::Symbol(s) => u.mul(&PeriodValueCoset::symbol(s)),
    }
}

/// Cosets of `a`, `b`, `c` in `sigma' = a sigma + b conj(sigma) + c l` for a
/// generic fibre, in terms of `r = r_sigma` and its conjugate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientCosets {
    pub a: PeriodValueCoset,
    pub b: PeriodValueCoset,
    pub c: PeriodValueCoset,
}

impl CoefficientCosets {
    /// `b = a r / rbar`.
    pub fn ratio_relation(&self, r: &PeriodSymbol) -> bool {
        let (r, rb) = (PeriodValueCoset::symbol(r), PeriodValueCoset::symbol(&r.conjugate()));
        self.b == self.a.mul(&r).div(&rb)
    }

    /// The image of `2ab(sigma.conj sigma) + c^2 d = 0` with
    /// `(sigma.conj sigma) = r rbar`: `a b r rbar = c^2`.
    pub fn norm_relation(&self, r: &PeriodSymbol) -> bool {
        let s = PeriodValueCoset::symbol(r).mul(&PeriodValueCoset::symbol(&r.conjugate()));
        self.a.mul(&self.b).mul(&s) == self.c.pow(2)
    }

    /// `c = a r`, which is also the period value of the fibre.
    pub fn c_relation(&self, r: &PeriodSymbol) -> bool {
        self.c == self.a.mul(&PeriodValueCoset::symbol(r))
    }

    pub fn conjugate(&self) -> Self {
        CoefficientCosets { a: self.b.conjugate(), b: self.a.conjugate(), c: self.c.conjugate() }
    }
}

/// Solves `b = a r/rbar`, `c = a r` with the normalized coefficient set to 1.
pub fn coefficient_cosets(r: &PeriodSymbol, n: Normalization) -> CoefficientCosets {
    let rr = PeriodValueCoset::symbol(r);
    let rb = PeriodValueCoset::symbol(&r.conjugate());
    let a = match n {
        Normalization::A => PeriodValueCoset::identity(),
        // 1 = a r / rbar
        Normalization::B => rb.div(&rr),
        // 1 = a r
        Normalization::C => rr.inv(),
    };
    let b = a.mul(&rr).div(&rb);
    let c = a.mul(&rr);
    CoefficientCosets { a, b, c }
}

/// `r_sigma'` for the given normalization of `sigma'`.
pub fn fibre_period_value(r: &PeriodSymbol, n: Normalization) -> PeriodValueCoset {
    coefficient_cosets(r, n).c
}

/// Every normalization with its cosets, for reports.
pub fn all_normalizations(r: &PeriodSymbol) -> Vec<(Normalization, CoefficientCosets)> {
    Normalization::ALL.iter().map(|&n| (n, coefficient_cosets(r, n))).collect()
}
