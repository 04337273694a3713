//! Square roots, quadratic extensions, and real embeddings of totally real
//! fields.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::factor::factor_squarefree;
use super::field::{eval_poly, FieldElement, FieldMap, NumberField};
use super::matrix::Matrix;
use super::modp::{is_qr, PolyP, SMALL_PRIMES};
use super::poly::Poly;
use super::rational::{rat, Rational};
use super::realroots::{count_real_roots, sign_at_root, RootInterval, Sign};
use crate::error::{Error, Result};

/// Reduction of an absolute field element at the root `r` of the modulus
/// mod `p`; `None` if a denominator vanishes.
fn reduce_at(e: &FieldElement, p: u64, r: u64) -> Option<u64> {
    PolyP::from_poly(&e.as_poly(), p).map(|g| g.eval(r))
}

/// A prime and root `r` of `f mod p` at which `e` is a nonzero quadratic
/// non-residue proves that `e` is not a square.
fn residue_certificate(e: &FieldElement, primes: usize) -> bool {
    let f = e.field().modulus().expect("absolute field");
    let mut tried = 0;
    for &p in SMALL_PRIMES.iter() {
        let Some(fp) = PolyP::from_poly(f, p) else { continue };
        if fp.deg() != f.deg() || !fp.is_squarefree() {
            continue;
        }
        for r in fp.roots() {
            if let Some(v) = reduce_at(e, p, r) {
                if v != 0 && !is_qr(v, p) {
                    return true;
                }
            }
        }
        tried += 1;
        if tried == primes {
            break;
        }
    }
    false
}

/// Square root of `e` in its absolute field, or `None` if `e` is not a
/// square there.
///
/// Non-squares are usually certified by a quadratic non-residue at some
/// degree-one prime. Otherwise the algebra `A = K[s]/(s^2 - e)` is examined:
/// for `w = s + k X` with minimal polynomial of full degree `2n`, `A` is a
/// field iff that polynomial is irreducible; if it splits as `N1 N2` then
/// `N1(w) = c0 + c1 s` vanishes on one factor of `A = K x K`, which gives
/// the root `+-c0/c1`.
pub fn sqrt(e: &FieldElement) -> Option<FieldElement> {
    let k = e.field();
    assert!(k.is_absolute(), "sqrt is implemented for absolute fields");
    if e.is_zero() {
        return Some(e.clone());
    }
    if let Some(q) = e.as_rational() {
        if let Some(r) = rational_sqrt(&q) {
            return Some(k.from_rational(r));
        }
        if k.degree() == 1 {
            return None;
        }
    }
    if residue_certificate(e, 25) {
        return None;
    }
    let n = k.degree();
    let a = NumberField::quadratic_tower_unchecked(&k.zero(), &(-e));
    let s = a.generator();
    let x = a.from_base(&k.generator());
    for kk in 1i64.. {
        let w = &s + &x.scale(&rat(kk));
        let mp = w.minimal_polynomial();
        if mp.deg() != 2 * n {
            continue;
        }
        let factors = factor_squarefree(&mp);
        if factors.len() == 1 {
            return None;
        }
        let n1 = factors.iter().find(|f| f.deg() == n).expect("split algebra has degree-n factors");
        let (c0, c1) = eval_poly(n1, &w).components();
        let y = c0.div(&c1).ok()?;
        for cand in [y.clone(), -&y] {
            if cand.square() == *e {
                return Some(cand);
            }
        }
        unreachable!("Trager split produced no square root");
    }
    unreachable!()
}

pub fn is_square(e: &FieldElement) -> bool {
    sqrt(e).is_some()
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    use num_traits::Signed;
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// A quadratic extension `B(s)`, `s^2 + p s + q = 0`, in tower form and in
/// absolute form `Q(w)`, with the embeddings between them.
#[derive(Clone, Debug)]
pub struct QuadraticExtension {
    pub base: NumberField,
    pub tower: NumberField,
    pub absolute: NumberField,
    /// Primitive element `w = s + c * gen(B)` used for the absolute form.
    pub shift: Rational,
    /// Tower to absolute, and back.
    pub to_absolute: FieldMap,
    pub from_absolute: FieldMap,
    /// Absolute minimal polynomial of the adjoined root `s`.
    pub root_minpoly: Poly,
}

impl QuadraticExtension {
    /// The adjoined root inside the absolute field.
    pub fn root(&self) -> FieldElement {
        self.to_absolute.apply(&self.tower.generator())
    }

    /// Image of a base element inside the absolute field.
    pub fn embed_base(&self, u: &FieldElement) -> FieldElement {
        self.to_absolute.apply(&self.tower.from_base(u))
    }
}

/// Builds `B[s]/(s^2 + p s + q)` over an absolute base `B`, after checking
/// that the relation has no root in `B`.
pub fn compose_extension(p: &FieldElement, q: &FieldElement) -> Result<QuadraticExtension> {
    let base = p.field().clone();
    assert!(base.is_absolute(), "compose_extension needs an absolute base");
    let disc = &p.square() - &q.scale(&rat(4));
    if is_square(&disc) {
        return Err(Error::NotAFieldExtension(format!(
            "s^2 + ({p})s + ({q})"
        )));
    }
    let tower = NumberField::quadratic_tower_unchecked(p, q);
    let n2 = tower.degree();
    let s = tower.generator();
    let g = tower.from_base(&base.generator());
    let mut c = 0i64;
    loop {
        let w = &s + &g.scale(&rat(c));
        let mp = w.minimal_polynomial();
        if mp.deg() == n2 {
            let absolute = NumberField::from_irreducible_unchecked(&mp);
            // from_absolute: w -> its tower value
            let from_absolute = FieldMap::from_generator_image(&absolute, &w)?;
            let inv = from_absolute
                .matrix()
                .inverse()
                .ok_or_else(|| Error::consistency("power basis of a primitive element is singular"))?;
            let to_absolute = matrix_map(&tower, &absolute, inv);
            return Ok(QuadraticExtension {
                base,
                root_minpoly: s.minimal_polynomial(),
                tower,
                absolute,
                shift: rat(c),
                to_absolute,
                from_absolute,
            });
        }
        c = if c <= 0 { 1 - c } else { -c };
    }
}

fn matrix_map(source: &NumberField, target: &NumberField, m: Matrix) -> FieldMap {
    let cols: Vec<FieldElement> = (0..source.degree()).map(|j| target.element(m.col(j))).collect();
    FieldMap::from_images(source, target, &cols)
}

/// The real embeddings of a totally real absolute field, as isolating
/// intervals of its modulus, with certified signs of elements.
#[derive(Clone, Debug)]
pub struct RealEmbeddings {
    field: NumberField,
    modulus: Poly,
    intervals: Vec<RootInterval>,
    cap_bits: u32,
}

impl RealEmbeddings {
    pub fn new(field: &NumberField, cap_bits: u32) -> Result<Self> {
        let f = field
            .modulus()
            .ok_or_else(|| Error::invalid("real embeddings need an absolute field"))?
            .clone();
        let mut cert = count_real_roots(&f);
        if cert.count != f.deg() {
            return Err(Error::invalid(format!(
                "{f} has {} real roots, not {}; the field is not totally real",
                cert.count,
                f.deg()
            )));
        }
        cert.refine_to(&Rational::new(1.into(), num_bigint::BigInt::from(1u64) << 32));
        Ok(RealEmbeddings { field: field.clone(), modulus: f, intervals: cert.isolating_intervals, cap_bits })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[RootInterval] {
        &self.intervals
    }

    /// Sign at each embedding, in increasing order of the generator's image.
    pub fn signs(&self, e: &FieldElement) -> Result<Vec<Sign>> {
        (0..self.count()).map(|i| self.sign_at(e, i)).collect()
    }

    pub fn sign_at(&self, e: &FieldElement, i: usize) -> Result<Sign> {
        assert!(e.field().same(&self.field));
        if e.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        let mut iv = self.intervals[i].clone();
        sign_at_root(&self.modulus, &e.as_poly(), &mut iv, self.cap_bits)
    }

    /// Rational enclosure of `e` at embedding `i`, of width about `2^-bits`
    /// times the size of `e`'s derivative; for diagnostics only.
    pub fn enclosure(&self, e: &FieldElement, i: usize, bits: u32) -> (Rational, Rational) {
        let mut iv = self.intervals[i].clone();
        let w = Rational::new(1.into(), num_bigint::BigInt::from(1u64) << bits);
        super::realroots::refine_interval(&self.modulus, &mut iv, &w);
        super::realroots::eval_interval(&e.as_poly(), &iv.lo, &iv.hi)
    }
}

/// Signs of an element of a totally real absolute field at all of its real
/// embeddings. Exact zero is reported as `IdenticallyZero`.
pub fn certified_signs(e: &FieldElement, cap_bits: u32) -> Result<Vec<Sign>> {
    if e.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    RealEmbeddings::new(e.field(), cap_bits)?.signs(e)
}

/// Coordinates of `e` in the powers `1, g, ..., g^(d-1)` of `g`, where `d`
/// is the degree of `g`; `None` if `e` is not in `Q(g)`.
pub fn express_in_powers(e: &FieldElement, g: &FieldElement) -> Option<Vec<Rational>> {
    let d = g.degree();
    let mut cols = Vec::with_capacity(d);
    let mut p = g.field().one();
    for _ in 0..d {
        cols.push(p.coords().to_vec());
        p = &p * g;
    }
    let m = Matrix::from_cols(&cols);
    let x = m.solve(e.coords())?;
    debug_assert!(x.iter().all(|c| c.is_zero()) || !e.is_zero());
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::ratio;

    fn field(cs: &[i64]) -> NumberField {
        NumberField::new(&Poly::from_i64s(cs)).unwrap()
    }

    #[test]
    fn square_roots() {
        let k = field(&[1, 0, 1]);
        let i = k.generator();
        // 2i = (1+i)^2
        let r = sqrt(&i.scale(&rat(2))).unwrap();
        assert_eq!(r.square(), i.scale(&rat(2)));
        assert!(sqrt(&i).is_none());
        assert!(sqrt(&k.from_i64(-4)).is_some());
        assert!(sqrt(&k.from_i64(2)).is_none());
        assert_eq!(sqrt(&k.from_rational(ratio(9, 4))).unwrap(), k.from_rational(ratio(3, 2)));
        // zeta8 field: 2 = (zeta + zeta^-1)^2
        let z8 = field(&[1, 0, 0, 0, 1]);
        let two = z8.from_i64(2);
        assert!(sqrt(&two).is_some());
        let z = z8.generator();
        assert!(sqrt(&z).is_none());
        assert_eq!(sqrt(&z.square()).unwrap().square(), z.square());
    }

    #[test]
    fn compose_over_rationals() {
        let q = NumberField::rationals();
        let ext = compose_extension(&q.zero(), &q.from_i64(1)).unwrap();
        assert_eq!(ext.absolute.degree(), 2);
        assert_eq!(ext.root_minpoly, Poly::from_i64s(&[1, 0, 1]));
        assert!(matches!(
            compose_extension(&q.zero(), &q.from_i64(-1)),
            Err(Error::NotAFieldExtension(_))
        ));
    }

    #[test]
    fn compose_over_golden_field() {
        let k0 = field(&[-1, 1, 1]);
        let ext = compose_extension(&k0.zero(), &k0.from_i64(12)).unwrap();
        assert_eq!(ext.absolute.degree(), 4);
        let r = ext.root();
        assert_eq!(r.square(), ext.absolute.from_i64(-12));
        let g = ext.embed_base(&k0.generator());
        assert_eq!(&g.square() + &g, ext.absolute.one());
    }

    #[test]
    fn signs() {
        let k = field(&[-1, 1, 1]);
        assert_eq!(certified_signs(&k.generator(), 4096).unwrap(), alloc::vec![Sign::Negative, Sign::Positive]);
        assert_eq!(certified_signs(&k.from_i64(-1), 4096).unwrap(), alloc::vec![Sign::Negative; 2]);
        assert_eq!(certified_signs(&k.zero(), 4096), Err(Error::IdenticallyZero));
        let z = field(&[1, 0, 1]);
        assert!(RealEmbeddings::new(&z, 4096).is_err());
    }
}
