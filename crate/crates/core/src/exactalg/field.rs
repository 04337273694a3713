//! Number fields as quotient rings, and quadratic towers over them.
//!
//! A [`NumberField`] is either absolute, `Q[X]/(f)` with `f` monic
//! irreducible, or a quadratic tower `B[s]/(s^2 + p s + q)` over another
//! field `B`. Elements carry their coordinates over `Q` in the power basis
//! (absolute) or in the basis `[basis(B), basis(B) * s]` (tower). Fields are
//! compared by identity: two independently built copies of `Q(i)` are
//! different ambient fields and their elements do not mix.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::factor::irreducible_over_rationals;
use super::matrix::{LinearDependence, Matrix};
use super::poly::Poly;
use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct NumberField(Arc<FieldData>);

struct FieldData {
    degree: usize,
    repr: Repr,
}

enum Repr {
    Absolute {
        modulus: Poly,
        /// `X^(n+k) mod f` as coordinate vectors, `k = 0..n-1`.
        table: Vec<Vec<Rational>>,
    },
    Quadratic {
        base: NumberField,
        p: FieldElement,
        q: FieldElement,
    },
}

impl NumberField {
    /// `Q[X]/(f)`; `f` is made monic and must be irreducible.
    pub fn new(f: &Poly) -> Result<Self> {
        if f.degree().is_none_or(|d| d == 0) {
            return Err(Error::invalid(format!("modulus {f} must have positive degree")));
        }
        if !irreducible_over_rationals(f)? {
            return Err(Error::Reducible(format!("{f}")));
        }
        Ok(Self::from_irreducible_unchecked(f))
    }

    /// `Q[X]/(f)` without the irreducibility check. For moduli that are known
    /// minimal polynomials of elements of a field.
    pub fn from_irreducible_unchecked(f: &Poly) -> Self {
        let f = f.monic();
        let n = f.deg();
        assert!(n >= 1);
        let mut table = Vec::with_capacity(n);
        // X^n = -(f_0 + ... + f_{n-1} X^{n-1})
        let mut cur: Vec<Rational> = f.coeffs()[..n].iter().map(|c| -c).collect();
        for _ in 0..n {
            table.push(cur.clone());
            // multiply by X
            let top = cur[n - 1].clone();
            let mut next = vec![Rational::zero(); n];
            for i in (1..n).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for i in 0..n {
                    next[i] += &top * &table[0][i];
                }
            }
            cur = next;
        }
        NumberField(Arc::new(FieldData { degree: n, repr: Repr::Absolute { modulus: f, table } }))
    }

    /// The rationals as the degree-one field `Q[X]/(X)`.
    pub fn rationals() -> Self {
        Self::from_irreducible_unchecked(&Poly::x())
    }

    /// `base[s]/(s^2 + p s + q)` without checking that it is a field.
    pub fn quadratic_tower_unchecked(p: &FieldElement, q: &FieldElement) -> Self {
        assert!(p.field.same(&q.field), "tower coefficients from different fields");
        let base = p.field.clone();
        NumberField(Arc::new(FieldData {
            degree: 2 * base.degree(),
            repr: Repr::Quadratic { base, p: p.clone(), q: q.clone() },
        }))
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn same(&self, other: &NumberField) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_absolute(&self) -> bool {
        matches!(self.0.repr, Repr::Absolute { .. })
    }

    /// The modulus of an absolute field.
    pub fn modulus(&self) -> Option<&Poly> {
        match &self.0.repr {
            Repr::Absolute { modulus, .. } => Some(modulus),
            Repr::Quadratic { .. } => None,
        }
    }

    /// Base field and relative coefficients `(p, q)` of a tower.
    pub fn tower_data(&self) -> Option<(&NumberField, &FieldElement, &FieldElement)> {
        match &self.0.repr {
            Repr::Absolute { .. } => None,
            Repr::Quadratic { base, p, q } => Some((base, p, q)),
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), coords: vec![Rational::zero(); self.degree()] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, q: Rational) -> FieldElement {
        let mut e = self.zero();
        match &self.0.repr {
            Repr::Absolute { .. } => e.coords[0] = q,
            Repr::Quadratic { base, .. } => {
                let b = base.from_rational(q);
                e.coords[..base.degree()].clone_from_slice(&b.coords);
            }
        }
        e
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.from_rational(Rational::from_integer(n.into()))
    }

    /// `X` for an absolute field, `s` for a tower.
    pub fn generator(&self) -> FieldElement {
        let mut e = self.zero();
        match &self.0.repr {
            // Q[X]/(X - c): the generator is c
            Repr::Absolute { modulus, .. } if self.degree() == 1 => {
                e.coords[0] = -(modulus.coeff(0) / modulus.coeff(1));
            }
            Repr::Absolute { .. } => e.coords[1] = Rational::one(),
            Repr::Quadratic { base, .. } => e.coords[base.degree()] = Rational::one(),
        }
        e
    }

    pub fn element(&self, coords: Vec<Rational>) -> FieldElement {
        assert_eq!(coords.len(), self.degree(), "coordinate length");
        FieldElement { field: self.clone(), coords }
    }

    /// Element of an absolute field from a polynomial in the generator.
    pub fn from_poly(&self, g: &Poly) -> FieldElement {
        match &self.0.repr {
            Repr::Absolute { modulus, .. } => {
                let r = g.rem(modulus);
                let mut c = r.into_coeffs();
                c.resize(self.degree(), Rational::zero());
                self.element(c)
            }
            Repr::Quadratic { .. } => eval_poly(g, &self.generator()),
        }
    }

    /// Embeds an element of the tower's base.
    pub fn from_base(&self, u: &FieldElement) -> FieldElement {
        let Repr::Quadratic { base, .. } = &self.0.repr else {
            panic!("from_base on an absolute field");
        };
        assert!(u.field.same(base), "element is not in the tower base");
        let mut e = self.zero();
        e.coords[..base.degree()].clone_from_slice(&u.coords);
        e
    }

    /// Maps an element of this field or of any field below it in the tower.
    pub fn lift(&self, e: &FieldElement) -> FieldElement {
        if e.field.same(self) {
            return e.clone();
        }
        match &self.0.repr {
            Repr::Quadratic { base, .. } => self.from_base(&base.lift(e)),
            Repr::Absolute { .. } => panic!("element does not belong to a subfield of this tower"),
        }
    }

    /// True if `e` belongs to this field or a field below it.
    pub fn contains_field_of(&self, e: &FieldElement) -> bool {
        if e.field.same(self) {
            return true;
        }
        match &self.0.repr {
            Repr::Quadratic { base, .. } => base.contains_field_of(e),
            Repr::Absolute { .. } => false,
        }
    }

    /// The `Q`-basis in coordinate order.
    pub fn basis(&self) -> Vec<FieldElement> {
        (0..self.degree())
            .map(|i| {
                let mut e = self.zero();
                e.coords[i] = Rational::one();
                e
            })
            .collect()
    }

    fn mul_coords(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        match &self.0.repr {
            Repr::Absolute { table, .. } => {
                let n = self.degree();
                let mut prod = vec![Rational::zero(); 2 * n - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            prod[i + j] += x * y;
                        }
                    }
                }
                let mut out: Vec<Rational> = prod.drain(..n).collect();
                for (k, c) in prod.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (o, t) in out.iter_mut().zip(&table[k]) {
                        if !t.is_zero() {
                            *o += c * t;
                        }
                    }
                }
                out
            }
            Repr::Quadratic { base, p, q } => {
                let m = base.degree();
                let (u1, v1) = a.split_at(m);
                let (u2, v2) = b.split_at(m);
                let u1u2 = base.mul_coords(u1, u2);
                let v1v2 = base.mul_coords(v1, v2);
                let cross: Vec<Rational> = base
                    .mul_coords(u1, v2)
                    .into_iter()
                    .zip(base.mul_coords(v1, u2))
                    .map(|(x, y)| x + y)
                    .collect();
                let qv = base.mul_coords(&q.coords, &v1v2);
                let pv = base.mul_coords(&p.coords, &v1v2);
                let mut out: Vec<Rational> = u1u2.into_iter().zip(qv).map(|(x, y)| x - y).collect();
                out.extend(cross.into_iter().zip(pv).map(|(x, y)| x - y));
                out
            }
        }
    }

    /// Label used in diagnostics.
    pub fn describe(&self) -> String {
        match &self.0.repr {
            Repr::Absolute { modulus, .. } => format!("Q[X]/({modulus})"),
            Repr::Quadratic { base, p, q } => {
                format!("({})[s]/(s^2 + ({p})s + ({q}))", base.describe())
            }
        }
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[derive(Clone)]
pub struct FieldElement {
    field: NumberField,
    coords: Vec<Rational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.field.same(&o.field) && self.coords == o.coords
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match &self.field.0.repr {
            Repr::Absolute { .. } => {
                self.coords[1..].iter().all(|c| c.is_zero()).then(|| self.coords[0].clone())
            }
            Repr::Quadratic { .. } => {
                let (u, v) = self.components();
                if v.is_zero() {
                    u.as_rational()
                } else {
                    None
                }
            }
        }
    }

    /// `(u, v)` with `self = u + v s` for a tower element.
    pub fn components(&self) -> (FieldElement, FieldElement) {
        let Repr::Quadratic { base, .. } = &self.field.0.repr else {
            panic!("components of an absolute element");
        };
        let m = base.degree();
        (base.element(self.coords[..m].to_vec()), base.element(self.coords[m..].to_vec()))
    }

    /// Representative polynomial of an absolute element.
    pub fn as_poly(&self) -> Poly {
        assert!(self.field.is_absolute(), "as_poly on a tower element");
        Poly::new(self.coords.clone())
    }

    fn check(&self, o: &FieldElement) {
        assert!(
            self.field.same(&o.field),
            "field mismatch: {} vs {}",
            self.field.describe(),
            o.field.describe()
        );
    }

    pub fn scale(&self, c: &Rational) -> FieldElement {
        self.field.element(self.coords.iter().map(|x| x * c).collect())
    }

    pub fn square(&self) -> FieldElement {
        self * self
    }

    /// Multiplicative inverse; `IdenticallyZero` for zero. A zero norm on a
    /// nonzero tower element means the tower is not a field.
    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::IdenticallyZero);
        }
        match &self.field.0.repr {
            Repr::Absolute { modulus, .. } => {
                let (g, s, _) = Poly::xgcd(&self.as_poly(), modulus);
                if g.deg() != 0 {
                    return Err(Error::consistency("modulus is not irreducible"));
                }
                Ok(self.field.from_poly(&s))
            }
            Repr::Quadratic { p, q, .. } => {
                let (u, v) = self.components();
                // (u + v s)(u + v s') with s + s' = -p, s s' = q
                let n = &(&u * &u) - &(&(p * &u) * &v) + &(q * &(&v * &v));
                let ninv = n.inverse().map_err(|_| {
                    Error::consistency("zero divisor: quadratic tower is not a field")
                })?;
                let a = &(&u - &(p * &v)) * &ninv;
                let b = -&(&v * &ninv);
                let f = &self.field;
                Ok(&f.from_base(&a) + &(&f.from_base(&b) * &f.generator()))
            }
        }
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        let mut r = self.field.one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        r
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    pub fn div(&self, o: &FieldElement) -> Result<FieldElement> {
        Ok(self * &o.inverse()?)
    }

    /// Matrix of `x -> self * x` on coordinates.
    pub fn multiplication_matrix(&self) -> Matrix {
        let cols: Vec<Vec<Rational>> =
            self.field.basis().iter().map(|b| (self * b).coords).collect();
        Matrix::from_cols(&cols)
    }

    pub fn trace(&self) -> Rational {
        let m = self.multiplication_matrix();
        (0..m.rows()).map(|i| m[(i, i)].clone()).sum()
    }

    pub fn norm(&self) -> Rational {
        self.multiplication_matrix().det()
    }

    /// Monic minimal polynomial over `Q`, from the first linear dependence
    /// among `1, e, e^2, ...`.
    pub fn minimal_polynomial(&self) -> Poly {
        let mut dep = LinearDependence::new();
        let mut p = self.field.one();
        loop {
            if let Some(c) = dep.push(p.coords.clone()) {
                return Poly::new(c);
            }
            p = &p * self;
        }
    }

    /// Degree of the minimal polynomial.
    pub fn degree(&self) -> usize {
        self.minimal_polynomial().deg()
    }

    pub fn to_string_in(&self, var: &str) -> String {
        match &self.field.0.repr {
            Repr::Absolute { .. } => self.as_poly().to_string_in(var),
            Repr::Quadratic { .. } => {
                let (u, v) = self.components();
                format!("({}) + ({})*s", u.to_string_in(var), v.to_string_in(var))
            }
        }
    }

    /// Coordinates as `"p/q"` strings.
    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

/// `g(x)` by Horner's rule in the field of `x`.
pub fn eval_poly(g: &Poly, x: &FieldElement) -> FieldElement {
    let f = x.field();
    let mut acc = f.zero();
    for c in g.coeffs().iter().rev() {
        acc = &(&acc * x) + &f.from_rational(c.clone());
    }
    acc
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("X"))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.check(o);
        self.field.element(self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self.check(o);
        self.field.element(self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect())
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        self.check(o);
        FieldElement { field: self.field.clone(), coords: self.field.mul_coords(&self.coords, &o.coords) }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.element(self.coords.iter().map(|a| -a).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                (&self).$m(o)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// A `Q`-linear ring homomorphism between fields, stored as the matrix of
/// images of the source basis.
#[derive(Clone)]
pub struct FieldMap {
    source: NumberField,
    target: NumberField,
    matrix: Matrix,
}

impl FieldMap {
    /// The homomorphism of an absolute field sending the generator to `img`.
    pub fn from_generator_image(source: &NumberField, img: &FieldElement) -> Result<Self> {
        let f = source.modulus().expect("absolute source field");
        if !eval_poly(f, img).is_zero() {
            return Err(Error::invalid(format!(
                "{img} is not a root of {f}; no homomorphism"
            )));
        }
        let n = source.degree();
        let mut cols = Vec::with_capacity(n);
        let mut p = img.field().one();
        for _ in 0..n {
            cols.push(p.coords.clone());
            p = &p * img;
        }
        Ok(FieldMap { source: source.clone(), target: img.field().clone(), matrix: Matrix::from_cols(&cols) })
    }

    /// Extends `base_map: B -> B'` to towers `B(s) -> B'(s')` by `s -> s_img`,
    /// where `target` is a tower over `B'`. The image must satisfy the
    /// transported relation.
    pub fn extend_to_tower(source: &NumberField, base_map: &FieldMap, s_img: &FieldElement) -> Result<Self> {
        let (base, p, q) = source.tower_data().expect("tower source");
        assert!(base.same(&base_map.source));
        let target = s_img.field().clone();
        let pi = target.lift(&base_map.apply(p));
        let qi = target.lift(&base_map.apply(q));
        if !(&(&(s_img * s_img) + &(&pi * s_img)) + &qi).is_zero() {
            return Err(Error::invalid("image does not satisfy the tower relation"));
        }
        let mut cols = Vec::with_capacity(source.degree());
        let imgs: Vec<FieldElement> =
            base.basis().iter().map(|b| target.lift(&base_map.apply(b))).collect();
        for b in &imgs {
            cols.push(b.coords.clone());
        }
        for b in &imgs {
            cols.push((b * s_img).coords);
        }
        Ok(FieldMap { source: source.clone(), target, matrix: Matrix::from_cols(&cols) })
    }

    /// From the images of the source basis. The caller guarantees that the
    /// linear map is multiplicative.
    pub(crate) fn from_images(source: &NumberField, target: &NumberField, images: &[FieldElement]) -> Self {
        let cols: Vec<Vec<Rational>> = images.iter().map(|e| target.lift(e).coords).collect();
        FieldMap { source: source.clone(), target: target.clone(), matrix: Matrix::from_cols(&cols) }
    }

    pub fn identity(f: &NumberField) -> Self {
        FieldMap { source: f.clone(), target: f.clone(), matrix: Matrix::identity(f.degree()) }
    }

    /// Inclusion of a field into a tower above it.
    pub fn inclusion(sub: &NumberField, tower: &NumberField) -> Self {
        let cols: Vec<Vec<Rational>> = sub.basis().iter().map(|b| tower.lift(b).coords).collect();
        FieldMap { source: sub.clone(), target: tower.clone(), matrix: Matrix::from_cols(&cols) }
    }

    pub fn source(&self) -> &NumberField {
        &self.source
    }

    pub fn target(&self) -> &NumberField {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, e: &FieldElement) -> FieldElement {
        assert!(e.field.same(&self.source), "map applied outside its source");
        self.target.element(self.matrix.mul_vec(&e.coords))
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &FieldMap) -> FieldMap {
        assert!(first.target.same(&self.source));
        FieldMap { source: first.source.clone(), target: self.target.clone(), matrix: &self.matrix * &first.matrix }
    }

    pub fn is_identity(&self) -> bool {
        self.source.same(&self.target) && self.matrix == Matrix::identity(self.source.degree())
    }
}

impl fmt::Debug for FieldMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldMap({:?} -> {:?})", self.source, self.target)
    }
}
