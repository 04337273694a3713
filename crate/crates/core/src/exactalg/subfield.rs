//! Subfields of an ambient number field, kept as `Q`-subspaces.
//!
//! Two subfields are equal iff their echelon spans are equal, which makes
//! "the same field inside `L`" an exact, basis-independent comparison.

use alloc::vec::Vec;
use core::fmt;

use super::field::{FieldElement, FieldMap, NumberField};
use super::matrix::{Matrix, Span};
use super::poly::Poly;
use super::rational::{rat, Rational};
use super::realroots::real_root_count;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Subfield {
    ambient: NumberField,
    span: Span,
}

impl PartialEq for Subfield {
    fn eq(&self, o: &Self) -> bool {
        self.ambient.same(&o.ambient) && self.span == o.span
    }
}

impl Eq for Subfield {}

/// Smallest subfield of `ambient` containing all `elements`, by saturating
/// the span of `1` under multiplication by the generators until it is
/// stable. A stable span containing `1` and closed under multiplication by
/// each generator is the ring they generate, which is a field.
pub fn field_generated_by(ambient: &NumberField, elements: &[FieldElement]) -> Subfield {
    let mut span = Span::new(ambient.degree());
    span.insert(ambient.one().coords().to_vec());
    let gens: Vec<FieldElement> = elements.iter().map(|e| ambient.lift(e)).collect();
    let mut frontier = alloc::vec![ambient.one()];
    while let Some(b) = frontier.pop() {
        for g in &gens {
            let p = &b * g;
            if span.insert(p.coords().to_vec()) {
                frontier.push(p);
            }
        }
    }
    Subfield { ambient: ambient.clone(), span }
}

impl Subfield {
    pub fn rationals(ambient: &NumberField) -> Self {
        field_generated_by(ambient, &[])
    }

    pub fn whole(ambient: &NumberField) -> Self {
        Subfield { ambient: ambient.clone(), span: Span::of(ambient.degree(), ambient.basis().iter().map(|b| b.coords().to_vec())) }
    }

    /// A subfield given by a spanning set that is already known to be
    /// closed under multiplication; the closure is verified.
    pub fn from_spanning_set(ambient: &NumberField, elems: &[FieldElement]) -> Result<Self> {
        let span = Span::of(ambient.degree(), elems.iter().map(|e| ambient.lift(e).coords().to_vec()));
        let sf = Subfield { ambient: ambient.clone(), span };
        if !sf.contains(&ambient.one()) {
            return Err(Error::consistency("spanning set does not contain 1"));
        }
        let basis = sf.basis();
        for a in &basis {
            for b in &basis {
                if !sf.contains(&(a * b)) {
                    return Err(Error::consistency("spanning set is not closed under products"));
                }
            }
        }
        Ok(sf)
    }

    pub fn ambient(&self) -> &NumberField {
        &self.ambient
    }

    pub fn degree(&self) -> usize {
        self.span.dim()
    }

    pub fn span(&self) -> &Span {
        &self.span
    }

    pub fn basis(&self) -> Vec<FieldElement> {
        self.span.basis().iter().map(|v| self.ambient.element(v.clone())).collect()
    }

    pub fn contains(&self, e: &FieldElement) -> bool {
        self.span.contains(self.ambient.lift(e).coords())
    }

    pub fn is_subfield_of(&self, o: &Subfield) -> bool {
        self.ambient.same(&o.ambient) && o.span.contains_span(&self.span)
    }

    pub fn intersection(&self, o: &Subfield) -> Subfield {
        assert!(self.ambient.same(&o.ambient));
        Subfield { ambient: self.ambient.clone(), span: self.span.intersection(&o.span) }
    }

    /// An element whose minimal polynomial has degree `self.degree()`.
    /// Tries basis vectors, then small integer combinations in a fixed order.
    pub fn primitive_element(&self) -> FieldElement {
        let basis = self.basis();
        let d = self.degree();
        if d == 1 {
            return self.ambient.one();
        }
        for b in &basis {
            if b.degree() == d {
                return b.clone();
            }
        }
        for k in 1i64.. {
            let e = basis
                .iter()
                .enumerate()
                .fold(self.ambient.zero(), |acc, (i, b)| &acc + &b.scale(&rat(1 + (i as i64 * k) % (2 * k + 1))));
            if e.degree() == d {
                return e;
            }
            for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    let e = &basis[i] + &basis[j].scale(&rat(k));
                    if e.degree() == d {
                        return e;
                    }
                }
            }
        }
        unreachable!()
    }

    pub fn primitive_minpoly(&self) -> Poly {
        self.primitive_element().minimal_polynomial()
    }

    /// The primitive minimal polynomial has only real roots.
    pub fn is_totally_real(&self) -> bool {
        let f = self.primitive_minpoly();
        real_root_count(&f) == f.deg()
    }

    pub fn is_totally_imaginary(&self) -> bool {
        real_root_count(&self.primitive_minpoly()) == 0
    }

    /// Image under an endomorphism of the ambient field, as a subfield.
    pub fn image(&self, map: &FieldMap) -> Subfield {
        assert!(map.source().same(&self.ambient));
        let span = Span::of(map.target().degree(), self.basis().iter().map(|b| map.apply(b).coords().to_vec()));
        Subfield { ambient: map.target().clone(), span }
    }

    /// Elements of `self` fixed by an automorphism `tau` of the ambient
    /// field that preserves `self`.
    pub fn fixed_by(&self, tau: &FieldMap) -> Result<Subfield> {
        if !self.image(tau).span.contains_span(&self.span) || self.image(tau).degree() != self.degree() {
            return Err(Error::invalid("automorphism does not preserve the subfield"));
        }
        let basis = self.basis();
        // kernel of tau - id restricted to span(basis)
        let cols: Vec<Vec<Rational>> =
            basis.iter().map(|b| (&tau.apply(b) - b).coords().to_vec()).collect();
        let m = Matrix::from_cols(&cols);
        let fixed: Vec<FieldElement> = m
            .kernel()
            .into_iter()
            .map(|v| {
                basis.iter().zip(&v).fold(self.ambient.zero(), |acc, (b, c)| &acc + &b.scale(c))
            })
            .collect();
        Subfield::from_spanning_set(&self.ambient, &fixed)
    }

    /// CM test relative to an ambient complex conjugation `conj`: the
    /// subfield is stable under `conj`, its fixed part has half the degree
    /// and is totally real, and the subfield itself is totally imaginary.
    pub fn cm_evidence(&self, conj: &FieldMap) -> CmEvidence {
        let stable = {
            let img = self.image(conj);
            img.degree() == self.degree() && self.span.contains_span(&img.span)
        };
        if !stable {
            return CmEvidence { conj_stable: false, real_subfield: None, totally_imaginary: false };
        }
        let real = self.fixed_by(conj).ok();
        let totally_imaginary = self.is_totally_imaginary();
        CmEvidence { conj_stable: true, real_subfield: real, totally_imaginary }
    }
}

#[derive(Clone, Debug)]
pub struct CmEvidence {
    pub conj_stable: bool,
    pub real_subfield: Option<Subfield>,
    pub totally_imaginary: bool,
}

impl CmEvidence {
    pub fn is_cm(&self, degree: usize) -> bool {
        self.conj_stable
            && self.totally_imaginary
            && self
                .real_subfield
                .as_ref()
                .is_some_and(|r| 2 * r.degree() == degree && r.is_totally_real())
    }
}

impl fmt::Debug for Subfield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subfield(degree {} in {:?})", self.degree(), self.ambient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_fields() {
        let k = NumberField::new(&Poly::from_i64s(&[1, 1, 1, 1, 1])).unwrap();
        let z = k.generator();
        assert_eq!(field_generated_by(&k, &[]).degree(), 1);
        assert_eq!(field_generated_by(&k, &[z.clone()]).degree(), 4);
        let eta = &z + &z.inverse().unwrap();
        let k0 = field_generated_by(&k, &[eta.clone()]);
        assert_eq!(k0.degree(), 2);
        assert!(k0.is_totally_real());
        // idempotent
        assert_eq!(field_generated_by(&k, &k0.basis()), k0);
        let conj = FieldMap::from_generator_image(&k, &z.inverse().unwrap()).unwrap();
        let whole = Subfield::whole(&k);
        let ev = whole.cm_evidence(&conj);
        assert!(ev.is_cm(4));
        assert_eq!(ev.real_subfield.unwrap(), k0);
        assert!(!k0.cm_evidence(&conj).is_cm(2));
    }
}
