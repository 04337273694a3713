//! Fibres over the equator (`m = 0`).

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{FieldElement, Matrix, Rational};
use crate::hodge::{apply_rational, cm_criteria, coordinate_rank, period_field, rational_11_classes, CmVerdict, QuadraticSpace};

use super::fibre::restricted_gram;
use super::setup::{equator_point, Location, PolarizedClass, TwistorPoint, TwistorSetup};

#[derive(Clone, Debug)]
pub struct EquatorReport {
    pub period_field_degree: usize,
    /// `dim_Q span{alpha^j - alpha^-j}` inside `K`.
    pub imaginary_span_dim: usize,
    /// Criterion (i) on `T''`; `verdict` holds all three, unchecked.
    pub cm_verdict: bool,
    /// `dim T''`, the smallest sub-Hodge structure containing the period.
    pub minimal_substructure_dim: usize,
    pub verdict: CmVerdict,
    pub point: TwistorPoint,
}

/// `T' = l'^perp` for `l'` in `T`, with generators `l` and
/// `gamma'_i = gamma~_i - ((l'.gamma~_i)/(l'.l')) l'`, `i >= 2`; the CM test
/// runs on the orthogonal complement `T''` of the rational `(1,1)` classes.
pub fn equator_analysis(setup: &TwistorSetup, cls: &PolarizedClass) -> Result<EquatorReport> {
    if cls.location != Location::Equator {
        return Err(Error::WrongBranch(format!(
            "m = {} is nonzero; the class is not on the equator",
            crate::exactalg::format_rational(&cls.m)
        )));
    }
    let (point, frame) = equator_point(setup, cls)?;
    let h = setup.base();
    let r = setup.rank();
    let g = &frame.gram;
    let v: Vec<Rational> = cls.vector.clone();
    let mut basis = alloc::vec![setup.polarization()];
    for i in 1..r {
        let t = &g[(0, i)] / &g[(0, 0)];
        let mut w = frame.change.col(i);
        w.push(Rational::zero());
        basis.push(w.iter().zip(&v).map(|(x, y)| x - &(y * &t)).collect());
    }
    let ext = &point.extension;
    let l = &ext.field;
    let y: Vec<FieldElement> = basis.iter().map(|w| point.pair(w)).collect();

    // (sigma'.l) = d and (sigma'.gamma'_i) = a(alpha^(i-1) - alpha^(1-i))
    let alpha = ext.lift(h.alpha());
    let alpha_inv = alpha.inverse()?;
    if y[0] != l.from_rational(setup.d().clone()) {
        return Err(Error::consistency("(sigma'.l) != d on the equator"));
    }
    for i in 1..r {
        let e = &point.a * &(&alpha.pow(i as u64) - &alpha_inv.pow(i as u64));
        if y[i] != e {
            return Err(Error::consistency(format!("equator coordinate {i}")));
        }
    }
    let gram = restricted_gram(setup, &basis);
    QuadraticSpace::new(gram.clone())?;

    let a = h.alpha();
    let a_inv = a.inverse()?;
    let imag: Vec<FieldElement> = (0..r).map(|j| &a.pow(j as u64) - &a_inv.pow(j as u64)).collect();
    let imaginary_span_dim = coordinate_rank(&imag);
    let period_field_degree = period_field(&y)?.degree();

    let n = rational_11_classes(&y);
    let (sub_gram, sub_y) = if n.is_empty() {
        (gram, y)
    } else {
        // T'' = N^perp inside T'
        let rows: Vec<Vec<Rational>> = n.iter().map(|c| gram.mul_vec(c)).collect();
        let b = Matrix::from_rows(rows).kernel();
        let bm = Matrix::from_cols(&b);
        let sg = &(&bm.transpose() * &gram) * &bm;
        let sy = apply_rational(&bm.transpose(), &y, l);
        (sg, sy)
    };
    let sub = QuadraticSpace::new(sub_gram)?;
    if sub.signature().positive != 2 {
        return Err(Error::consistency(format!("minimal substructure has signature {}", sub.signature())));
    }
    if !rational_11_classes(&sub_y).is_empty() {
        return Err(Error::consistency("minimal substructure still has (1,1) classes"));
    }
    let verdict = cm_criteria(&sub, &sub_y, &ext.conj)?;
    let report = EquatorReport {
        period_field_degree,
        imaginary_span_dim,
        cm_verdict: verdict.verdict,
        minimal_substructure_dim: sub.dim(),
        verdict,
        point,
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::hodge::{build_cm_structure, CmField, DEFAULT_PRECISION_CAP};
    use crate::twistor::setup::{classify_class, extend_by_polarization, to_rationals};

    #[test]
    fn gaussian_equator_is_cm() {
        let k = CmField::gaussian();
        let h = build_cm_structure(&k, &k.field().generator(), &k.field().one(), DEFAULT_PRECISION_CAP).unwrap();
        let s = extend_by_polarization(&h, &rat(2)).unwrap();
        let c = classify_class(&s, &to_rationals(&[1, 1, 0])).unwrap();
        let e = equator_analysis(&s, &c).unwrap();
        assert!(e.cm_verdict);
        assert_eq!(e.minimal_substructure_dim, 2);
        let g = classify_class(&s, &to_rationals(&[1, 0, 1])).unwrap();
        assert!(matches!(equator_analysis(&s, &g), Err(Error::WrongBranch(_))));
    }

    #[test]
    fn zeta5_equator_is_not_cm() {
        let k = CmField::zeta5();
        let z = k.field().generator();
        let xi = &z + &z.inverse().unwrap();
        let h = build_cm_structure(&k, &z, &xi, DEFAULT_PRECISION_CAP).unwrap();
        let s = extend_by_polarization(&h, &rat(1)).unwrap();
        let mut seen = 0;
        for v in [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [1, 1, 0, 0, 0], [1, -1, 1, 0, 0], [2, 1, 0, 1, 0]] {
            let c = classify_class(&s, &to_rationals(&v)).unwrap();
            if !c.is_positive() {
                continue;
            }
            let e = equator_analysis(&s, &c).unwrap();
            assert!(!e.cm_verdict);
            assert!(e.period_field_degree > 2);
            assert_eq!(e.imaginary_span_dim, 2);
            seen += 1;
        }
        assert!(seen > 0);
    }
}
