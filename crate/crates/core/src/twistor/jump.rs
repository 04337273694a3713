//! Picard numbers of twistor points and the bounded-height jump survey.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactalg::Rational;
use crate::hodge::rational_11_classes;

use super::setup::{
    classify_class, equator_point, is_primitive, north_pole, point_from_class, to_rationals, Location,
    TwistorPoint, TwistorSetup,
};

/// `rho_z = dim_Q (P_z^perp ∩ (T + Q l))`: rational classes orthogonal to
/// the period `a sigma + b conj(sigma) + c l`.
pub fn picard_number_at(point: &TwistorPoint) -> usize {
    rational_11_classes(&point.coords).len()
}

/// `rho(S_t) = rho_z + rho(S) - 1`.
pub fn geometric_picard(rho_z: usize, rho_s: usize) -> Result<usize> {
    if rho_s == 0 {
        return Err(Error::invalid("rho(S) must be at least 1"));
    }
    Ok(rho_z + rho_s - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpEntry {
    pub class: Vec<i64>,
    pub location: Location,
    pub rho: usize,
}

#[derive(Clone, Debug, Default)]
pub struct JumpSurvey {
    pub entries: Vec<JumpEntry>,
    /// The budget stopped the enumeration early.
    pub partial: bool,
}

impl JumpSurvey {
    /// Entries contradicting jump locality: `rho >= 2` off the equator, or
    /// `rho != 1` at a generic point or a pole.
    pub fn violations(&self) -> Vec<&JumpEntry> {
        self.entries
            .iter()
            .filter(|e| match e.location {
                Location::Equator => false,
                Location::Generic | Location::Pole => e.rho != 1,
            })
            .collect()
    }
}

/// Primitive integer classes of max-norm at most `height` with first
/// nonzero entry positive, in lexicographic order.
pub fn survey_classes(dim: usize, height: u32) -> Vec<Vec<i64>> {
    let h = height as i64;
    let mut out = Vec::new();
    if h == 0 {
        return out;
    }
    let mut v = alloc::vec![-h; dim];
    loop {
        if is_primitive(&v) {
            out.push(v.clone());
        }
        let mut k = dim;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if v[k] < h {
                v[k] += 1;
                break;
            }
            v[k] = -h;
        }
    }
}

/// The point of one class: the north pole for `l`, the equator point for
/// `m = 0`, otherwise the first point of the conjugate pair.
pub fn point_for_class(setup: &TwistorSetup, v: &[Rational]) -> Result<(Location, TwistorPoint)> {
    let cls = classify_class(setup, v)?;
    cls.require_positive()?;
    let p = match cls.location {
        Location::Pole => north_pole(setup),
        Location::Equator => equator_point(setup, &cls)?.0,
        Location::Generic => point_from_class(setup, &cls)?.0,
    };
    Ok((cls.location, p))
}

/// `(location, rho)` for one integer class, or `None` if `(l'.l') <= 0`.
pub fn survey_entry(setup: &TwistorSetup, v: &[i64]) -> Result<Option<JumpEntry>> {
    let q = to_rationals(v);
    let cls = classify_class(setup, &q)?;
    if !cls.is_positive() {
        return Ok(None);
    }
    let (location, point) = point_for_class(setup, &q)?;
    Ok(Some(JumpEntry { class: v.to_vec(), location, rho: picard_number_at(&point) }))
}

/// Every positive primitive class of height at most `height`, up to
/// `budget` classes.
pub fn jump_survey(setup: &TwistorSetup, height: u32, budget: Option<usize>) -> Result<JumpSurvey> {
    let classes = survey_classes(setup.rank() + 1, height);
    let mut out = JumpSurvey::default();
    for (n, v) in classes.iter().enumerate() {
        if budget.is_some_and(|b| n >= b) {
            out.partial = true;
            break;
        }
        if let Some(e) = survey_entry(setup, v)? {
            out.entries.push(e);
        }
    }
    if let Some(bad) = out.violations().first() {
        return Err(Error::consistency(format!(
            "Picard number {} at {:?} on the {}",
            bad.rho,
            bad.class,
            bad.location.as_str()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::hodge::{build_cm_structure, CmField, DEFAULT_PRECISION_CAP};
    use crate::twistor::setup::extend_by_polarization;

    fn gaussian(d: i64) -> TwistorSetup {
        let k = CmField::gaussian();
        let h = build_cm_structure(&k, &k.field().generator(), &k.field().one(), DEFAULT_PRECISION_CAP).unwrap();
        extend_by_polarization(&h, &rat(d)).unwrap()
    }

    #[test]
    fn poles_and_dictionary() {
        let s = gaussian(2);
        assert_eq!(picard_number_at(&north_pole(&s)), 1);
        assert_eq!(geometric_picard(1, 1).unwrap(), 1);
        assert_eq!(geometric_picard(1, 20).unwrap(), 20);
        assert_eq!(geometric_picard(0, 5).unwrap(), 4);
        assert!(geometric_picard(1, 0).is_err());
    }

    #[test]
    fn class_enumeration() {
        let c = survey_classes(3, 1);
        // (3^3 - 1)/2 sign classes, all primitive at height 1
        assert_eq!(c.len(), 13);
        assert!(survey_classes(3, 0).is_empty());
        let c2 = survey_classes(2, 2);
        assert!(c2.contains(&alloc::vec![1, -2]));
        assert!(!c2.contains(&alloc::vec![2, 2]));
    }

    #[test]
    fn gaussian_survey() {
        for d in [1, 2, 4] {
            let s = gaussian(d);
            let j = jump_survey(&s, 3, None).unwrap();
            assert!(!j.partial);
            assert!(j.entries.iter().all(|e| e.rho == 1));
            assert!(j.entries.iter().any(|e| e.location == Location::Generic));
            assert!(j.entries.iter().any(|e| e.location == Location::Pole));
        }
    }
}
