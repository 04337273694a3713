//! Period fields, endomorphism fields by direct linear solve, rational
//! `(1,1)` classes, and the three-way CM test.
//!
//! A Hodge structure is given by a quadratic space and the coordinates
//! `y_i = (sigma.gamma_i)` of its period in an ambient field `L`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{
    field_generated_by, real_root_count, FieldElement, FieldMap, Matrix, Poly, Rational, Span,
    Subfield,
};

use super::space::{apply_rational, QuadraticSpace};
use super::structure::coordinate_rank;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    TotallyReal,
    Cm,
}

#[derive(Clone, Debug)]
pub struct EndomorphismFieldResult {
    /// Basis of `End_Hdg(T)` acting on coordinate vectors.
    pub matrix_basis: Vec<Matrix>,
    pub primitive_minpoly: Poly,
    pub classification: Classification,
    pub degree: usize,
    pub real_subfield_degree: usize,
    /// `K_T` inside `L`, through the eigenvalue on `sigma`.
    pub field: Subfield,
    /// Eigenvalues of the self-adjoint endomorphisms.
    pub real_field: Subfield,
    /// Dimension of the intermediate solution space `L_T`.
    pub lt_dimension: usize,
}

/// Basis of the rational classes `gamma` with `(sigma.gamma) = 0`.
pub fn rational_11_classes(coords: &[FieldElement]) -> Vec<Vec<Rational>> {
    let Some(first) = coords.first() else { return Vec::new() };
    let n = first.field().degree();
    let cols: Vec<Vec<Rational>> = coords.iter().map(|y| y.coords().to_vec()).collect();
    debug_assert!(cols.iter().all(|c| c.len() == n));
    Matrix::from_cols(&cols).kernel()
}

/// `Q(y_2/y_1, ..., y_r/y_1)`.
pub fn period_field(coords: &[FieldElement]) -> Result<Subfield> {
    let y1 = coords.first().ok_or_else(|| Error::invalid("empty coordinate vector"))?;
    if y1.is_zero() {
        return Err(Error::ReducibleStructure(String::from("first period coordinate vanishes")));
    }
    let inv = y1.inverse()?;
    let ratios: Vec<FieldElement> = coords.iter().map(|y| y * &inv).collect();
    let k = field_generated_by(y1.field(), &ratios);
    if k.degree() < coordinate_rank(&ratios) {
        return Err(Error::consistency("period field smaller than the span of its generators"));
    }
    Ok(k)
}

use alloc::string::String;

fn psi_adjoint(g: &Matrix, ginv: &Matrix, psi: &Matrix) -> Matrix {
    &(g * &psi.transpose()) * ginv
}

fn flatten(m: &Matrix) -> Vec<Rational> {
    m.entries().to_vec()
}

/// `End_Hdg(T)` for an irreducible structure, embedded in `L` by its
/// eigenvalue on `sigma`.
///
/// Works with `Psi = G Phi G^-1`, which acts on the coordinate vector:
/// `Phi sigma = lambda sigma` iff `Psi y = lambda y`. Proportionality is
/// the vanishing of all 2x2 minors `(Psi y)_i y_p - (Psi y)_p y_i`, which is
/// linear in `Psi`; their `Q`-coordinates in `L` give the linear system for
/// `L_T`. The metric adjoint becomes `Psi -> G Psi^T G^-1`.
pub fn endomorphism_field(space: &QuadraticSpace, coords: &[FieldElement]) -> Result<EndomorphismFieldResult> {
    let r = space.dim();
    if coords.len() != r {
        return Err(Error::invalid("coordinate vector has the wrong length"));
    }
    let nk = rational_11_classes(coords);
    if !nk.is_empty() {
        return Err(Error::ReducibleStructure(format!(
            "{} rational (1,1) classes; the endomorphisms form an algebra, not a field",
            nk.len()
        )));
    }
    let l = coords[0].field().clone();
    let n = l.degree();
    let g = space.gram();
    let ginv = g.inverse().expect("nondegenerate form");

    let prod: Vec<Vec<FieldElement>> =
        coords.iter().map(|a| coords.iter().map(|b| a * b).collect()).collect();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..r {
        for p in i + 1..r {
            // sum_k Psi_ik y_k y_p - Psi_pk y_k y_i
            for c in 0..n {
                let mut row = alloc::vec![Rational::zero(); r * r];
                for k in 0..r {
                    row[i * r + k] += &prod[k][p].coords()[c];
                    row[p * r + k] -= &prod[k][i].coords()[c];
                }
                rows.push(row);
            }
        }
    }
    let lt: Vec<Vec<Rational>> = if rows.is_empty() {
        Matrix::identity(r * r).kernel()
    } else {
        Matrix::from_rows(rows).kernel()
    };
    let lt_span = Span::of(r * r, lt.iter().cloned());
    let adj_span = Span::of(
        r * r,
        lt.iter().map(|v| flatten(&psi_adjoint(g, &ginv, &Matrix::from_entries(r, r, v.clone())))),
    );
    let kt = lt_span.intersection(&adj_span);
    let psis: Vec<Matrix> = kt.basis().iter().map(|v| Matrix::from_entries(r, r, v.clone())).collect();
    if psis.is_empty() {
        return Err(Error::consistency("identity is not a Hodge endomorphism"));
    }

    // adjoint involution and closure under products
    for psi in &psis {
        let adj = psi_adjoint(g, &ginv, psi);
        if !kt.contains(&flatten(&adj)) || psi_adjoint(g, &ginv, &adj) != *psi {
            return Err(Error::consistency("endomorphisms not stable under the adjoint"));
        }
        for other in &psis {
            if !kt.contains(&flatten(&(psi * other))) {
                return Err(Error::consistency("endomorphisms not closed under composition"));
            }
        }
    }

    let p = coords.iter().position(|y| !y.is_zero()).expect("irreducible");
    let yp_inv = coords[p].inverse()?;
    let eigen = |psi: &Matrix| -> Result<FieldElement> {
        let py = apply_rational(psi, coords, &l);
        let lam = &py[p] * &yp_inv;
        if py.iter().zip(coords).any(|(a, b)| *a != &lam * b) {
            return Err(Error::consistency("solver returned a non-eigen endomorphism"));
        }
        Ok(lam)
    };
    let eigs: Vec<FieldElement> = psis.iter().map(&eigen).collect::<Result<_>>()?;
    let field = Subfield::from_spanning_set(&l, &eigs)?;
    if field.degree() != psis.len() {
        return Err(Error::consistency("eigenvalue map is not injective"));
    }

    let sa: Vec<Matrix> = {
        // self-adjoint part: kernel of adj - id on the span
        let cols: Vec<Vec<Rational>> = psis
            .iter()
            .map(|m| flatten(&psi_adjoint(g, &ginv, m).sub(m)))
            .collect();
        Matrix::from_cols(&cols)
            .kernel()
            .into_iter()
            .map(|c| {
                psis.iter().zip(&c).fold(Matrix::zeros(r, r), |acc, (m, x)| acc.add(&m.scale(x)))
            })
            .collect()
    };
    let real_eigs: Vec<FieldElement> = sa.iter().map(&eigen).collect::<Result<_>>()?;
    let real_field = Subfield::from_spanning_set(&l, &real_eigs)?;

    let f = field.primitive_minpoly();
    let nreal = real_root_count(&f);
    let degree = field.degree();
    let classification = if nreal == f.deg() {
        Classification::TotallyReal
    } else if nreal == 0 && 2 * real_field.degree() == degree && real_field.is_totally_real() {
        Classification::Cm
    } else {
        return Err(Error::consistency(format!(
            "endomorphism field {f} is neither totally real nor CM"
        )));
    };
    if classification == Classification::TotallyReal && r / degree <= 2 {
        return Err(Error::consistency(format!(
            "totally real endomorphism field of degree {degree} with dim over it {}",
            r / degree
        )));
    }
    let real_subfield_degree = real_field.degree();
    let matrix_basis = psis.iter().map(|psi| &(&ginv * psi) * g).collect();
    Ok(EndomorphismFieldResult {
        matrix_basis,
        primitive_minpoly: f,
        classification,
        degree,
        real_subfield_degree,
        field,
        real_field,
        lt_dimension: lt.len(),
    })
}

/// The three CM criteria and their common value.
#[derive(Clone, Debug)]
pub struct CmVerdict {
    /// `K_T` is CM of degree `r`.
    pub endomorphism_cm: bool,
    /// `k_T` is CM of degree `r`.
    pub period_cm: bool,
    /// `K_T = k_T` inside `L`.
    pub fields_equal: bool,
    pub verdict: bool,
    pub endomorphisms: EndomorphismFieldResult,
    pub period_field: Subfield,
}

/// Evaluates the three CM criteria without asserting that they agree.
/// `conj` is complex conjugation on the ambient field. `verdict` follows
/// the definition, i.e. criterion (i).
pub fn cm_criteria(space: &QuadraticSpace, coords: &[FieldElement], conj: &FieldMap) -> Result<CmVerdict> {
    let r = space.dim();
    let endo = endomorphism_field(space, coords)?;
    let kt = period_field(coords)?;
    if !endo.field.is_subfield_of(&kt) {
        return Err(Error::consistency("endomorphism field is not contained in the period field"));
    }
    let endomorphism_cm = endo.classification == Classification::Cm && endo.degree == r;
    let period_cm = kt.degree() == r && kt.cm_evidence(conj).is_cm(r);
    let fields_equal = endo.field == kt;
    Ok(CmVerdict { endomorphism_cm, period_cm, fields_equal, verdict: endomorphism_cm, endomorphisms: endo, period_field: kt })
}

impl CmVerdict {
    pub fn criteria_agree(&self) -> bool {
        self.endomorphism_cm == self.period_cm && self.period_cm == self.fields_equal
    }
}

/// [`cm_criteria`], with disagreement among the criteria, or `K_T` not
/// inside `k_T`, reported as an internal consistency failure.
pub fn is_cm(space: &QuadraticSpace, coords: &[FieldElement], conj: &FieldMap) -> Result<CmVerdict> {
    let v = cm_criteria(space, coords, conj)?;
    if !v.criteria_agree() {
        return Err(Error::consistency(format!(
            "CM criteria disagree: endomorphism field {}, period field {}, equality {}",
            v.endomorphism_cm, v.period_cm, v.fields_equal
        )));
    }
    Ok(v)
}

/// `dim_Q (P_T ∩ T)`: rational `c` with `rank [c | sigma | conj sigma] <= 2`,
/// as the kernel of all 3x3 minors, which are linear in `c`.
pub fn positive_plane_rational_dimension(
    space: &QuadraticSpace,
    coords: &[FieldElement],
    conj: &FieldMap,
) -> usize {
    let r = space.dim();
    if r < 3 {
        return r;
    }
    let l = coords[0].field().clone();
    let n = l.degree();
    let ginv = space.gram().inverse().expect("nondegenerate form");
    let z = apply_rational(&ginv, coords, &l);
    let zb: Vec<FieldElement> = z.iter().map(|x| conj.apply(x)).collect();
    let w = |j: usize, k: usize| &(&z[j] * &zb[k]) - &(&z[k] * &zb[j]);
    let mut rows = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                let (wi, wj, wk) = (w(j, k), w(i, k), w(i, j));
                for c in 0..n {
                    let mut row = alloc::vec![Rational::zero(); r];
                    row[i] = wi.coords()[c].clone();
                    row[j] = -wj.coords()[c].clone();
                    row[k] = wk.coords()[c].clone();
                    rows.push(row);
                }
            }
        }
    }
    Matrix::from_rows(rows).kernel().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::cmfield::CmField;
    use crate::hodge::structure::{build_cm_structure, DEFAULT_PRECISION_CAP};

    fn zeta5() -> crate::hodge::structure::CmHodgeStructure {
        let k = CmField::zeta5();
        let z = k.field().generator();
        let xi = &z + &z.inverse().unwrap();
        build_cm_structure(&k, &z, &xi, DEFAULT_PRECISION_CAP).unwrap()
    }

    #[test]
    fn zeta5_endomorphisms() {
        let h = zeta5();
        let e = endomorphism_field(h.space(), h.sigma_coords()).unwrap();
        assert_eq!(e.degree, 4);
        assert_eq!(e.classification, Classification::Cm);
        assert_eq!(e.real_subfield_degree, 2);
        assert_eq!(e.field, Subfield::whole(h.field()));
        // the isometry itself is among the endomorphisms
        let span = Span::of(16, e.matrix_basis.iter().map(flatten));
        assert!(span.contains(&flatten(h.alpha_matrix())));
        let v = is_cm(h.space(), h.sigma_coords(), h.conj()).unwrap();
        assert!(v.verdict && v.period_cm && v.fields_equal);
        assert_eq!(positive_plane_rational_dimension(h.space(), h.sigma_coords(), h.conj()), 0);
    }

    #[test]
    fn gaussian_endomorphisms() {
        let k = CmField::gaussian();
        let i = k.field().generator();
        let h = build_cm_structure(&k, &i, &k.field().one(), DEFAULT_PRECISION_CAP).unwrap();
        let e = endomorphism_field(h.space(), h.sigma_coords()).unwrap();
        assert_eq!((e.degree, e.classification), (2, Classification::Cm));
        assert_eq!(period_field(h.sigma_coords()).unwrap().degree(), 2);
        assert_eq!(positive_plane_rational_dimension(h.space(), h.sigma_coords(), h.conj()), 2);
        assert!(rational_11_classes(h.sigma_coords()).is_empty());
    }

    #[test]
    fn direct_sum_with_11_class() {
        let h = zeta5();
        let sp = h.space().extend_by_line(&crate::exactalg::rat(-2)).unwrap();
        let mut y = h.sigma_coords().to_vec();
        y.push(h.field().zero());
        let nk = rational_11_classes(&y);
        assert_eq!(nk.len(), 1);
        assert!(nk[0][..4].iter().all(|c| c.is_zero()));
        assert!(matches!(endomorphism_field(&sp, &y), Err(Error::ReducibleStructure(_))));
    }
}
