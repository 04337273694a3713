//! CM Hodge structures of K3 type from the trace form of a CM field.
//!
//! `T = K` with `(x, y) = Tr_{K/Q}(xi * x * conj(y))` and basis
//! `gamma_i = alpha^(1-i)`. The period `sigma` is the `alpha`-eigenvector
//! for the tautological embedding of `K`, normalized so that
//! `(sigma.gamma_i) = alpha^(i-1)`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactalg::{
    express_in_powers, rat, FieldElement, FieldMap, Matrix, NumberField, Rational, RealEmbeddings,
    Sign, Signature, Span,
};

use super::cmfield::{small_vectors, CmField};
use super::space::{apply_rational, bilinear, QuadraticSpace};

/// Default cap on interval refinement, in bits.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// `K^0 = Q(eta)`, `eta = alpha + 1/alpha`, as an absolute field with its
/// inclusion into `K` and its real embeddings.
#[derive(Clone, Debug)]
pub struct RealSubfield {
    pub field: NumberField,
    pub inclusion: FieldMap,
    pub eta: FieldElement,
    pub embeddings: RealEmbeddings,
}

impl RealSubfield {
    /// Preimage in `K^0` of a real element of `K`.
    pub fn pull_back(&self, e: &FieldElement) -> Option<FieldElement> {
        express_in_powers(e, &self.eta).map(|c| self.field.element(c))
    }
}

#[derive(Clone, Debug)]
pub struct CmHodgeStructure {
    input: CmField,
    /// Input field `K` to `Q(alpha)`.
    presentation: FieldMap,
    field: NumberField,
    conj: FieldMap,
    alpha: FieldElement,
    xi: FieldElement,
    space: QuadraticSpace,
    alpha_matrix: Matrix,
    sigma_coords: Vec<FieldElement>,
    to_vector: Matrix,
    real: RealSubfield,
    distinguished: usize,
    cap_bits: u32,
}

/// Builds the CM structure of `(K, alpha, xi)`: `alpha` of norm one and
/// primitive, `xi` real with exactly one positive real embedding.
pub fn build_cm_structure(
    k: &CmField,
    alpha: &FieldElement,
    xi: &FieldElement,
    cap_bits: u32,
) -> Result<CmHodgeStructure> {
    let r = k.degree();
    if !alpha.field().same(k.field()) || !xi.field().same(k.field()) {
        return Err(Error::invalid("alpha and xi must lie in the CM field"));
    }
    if !(alpha * &k.conjugate(alpha)).is_one() {
        return Err(Error::NotAnIsometryGenerator(format!("{alpha} does not have norm one")));
    }
    let f = alpha.minimal_polynomial();
    if f.deg() != r {
        return Err(Error::NotAnIsometryGenerator(format!(
            "{alpha} has degree {} < {r}",
            f.deg()
        )));
    }
    if !k.is_real(xi) || xi.is_zero() {
        return Err(Error::invalid(format!("xi = {xi} must be a nonzero real element")));
    }

    let field = NumberField::from_irreducible_unchecked(&f);
    let a = field.generator();
    let x_img = express_in_powers(&k.field().generator(), alpha)
        .ok_or_else(|| Error::consistency("generator is not a polynomial in a primitive element"))?;
    let presentation = FieldMap::from_generator_image(k.field(), &field.element(x_img))?;
    let xi_k = presentation.apply(xi);
    let a_inv = a.inverse()?;
    let conj = FieldMap::from_generator_image(&field, &a_inv)?;

    let eta = &a + &a_inv;
    let g = eta.minimal_polynomial();
    if 2 * g.deg() != r {
        return Err(Error::consistency(format!("alpha + 1/alpha has degree {}", g.deg())));
    }
    let k0 = NumberField::from_irreducible_unchecked(&g);
    let inclusion = FieldMap::from_generator_image(&k0, &eta)?;
    let embeddings = RealEmbeddings::new(&k0, cap_bits)?;
    let real = RealSubfield { field: k0, inclusion, eta, embeddings };

    // Tr(xi alpha^k) for k = -(r-1) .. r-1
    let traces: Vec<Rational> =
        (0..2 * r - 1).map(|j| (&xi_k * &a.powi(j as i64 - (r as i64 - 1)).unwrap()).trace()).collect();
    let mut gram = Matrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            gram[(i, j)] = traces[j + r - 1 - i].clone();
        }
    }
    let space = match QuadraticSpace::new(gram) {
        Ok(s) if s.signature() == Signature::new(2, r - 2, 0) => s,
        Ok(s) => {
            return Err(Error::SignatureMismatch {
                expected: Signature::new(2, r - 2, 0),
                found: s.signature(),
            })
        }
        Err(e) => return Err(e),
    };

    let xi0 = real.pull_back(&xi_k).ok_or_else(|| Error::consistency("xi is not in K^0"))?;
    let signs = real.embeddings.signs(&xi0)?;
    let positive: Vec<usize> = (0..signs.len()).filter(|&i| signs[i] == Sign::Positive).collect();
    if positive.len() != 1 {
        return Err(Error::consistency("trace form signature disagrees with the signs of xi"));
    }

    let basis_cols: Vec<Vec<Rational>> =
        (0..r).map(|j| a_inv.pow(j as u64).coords().to_vec()).collect();
    let to_vector = Matrix::from_cols(&basis_cols)
        .inverse()
        .ok_or_else(|| Error::consistency("powers of 1/alpha are dependent"))?;
    let alpha_cols: Vec<Vec<Rational>> =
        (0..r).map(|j| to_vector.mul_vec((&a * &a_inv.pow(j as u64)).coords())).collect();
    let alpha_matrix = Matrix::from_cols(&alpha_cols);
    let sigma_coords = (0..r).map(|i| a.pow(i as u64)).collect();

    let h = CmHodgeStructure {
        input: k.clone(),
        presentation,
        field,
        conj,
        alpha: a,
        xi: xi_k,
        space,
        alpha_matrix,
        sigma_coords,
        to_vector,
        real,
        distinguished: positive[0],
        cap_bits,
    };
    h.check_invariants()?;
    Ok(h)
}

/// The first real `xi` in [`small_vectors`] order (coordinates in a basis of
/// `K^0`) for which [`build_cm_structure`] succeeds.
pub fn find_xi(k: &CmField, alpha: &FieldElement, budget: usize, seed: u64, cap_bits: u32) -> Result<FieldElement> {
    let basis = k.real_subfield().basis();
    for c in small_vectors(basis.len(), seed).take(budget) {
        let xi = c.iter().zip(&basis).fold(k.field().zero(), |acc, (&x, b)| &acc + &b.scale(&rat(x)));
        if xi.is_zero() {
            continue;
        }
        match build_cm_structure(k, alpha, &xi, cap_bits) {
            Ok(_) => return Ok(xi),
            Err(Error::SignatureMismatch { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::invalid(format!("no xi with one positive real embedding within {budget} candidates")))
}

impl CmHodgeStructure {
    /// `A^T G A = G`, minimal polynomial of `A`, `(sigma.sigma) = 0`,
    /// `(sigma.conj sigma) = 1/xi`.
    pub fn check_invariants(&self) -> Result<()> {
        let g = self.gram();
        let a = &self.alpha_matrix;
        if &(&a.transpose() * g) * a != *g {
            return Err(Error::consistency("alpha is not an isometry of the trace form"));
        }
        let mp = crate::exactalg::Poly::new(a.minimal_polynomial_coeffs());
        if Some(&mp) != self.field.modulus() {
            return Err(Error::consistency("minimal polynomial of the isometry matrix"));
        }
        let ginv = g.inverse().expect("nondegenerate");
        let x = &self.sigma_coords;
        if !bilinear(&ginv, x, x, &self.field).is_zero() {
            return Err(Error::consistency("(sigma.sigma) != 0"));
        }
        if self.s() != self.xi.inverse()? {
            return Err(Error::consistency("(sigma.conj sigma) != 1/xi"));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.space.dim()
    }

    pub fn input_field(&self) -> &CmField {
        &self.input
    }

    pub fn presentation(&self) -> &FieldMap {
        &self.presentation
    }

    /// `K = Q(alpha)`, presented with `alpha` as generator.
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn conj(&self) -> &FieldMap {
        &self.conj
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn xi(&self) -> &FieldElement {
        &self.xi
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn gram(&self) -> &Matrix {
        self.space.gram()
    }

    pub fn alpha_matrix(&self) -> &Matrix {
        &self.alpha_matrix
    }

    /// `((sigma.gamma_i))_i = (1, alpha, ..., alpha^(r-1))`.
    pub fn sigma_coords(&self) -> &[FieldElement] {
        &self.sigma_coords
    }

    pub fn sigma_bar_coords(&self) -> Vec<FieldElement> {
        self.sigma_coords.iter().map(|x| self.conj.apply(x)).collect()
    }

    /// `(sigma.conj sigma)`, computed from the coordinates.
    pub fn s(&self) -> FieldElement {
        let ginv = self.gram().inverse().expect("nondegenerate");
        bilinear(&ginv, &self.sigma_coords, &self.sigma_bar_coords(), &self.field)
    }

    pub fn real(&self) -> &RealSubfield {
        &self.real
    }

    /// Index of the real embedding of `K^0` where `xi > 0`.
    pub fn distinguished(&self) -> usize {
        self.distinguished
    }

    pub fn cap_bits(&self) -> u32 {
        self.cap_bits
    }

    /// Sign of a real element of `K` at the distinguished embedding.
    pub fn distinguished_sign(&self, e: &FieldElement) -> Result<Sign> {
        let e0 = self
            .real
            .pull_back(e)
            .ok_or_else(|| Error::invalid(format!("{e} is not real")))?;
        self.real.embeddings.sign_at(&e0, self.distinguished)
    }

    /// Coordinates in the basis `gamma_i` of an element of `T = K`.
    pub fn to_vector(&self, w: &FieldElement) -> Vec<Rational> {
        self.to_vector.mul_vec(w.coords())
    }

    /// The element of `K` with the given coordinates.
    pub fn to_element(&self, v: &[Rational]) -> FieldElement {
        let a_inv = self.conj.apply(&self.alpha);
        v.iter()
            .enumerate()
            .fold(self.field.zero(), |acc, (j, c)| &acc + &a_inv.pow(j as u64).scale(c))
    }
}

/// Period coordinates `((sigma.gamma'_i))` for the basis whose vectors are
/// the columns of `change`, in terms of the distinguished basis.
pub fn period_coordinates(h: &CmHodgeStructure, change: Option<&Matrix>) -> Result<Vec<FieldElement>> {
    match change {
        None => Ok(h.sigma_coords.clone()),
        Some(p) => {
            if !p.is_square() || p.rows() != h.rank() || p.inverse().is_none() {
                return Err(Error::invalid("basis change must be an invertible r x r matrix"));
            }
            Ok(apply_rational(&p.transpose(), &h.sigma_coords, &h.field))
        }
    }
}

/// `dim_Q` of the span of the coordinates inside their field.
pub fn coordinate_rank(coords: &[FieldElement]) -> usize {
    let n = coords.first().map_or(0, |c| c.field().degree());
    Span::of(n, coords.iter().map(|c| c.coords().to_vec())).dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, signature};

    #[test]
    fn gaussian_trace_form() {
        let k = CmField::gaussian();
        let i = k.field().generator();
        let h = build_cm_structure(&k, &i, &k.field().one(), DEFAULT_PRECISION_CAP).unwrap();
        assert_eq!(*h.gram(), Matrix::from_i64(&[&[2, 0], &[0, 2]]));
        assert!(h.s().is_one());
        assert_eq!(h.sigma_coords()[1], *h.alpha());
    }

    #[test]
    fn zeta5_signature() {
        let k = CmField::zeta5();
        let z = k.field().generator();
        // xi = eta = z + 1/z has one positive embedding
        let xi = &z + &z.inverse().unwrap();
        let h = build_cm_structure(&k, &z, &xi, DEFAULT_PRECISION_CAP).unwrap();
        assert_eq!(signature(h.gram()).unwrap(), Signature::new(2, 2, 0));
        assert_eq!(coordinate_rank(h.sigma_coords()), 4);
        assert_eq!(h.distinguished_sign(&h.xi().clone()).unwrap(), Sign::Positive);
        let s = h.s();
        assert_eq!(&s * h.xi(), h.field().one());
    }

    #[test]
    fn wrong_signs_rejected() {
        let k = CmField::zeta5();
        let z = k.field().generator();
        let r = build_cm_structure(&k, &z, &k.field().one(), DEFAULT_PRECISION_CAP);
        assert_eq!(
            r.unwrap_err(),
            Error::SignatureMismatch { expected: Signature::new(2, 2, 0), found: Signature::new(4, 0, 0) }
        );
        let two = k.field().from_i64(2);
        assert!(matches!(
            build_cm_structure(&k, &two, &k.field().one(), DEFAULT_PRECISION_CAP),
            Err(Error::NotAnIsometryGenerator(_))
        ));
        let m1 = k.field().from_i64(-1);
        assert!(matches!(
            build_cm_structure(&k, &m1, &k.field().one(), DEFAULT_PRECISION_CAP),
            Err(Error::NotAnIsometryGenerator(_))
        ));
    }

    #[test]
    fn basis_changes() {
        let k = CmField::gaussian();
        let i = k.field().generator();
        let h = build_cm_structure(&k, &i, &k.field().from_i64(3), DEFAULT_PRECISION_CAP).unwrap();
        let swap = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        let x = period_coordinates(&h, Some(&swap)).unwrap();
        assert_eq!(x[0], h.sigma_coords()[1]);
        assert_eq!(x[1], h.sigma_coords()[0]);
        assert!(period_coordinates(&h, Some(&Matrix::from_i64(&[&[1, 1], &[1, 1]]))).is_err());
        let w = h.to_element(&[rat(2), rat(-1)]);
        assert_eq!(h.to_vector(&w), alloc::vec![rat(2), rat(-1)]);
    }

    #[test]
    fn xi_search() {
        for name in ["gaussian", "zeta5", "zeta12"] {
            let k = CmField::preset(name).unwrap();
            let a = crate::hodge::norm_one_primitive(&k, 200, 0).unwrap();
            let xi = find_xi(&k, &a, 200, 0, DEFAULT_PRECISION_CAP).unwrap();
            assert!(build_cm_structure(&k, &a, &xi, DEFAULT_PRECISION_CAP).is_ok());
        }
    }
}
