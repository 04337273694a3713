//! The extended space `T + Q l`, classes in it, and points of the twistor
//! conic.

use alloc::format;
use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{
    format_rational, rat, sqrt, FieldElement, FieldMap, Matrix, NumberField, Rational,
};
use crate::hodge::{CmHodgeStructure, QuadraticSpace};

#[derive(Clone, Debug)]
pub struct TwistorSetup {
    base: CmHodgeStructure,
    d: Rational,
    extended: QuadraticSpace,
}

/// `T + Q l` with `(l.l) = d` and `l` orthogonal to `T`.
pub fn extend_by_polarization(h: &CmHodgeStructure, d: &Rational) -> Result<TwistorSetup> {
    if !d.is_integer() || !d.is_positive() {
        return Err(Error::InvalidPolarization(format_rational(d)));
    }
    let extended = h.space().extend_by_line(d)?;
    let r = h.rank();
    if extended.signature() != crate::exactalg::Signature::new(3, r - 2, 0) {
        return Err(Error::consistency("extended space does not have signature (3, r-2)"));
    }
    Ok(TwistorSetup { base: h.clone(), d: d.clone(), extended })
}

impl TwistorSetup {
    pub fn base(&self) -> &CmHodgeStructure {
        &self.base
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    pub fn extended(&self) -> &QuadraticSpace {
        &self.extended
    }

    pub fn extended_gram(&self) -> &Matrix {
        self.extended.gram()
    }

    /// The polarization `l` as a vector.
    pub fn polarization(&self) -> Vec<Rational> {
        let mut v = alloc::vec![Rational::zero(); self.rank() + 1];
        v[self.rank()] = Rational::one();
        v
    }

    pub fn pair(&self, u: &[Rational], v: &[Rational]) -> Rational {
        self.extended_gram().bilinear(u, v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Location {
    Pole,
    Equator,
    Generic,
}

impl Location {
    pub fn as_str(self) -> &'static str {
        match self {
            Location::Pole => "pole",
            Location::Equator => "equator",
            Location::Generic => "generic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizedClass {
    pub vector: Vec<Rational>,
    /// `(l.l')`
    pub m: Rational,
    /// `(l'.l')`
    pub norm: Rational,
    pub location: Location,
}

impl PolarizedClass {
    pub fn is_positive(&self) -> bool {
        self.norm.is_positive()
    }

    pub fn require_positive(&self) -> Result<()> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(Error::ClassNotPositive(format_rational(&self.norm)))
        }
    }

    /// The `T`-component.
    pub fn t_part(&self) -> &[Rational] {
        &self.vector[..self.vector.len() - 1]
    }

    pub fn l_part(&self) -> &Rational {
        &self.vector[self.vector.len() - 1]
    }
}

/// Location, `m` and norm of a nonzero class. Non-positive classes are
/// classified too; fibre constructions reject them.
pub fn classify_class(setup: &TwistorSetup, v: &[Rational]) -> Result<PolarizedClass> {
    let r = setup.rank();
    if v.len() != r + 1 {
        return Err(Error::invalid(format!("class must have {} coordinates", r + 1)));
    }
    if v.iter().all(|c| c.is_zero()) {
        return Err(Error::invalid("the zero class"));
    }
    let l = setup.polarization();
    let m = setup.pair(&l, v);
    let norm = setup.pair(v, v);
    let location = if v[..r].iter().all(|c| c.is_zero()) {
        Location::Pole
    } else if m.is_zero() {
        Location::Equator
    } else {
        Location::Generic
    };
    Ok(PolarizedClass { vector: v.to_vec(), m, norm, location })
}

/// Data of `T` in the basis adapted to a class `l' = v + mu l`:
/// `gamma~_i = alpha^(1-i) v`, with `sigma` rescaled to `(sigma.l') = 1`.
#[derive(Clone, Debug)]
pub struct AdaptedFrame {
    /// Columns: `gamma~_i` in the distinguished basis.
    pub change: Matrix,
    pub gram: Matrix,
    /// `kappa = (sigma.v)`, the rescaling factor.
    pub kappa: FieldElement,
    /// Rescaled coordinates in the adapted basis; equal to `alpha^(i-1)`.
    pub coords: Vec<FieldElement>,
    /// Rescaled coordinates in the distinguished basis.
    pub sigma: Vec<FieldElement>,
    /// `(sigma.conj sigma)` after rescaling.
    pub s: FieldElement,
}

pub fn adapted_frame(setup: &TwistorSetup, cls: &PolarizedClass) -> Result<AdaptedFrame> {
    let h = &setup.base;
    let k = h.field();
    let r = h.rank();
    let v = cls.t_part();
    if v.iter().all(|c| c.is_zero()) {
        return Err(Error::PoleClass);
    }
    let v_elem = h.to_element(v);
    let a_inv = h.conj().apply(h.alpha());
    let cols: Vec<Vec<Rational>> =
        (0..r).map(|i| h.to_vector(&(&a_inv.pow(i as u64) * &v_elem))).collect();
    let change = Matrix::from_cols(&cols);
    let gram = &(&change.transpose() * h.gram()) * &change;
    let x = h.sigma_coords();
    let kappa: FieldElement = v.iter().zip(x).fold(k.zero(), |acc, (c, xi)| &acc + &xi.scale(c));
    let kinv = kappa.inverse()?;
    let tilde = crate::hodge::apply_rational(&change.transpose(), x, k);
    let coords: Vec<FieldElement> = tilde.iter().map(|t| t * &kinv).collect();
    for (i, c) in coords.iter().enumerate() {
        if *c != h.alpha().pow(i as u64) {
            return Err(Error::consistency("adapted coordinates are not the powers of alpha"));
        }
    }
    let sigma: Vec<FieldElement> = x.iter().map(|t| t * &kinv).collect();
    let kbar = h.conj().apply(&kappa);
    let s = &h.s() * &(&kappa * &kbar).inverse()?;
    Ok(AdaptedFrame { change, gram, kappa, coords, sigma, s })
}

/// A field `L'` over `K` containing the roots of `t^2 + p t + q` with
/// `p, q` real and the discriminant positive at the distinguished
/// embedding; `root` is real there, and `conj` extends complex conjugation
/// by fixing it.
#[derive(Clone, Debug)]
pub struct FibreExtension {
    pub field: NumberField,
    pub conj: FieldMap,
    /// `K -> L'`
    pub inclusion: FieldMap,
    pub root: FieldElement,
    /// The quadratic already splits over `K`.
    pub split: bool,
}

impl FibreExtension {
    pub fn lift(&self, e: &FieldElement) -> FieldElement {
        self.inclusion.apply(e)
    }
}

/// Trivial extension `L' = K`.
pub fn trivial_extension(h: &CmHodgeStructure) -> FibreExtension {
    FibreExtension {
        field: h.field().clone(),
        conj: h.conj().clone(),
        inclusion: FieldMap::identity(h.field()),
        root: h.field().zero(),
        split: true,
    }
}

pub fn quadratic_extension(h: &CmHodgeStructure, p: &FieldElement, q: &FieldElement) -> Result<FibreExtension> {
    let k = h.field();
    let disc = &p.square() - &q.scale(&rat(4));
    if disc.is_zero() || h.distinguished_sign(&disc)? != crate::exactalg::Sign::Positive {
        return Err(Error::consistency("discriminant is not positive at the distinguished embedding"));
    }
    // A real element positive somewhere is a square in K iff it is one in K^0.
    let disc0 = h.real().pull_back(&disc).ok_or_else(|| Error::consistency("discriminant is not real"))?;
    if let Some(w0) = sqrt(&disc0) {
        let w = h.real().inclusion.apply(&w0);
        let root = (&(-p) + &w).scale(&Rational::new(1.into(), 2.into()));
        return Ok(FibreExtension {
            field: k.clone(),
            conj: h.conj().clone(),
            inclusion: FieldMap::identity(k),
            root,
            split: true,
        });
    }
    let field = NumberField::quadratic_tower_unchecked(p, q);
    let inclusion = FieldMap::inclusion(k, &field);
    let conj = FieldMap::extend_to_tower(&field, &inclusion.compose(h.conj()), &field.generator())?;
    Ok(FibreExtension { root: field.generator(), field, conj, inclusion, split: false })
}

/// Which coefficient of `a sigma + b conj(sigma) + c l` is set to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Normalization {
    A,
    B,
    C,
}

impl Normalization {
    pub const ALL: [Normalization; 3] = [Normalization::A, Normalization::B, Normalization::C];

    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::A => "a=1",
            Normalization::B => "b=1",
            Normalization::C => "c=1",
        }
    }
}

impl core::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "a=1" | "a" | "A" => Ok(Normalization::A),
            "b=1" | "b" | "B" => Ok(Normalization::B),
            "c=1" | "c" | "C" => Ok(Normalization::C),
            other => Err(Error::invalid(format!("unknown normalization {other:?}"))),
        }
    }
}

/// `z = [a sigma + b conj(sigma) + c l]` with `sigma` as rescaled in `s`.
#[derive(Clone, Debug)]
pub struct TwistorPoint {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub normalization: Normalization,
    /// `(sigma.conj sigma)` for the `sigma` used.
    pub s: FieldElement,
    /// `(z.gamma_1), ..., (z.gamma_r), (z.l)` in the distinguished basis.
    pub coords: Vec<FieldElement>,
    pub extension: FibreExtension,
}

impl TwistorPoint {
    /// `2 a b s + c^2 d`, which vanishes on the conic.
    pub fn conic_residual(&self, d: &Rational) -> FieldElement {
        &(&(&self.a * &self.b) * &self.s).scale(&rat(2)) + &self.c.square().scale(d)
    }

    /// `(z.w)` for a rational vector `w`.
    pub fn pair(&self, w: &[Rational]) -> FieldElement {
        let f = &self.extension.field;
        w.iter().zip(&self.coords).fold(f.zero(), |acc, (c, x)| &acc + &x.scale(c))
    }

    fn build(
        setup: &TwistorSetup,
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        normalization: Normalization,
        sigma: &[FieldElement],
        s: &FieldElement,
        ext: &FibreExtension,
    ) -> Self {
        let mut coords: Vec<FieldElement> = sigma
            .iter()
            .map(|x| {
                let x1 = ext.lift(x);
                let xb = ext.conj.apply(&x1);
                &(&a * &x1) + &(&b * &xb)
            })
            .collect();
        coords.push(c.scale(setup.d()));
        TwistorPoint { a, b, c, normalization, s: ext.lift(s), coords, extension: ext.clone() }
    }

    /// The same point with `a` and `b` exchanged (the conjugate point).
    pub fn swapped(&self, setup: &TwistorSetup, sigma: &[FieldElement], s: &FieldElement) -> Self {
        Self::build(
            setup,
            self.b.clone(),
            self.a.clone(),
            self.c.clone(),
            self.normalization,
            sigma,
            s,
            &self.extension,
        )
    }
}

/// The north pole `x = [sigma]`.
pub fn north_pole(setup: &TwistorSetup) -> TwistorPoint {
    let h = &setup.base;
    let ext = trivial_extension(h);
    let k = h.field();
    TwistorPoint::build(setup, k.one(), k.zero(), k.zero(), Normalization::A, h.sigma_coords(), &h.s(), &ext)
}

/// The south pole `conj x = [conj sigma]`.
pub fn south_pole(setup: &TwistorSetup) -> TwistorPoint {
    let h = &setup.base;
    let ext = trivial_extension(h);
    let k = h.field();
    TwistorPoint::build(setup, k.zero(), k.one(), k.zero(), Normalization::B, h.sigma_coords(), &h.s(), &ext)
}

/// The pair of conjugate points orthogonal to a generic class, with `c = 1`
/// and `(sigma.l') = 1`; `a` is the root of `t^2 + m t - d/(2s)` adjoined
/// (or chosen, when it splits over `K`) and `b = -m - a`.
pub fn point_from_class(setup: &TwistorSetup, cls: &PolarizedClass) -> Result<(TwistorPoint, TwistorPoint)> {
    match cls.location {
        Location::Pole => return Err(Error::PoleClass),
        Location::Equator => return Err(Error::EquatorClass),
        Location::Generic => {}
    }
    cls.require_positive()?;
    let frame = adapted_frame(setup, cls)?;
    generic_points(setup, cls, &frame)
}

pub(crate) fn generic_points(
    setup: &TwistorSetup,
    cls: &PolarizedClass,
    frame: &AdaptedFrame,
) -> Result<(TwistorPoint, TwistorPoint)> {
    let h = &setup.base;
    let k = h.field();
    let m = k.from_rational(cls.m.clone());
    let q = -&(&frame.s.scale(&rat(2))).inverse()?.scale(setup.d());
    let ext = quadratic_extension(h, &m, &q)?;
    let a = ext.root.clone();
    let b = &(-&ext.lift(&m)) - &a;
    let one = ext.field.one();
    let z = TwistorPoint::build(setup, a, b, one, Normalization::C, &frame.sigma, &frame.s, &ext);
    let zb = z.swapped(setup, &frame.sigma, &frame.s);
    for p in [&z, &zb] {
        if !p.conic_residual(setup.d()).is_zero() {
            return Err(Error::consistency("twistor point is off the conic"));
        }
        if !(&(&p.a + &p.b) + &ext.lift(&m)).is_zero() {
            return Err(Error::consistency("a + b + m != 0"));
        }
        if !p.pair(&cls.vector).is_zero() {
            return Err(Error::consistency("twistor point is not orthogonal to its class"));
        }
    }
    Ok((z, zb))
}

/// The point on the equator orthogonal to a class with `m = 0`:
/// `a = sqrt(d/(2s))`, real at the distinguished embedding, `b = -a`.
pub fn equator_point(setup: &TwistorSetup, cls: &PolarizedClass) -> Result<(TwistorPoint, AdaptedFrame)> {
    if cls.location != Location::Equator {
        return Err(Error::WrongBranch(format!("class at {} is not on the equator", cls.location.as_str())));
    }
    cls.require_positive()?;
    let h = &setup.base;
    let frame = adapted_frame(setup, cls)?;
    let q = -&(&frame.s.scale(&rat(2))).inverse()?.scale(setup.d());
    let ext = quadratic_extension(h, &h.field().zero(), &q)?;
    let a = ext.root.clone();
    let b = -&a;
    let one = ext.field.one();
    let z = TwistorPoint::build(setup, a, b, one, Normalization::C, &frame.sigma, &frame.s, &ext);
    if !z.conic_residual(setup.d()).is_zero() || !z.pair(&cls.vector).is_zero() {
        return Err(Error::consistency("equator point is off the conic or not orthogonal"));
    }
    Ok((z, frame))
}

/// Primitive integer vector: gcd 1 and first nonzero entry positive.
pub fn is_primitive(v: &[i64]) -> bool {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    g == 1 && v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

pub fn to_rationals(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::{build_cm_structure, CmField, DEFAULT_PRECISION_CAP};

    pub(crate) fn gaussian_setup(d: i64) -> TwistorSetup {
        let k = CmField::gaussian();
        let i = k.field().generator();
        let h = build_cm_structure(&k, &i, &k.field().one(), DEFAULT_PRECISION_CAP).unwrap();
        extend_by_polarization(&h, &rat(d)).unwrap()
    }

    #[test]
    fn polarization() {
        let s = gaussian_setup(2);
        assert_eq!(*s.extended_gram(), Matrix::from_i64(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]));
        assert!(matches!(
            extend_by_polarization(s.base(), &rat(0)),
            Err(Error::InvalidPolarization(_))
        ));
    }

    #[test]
    fn classes() {
        let s = gaussian_setup(2);
        let c = classify_class(&s, &to_rationals(&[0, 0, 1])).unwrap();
        assert_eq!(c.location, Location::Pole);
        let c = classify_class(&s, &to_rationals(&[1, 1, 0])).unwrap();
        assert_eq!(c.location, Location::Equator);
        let c = classify_class(&s, &to_rationals(&[1, 0, 1])).unwrap();
        assert_eq!((c.location, c.m.clone(), c.norm.clone()), (Location::Generic, rat(2), rat(4)));
    }

    #[test]
    fn gaussian_point() {
        let s = gaussian_setup(2);
        let c = classify_class(&s, &to_rationals(&[1, 0, 1])).unwrap();
        let (z, zb) = point_from_class(&s, &c).unwrap();
        // a, b are the roots of t^2 + 2t - 1
        for t in [&z.a, &z.b] {
            let f = &(&t.square() + &t.scale(&rat(2))) - &z.extension.field.one();
            assert!(f.is_zero());
        }
        assert_eq!(z.a, zb.b);
        assert!(!z.extension.split);
        let pole = classify_class(&s, &to_rationals(&[0, 0, 1])).unwrap();
        assert_eq!(point_from_class(&s, &pole).unwrap_err(), Error::PoleClass);
        let eq = classify_class(&s, &to_rationals(&[1, 1, 0])).unwrap();
        assert_eq!(point_from_class(&s, &eq).unwrap_err(), Error::EquatorClass);
    }

    #[test]
    fn primitive_vectors() {
        assert!(is_primitive(&[0, 2, 3]));
        assert!(!is_primitive(&[0, -1, 3]));
        assert!(!is_primitive(&[2, 4, 0]));
        assert!(!is_primitive(&[0, 0, 0]));
    }
}
