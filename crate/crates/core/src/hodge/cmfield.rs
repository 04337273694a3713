//! CM fields with an explicit complex conjugation, named presets, and the
//! search for primitive elements of norm one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::exactalg::{
    eval_poly, rat, real_root_count, FieldElement, FieldMap, NumberField, Poly, Rational, Subfield,
};

/// The named preset fields.
pub const PRESETS: [&str; 5] = ["gaussian", "eisenstein", "zeta5", "zeta8", "zeta12"];

/// A CM number field `K = Q[X]/(f)` together with its complex conjugation.
#[derive(Clone, Debug)]
pub struct CmField {
    name: String,
    field: NumberField,
    conj: FieldMap,
    real: Subfield,
}

/// The `n`-th cyclotomic polynomial, by dividing `X^n - 1` by the
/// cyclotomic polynomials of the proper divisors.
pub fn cyclotomic_polynomial(n: usize) -> Poly {
    assert!(n >= 1);
    let mut f = &Poly::monomial(rat(1), n) - &Poly::one();
    for d in 1..n {
        if n % d == 0 {
            f = f.exact_div(&cyclotomic_polynomial(d)).expect("cyclotomic division is exact");
        }
    }
    f
}

impl CmField {
    /// A CM field from its modulus. The conjugation is `conj_image`
    /// (the image of the generator) when given; otherwise `X -> 1/X`,
    /// `X -> -X` and, in degree 2, the other root are tried in that order.
    pub fn new(name: &str, modulus: &Poly, conj_image: Option<&Poly>) -> Result<Self> {
        let field = NumberField::new(modulus)?;
        let candidates: Vec<FieldElement> = match conj_image {
            Some(g) => alloc::vec![field.from_poly(g)],
            None => {
                let x = field.generator();
                let mut c = alloc::vec![x.inverse()?, -&x];
                if field.degree() == 2 {
                    let a1 = modulus.monic().coeff(1);
                    c.push(&(-&x) - &field.from_rational(a1));
                }
                c
            }
        };
        let mut last = String::from("no conjugation candidate");
        for img in candidates {
            match Self::with_conjugation(name, &field, &img) {
                Ok(k) => return Ok(k),
                Err(e) => last = format!("{e}"),
            }
        }
        Err(Error::NotCmField(format!("{modulus}: {last}")))
    }

    fn with_conjugation(name: &str, field: &NumberField, img: &FieldElement) -> Result<Self> {
        let r = field.degree();
        let f = field.modulus().expect("absolute field");
        if r % 2 != 0 {
            return Err(Error::NotCmField(format!("odd degree {r}")));
        }
        if real_root_count(f) != 0 {
            return Err(Error::NotCmField(format!("{f} has real roots")));
        }
        if !eval_poly(f, img).is_zero() {
            return Err(Error::NotCmField(format!("{img} is not a conjugate of the generator")));
        }
        let conj = FieldMap::from_generator_image(field, img)?;
        if conj.is_identity() || !conj.compose(&conj).is_identity() {
            return Err(Error::NotCmField(String::from("conjugation is not an involution")));
        }
        let real = Subfield::whole(field).fixed_by(&conj)?;
        if 2 * real.degree() != r || !real.is_totally_real() {
            return Err(Error::NotCmField(format!(
                "fixed field of the conjugation has degree {} or is not totally real",
                real.degree()
            )));
        }
        Ok(CmField { name: name.into(), field: field.clone(), conj, real })
    }

    pub fn gaussian() -> Self {
        Self::new("gaussian", &Poly::from_i64s(&[1, 0, 1]), None).expect("preset")
    }

    pub fn eisenstein() -> Self {
        Self::new("eisenstein", &Poly::from_i64s(&[1, 1, 1]), None).expect("preset")
    }

    pub fn zeta5() -> Self {
        Self::new("zeta5", &Poly::from_i64s(&[1, 1, 1, 1, 1]), None).expect("preset")
    }

    pub fn zeta8() -> Self {
        Self::new("zeta8", &Poly::from_i64s(&[1, 0, 0, 0, 1]), None).expect("preset")
    }

    pub fn zeta12() -> Self {
        Self::new("zeta12", &Poly::from_i64s(&[1, 0, -1, 0, 1]), None).expect("preset")
    }

    /// `Q(zeta_n)` for `n >= 3`.
    pub fn cyclotomic(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("Q(zeta_{n}) is not a CM field")));
        }
        Self::new(&format!("cyclotomic{n}"), &cyclotomic_polynomial(n), None)
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "gaussian" => Ok(Self::gaussian()),
            "eisenstein" => Ok(Self::eisenstein()),
            "zeta5" => Ok(Self::zeta5()),
            "zeta8" => Ok(Self::zeta8()),
            "zeta12" => Ok(Self::zeta12()),
            _ => Err(Error::invalid(format!(
                "unknown preset `{name}` (expected one of {})",
                PRESETS.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn modulus(&self) -> &Poly {
        self.field.modulus().expect("absolute field")
    }

    pub fn conj(&self) -> &FieldMap {
        &self.conj
    }

    pub fn conjugate(&self, e: &FieldElement) -> FieldElement {
        self.conj.apply(e)
    }

    /// The maximal totally real subfield.
    pub fn real_subfield(&self) -> &Subfield {
        &self.real
    }

    pub fn is_real(&self, e: &FieldElement) -> bool {
        self.conjugate(e) == *e
    }
}

/// `u / conj(u)`, which always has norm one.
pub fn norm_one_from(k: &CmField, u: &FieldElement) -> Result<FieldElement> {
    u.div(&k.conjugate(u))
}

/// Integer vectors of length `dim` in shells of growing max-norm. Entries are
/// ordered `0, 1, -1, 2, -2, ...` and vectors lexicographically within a
/// shell. A nonzero `seed` shuffles each shell; seed 0 keeps this order.
pub fn small_vectors(dim: usize, seed: u64) -> impl Iterator<Item = Vec<i64>> {
    let mut rng = (seed != 0).then(|| ChaCha8Rng::seed_from_u64(seed));
    (1i64..).flat_map(move |h| {
        let mut shell = shell(dim, h);
        if let Some(rng) = rng.as_mut() {
            for i in (1..shell.len()).rev() {
                let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                shell.swap(i, j);
            }
        }
        shell
    })
}

fn shell(dim: usize, h: i64) -> Vec<Vec<i64>> {
    let order: Vec<i64> = core::iter::once(0).chain((1..=h).flat_map(|k| [k, -k])).collect();
    let mut out = Vec::new();
    let mut idx = alloc::vec![0usize; dim];
    loop {
        let v: Vec<i64> = idx.iter().map(|&i| order[i]).collect();
        if v.iter().any(|x| x.abs() == h) {
            out.push(v);
        }
        let mut k = dim;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < order.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// A primitive element of norm one, `u / conj(u)` for the first `u` in
/// [`small_vectors`] order whose quotient has degree `[K:Q]`.
pub fn norm_one_primitive(k: &CmField, budget: usize, seed: u64) -> Result<FieldElement> {
    let r = k.degree();
    for c in small_vectors(r, seed).take(budget) {
        let u = k.field.element(c.iter().map(|&x| rat(x)).collect::<Vec<Rational>>());
        let alpha = norm_one_from(k, &u)?;
        if alpha.degree() == r {
            return Ok(alpha);
        }
    }
    Err(Error::NoPrimitiveNormOne { budget })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_cm() {
        for name in PRESETS {
            let k = CmField::preset(name).unwrap();
            assert_eq!(2 * k.real_subfield().degree(), k.degree());
        }
        assert!(CmField::preset("zeta7").is_err());
        // Q(sqrt 2) is totally real
        assert!(matches!(
            CmField::new("r", &Poly::from_i64s(&[-2, 0, 1]), None),
            Err(Error::NotCmField(_))
        ));
        // Q(sqrt -2) needs X -> -X
        let k = CmField::new("m2", &Poly::from_i64s(&[2, 0, 1]), None).unwrap();
        assert_eq!(k.conjugate(&k.field().generator()), -&k.field().generator());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(5), Poly::from_i64s(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(12), Poly::from_i64s(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(7).deg(), 6);
        assert_eq!(CmField::cyclotomic(9).unwrap().degree(), 6);
    }

    #[test]
    fn gaussian_norm_one() {
        let k = CmField::gaussian();
        let i = k.field().generator();
        let u = &k.field().one() + &i;
        assert_eq!(norm_one_from(&k, &u).unwrap(), i);
        // rational u gives 1
        assert!(norm_one_from(&k, &k.field().from_i64(3)).unwrap().is_one());
        assert_eq!(norm_one_primitive(&k, 100, 0).unwrap(), i);
    }

    #[test]
    fn zeta5_norm_one() {
        let k = CmField::zeta5();
        let z = k.field().generator();
        let a = norm_one_from(&k, &z).unwrap();
        assert_eq!(a, z.pow(2));
        assert_eq!(a.degree(), 4);
        let b = norm_one_primitive(&k, 1000, 0).unwrap();
        assert!((&b * &k.conjugate(&b)).is_one());
        assert_eq!(b.degree(), 4);
        let c = norm_one_primitive(&k, 1000, 17).unwrap();
        assert_eq!(c.degree(), 4);
    }

    #[test]
    fn shells_cover_boxes() {
        let v: Vec<Vec<i64>> = small_vectors(2, 0).take(8).collect();
        assert_eq!(v[0], alloc::vec![0, 1]);
        assert_eq!(v.len(), 8);
        assert_eq!(shell(3, 2).len(), 125 - 27);
    }
}
