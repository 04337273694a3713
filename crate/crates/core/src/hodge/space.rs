//! Rational quadratic spaces, and bilinear algebra with coefficients in a
//! number field.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactalg::{signature, FieldElement, Matrix, NumberField, Signature};

/// Which of the two admissible signatures a space carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignatureType {
    /// `(2, r - 2)`
    Two,
    /// `(3, r - 3)`
    Three,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: Matrix,
    signature: Signature,
    kind: SignatureType,
}

impl QuadraticSpace {
    pub fn new(gram: Matrix) -> Result<Self> {
        let sig = signature(&gram)?;
        let r = gram.rows();
        let kind = if sig == Signature::new(2, r.saturating_sub(2), 0) && r >= 2 {
            SignatureType::Two
        } else if sig == Signature::new(3, r.saturating_sub(3), 0) && r >= 3 {
            SignatureType::Three
        } else {
            let expected = Signature::new(2, r.saturating_sub(2), 0);
            return Err(Error::SignatureMismatch { expected, found: sig });
        };
        Ok(QuadraticSpace { gram, signature: sig, kind })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn kind(&self) -> SignatureType {
        self.kind
    }

    /// Orthogonal sum with a line `<e>` with `(e.e) = d`.
    pub fn extend_by_line(&self, d: &crate::exactalg::Rational) -> Result<QuadraticSpace> {
        let r = self.dim();
        let mut g = Matrix::zeros(r + 1, r + 1);
        for i in 0..r {
            for j in 0..r {
                g[(i, j)] = self.gram[(i, j)].clone();
            }
        }
        g[(r, r)] = d.clone();
        QuadraticSpace::new(g)
    }
}

/// `M v` for a rational matrix and a vector over a field.
pub fn apply_rational(m: &Matrix, v: &[FieldElement], field: &NumberField) -> Vec<FieldElement> {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|i| {
            let mut acc = field.zero();
            for (j, x) in v.iter().enumerate() {
                let c = &m[(i, j)];
                if !num_traits::Zero::is_zero(c) {
                    acc = &acc + &x.scale(c);
                }
            }
            acc
        })
        .collect()
}

/// `u^T M v` over a field.
pub fn bilinear(m: &Matrix, u: &[FieldElement], v: &[FieldElement], field: &NumberField) -> FieldElement {
    let mv = apply_rational(m, v, field);
    u.iter().zip(&mv).fold(field.zero(), |acc, (a, b)| &acc + &(a * b))
}
