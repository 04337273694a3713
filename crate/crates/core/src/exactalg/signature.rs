//! Inertia of symmetric rational matrices.

use core::fmt;

use num_traits::{Signed, Zero};

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Numbers of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, null: usize) -> Self {
        Signature { positive, negative, null }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.null)
    }
}

/// Inertia by symmetric Gaussian elimination (congruence `P^T G P`).
///
/// A nonzero diagonal pivot is used when one exists. When the remaining
/// block has zero diagonal but a nonzero entry `g_ij`, adding row and column
/// `j` to `i` produces the diagonal entry `2 g_ij`.
pub fn signature(g: &Matrix) -> Result<Signature> {
    if !g.is_symmetric() {
        return Err(Error::invalid("signature of a non-symmetric matrix"));
    }
    let n = g.rows();
    let mut a = g.clone();
    let mut sig = Signature::new(0, 0, 0);
    let mut active: alloc::vec::Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let piv = active.iter().copied().find(|&i| !a[(i, i)].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active.iter().copied().find(|&j| j != i && !a[(i, j)].is_zero()).map(|j| (i, j))
                });
                let Some((i, j)) = pair else {
                    sig.null += active.len();
                    break;
                };
                // row_i += row_j, col_i += col_j
                for k in 0..n {
                    let v = a[(j, k)].clone();
                    a[(i, k)] += v;
                }
                for k in 0..n {
                    let v = a[(k, j)].clone();
                    a[(k, i)] += v;
                }
                i
            }
        };
        let d = a[(piv, piv)].clone();
        if d.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        active.retain(|&k| k != piv);
        for &r in &active {
            if a[(r, piv)].is_zero() {
                continue;
            }
            let f = &a[(r, piv)] / &d;
            for &c in &active {
                let v = &f * &a[(piv, c)];
                a[(r, c)] -= v;
            }
        }
        for &r in &active {
            a[(r, piv)] = Zero::zero();
            a[(piv, r)] = Zero::zero();
        }
    }
    Ok(sig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(signature(&Matrix::identity(2)).unwrap(), Signature::new(2, 0, 0));
        assert_eq!(signature(&Matrix::from_i64(&[&[2, 0], &[0, -2]])).unwrap(), Signature::new(1, 1, 0));
        assert_eq!(signature(&Matrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap(), Signature::new(1, 1, 0));
        assert_eq!(signature(&Matrix::from_i64(&[&[1, 1], &[1, 1]])).unwrap(), Signature::new(1, 0, 1));
        assert_eq!(
            signature(&Matrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]])).unwrap(),
            Signature::new(1, 1, 1)
        );
        assert!(signature(&Matrix::from_i64(&[&[0, 1], &[2, 0]])).is_err());
    }
}
