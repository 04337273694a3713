//! Exact arithmetic: rationals, polynomials, matrices, number fields and
//! their subfields, real roots, signatures.

pub mod extension;
pub mod factor;
pub mod field;
pub mod matrix;
pub(crate) mod modp;
pub mod poly;
pub mod rational;
pub mod realroots;
pub mod signature;
pub mod subfield;

pub use extension::{certified_signs, compose_extension, express_in_powers, is_square, sqrt, QuadraticExtension, RealEmbeddings};
pub use factor::{factor_squarefree, irreducible_over_rationals};
pub use field::{eval_poly, FieldElement, FieldMap, NumberField};
pub use matrix::{LinearDependence, Matrix, Span};
pub use poly::Poly;
pub use rational::{format_rational, parse_rational, rat, ratio, Integer, Rational};
pub use realroots::{count_real_roots, real_root_count, RealRootCertificate, RootInterval, Sign};
pub use signature::{signature, Signature};
pub use subfield::{field_generated_by, CmEvidence, Subfield};
