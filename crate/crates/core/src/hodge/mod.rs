//! Hodge structures of K3 type: CM examples from trace forms, period and
//! endomorphism fields, and the CM criterion.

pub mod cmfield;
pub mod endo;
pub mod space;
pub mod structure;

pub use cmfield::{cyclotomic_polynomial, norm_one_from, norm_one_primitive, small_vectors, CmField, PRESETS};
pub use endo::{
    cm_criteria, endomorphism_field, is_cm, period_field, positive_plane_rational_dimension, rational_11_classes,
    Classification, CmVerdict, EndomorphismFieldResult,
};
pub use space::{apply_rational, bilinear, QuadraticSpace, SignatureType};
pub use structure::{
    build_cm_structure, coordinate_rank, find_xi, period_coordinates, CmHodgeStructure, RealSubfield,
    DEFAULT_PRECISION_CAP,
};
