//! Twistor families: fibres `T' = l'^perp` of `T + Q l`, their CM fields,
//! the equator, and Picard jumps.

pub mod equator;
pub mod fibre;
pub mod jump;
pub mod setup;

pub use equator::{equator_analysis, EquatorReport};
pub use fibre::{
    fibre_cm_field, fibre_cm_field_of, fibre_report, fibre_structure, restricted_gram, verify_fibre_cm, FibreCmField,
    FibreStructure, FibreVerification,
};
pub use jump::{
    geometric_picard, jump_survey, picard_number_at, point_for_class, survey_classes, survey_entry,
    JumpEntry, JumpSurvey,
};
pub use setup::{
    adapted_frame, classify_class, equator_point, extend_by_polarization, is_primitive, north_pole,
    point_from_class, quadratic_extension, south_pole, to_rationals, trivial_extension, AdaptedFrame,
    FibreExtension, Location, Normalization, PolarizedClass, TwistorPoint, TwistorSetup,
};
