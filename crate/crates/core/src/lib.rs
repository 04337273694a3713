//! Exact computations with rational Hodge structures of K3 type that have
//! complex multiplication, and with the Hodge structures of their twistor
//! fibres.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is exact: rationals,
//! number fields presented as quotient rings or quadratic towers, Sturm
//! certificates for real roots. Floating point never decides anything.
//!
//! Layout:
//! - [`exactalg`]: polynomials, matrices, number fields, subfields, real roots,
//!   signatures, irreducibility.
//! - [`hodge`]: CM fields, quadratic spaces, CM Hodge structures, period and
//!   endomorphism fields, the three-way CM criterion.
//! - [`twistor`]: polarization, twistor points, fibre structures, fibre CM
//!   fields, the equator, Picard numbers along the twistor line.
//! - [`periodvalue`]: formal period values modulo algebraic scalars.

#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod exactalg;
pub mod hodge;
pub mod periodvalue;
pub mod twistor;

pub use error::{Error, Result};
