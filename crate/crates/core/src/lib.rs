//! Exact analysis of the PXP spin chain and its local quantum integrals of
//! motion: signature sectors, independence of the integrals, and sector
//! spectra.

pub mod error;
pub mod independence;
pub mod lattice;
pub mod signatures;
pub mod spectral;

pub use error::{Error, Result};
pub use lattice::{Boundary, LatticeSpec, SpinConfiguration};
pub use signatures::Signature;
