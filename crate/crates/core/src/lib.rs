//! Numerics for the third Robin eigenvalue of planar domains: disk spectra,
//! Galerkin spectra on conformal images of the disk, the cap/fold trial
//! family with its orthogonality field, and Brouwer degrees of sphere maps.

pub mod complexgeo;
pub mod degree;
pub mod diskspec;
pub mod error;
pub mod quadrature;
pub mod robinsolver;
pub mod trialfield;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
