//! Robin eigenproblem on `Ω = Φ(D)` by spectral Galerkin in disk coordinates.
//!
//! The weak form pulled back by `Φ` reads
//! `∫_D ∇u·∇φ + (α/L) ∫_{∂D} u φ |Φ'| ds = λ ∫_D u φ |Φ'|^2 dA`;
//! the stiffness term carries no weight since the Dirichlet integral is
//! conformally invariant.

mod basis;
mod domain;
mod galerkin;

pub use basis::{ModalBasis, RadialValues};
pub use domain::{build_domain, DomainRecord, DomainSpec};
pub use galerkin::{assemble, fstar, solve_spectrum, Assembly, SolverConfig, SpectrumResult, ANGULAR_STEP, RADIAL_STEP};
