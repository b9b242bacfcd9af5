use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate cap: t = {t} (caps are defined for t in [0, 1))")]
    DegenerateCap { t: f64 },

    #[error("point {re}{im:+}i lies outside the cap")]
    OutsideCap { re: f64, im: f64 },

    #[error("Robin parameter {beta} is below -1; the modified-Bessel regime is not supported")]
    BetaOutOfRange { beta: f64 },

    #[error("map is not univalent on the disk: margin 1 - sum k|c_k| = {margin}")]
    NotUnivalent { margin: f64 },

    #[error("mass matrix is not positive definite (N = {radial_degree}, M = {angular_order})")]
    MassNotPositive {
        radial_degree: usize,
        angular_order: usize,
    },

    #[error("eigensolver failed: {0}")]
    Eigensolve(String),

    #[error("ground state has vanishing mean (|int f1| = {mean})")]
    DegenerateGroundState { mean: f64 },

    #[error("quadrature refinement changed the result by {change:e} (tolerance {tolerance:e})")]
    InaccurateQuadrature { change: f64, tolerance: f64 },

    #[error("trial function has degenerate mass {mass:e}")]
    DegenerateTrial { mass: f64 },

    #[error("invalid sphere point: {0}")]
    InvalidSpherePoint(String),

    #[error("no regular value found after {attempts} target draws")]
    NonRegularValue { attempts: usize },

    #[error("map nearly vanishes on the region boundary (min |phi| = {min_norm:e})")]
    BoundaryZero { min_norm: f64 },

    #[error("map violates the reflection symmetry (residual {residual:e})")]
    SymmetryViolated { residual: f64 },

    #[error("unknown name `{0}`")]
    UnknownName(String),
}
