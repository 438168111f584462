use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("supercritical charge for this kappa: alpha*Z = {alpha_z} >= |kappa| = {abs_kappa}")]
    Supercritical { alpha_z: f64, abs_kappa: f64 },

    #[error("nuclear charge violates Z < 1/(2 alpha): Z = {z}, limit = {limit}")]
    ChargeConstraint { z: f64, limit: f64 },

    #[error("no planar Dirac-Coulomb bound state for n = {n}, kappa = {two_kappa}/2 (n_r = 0 requires kappa < 0)")]
    NoBoundState { n: u32, two_kappa: i32 },

    #[error("invalid quantum numbers: {0}")]
    InvalidState(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("ill-conditioned overlap matrix (condition estimate {condition:.3e}); use a smaller basis")]
    IllConditioned { condition: f64 },

    #[error("state tracking is ambiguous at B/B0 = {b_over_b0:e}: overlaps {best:.6} and {second:.6}")]
    AmbiguousTracking {
        b_over_b0: f64,
        best: f64,
        second: f64,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("snapshot schema mismatch: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
