//! Numerical thresholds shared across the crate.
//!
//! All thresholds are relative to the magnitude of the inputs they compare.

/// Group membership: `‖mᵀJm − J‖_max ≤ TOL_GROUP · max(1, ‖m‖²_max)`.
pub const TOL_GROUP: f64 = 1e-9;

/// Genericity predicates (vanishing pairings, `Δ`, degenerate planes).
pub const TOL_GENERIC: f64 = 1e-8;

/// Identities whose evaluation goes through the dilogarithm.
pub const TOL_VALUE: f64 = 1e-7;

/// Projective residual accepted from a canonical reduction.
pub const TOL_REDUCE: f64 = 1e-8;

/// Numerical rank threshold, relative to the largest singular value.
pub const TOL_RANK: f64 = 1e-8;

/// Linear solves above this condition estimate are rejected as ill-conditioned.
pub const MAX_CONDITION: f64 = 1e8;

/// Relative threshold used to pick the normalising coordinate of a projective point.
pub const TOL_NORMALIZE: f64 = 1e-12;
