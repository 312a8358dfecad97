//! Computational companion for degree-three bounded cohomology of the complex
//! classical groups.
//!
//! The crate works over formed spaces `(V_r^{ε,d}, ω)` and provides:
//!
//! * [`forms`]: adapted bases, the Gram matrix `J`, group membership, Witt
//!   completion and seeded random generators;
//! * [`cross_ratios`]: isotropic configurations, ω-cross-ratios and the
//!   identities relating them;
//! * [`reduction`]: canonical representatives `Φ₃`, `Φ₄` and explicit group
//!   elements moving a generic tuple onto them;
//! * [`dilog`]: the Bloch–Wigner dilogarithm and its functional equations;
//! * [`flags`]: affine flags, `T_J`, and the volume cocycle `Bₙ`;
//! * [`norms`]: closed-form norm constants and Monte Carlo sup estimation;
//! * [`verify`]: the identity suites behind the `fsl verify` command.

// Comparisons are written as `!(x <= tol)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod cross_ratios;
pub mod dilog;
pub mod error;
pub mod flags;
pub mod forms;
pub mod linalg;
pub mod norms;
pub mod reduction;
pub mod report;
pub mod rng;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Library version recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
