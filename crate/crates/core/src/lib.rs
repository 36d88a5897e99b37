//! Randomized Bregman (block) coordinate descent.
//!
//! The crate solves composite problems `min f(x) + r(x)` where `f` is only
//! smooth *relative* to a Legendre reference function, so no global Lipschitz
//! constant for the gradient is required. It contains:
//!
//! - [`geometry`]: block partitions, reference functions, Bregman distances and
//!   closed-form Bregman proximal maps (plus a bisection oracle),
//! - [`problems`]: Poisson inverse, relative-entropy regression and a quadratic
//!   test family with gradients, residual caches and smoothness constants,
//! - [`solvers`]: RBCD, accelerated RBCD (reference and change-of-variables
//!   forms) and the full-gradient BPG/ABPG baselines,
//! - [`diagnostics`]: the convergence theory recast as executable checks.

pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod problems;
pub mod solvers;

mod clock;

pub use error::{Error, Result};
