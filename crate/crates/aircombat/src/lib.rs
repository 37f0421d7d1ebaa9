//! One-on-one air combat on a deterministic 3-DOF point-mass simulator,
//! trained with soft actor-critic under a homotopy-annealed reward blend.
//!
//! The crate is organized around the training pipeline:
//!
//! - [`flight_dynamics`]: the point-mass aircraft model — aerodynamic
//!   coefficients, forces, Euler stepping under control-rate clamps, and
//!   operational-limit checks.
//! - [`combat_geometry`]: aspect/antenna angles, their plane projections,
//!   line-of-sight distance, and the normalized 11-entry observation.
//! - [`combat_env`]: the two-aircraft engagement — scenario initialization,
//!   simultaneous stepping, outcome classification, and the sparse, shaping
//!   and blended rewards.
//! - [`nn`]: MLP function approximators with exact reverse-mode gradients, a
//!   tanh-squashed Gaussian policy head, and adaptive-moment optimization.
//! - [`sac`]: the soft actor-critic learner — twin critics, target networks,
//!   replay, automatic temperature.
//! - [`homotopy`]: the blend-weight schedule driven by a least-squares slope
//!   test on recent policy-gradient magnitudes.
//! - [`harness`]: training/evaluation/dueling orchestration, checkpoints,
//!   metrics logs, trajectory export and plots, plus the CLI surface.
//!
//! Start with the runnable examples (`cargo run --release --example ...`);
//! each major capability has one.

pub mod combat_env;
pub mod combat_geometry;
mod error;
pub mod flight_dynamics;
pub mod harness;
pub mod homotopy;
pub mod nn;
pub mod sac;

pub use error::{Error, Result};
