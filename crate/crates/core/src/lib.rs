//! Relativistic quantum stochastic calculus in 1+1 dimensions.
//!
//! Units are `c = hbar = 1`. The crate covers inertial and Rindler
//! kinematics ([`kinematics`]), the quantum Ito algebra of vacuum and
//! thermal noise together with its behaviour under changes of inertial
//! frame ([`ito_algebra`]), Lindblad dynamics of open systems
//! ([`open_system`]), finite-dimensional representations of thermal noise
//! ([`noise_repr`]) and the thermal response of a uniformly accelerated
//! two-level detector ([`unruh_limit`]). The `qsc` binary wraps these in
//! [`cli`].

pub mod cli;
pub mod error;
pub mod ito_algebra;
pub mod kinematics;
pub mod linalg;
pub mod noise_repr;
pub mod open_system;
pub mod quadrature;
pub mod unruh_limit;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
