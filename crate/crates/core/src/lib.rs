//! Quaternionic quantum mechanics toolkit.
//!
//! The wave equation used throughout is `ħ (∂Ψ/∂t) i = HΨ` with the imaginary
//! unit multiplying the time derivative on the *right*; since quaternion
//! multiplication does not commute, the side matters and every operator here
//! is explicit about it. Quaternions are stored in symplectic form
//! `q = z + ζj` with complex `z`, `ζ`.
//!
//! The crate provides:
//!
//! * [`quaternion`] — symplectic quaternion algebra and polar decomposition;
//! * [`grid`] — uniform grids and second-order finite-difference stencils;
//! * [`wavefunction`] — closed-form solutions (unit time phase, quaternionic
//!   free particle, polar separation fields) and their validators;
//! * [`schrodinger`] — residual harness for the stationary and
//!   time-dependent wave equations;
//! * [`observables`] — quaternionic momentum, probability current and
//!   density, continuity residual, symmetrized expectation values;
//! * [`scattering`] — closed-form solver for the scalar step potential.
//!
//! All numerics are generic over the floating-point scalar through [`Real`];
//! concrete `f64` aliases are exported at the crate root.

pub mod error;
pub mod grid;
pub mod observables;
pub mod quaternion;
pub mod real;
pub mod scattering;
pub mod schrodinger;
pub mod units;
pub mod vec3;
pub mod wavefunction;

pub use error::Error;
pub use quaternion::{PolarQuaternion, Quaternion};
pub use real::Real;
pub use units::Units;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

pub type Quaternion32 = Quaternion<f32>;
pub type Quaternion64 = Quaternion<f64>;
pub type PolarQuaternion64 = PolarQuaternion<f64>;
pub type Grid64 = grid::Grid<f64>;
pub type QField64 = grid::QField<f64>;
pub type Units64 = Units<f64>;
