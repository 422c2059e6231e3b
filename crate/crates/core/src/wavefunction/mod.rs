//! Closed-form quaternionic wave functions and their validators.

mod freeparticle;
mod phase;
mod separation;

pub use freeparticle::{
    ConstraintCheck, ConstraintReport, FreeParticleSpec, PlaneWaveSpec, FREE_PARTICLE_TOL,
};
pub use phase::{phase_law_residual, TimePhaseSpec};
pub use separation::{
    linear_theta_control, nontrivial_theta_report, separation_residuals, EquationResidual,
    SeparationFields, SeparationResiduals, ThetaCompatReport,
};
