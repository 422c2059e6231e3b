//! Unit-quaternion time phase of a separated solution.
//!
//! The time factor is
//!
//! ```text
//! Λ(t) = Λ₀ { cosΞ e^{−i𝓔t/ħ} + sinΞ e^{ i(𝓔t/ħ + τ₀)} j },   |Λ₀| = 1,
//! ```
//!
//! and satisfies the separation law `Λ̇ i Λ* = 𝓔/ħ` with a *real* constant on
//! the right; the j-part of the product cancels between the two branches.
//! `Ξ = 0` reduces it to the familiar complex phase times a constant.

use num_complex::Complex;

use crate::error::Error;
use crate::grid::time_derivative_fd;
use crate::quaternion::Quaternion;
use crate::real::Real;
use crate::units::Units;
use crate::Result;

/// Parameters of the time phase `Λ(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePhaseSpec<S> {
    lambda0: Quaternion<S>,
    /// Constant mixing angle Ξ (radians).
    pub xi: S,
    /// Total energy 𝓔.
    pub energy: S,
    /// Phase offset τ₀ of the j branch (radians).
    pub tau0: S,
    pub units: Units<S>,
}

impl<S: Real> TimePhaseSpec<S> {
    /// Fails unless `lambda0` is a unit quaternion (tolerance 1e-12).
    pub fn new(lambda0: Quaternion<S>, xi: S, energy: S, tau0: S, units: Units<S>) -> Result<Self> {
        if !lambda0.is_unit(S::of(1e-12)) {
            return Err(Error::NonUnitPhase {
                norm: lambda0.norm().as_f64(),
            });
        }
        Ok(TimePhaseSpec {
            lambda0,
            xi,
            energy,
            tau0,
            units,
        })
    }

    pub fn lambda0(&self) -> Quaternion<S> {
        self.lambda0
    }

    /// Angular frequency 𝓔/ħ.
    pub fn omega(&self) -> S {
        self.energy / self.units.hbar
    }

    /// One full period 2πħ/𝓔.
    pub fn period(&self) -> S {
        S::of(2.0) * S::PI() / self.omega().abs()
    }

    /// Λ(t); always a unit quaternion.
    pub fn value(&self, t: S) -> Quaternion<S> {
        let (sin_xi, cos_xi) = self.xi.sin_cos();
        let wt = self.omega() * t;
        let inner = Quaternion::new(
            Complex::from_polar(cos_xi, -wt),
            Complex::from_polar(sin_xi, wt + self.tau0),
        );
        self.lambda0 * inner
    }

    /// Analytic time derivative Λ̇(t).
    pub fn derivative(&self, t: S) -> Quaternion<S> {
        let (sin_xi, cos_xi) = self.xi.sin_cos();
        let w = self.omega();
        let wt = w * t;
        // d/dt e^{∓iwt} = ∓iw e^{∓iwt}, branch by branch.
        let inner = Quaternion::new(
            Complex::new(S::zero(), -w) * Complex::from_polar(cos_xi, -wt),
            Complex::new(S::zero(), w) * Complex::from_polar(sin_xi, wt + self.tau0),
        );
        self.lambda0 * inner
    }

    /// The separation product `Λ̇ i Λ*`, analytically; equals `𝓔/ħ` exactly.
    pub fn phase_rate(&self, t: S) -> Quaternion<S> {
        self.derivative(t).times_i_right() * self.value(t).conj()
    }
}

/// Max over `t_samples` of `|FD(Λ̇) i Λ* − κ|` for an arbitrary sampler.
///
/// The finite-difference derivative at each sample uses its own central
/// stencil of width `dt`, so the reported deviation is `O(dt²)` when the
/// sampler obeys the law with real constant `kappa`. The quaternion norm
/// also charges any surviving j-part against the residual.
pub fn phase_law_residual<S: Real>(
    sampler: impl Fn(S) -> Quaternion<S>,
    kappa: S,
    t_samples: &[S],
    dt: S,
) -> Result<S> {
    if t_samples.len() < 3 {
        return Err(Error::TooFewSamples {
            min: 3,
            got: t_samples.len(),
        });
    }
    let target = Quaternion::from_real(kappa);
    let mut worst = S::zero();
    for &t in t_samples {
        let stencil = [sampler(t - dt), sampler(t), sampler(t + dt)];
        let ddt = time_derivative_fd(&stencil, dt)?[1];
        let dev = (ddt.times_i_right() * sampler(t).conj() - target).norm();
        worst = worst.max(dev);
    }
    Ok(worst)
}

impl<S: Real> TimePhaseSpec<S> {
    /// Finite-difference check of `Λ̇ i Λ* = 𝓔/ħ` on the given samples.
    pub fn law_residual_fd(&self, t_samples: &[S], dt: S) -> Result<S> {
        phase_law_residual(|t| self.value(t), self.omega(), t_samples, dt)
    }
}
