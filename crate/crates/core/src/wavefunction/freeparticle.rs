//! The quaternionic free particle.
//!
//! A complex plane wave `φ` is dressed with a unit quaternion whose polar
//! angles are linear in position,
//!
//! ```text
//! Θ = θ·x + Θ⁰,   Γ = γ·x + Γ⁰,   Ω = ω·x + Ω⁰,
//! ```
//!
//! and the general solution superposes the four `(±Γ, ±Ω)` sign branches
//! with quaternionic weights `Q₁..Q₄` applied on the right. The construction
//! solves the stationary wave equation at total energy `𝓔` if and only if
//! the norm and orthogonality constraints checked by
//! [`FreeParticleSpec::validate`] hold.

use num_complex::Complex;

use crate::error::Error;
use crate::grid::{Grid, QField};
use crate::quaternion::Quaternion;
use crate::real::Real;
use crate::units::Units;
use crate::vec3;
use crate::Result;

/// Residual threshold below which a constraint counts as satisfied.
pub const FREE_PARTICLE_TOL: f64 = 1e-10;

/// Complex plane wave `φ(x) = A₁ e^{ik·x} + A₂ e^{−ik·x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveSpec<S> {
    pub a1: Complex<S>,
    pub a2: Complex<S>,
    pub k: [S; 3],
}

impl<S: Real> PlaneWaveSpec<S> {
    pub fn new(a1: Complex<S>, a2: Complex<S>, k: [S; 3]) -> Self {
        PlaneWaveSpec { a1, a2, k }
    }

    /// Forward-only wave with unit amplitude.
    pub fn forward(k: [S; 3]) -> Self {
        PlaneWaveSpec::new(
            Complex::new(S::one(), S::zero()),
            Complex::new(S::zero(), S::zero()),
            k,
        )
    }

    /// Kinetic energy `E = ħ²|k|²/2m` of the complex factor.
    pub fn energy(&self, units: Units<S>) -> S {
        units.hbar_sq_over_two_m() * vec3::norm_sqr(self.k)
    }

    pub fn value(&self, x: [S; 3]) -> Complex<S> {
        let kx = vec3::dot(self.k, x);
        self.a1 * Complex::from_polar(S::one(), kx) + self.a2 * Complex::from_polar(S::one(), -kx)
    }

    /// Analytic gradient, one complex number per axis.
    pub fn gradient(&self, x: [S; 3]) -> [Complex<S>; 3] {
        let kx = vec3::dot(self.k, x);
        let i = Complex::new(S::zero(), S::one());
        let fwd = i * self.a1 * Complex::from_polar(S::one(), kx);
        let bwd = -i * self.a2 * Complex::from_polar(S::one(), -kx);
        [
            fwd * self.k[0] + bwd * self.k[0],
            fwd * self.k[1] + bwd * self.k[1],
            fwd * self.k[2] + bwd * self.k[2],
        ]
    }
}

/// Outcome of a single constraint evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintCheck {
    /// Stable identifier used in reports and error messages, e.g. `L6:norm`.
    pub tag: &'static str,
    pub residual: f64,
}

/// All constraint residuals for one spec.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.residual <= FREE_PARTICLE_TOL)
    }

    /// Worst offender, if any check fails.
    pub fn worst_violation(&self) -> Option<ConstraintCheck> {
        self.checks
            .iter()
            .filter(|c| c.residual > FREE_PARTICLE_TOL)
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
            .copied()
    }
}

/// Full parameter set of the quaternionic free particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeParticleSpec<S> {
    pub phi: PlaneWaveSpec<S>,
    pub gamma: [S; 3],
    pub omega: [S; 3],
    pub theta: [S; 3],
    /// Constant offsets Γ⁰, Ω⁰, Θ⁰ (radians).
    pub gamma0: S,
    pub omega0: S,
    pub theta0: S,
    /// Right-multiplied weights of the four `(±Γ, ±Ω)` sign branches.
    pub q_weights: [Quaternion<S>; 4],
    /// Overall magnitude ρ > 0.
    pub rho: S,
    /// Total energy 𝓔.
    pub total_energy: S,
    pub units: Units<S>,
}

/// Sign pattern of each branch: (Γ sign, Ω sign).
const BRANCH_SIGNS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

impl<S: Real> FreeParticleSpec<S> {
    /// Single-branch spec with weight `Q₁ = 1`.
    pub fn single_branch(
        phi: PlaneWaveSpec<S>,
        gamma: [S; 3],
        omega: [S; 3],
        theta: [S; 3],
        offsets: [S; 3],
        rho: S,
        total_energy: S,
        units: Units<S>,
    ) -> Self {
        FreeParticleSpec {
            phi,
            gamma,
            omega,
            theta,
            gamma0: offsets[0],
            omega0: offsets[1],
            theta0: offsets[2],
            q_weights: [
                Quaternion::one(),
                Quaternion::zero(),
                Quaternion::zero(),
                Quaternion::zero(),
            ],
            rho,
            total_energy,
            units,
        }
    }

    /// Total energy consistent with the constraints, `E + (ħ²/2m)(|γ|²+|θ|²)`.
    pub fn consistent_energy(
        phi: &PlaneWaveSpec<S>,
        gamma: [S; 3],
        theta: [S; 3],
        units: Units<S>,
    ) -> S {
        phi.energy(units)
            + units.hbar_sq_over_two_m() * (vec3::norm_sqr(gamma) + vec3::norm_sqr(theta))
    }

    /// Evaluate every constraint; never fails, callers decide on the report.
    pub fn validate(&self) -> ConstraintReport {
        let g2 = vec3::norm_sqr(self.gamma);
        let w2 = vec3::norm_sqr(self.omega);
        let t2 = vec3::norm_sqr(self.theta);
        let e = self.phi.energy(self.units);
        let target = self.units.two_m_over_hbar_sq() * (self.total_energy - e);
        let checks = vec![
            ConstraintCheck {
                tag: "L6:norm",
                residual: (g2 - w2).abs().as_f64(),
            },
            ConstraintCheck {
                tag: "L6:energy",
                residual: (g2 + t2 - target).abs().as_f64(),
            },
            ConstraintCheck {
                tag: "L7:theta_gamma",
                residual: vec3::dot(self.theta, self.gamma).abs().as_f64(),
            },
            ConstraintCheck {
                tag: "L7:theta_omega",
                residual: vec3::dot(self.theta, self.omega).abs().as_f64(),
            },
            ConstraintCheck {
                tag: "L7:k_theta",
                residual: vec3::dot(self.phi.k, self.theta).abs().as_f64(),
            },
            ConstraintCheck {
                tag: "L7:k_gamma",
                residual: vec3::dot(self.phi.k, self.gamma).abs().as_f64(),
            },
            ConstraintCheck {
                tag: "L7:k_omega",
                residual: vec3::dot(self.phi.k, self.omega).abs().as_f64(),
            },
        ];
        ConstraintReport { checks }
    }

    fn ensure_valid(&self) -> Result<()> {
        if !(self.rho > S::zero()) {
            return Err(Error::ConstraintViolated {
                tag: "rho",
                residual: self.rho.as_f64(),
            });
        }
        if let Some(worst) = self.validate().worst_violation() {
            return Err(Error::ConstraintViolated {
                tag: worst.tag,
                residual: worst.residual,
            });
        }
        Ok(())
    }

    /// Polar angles at a point: (Θ, Γ, Ω).
    pub fn angles(&self, x: [S; 3]) -> (S, S, S) {
        (
            vec3::dot(self.theta, x) + self.theta0,
            vec3::dot(self.gamma, x) + self.gamma0,
            vec3::dot(self.omega, x) + self.omega0,
        )
    }

    /// Φ(x) from the closed form.
    pub fn value(&self, x: [S; 3]) -> Quaternion<S> {
        let (theta, gamma, omega) = self.angles(x);
        let (sin_t, cos_t) = theta.sin_cos();
        let phi = self.phi.value(x);
        let mut sum = Quaternion::zero();
        for (a, (sg, sw)) in BRANCH_SIGNS.iter().enumerate() {
            let w = self.q_weights[a];
            if w.norm_sqr() == S::zero() {
                continue;
            }
            let branch = Quaternion::new(
                Complex::from_polar(cos_t, S::of(*sg) * gamma),
                Complex::from_polar(sin_t, S::of(*sw) * omega),
            );
            sum = sum + branch * w;
        }
        sum.mul_complex_left(phi).scale(self.rho)
    }

    /// Analytic gradient of Φ, one quaternion per axis.
    pub fn gradient(&self, x: [S; 3]) -> [Quaternion<S>; 3] {
        let (theta, gamma, omega) = self.angles(x);
        let (sin_t, cos_t) = theta.sin_cos();
        let phi = self.phi.value(x);
        let dphi = self.phi.gradient(x);
        let i = Complex::new(S::zero(), S::one());

        let mut out = [Quaternion::zero(); 3];
        for (a, (sg, sw)) in BRANCH_SIGNS.iter().enumerate() {
            let w = self.q_weights[a];
            if w.norm_sqr() == S::zero() {
                continue;
            }
            let sg = S::of(*sg);
            let sw = S::of(*sw);
            let e_g = Complex::from_polar(S::one(), sg * gamma);
            let e_w = Complex::from_polar(S::one(), sw * omega);
            let branch = Quaternion::new(e_g * cos_t, e_w * sin_t);
            for axis in 0..3 {
                // ∂(cosΘ e^{±iΓ}) = (−sinΘ θ ± iγ cosΘ) e^{±iΓ}, same shape
                // for the j branch with (Ω, ω).
                let dz = e_g
                    * (Complex::new(-sin_t * self.theta[axis], S::zero())
                        + i * (sg * self.gamma[axis] * cos_t));
                let dzeta = e_w
                    * (Complex::new(cos_t * self.theta[axis], S::zero())
                        + i * (sw * self.omega[axis] * sin_t));
                let dbranch = Quaternion::new(dz, dzeta);
                let term = dbranch.mul_complex_left(phi) + branch.mul_complex_left(dphi[axis]);
                out[axis] = out[axis] + term * w;
            }
        }
        for q in &mut out {
            *q = q.scale(self.rho);
        }
        out
    }

    /// Sample Φ on a grid. Fails with the worst violated constraint when
    /// the spec is invalid.
    pub fn sample(&self, grid: &Grid<S>) -> Result<QField<S>> {
        self.ensure_valid()?;
        Ok(QField::sample(grid, |x| self.value(x)))
    }

    /// True when only the first branch carries weight and that weight is a
    /// complex number (no j-part): the case covered by the closed-form
    /// current.
    pub fn is_single_complex_branch(&self, tol: S) -> bool {
        let others = self.q_weights[1].norm() + self.q_weights[2].norm() + self.q_weights[3].norm();
        others <= tol && self.q_weights[0].zeta.norm() <= tol
    }
}
