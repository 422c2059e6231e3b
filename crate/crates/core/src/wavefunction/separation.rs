//! Polar separation of a quaternionic stationary state.
//!
//! Writing `Φ = φ ρK` with complex `φ`, real magnitude `ρ` and unit factor
//! `K = cosΘ e^{iΓ} + sinΘ e^{iΩ} j`, the stationary wave equation at total
//! energy `𝓔` splits into four real second-order equations in the fields
//! `(ρ, Θ, Γ, Ω)`. [`separation_residuals`] evaluates those four equations
//! pointwise with finite differences; for exact solutions every residual is
//! `O(h²)`.
//!
//! The equations divide by `cosΘ`, `sinΘ` and `φ`: points where any of those
//! is close to zero are excluded and reported as a masked fraction rather
//! than poisoning the norms.

use num_complex::Complex;

use crate::error::Error;
use crate::grid::{gradient_fd, laplacian_fd, ComplexField, Grid, ScalarField};
use crate::real::Real;
use crate::units::Units;
use crate::wavefunction::FreeParticleSpec;
use crate::Result;

/// Angle guard: |sinΘ| or |cosΘ| below this masks the point.
const ANGLE_FLOOR: f64 = 1e-3;
/// Relative |φ| floor below which a point is masked.
const PHI_FLOOR_REL: f64 = 1e-6;

/// The separated fields sampled on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationFields<S> {
    pub phi: ComplexField<S>,
    /// Polar magnitude ρ of the quaternionic factor (not a probability
    /// density).
    pub polar_rho: ScalarField<S>,
    pub theta: ScalarField<S>,
    pub gamma: ScalarField<S>,
    pub omega: ScalarField<S>,
}

impl<S: Real> SeparationFields<S> {
    /// Sample the closed forms of a free-particle spec. The branch weights
    /// play no role here: the fields describe the single-branch factor.
    pub fn from_free_particle(spec: &FreeParticleSpec<S>, grid: &Grid<S>) -> Self {
        SeparationFields {
            phi: ComplexField::sample(grid, |x| spec.phi.value(x)),
            polar_rho: ScalarField::sample(grid, |_| spec.rho),
            theta: ScalarField::sample(grid, |x| spec.angles(x).0),
            gamma: ScalarField::sample(grid, |x| spec.angles(x).1),
            omega: ScalarField::sample(grid, |x| spec.angles(x).2),
        }
    }

    pub fn grid(&self) -> &Grid<S> {
        self.phi.grid()
    }
}

/// Pointwise residual of one of the four separated equations.
#[derive(Debug, Clone)]
pub struct EquationResidual<S> {
    /// Stable identifier of the equation (`A16`..`A19`).
    pub tag: &'static str,
    /// Residual field; masked points carry zero.
    pub field: ScalarField<S>,
    /// Max |residual| over unmasked interior points.
    pub linf_interior: S,
    /// Fraction of interior points excluded by the sin/cos/φ guards.
    pub masked_fraction: S,
}

/// Residuals of all four equations.
#[derive(Debug, Clone)]
pub struct SeparationResiduals<S> {
    /// Real part of the complex-component equation.
    pub complex_real: EquationResidual<S>,
    /// Real part of the j-component equation.
    pub quaternionic_real: EquationResidual<S>,
    /// Imaginary part of the complex-component equation.
    pub complex_imag: EquationResidual<S>,
    /// Imaginary part of the j-component equation.
    pub quaternionic_imag: EquationResidual<S>,
}

impl<S: Real> SeparationResiduals<S> {
    pub fn iter(&self) -> impl Iterator<Item = &EquationResidual<S>> {
        [
            &self.complex_real,
            &self.quaternionic_real,
            &self.complex_imag,
            &self.quaternionic_imag,
        ]
        .into_iter()
    }

    pub fn worst_linf(&self) -> S {
        self.iter().fold(S::zero(), |m, e| m.max(e.linf_interior))
    }
}

/// Evaluate the four separated equations with finite differences.
///
/// `e_complex` is the energy `E` of the complex factor and `total_energy`
/// the energy `𝓔` of the quaternionic state.
pub fn separation_residuals<S: Real>(
    sf: &SeparationFields<S>,
    e_complex: S,
    total_energy: S,
    units: Units<S>,
) -> Result<SeparationResiduals<S>> {
    let grid = sf.grid().clone();
    for f in [&sf.polar_rho, &sf.theta, &sf.gamma, &sf.omega] {
        if f.grid() != &grid {
            return Err(Error::GridMismatch);
        }
    }

    let phi_max = sf.phi.linf();
    if phi_max == S::zero() {
        return Err(Error::ZeroField);
    }
    let phi_floor = phi_max * S::of(PHI_FLOOR_REL);
    let angle_floor = S::of(ANGLE_FLOOR);

    // Product field ρφ and every finite-difference derivative we need.
    let rho_phi = sf.phi.zip(&sf.polar_rho, |p, r| p * r)?;
    let grad_rho_phi = gradient_fd(&rho_phi);
    let grad_phi = gradient_fd(&sf.phi);
    let grad_rho = gradient_fd(&sf.polar_rho);
    let lap_rho = laplacian_fd(&sf.polar_rho);
    let grad_theta = gradient_fd(&sf.theta);
    let lap_theta = laplacian_fd(&sf.theta);
    let grad_gamma = gradient_fd(&sf.gamma);
    let lap_gamma = laplacian_fd(&sf.gamma);
    let grad_omega = gradient_fd(&sf.omega);
    let lap_omega = laplacian_fd(&sf.omega);

    let rank = grid.rank();
    let energy_gap = units.two_m_over_hbar_sq() * (e_complex - total_energy);
    let two = S::of(2.0);

    let n = grid.len();
    let mut r_cr = vec![S::zero(); n];
    let mut r_qr = vec![S::zero(); n];
    let mut r_ci = vec![S::zero(); n];
    let mut r_qi = vec![S::zero(); n];
    // true = point excluded, per equation family (cos guard / sin guard).
    let mut mask_cos = vec![false; n];
    let mut mask_sin = vec![false; n];

    for i in 0..n {
        let phi = sf.phi.values()[i];
        let rho = sf.polar_rho.values()[i];
        let theta = sf.theta.values()[i];
        let (sin_t, cos_t) = theta.sin_cos();

        let shared_bad = phi.norm() < phi_floor || rho.abs() < S::of(1e-12);
        mask_cos[i] = shared_bad || cos_t.abs() < angle_floor;
        mask_sin[i] = shared_bad || sin_t.abs() < angle_floor;
        if mask_cos[i] && mask_sin[i] {
            continue;
        }

        // Z₀ = (∇²ρ + (2/φ)∇φ·∇ρ)/ρ, a complex number.
        let mut grad_phi_dot_grad_rho = Complex::new(S::zero(), S::zero());
        let mut grad_sq_theta = S::zero();
        let mut grad_sq_gamma = S::zero();
        let mut grad_sq_omega = S::zero();
        let mut theta_dot_gamma = S::zero();
        let mut theta_dot_omega = S::zero();
        let mut w_dot_p = Complex::new(S::zero(), S::zero());
        let mut w_dot_q = Complex::new(S::zero(), S::zero());
        for a in 0..rank {
            let dphi = grad_phi[a].values()[i];
            let drho = grad_rho[a].values()[i];
            let dth = grad_theta[a].values()[i];
            let dga = grad_gamma[a].values()[i];
            let dom = grad_omega[a].values()[i];
            let dw = grad_rho_phi[a].values()[i];
            grad_phi_dot_grad_rho += dphi * drho;
            grad_sq_theta += dth * dth;
            grad_sq_gamma += dga * dga;
            grad_sq_omega += dom * dom;
            theta_dot_gamma += dth * dga;
            theta_dot_omega += dth * dom;
            // p = −sinΘ ∇Θ + i cosΘ ∇Γ, q = cosΘ ∇Θ + i sinΘ ∇Ω.
            w_dot_p += dw * Complex::new(-sin_t * dth, cos_t * dga);
            w_dot_q += dw * Complex::new(cos_t * dth, sin_t * dom);
        }
        let z0 = (Complex::new(lap_rho.values()[i], S::zero())
            + grad_phi_dot_grad_rho.scale(two) / phi)
            .scale(rho.recip());
        let inv_rho_phi = (phi * rho).inv();
        let lap_th = lap_theta.values()[i];

        if !mask_cos[i] {
            let z1 = w_dot_p * inv_rho_phi.scale(two / cos_t);
            let tan_t = sin_t / cos_t;
            let z01 = z0 + z1;
            r_cr[i] = z01.re - grad_sq_gamma - grad_sq_theta - tan_t * lap_th - energy_gap;
            r_ci[i] = z01.im + lap_gamma.values()[i] - two * tan_t * theta_dot_gamma;
        }
        if !mask_sin[i] {
            let z2 = w_dot_q * inv_rho_phi.scale(two / sin_t);
            let cot_t = cos_t / sin_t;
            let z02 = z0 + z2;
            r_qr[i] = z02.re - grad_sq_omega - grad_sq_theta + cot_t * lap_th - energy_gap;
            r_qi[i] = z02.im + lap_omega.values()[i] + two * cot_t * theta_dot_omega;
        }
    }

    let build = |tag: &'static str, values: Vec<S>, mask: &[bool]| {
        let field = ScalarField::from_values(grid.clone(), values).expect("sized to grid");
        let mut linf = S::zero();
        let mut masked = 0usize;
        let mut interior = 0usize;
        for (i, v) in field.values().iter().enumerate() {
            if !grid.is_interior(i) {
                continue;
            }
            interior += 1;
            if mask[i] {
                masked += 1;
            } else {
                linf = linf.max(v.abs());
            }
        }
        let masked_fraction = if interior == 0 {
            S::zero()
        } else {
            S::from_usize(masked).unwrap() / S::from_usize(interior).unwrap()
        };
        EquationResidual {
            tag,
            field,
            linf_interior: linf,
            masked_fraction,
        }
    };

    Ok(SeparationResiduals {
        complex_real: build("A16", r_cr, &mask_cos),
        quaternionic_real: build("A17", r_qr, &mask_sin),
        complex_imag: build("A18", r_ci, &mask_cos),
        quaternionic_imag: build("A19", r_qi, &mask_sin),
    })
}

/// Statistics of the first separated equation's left side along a
/// trajectory of the second one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaCompatReport<S> {
    pub mean: S,
    pub variance: S,
    pub max_abs_deviation: S,
    pub steps: usize,
}

/// Joint-solvability probe for a non-linear mixing angle.
///
/// Integrates `Θ″ = (|ω|² − |γ|²) sinΘ cosΘ` over the 1D domain with a
/// classical fixed-step RK4 (step ≤ 1/1000 of the domain), then evaluates
/// `F = Θ′² + |ω|² sin²Θ + |γ|² cos²Θ` along the trajectory. The first
/// equation demands `F` constant; a strictly positive variance certifies
/// that the pair admits no non-linear solution.
pub fn nontrivial_theta_report<S: Real>(
    gamma_norm: S,
    omega_norm: S,
    theta0: S,
    theta0_prime: S,
    domain: &Grid<S>,
) -> Result<ThetaCompatReport<S>> {
    let g2 = gamma_norm * gamma_norm;
    let w2 = omega_norm * omega_norm;
    if (g2 - w2).abs() <= S::of(1e-12) {
        return Err(Error::ConstraintViolated {
            tag: "L11:norms",
            residual: (g2 - w2).abs().as_f64(),
        });
    }
    if theta0_prime == S::zero() {
        return Err(Error::ConstraintViolated {
            tag: "L11:slope",
            residual: 0.0,
        });
    }
    integrate_and_score(g2, w2, theta0, theta0_prime, domain, true)
}

/// Control run: equal norms and the curvature forced to zero (linear Θ).
/// The scored quantity is then constant up to roundoff.
pub fn linear_theta_control<S: Real>(
    shared_norm: S,
    theta0: S,
    theta0_prime: S,
    domain: &Grid<S>,
) -> Result<ThetaCompatReport<S>> {
    let n2 = shared_norm * shared_norm;
    integrate_and_score(n2, n2, theta0, theta0_prime, domain, false)
}

fn integrate_and_score<S: Real>(
    g2: S,
    w2: S,
    theta0: S,
    theta0_prime: S,
    domain: &Grid<S>,
    curved: bool,
) -> Result<ThetaCompatReport<S>> {
    if domain.rank() != 1 {
        return Err(Error::BadRank { got: domain.rank() });
    }
    let length = domain.spacing(0) * S::from_usize(domain.dims()[0] - 1).unwrap();
    let steps = 1000usize.max(domain.dims()[0]);
    let h = length / S::from_usize(steps).unwrap();

    let accel = |theta: S| {
        if curved {
            (w2 - g2) * theta.sin() * theta.cos()
        } else {
            S::zero()
        }
    };

    let mut theta = theta0;
    let mut slope = theta0_prime;
    let score = |theta: S, slope: S| {
        let (s, c) = theta.sin_cos();
        slope * slope + w2 * s * s + g2 * c * c
    };

    let mut count = 0usize;
    let mut mean = S::zero();
    let mut m2 = S::zero();
    let mut min = S::infinity();
    let mut max = S::neg_infinity();
    let mut record = |v: S| {
        count += 1;
        let delta = v - mean;
        mean += delta / S::from_usize(count).unwrap();
        m2 += delta * (v - mean);
        min = min.min(v);
        max = max.max(v);
    };

    record(score(theta, slope));
    let half = h * S::of(0.5);
    let sixth = h / S::of(6.0);
    for _ in 0..steps {
        // RK4 on the state (Θ, Θ′).
        let k1 = (slope, accel(theta));
        let k2 = (slope + k1.1 * half, accel(theta + k1.0 * half));
        let k3 = (slope + k2.1 * half, accel(theta + k2.0 * half));
        let k4 = (slope + k3.1 * h, accel(theta + k3.0 * h));
        theta += (k1.0 + S::of(2.0) * (k2.0 + k3.0) + k4.0) * sixth;
        slope += (k1.1 + S::of(2.0) * (k2.1 + k3.1) + k4.1) * sixth;
        record(score(theta, slope));
    }

    let variance = m2 / S::from_usize(count).unwrap();
    let max_abs_deviation = (max - mean).max(mean - min);
    Ok(ThetaCompatReport {
        mean,
        variance,
        max_abs_deviation,
        steps,
    })
}
