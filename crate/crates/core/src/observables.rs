//! Observables without a fixed hermiticity.
//!
//! The momentum operator is `p̂Φ = −ħ (∇Φ) i` with `i` on the right, and
//! every expectation-like quantity is symmetrized with its quaternionic
//! conjugate so the result is real by construction:
//!
//! ```text
//! j    = (1/2m) [ Φ* p̂Φ + (Φ* p̂Φ)* ]          (probability current)
//! ⟨O⟩  = ½ ∫ [ Ψ* (OΨ) + (Ψ* (OΨ))* ]          (expectation value)
//! ```
//!
//! `q + q*` keeps exactly twice the real part of the complex component, so
//! both definitions reduce to real parts of symplectic products; the tests
//! check the cancellation explicitly.

use crate::error::Error;
use crate::grid::{divergence_fd, gradient_fd, Grid, QField, ScalarField, VectorField};
use crate::quaternion::Quaternion;
use crate::real::Real;
use crate::schrodinger::ResidualReport;
use crate::units::Units;
use crate::wavefunction::FreeParticleSpec;
use crate::Result;

/// Apply the quaternionic momentum componentwise: one field per axis of
/// `−ħ (∂Φ/∂x_a) i`.
pub fn momentum_apply<S: Real>(f: &QField<S>, units: Units<S>) -> Vec<QField<S>> {
    gradient_fd(f)
        .into_iter()
        .map(|d| d.map(|q| q.times_i_right().scale(-units.hbar)))
        .collect()
}

/// Current density from a quaternion state and its gradient at one point:
/// `(1/m) Re_z[ Φ* (−ħ ∂_a Φ i) ]` per axis.
///
/// This is the direct symplectic-product route; it never uses the
/// closed-form current, so the two can cross-check each other.
pub fn current_from_gradient<S: Real>(
    value: Quaternion<S>,
    gradient: [Quaternion<S>; 3],
    units: Units<S>,
) -> [S; 3] {
    let conj = value.conj();
    let mut j = [S::zero(); 3];
    for a in 0..3 {
        let p = gradient[a].times_i_right().scale(-units.hbar);
        // q + q* = 2 Re(z): the j-part cancels identically.
        j[a] = (conj * p).z.re / units.mass;
    }
    j
}

/// Probability density `|Ψ|²`.
pub fn density<S: Real>(f: &QField<S>) -> ScalarField<S> {
    f.map(|q| q.norm_sqr())
}

/// Probability current of a sampled field via finite differences.
pub fn probability_current<S: Real>(f: &QField<S>, units: Units<S>) -> VectorField<S> {
    let grads = gradient_fd(f);
    let grid = f.grid().clone();
    let values: Vec<[S; 3]> = (0..grid.len())
        .map(|i| {
            let conj = f.values()[i].conj();
            let mut j = [S::zero(); 3];
            for (a, g) in grads.iter().enumerate() {
                let p = g.values()[i].times_i_right().scale(-units.hbar);
                j[a] = (conj * p).z.re / units.mass;
            }
            j
        })
        .collect();
    VectorField::from_values(grid, values).expect("sized to grid")
}

/// Closed-form current of a single-branch free particle,
///
/// ```text
/// j = ρ² cos2Θ · j₀ + (ħ/m) ρ² |φ|² (cos²Θ ∇Γ − sin²Θ ∇Ω),
/// ```
///
/// where `j₀` is the current of the complex factor alone. Only specs whose
/// weight sits entirely in a *complex* `Q₁` are accepted: a j-part in the
/// weight re-mixes the polar angles and the formula no longer applies.
pub fn current_closed_form<S: Real>(
    spec: &FreeParticleSpec<S>,
    grid: &Grid<S>,
) -> Result<VectorField<S>> {
    if !spec.is_single_complex_branch(S::of(1e-12)) {
        return Err(Error::ClosedFormUnavailable {
            reason: "closed-form current requires a single branch with a complex weight",
        });
    }
    let weight_sq = spec.q_weights[0].norm_sqr();
    let rho_sq = spec.rho * spec.rho * weight_sq;
    let units = spec.units;
    let hbar_over_m = units.hbar / units.mass;

    Ok(VectorField::sample(grid, |x| {
        let (theta, _, _) = spec.angles(x);
        let (sin_t, cos_t) = theta.sin_cos();
        let cos2 = cos_t * cos_t - sin_t * sin_t;
        let phi = spec.phi.value(x);
        let dphi = spec.phi.gradient(x);
        let mut j = [S::zero(); 3];
        for a in 0..3 {
            // j₀ = (ħ/m) Im(φ̄ ∂φ).
            let j0 = hbar_over_m * (phi.conj() * dphi[a]).im;
            j[a] = rho_sq
                * (cos2 * j0
                    + hbar_over_m
                        * phi.norm_sqr()
                        * (cos_t * cos_t * spec.gamma[a] - sin_t * sin_t * spec.omega[a]));
        }
        j
    }))
}

/// L∞ of `∇·j` for a stationary field, where `j` is the finite-difference
/// current. For a stationary state the density is time-independent, so this
/// is the full continuity residual.
///
/// Norms use a two-cell margin: the divergence composes two difference
/// operators, so the one-sided boundary formulas reach one cell further in
/// than for a single stencil.
pub fn continuity_residual<S: Real>(f: &QField<S>, units: Units<S>) -> ResidualReport<S> {
    let j = probability_current(f, units);
    let div = divergence_fd(&j);
    ResidualReport {
        linf: div.linf_within(2),
        l2: div.l2_within(2),
        field: Some(div.map(|v| v.abs())),
        masked_fraction: S::zero(),
    }
}

/// Symmetrized expectation value `½ ∫ [Ψ*(OΨ) + (Ψ*(OΨ))*] dV` by
/// trapezoidal quadrature.
///
/// `op_applied` is the field `OΨ`. The `weight` multiplies the integral
/// (use `1` for a plain integral, `1/L` for box normalization, ...).
pub fn expectation_value<S: Real>(op_applied: &QField<S>, f: &QField<S>, weight: S) -> Result<S> {
    if op_applied.grid() != f.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = f.grid();
    let cell = grid.cell_volume();
    let mut acc = S::zero();
    for i in 0..grid.len() {
        // ½(q + q*) of the symplectic product is its complex real part.
        let integrand = (f.values()[i].conj() * op_applied.values()[i]).z.re;
        acc += integrand * trapezoid_weight(grid, i);
    }
    Ok(acc * cell * weight)
}

/// Product over axes of ½ at either end, 1 inside.
fn trapezoid_weight<S: Real>(grid: &Grid<S>, idx: usize) -> S {
    let m = grid.multi_index(idx);
    let mut w = S::one();
    for a in 0..grid.rank() {
        if m[a] == 0 || m[a] + 1 == grid.dims()[a] {
            w *= S::of(0.5);
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::unit_from_angles;
    use crate::vec3;
    use crate::wavefunction::PlaneWaveSpec;
    use num_complex::Complex64;

    type Q = Quaternion<f64>;

    fn units() -> Units<f64> {
        Units::natural()
    }

    /// Φ₁ = cosΘ e^{ikx} + sinΘ e^{−ikx} j, constant Θ.
    fn phi1(theta: f64, k: f64) -> impl Fn([f64; 3]) -> Q {
        move |x| {
            Q::new(
                Complex64::from_polar(theta.cos(), k * x[0]),
                Complex64::from_polar(theta.sin(), -k * x[0]),
            )
        }
    }

    /// Φ₂ = e^{ikx}(cosΘ + sinΘ j), constant Θ.
    fn phi2(theta: f64, k: f64) -> impl Fn([f64; 3]) -> Q {
        move |x| {
            unit_from_angles(theta, 0.0, 0.0).mul_complex_left(Complex64::from_polar(1.0, k * x[0]))
        }
    }

    fn phi1_gradient(theta: f64, k: f64, x: [f64; 3]) -> [Q; 3] {
        let i = Complex64::new(0.0, 1.0);
        let dz = i * k * Complex64::from_polar(theta.cos(), k * x[0]);
        let dzeta = -i * k * Complex64::from_polar(theta.sin(), -k * x[0]);
        [Q::new(dz, dzeta), Q::zero(), Q::zero()]
    }

    fn phi2_gradient(theta: f64, k: f64, x: [f64; 3]) -> [Q; 3] {
        let i = Complex64::new(0.0, 1.0);
        let e = Complex64::from_polar(1.0, k * x[0]);
        [
            Q::new(i * k * e * theta.cos(), i * k * e * theta.sin()),
            Q::zero(),
            Q::zero(),
        ]
    }

    #[test]
    fn momentum_of_constant_field_vanishes() {
        let g = Grid::line(0.0, 1.0, 11).unwrap();
        let f = QField::sample(&g, |_| Q::from_components(0.7, -0.2, 0.1, 0.4));
        let p = momentum_apply(&f, units()).remove(0);
        assert!(p.map(|q| q.norm()).linf() < 1e-12);
    }

    #[test]
    fn phi1_is_momentum_eigenfunction_with_current_hbar_k_over_m() {
        let (theta, k) = (0.67, 1.3);
        let f = phi1(theta, k);
        for s in 0..9 {
            let x = [0.21 * s as f64, 0.0, 0.0];
            let grad = phi1_gradient(theta, k, x);
            // p̂Φ₁ = ħk Φ₁ exactly.
            let p = grad[0].times_i_right().scale(-1.0);
            assert!(p.approx_eq(f(x).scale(k), 1e-14));
            let j = current_from_gradient(f(x), grad, units());
            assert!((j[0] - k).abs() < 1e-14, "j1 {j:?}");
            assert!(j[1].abs() < 1e-15 && j[2].abs() < 1e-15);
        }
    }

    #[test]
    fn phi2_current_is_cos2theta_hbar_k_over_m() {
        // The direct symplectic evaluation gives (ħ/m)cos2Θ·k; the halved
        // value is what the cross-check in the acceptance report flags.
        let (theta, k) = (0.5, 1.3);
        for s in 0..9 {
            let x = [0.17 * s as f64, 0.0, 0.0];
            let j = current_from_gradient(phi2(theta, k)(x), phi2_gradient(theta, k, x), units());
            let expected = (2.0 * theta).cos() * k;
            assert!(
                (j[0] - expected).abs() < 1e-14,
                "j2 {} vs {}",
                j[0],
                expected
            );
            assert!((j[0] - 0.5 * expected).abs() > 0.4 * expected.abs());
        }
    }

    #[test]
    fn phi2_current_vanishes_at_pi_over_4() {
        let x = [0.3, 0.0, 0.0];
        let theta = std::f64::consts::FRAC_PI_4;
        let j = current_from_gradient(phi2(theta, 1.0)(x), phi2_gradient(theta, 1.0, x), units());
        assert!(j[0].abs() < 1e-15);
    }

    #[test]
    fn symmetrized_product_is_real_by_construction() {
        let (theta, k) = (0.5, 1.3);
        let x = [0.4, 0.0, 0.0];
        let v = phi2(theta, k)(x);
        let g = phi2_gradient(theta, k, x)[0];
        let q = v.conj() * g.times_i_right().scale(-1.0);
        let sym = q + q.conj();
        assert!(sym.z.im.abs() <= 1e-12 && sym.zeta.norm() <= 1e-12);
        assert!((sym.z.re - 2.0 * q.z.re).abs() <= 1e-15);
    }

    #[test]
    fn complex_plane_wave_current_and_momentum() {
        let k = 0.9;
        let a1 = Complex64::new(0.8, 0.3);
        let g = Grid::line(0.0, 2.0 * std::f64::consts::PI / k, 201).unwrap();
        let f = QField::sample(&g, |x| {
            Q::from_complex(a1 * Complex64::from_polar(1.0, k * x[0]))
        });
        let j = probability_current(&f, units());
        // j = (ħ/m)|A₁|² k, up to the O(h²) of the finite difference.
        let expected = a1.norm_sqr() * k;
        for (i, v) in j.values().iter().enumerate() {
            if j.grid().is_interior(i) {
                assert!((v[0] - expected).abs() < 1e-3, "{} vs {expected}", v[0]);
            }
        }

        // ⟨p̂⟩ box-normalized over one period = ħk + O(h²).
        let p = momentum_apply(&f, units()).remove(0);
        let length = 2.0 * std::f64::consts::PI / k;
        let norm = expectation_value(&f, &f, 1.0).unwrap();
        let p_exp = expectation_value(&p, &f, 1.0).unwrap() / norm;
        assert!((p_exp - k).abs() < 1e-3, "{p_exp} vs {k}");
        assert!((norm - a1.norm_sqr() * length).abs() < 1e-10);
    }

    #[test]
    fn expectation_of_identity_on_normalized_gaussian() {
        let g = Grid::line(-8.0, 16.0, 201).unwrap();
        let norm_const = std::f64::consts::PI.powf(-0.25);
        let f = QField::sample(&g, |x: [f64; 3]| {
            Q::from_real(norm_const * (-0.5 * x[0] * x[0]).exp())
        });
        let one = expectation_value(&f, &f, 1.0).unwrap();
        assert!((one - 1.0).abs() < 1e-6, "⟨1⟩ = {one}");
    }

    #[test]
    fn current_invariances() {
        let spec_field =
            |g: &Grid<f64>| QField::sample(g, |x| phi1(0.4, 1.0)(x) + phi2(0.8, 1.0)(x).scale(0.3));
        let g = Grid::line(0.0, 3.0, 101).unwrap();
        let f = spec_field(&g);
        let j = probability_current(&f, units());

        // Global right complex phase leaves j unchanged.
        let alpha = Complex64::from_polar(1.0, 0.77);
        let fp = f.map(|q| q.mul_complex_right(alpha));
        let jp = probability_current(&fp, units());
        let dphase = j.zip(&jp, vec3::sub).unwrap();
        assert!(dphase.linf() <= 1e-12 * j.linf().max(1.0));

        // Left complex amplitude scales j by |c|².
        let c = Complex64::new(1.2, -0.7);
        let fc = f.map(|q| q.mul_complex_left(c));
        let jc = probability_current(&fc, units());
        let dscale = jc
            .zip(&j, |a, b| vec3::sub(a, vec3::scale(b, c.norm_sqr())))
            .unwrap();
        assert!(dscale.linf() <= 1e-12 * jc.linf().max(1.0));
    }

    #[test]
    fn closed_form_requires_single_complex_branch() {
        let phi = PlaneWaveSpec::forward([1.0, 0.0, 0.0]);
        let gamma = [0.0, 1.0, 0.0];
        let theta = [0.0, 0.0, 0.5];
        let energy = FreeParticleSpec::consistent_energy(&phi, gamma, theta, units());
        let mut spec = FreeParticleSpec::single_branch(
            phi,
            gamma,
            gamma,
            theta,
            [0.1, 0.2, 0.7],
            1.0,
            energy,
            units(),
        );
        let g = Grid::new(&[0.0; 3], &[0.2; 3], &[5, 5, 5]).unwrap();
        assert!(current_closed_form(&spec, &g).is_ok());
        spec.q_weights[0] = Q::j();
        assert!(matches!(
            current_closed_form(&spec, &g),
            Err(Error::ClosedFormUnavailable { .. })
        ));
        spec.q_weights = [Q::one(), Q::one(), Q::zero(), Q::zero()];
        assert!(current_closed_form(&spec, &g).is_err());
    }

    #[test]
    fn closed_form_matches_fd_current_with_order_two() {
        let phi = PlaneWaveSpec::new(
            Complex64::new(0.9, 0.0),
            Complex64::new(0.2, 0.1),
            [1.0, 0.0, 0.0],
        );
        let gamma = [0.0, 1.4, 0.0];
        let omega = [0.0, -1.4, 0.0];
        let theta = [0.0, 0.0, 0.6];
        let energy = FreeParticleSpec::consistent_energy(&phi, gamma, theta, units());
        let spec = FreeParticleSpec::single_branch(
            phi,
            gamma,
            omega,
            theta,
            [0.4, 1.1, 0.6],
            1.0,
            energy,
            units(),
        );
        let errs: Vec<f64> = [9usize, 17]
            .iter()
            .map(|&n| {
                let g = Grid::new(&[0.0; 3], &[0.8 / (n - 1) as f64; 3], &[n, n, n]).unwrap();
                let f = spec.sample(&g).unwrap();
                let jn = probability_current(&f, units());
                let jc = current_closed_form(&spec, &g).unwrap();
                let diff = jn.zip(&jc, vec3::sub).unwrap();
                diff.linf_interior()
            })
            .collect();
        let ratio = errs[0] / errs[1];
        assert!((ratio - 4.0).abs() < 1.2, "ratio {ratio}, errs {errs:?}");
    }

    #[test]
    fn continuity_holds_for_solutions_and_fails_for_sources() {
        // Rotated orthonormal frame: axis-aligned vectors make the discrete
        // divergence vanish identically and the order is unmeasurable.
        let e1 = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
        let e2 = [2.0 / 3.0, 1.0 / 3.0, -2.0 / 3.0];
        let e3 = [-2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0];
        let phi = PlaneWaveSpec::forward(e1);
        let gamma = e3;
        let omega = e3;
        let theta = vec3::scale(e2, 0.8);
        let energy = FreeParticleSpec::consistent_energy(&phi, gamma, theta, units());
        let spec = FreeParticleSpec::single_branch(
            phi,
            gamma,
            omega,
            theta,
            [0.0, 0.3, 0.5],
            1.0,
            energy,
            units(),
        );
        let coarse = Grid::new(&[0.0; 3], &[0.05; 3], &[15, 15, 15]).unwrap();
        let fine = coarse.refined();
        let r_coarse = continuity_residual(&spec.sample(&coarse).unwrap(), units());
        let r_fine = continuity_residual(&spec.sample(&fine).unwrap(), units());
        let ratio = r_coarse.linf / r_fine.linf;
        assert!((ratio - 4.0).abs() < 1.2, "continuity order ratio {ratio}");

        // A field with j ∝ x·x̂ has divergence ≈ 1: Ψ = e^{ix²/2} gives
        // j_x = x.
        let src = QField::sample(&coarse, |x| {
            Q::from_complex(Complex64::from_polar(1.0, 0.5 * x[0] * x[0]))
        });
        let bad = continuity_residual(&src, units());
        assert!(
            (bad.linf - 1.0).abs() < 0.05,
            "source divergence {}",
            bad.linf
        );
    }
}
