//! Symplectic quaternion algebra.
//!
//! A quaternion is stored as an ordered pair of complex numbers,
//! `q = z + ζj`, with the units obeying `ij = -ji` and `j² = -1`. The
//! product rule in this form is
//!
//! ```text
//! (z₁ + ζ₁ j)(z₂ + ζ₂ j) = (z₁ z₂ − ζ₁ ζ̄₂) + (z₁ ζ₂ + ζ₁ z̄₂) j
//! ```
//!
//! The conjugations on the right factor are where all the non-commutativity
//! of the physics lives: multiplying by a complex number on the **right**
//! conjugates it against the `j`-part, multiplying on the **left** does not.
//! [`Quaternion::times_i_right`] and [`Quaternion::times_i_left`] make the
//! two actions explicit.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::real::Real;

/// Quaternion in symplectic form `z + ζj`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion<S> {
    /// Complex part (spans 1 and i).
    pub z: Complex<S>,
    /// j-part coefficient (spans j and k = ij).
    pub zeta: Complex<S>,
}

impl<S: Real> Quaternion<S> {
    pub fn new(z: Complex<S>, zeta: Complex<S>) -> Self {
        Quaternion { z, zeta }
    }

    /// Build from the four real components of `w + xi + yj + zk`.
    pub fn from_components(w: S, x: S, y: S, zk: S) -> Self {
        Quaternion::new(Complex::new(w, x), Complex::new(y, zk))
    }

    pub fn from_complex(z: Complex<S>) -> Self {
        Quaternion::new(z, Complex::new(S::zero(), S::zero()))
    }

    pub fn from_real(w: S) -> Self {
        Quaternion::from_complex(Complex::new(w, S::zero()))
    }

    pub fn zero() -> Self {
        Quaternion::from_real(S::zero())
    }

    pub fn one() -> Self {
        Quaternion::from_real(S::one())
    }

    pub fn i() -> Self {
        Quaternion::from_complex(Complex::new(S::zero(), S::one()))
    }

    pub fn j() -> Self {
        Quaternion::new(
            Complex::new(S::zero(), S::zero()),
            Complex::new(S::one(), S::zero()),
        )
    }

    pub fn k() -> Self {
        Quaternion::new(
            Complex::new(S::zero(), S::zero()),
            Complex::new(S::zero(), S::one()),
        )
    }

    /// Quaternionic conjugate `q* = z̄ − ζj`; satisfies `(ab)* = b*a*` and
    /// `q q* = |q|²`.
    pub fn conj(self) -> Self {
        Quaternion::new(self.z.conj(), -self.zeta)
    }

    pub fn norm_sqr(self) -> S {
        self.z.norm_sqr() + self.zeta.norm_sqr()
    }

    pub fn norm(self) -> S {
        self.norm_sqr().sqrt()
    }

    /// Multiply by a real scalar.
    pub fn scale(self, s: S) -> Self {
        Quaternion::new(self.z * s, self.zeta * s)
    }

    /// Left multiplication by a complex constant: `c·q = (cz) + (cζ)j`.
    pub fn mul_complex_left(self, c: Complex<S>) -> Self {
        Quaternion::new(c * self.z, c * self.zeta)
    }

    /// Right multiplication by a complex constant: `q·c = (zc) + (ζc̄)j`.
    /// The conjugation on the j-part follows from `jc = c̄j`.
    pub fn mul_complex_right(self, c: Complex<S>) -> Self {
        Quaternion::new(self.z * c, self.zeta * c.conj())
    }

    /// `q·i = (iz) + (−iζ)j` — the right action the wave equation uses.
    pub fn times_i_right(self) -> Self {
        let i = Complex::new(S::zero(), S::one());
        self.mul_complex_right(i)
    }

    /// `i·q = (iz) + (iζ)j`.
    pub fn times_i_left(self) -> Self {
        let i = Complex::new(S::zero(), S::one());
        self.mul_complex_left(i)
    }

    /// Inverse of a nonzero quaternion, `q⁻¹ = q*/|q|²`.
    pub fn inverse(self) -> Option<Self> {
        let n = self.norm_sqr();
        if n == S::zero() {
            None
        } else {
            Some(self.conj().scale(n.recip()))
        }
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n == S::zero() {
            None
        } else {
            Some(self.scale(n.recip()))
        }
    }

    pub fn is_unit(self, tol: S) -> bool {
        (self.norm() - S::one()).abs() <= tol
    }

    /// Componentwise absolute comparison.
    pub fn approx_eq(self, other: Self, tol: S) -> bool {
        (self - other).max_component_abs() <= tol
    }

    /// Largest absolute value among the four real components.
    pub fn max_component_abs(self) -> S {
        let a = self.z.re.abs().max(self.z.im.abs());
        let b = self.zeta.re.abs().max(self.zeta.im.abs());
        a.max(b)
    }

    /// Polar form `q = ρ(cosΘ e^{iΓ} + sinΘ e^{iΩ} j)`.
    ///
    /// Branch conventions: `Θ ∈ [0, π/2]`, `Γ, Ω ∈ (−π, π]`; a phase whose
    /// amplitude vanishes is set to zero (`Ω = 0` when `ζ = 0`, `Γ = 0` when
    /// `z = 0`, everything zero when `q = 0`).
    pub fn polar_decompose(self) -> PolarQuaternion<S> {
        let rho = self.norm();
        if rho == S::zero() {
            return PolarQuaternion {
                rho,
                theta: S::zero(),
                gamma: S::zero(),
                omega: S::zero(),
            };
        }
        let z_abs = self.z.norm();
        let zeta_abs = self.zeta.norm();
        let theta = zeta_abs.atan2(z_abs);
        let gamma = if z_abs == S::zero() {
            S::zero()
        } else {
            self.z.arg()
        };
        let omega = if zeta_abs == S::zero() {
            S::zero()
        } else {
            self.zeta.arg()
        };
        PolarQuaternion {
            rho,
            theta,
            gamma,
            omega,
        }
    }
}

impl<S: Real> Add for Quaternion<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Quaternion::new(self.z + rhs.z, self.zeta + rhs.zeta)
    }
}

impl<S: Real> Sub for Quaternion<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Quaternion::new(self.z - rhs.z, self.zeta - rhs.zeta)
    }
}

impl<S: Real> Neg for Quaternion<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion::new(-self.z, -self.zeta)
    }
}

/// Full quaternion product; non-commutative.
impl<S: Real> Mul for Quaternion<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Quaternion::new(
            self.z * rhs.z - self.zeta * rhs.zeta.conj(),
            self.z * rhs.zeta + self.zeta * rhs.z.conj(),
        )
    }
}

impl<S: Real> Mul<S> for Quaternion<S> {
    type Output = Self;
    fn mul(self, rhs: S) -> Self {
        self.scale(rhs)
    }
}

impl<S: Real> Sum for Quaternion<S> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Quaternion::zero(), Add::add)
    }
}

impl<S: Real> From<Complex<S>> for Quaternion<S> {
    fn from(z: Complex<S>) -> Self {
        Quaternion::from_complex(z)
    }
}

impl<S: Real + fmt::Display> fmt::Display for Quaternion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}i) + ({} + {}i)j",
            self.z.re, self.z.im, self.zeta.re, self.zeta.im
        )
    }
}

/// Polar parametrization `ρ(cosΘ e^{iΓ} + sinΘ e^{iΩ} j)` of a quaternion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarQuaternion<S> {
    /// Magnitude, `ρ = |q| ≥ 0`.
    pub rho: S,
    /// Mixing angle between complex and j parts, in `[0, π/2]`.
    pub theta: S,
    /// Phase of the complex part, in `(−π, π]`.
    pub gamma: S,
    /// Phase of the j part, in `(−π, π]`.
    pub omega: S,
}

impl<S: Real> PolarQuaternion<S> {
    pub fn new(rho: S, theta: S, gamma: S, omega: S) -> Self {
        PolarQuaternion {
            rho,
            theta,
            gamma,
            omega,
        }
    }

    /// Rebuild the quaternion. `compose ∘ polar_decompose` is the identity
    /// within the branch conventions.
    pub fn compose(self) -> Quaternion<S> {
        let (sin_t, cos_t) = self.theta.sin_cos();
        Quaternion::new(
            Complex::from_polar(self.rho * cos_t, self.gamma),
            Complex::from_polar(self.rho * sin_t, self.omega),
        )
    }

    /// The unit factor `K = cosΘ e^{iΓ} + sinΘ e^{iΩ} j`.
    pub fn unit(self) -> Quaternion<S> {
        PolarQuaternion {
            rho: S::one(),
            ..self
        }
        .compose()
    }
}

/// Unit quaternion `cosΘ e^{iΓ} + sinΘ e^{iΩ} j` straight from the angles.
pub fn unit_from_angles<S: Real>(theta: S, gamma: S, omega: S) -> Quaternion<S> {
    PolarQuaternion::new(S::one(), theta, gamma, omega).compose()
}
