//! Physical constants kept symbolic in all formulas.

use crate::real::Real;

/// Planck constant and particle mass. Defaults to natural units ħ = m = 1,
/// but both stay explicit so dimensional checks can pick other values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units<S> {
    pub hbar: S,
    pub mass: S,
}

impl<S: Real> Units<S> {
    pub fn natural() -> Self {
        Units {
            hbar: S::one(),
            mass: S::one(),
        }
    }

    pub fn new(hbar: S, mass: S) -> Self {
        Units { hbar, mass }
    }

    /// 2m/ħ², the factor in front of every energy in the wave equation.
    pub fn two_m_over_hbar_sq(&self) -> S {
        S::of(2.0) * self.mass / (self.hbar * self.hbar)
    }

    /// ħ²/2m, the kinetic prefactor.
    pub fn hbar_sq_over_two_m(&self) -> S {
        self.hbar * self.hbar / (S::of(2.0) * self.mass)
    }
}

impl<S: Real> Default for Units<S> {
    fn default() -> Self {
        Self::natural()
    }
}
