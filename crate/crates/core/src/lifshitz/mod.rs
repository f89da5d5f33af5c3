//! Casimir pressure between two identical parallel plates.
//!
//! With ζ = 2aξ/c and y = 2aq the zero-temperature pressure becomes
//!
//! P(a) = −ħc/(32π²a⁴) ∫₀^∞ dζ ∫_ζ^∞ y² Σ_α r_α²e^{−y}/(1 − r_α²e^{−y}) dy,
//!
//! and the finite-temperature pressure replaces the ζ integral by the
//! Matsubara sum Δζ Σ'_l over ζ_l = lΔζ, Δζ = 4πk_BTa/(ħc).

mod curve;
mod kernel;
mod matsubara;
mod reflection;

use serde::{Deserialize, Serialize};

pub use curve::{pressure_curve, pressure_points};
pub use kernel::pressure_t0;
pub use matsubara::{pressure_matsubara, MATSUBARA_MIN_TERMS, MATSUBARA_STOP_RELATIVE};
pub use reflection::reflection_coefficients;

use crate::error::{Error, Result};

/// Tolerances and truncations for the pressure integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub inner_rel_tol: f64,
    pub outer_rel_tol: f64,
    /// Upper limit of the dimensionless y = 2aq integral.
    pub y_max: f64,
    /// Initial ξ cutoff in units of c/(2a).
    pub xi_cutoff: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            inner_rel_tol: 1e-7,
            outer_rel_tol: 1e-6,
            y_max: 80.0,
            xi_cutoff: 50.0,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t > 0.0 && t <= 1e-2;
        if !tol_ok(self.inner_rel_tol) || !tol_ok(self.outer_rel_tol) {
            return Err(Error::validation("quadrature tolerances must lie in (0, 1e-2]"));
        }
        if !(self.y_max >= 40.0 && self.y_max.is_finite()) {
            return Err(Error::validation(format!("y_max must be >= 40, got {}", self.y_max)));
        }
        if !(self.xi_cutoff > 0.0 && self.xi_cutoff.is_finite()) {
            return Err(Error::validation("xi cutoff multiplier must be positive"));
        }
        Ok(())
    }

    /// Both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        QuadratureSettings {
            inner_rel_tol: self.inner_rel_tol * factor,
            outer_rel_tol: self.outer_rel_tol * factor,
            ..*self
        }
    }
}

/// Pressure at one separation. Negative pressure is attraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressurePoint {
    pub separation_nm: f64,
    pub pressure_mpa: f64,
    pub error_mpa: f64,
}

pub(crate) fn check_separation(a_nm: f64) -> Result<()> {
    if a_nm > 0.0 && a_nm.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("separation must be positive, got {a_nm} nm")))
    }
}
