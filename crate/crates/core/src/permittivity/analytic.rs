//! Closed-form dielectric functions: Drude, Lorentz oscillators and the
//! generalised plasma-like model.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Drude parameters, both in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeParams {
    pub plasma_frequency: f64,
    pub relaxation: f64,
}

impl DrudeParams {
    pub fn new(plasma_frequency: f64, relaxation: f64) -> Result<Self> {
        let p = DrudeParams {
            plasma_frequency,
            relaxation,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.plasma_frequency > 0.0 && self.plasma_frequency.is_finite()) {
            return Err(Error::validation(format!(
                "plasma frequency must be positive, got {}",
                self.plasma_frequency
            )));
        }
        if !(self.relaxation >= 0.0 && self.relaxation.is_finite()) {
            return Err(Error::validation(format!(
                "relaxation must be non-negative, got {}",
                self.relaxation
            )));
        }
        Ok(())
    }
}

/// One Lorentz oscillator: strength g (eV²), resonance ω (eV), width γ (eV).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillator {
    pub strength: f64,
    pub frequency: f64,
    pub width: f64,
}

impl Oscillator {
    pub fn new(strength: f64, frequency: f64, width: f64) -> Result<Self> {
        let o = Oscillator {
            strength,
            frequency,
            width,
        };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strength >= 0.0 && self.frequency > 0.0 && self.width >= 0.0)
            || !(self.strength.is_finite() && self.frequency.is_finite() && self.width.is_finite())
        {
            return Err(Error::validation(format!(
                "invalid oscillator (g = {}, omega = {}, gamma = {})",
                self.strength, self.frequency, self.width
            )));
        }
        Ok(())
    }

    /// Contribution g/(ω_j² + ξ² + γ_j ξ) on the imaginary axis.
    pub fn imag_axis_term(&self, xi: f64) -> f64 {
        self.strength / (self.frequency * self.frequency + xi * xi + self.width * xi)
    }

    /// Contribution g/(ω_j² − ω² − iγ_j ω) on the real axis.
    pub fn real_axis_term(&self, omega: f64) -> Complex64 {
        let denom = Complex64::new(self.frequency * self.frequency - omega * omega, -self.width * omega);
        self.strength / denom
    }
}

/// Generalised plasma-like model: dissipationless conduction electrons plus
/// core-electron oscillators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlasmaLikeParams {
    pub plasma_frequency: f64,
    #[serde(default)]
    pub oscillators: Vec<Oscillator>,
}

impl PlasmaLikeParams {
    pub fn new(plasma_frequency: f64, oscillators: Vec<Oscillator>) -> Result<Self> {
        let p = PlasmaLikeParams {
            plasma_frequency,
            oscillators,
        };
        p.validate()?;
        Ok(p)
    }

    /// ωp = 0 is accepted so that pure-oscillator (dielectric) media can be
    /// expressed with the same type.
    pub fn validate(&self) -> Result<()> {
        if !(self.plasma_frequency >= 0.0 && self.plasma_frequency.is_finite()) {
            return Err(Error::validation(format!(
                "plasma frequency must be non-negative, got {}",
                self.plasma_frequency
            )));
        }
        self.oscillators.iter().try_for_each(Oscillator::validate)
    }
}

fn check_positive(freq: f64, what: &str) -> Result<()> {
    if freq > 0.0 && freq.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be positive and finite, got {freq}")))
    }
}

/// Drude permittivity at imaginary frequency, 1 + ωp²/(ξ(ξ+γ)).
pub fn drude_eps_imag(xi: f64, params: &DrudeParams) -> Result<f64> {
    check_positive(xi, "imaginary frequency")?;
    let wp = params.plasma_frequency;
    Ok(1.0 + wp * wp / (xi * (xi + params.relaxation)))
}

/// Imaginary part of the Drude permittivity on the real axis,
/// ωp²γ/(ω(ω²+γ²)).
pub fn drude_im_eps_real(omega: f64, params: &DrudeParams) -> Result<f64> {
    check_positive(omega, "real frequency")?;
    Ok(drude_im_eps_unchecked(omega, params))
}

pub(crate) fn drude_im_eps_unchecked(omega: f64, params: &DrudeParams) -> f64 {
    let wp = params.plasma_frequency;
    let g = params.relaxation;
    wp * wp * g / (omega * (omega * omega + g * g))
}

/// Generalised plasma-like permittivity at imaginary frequency,
/// 1 + ωp²/ξ² + Σ g_j/(ω_j² + ξ² + γ_j ξ).
pub fn plasma_like_eps_imag(xi: f64, params: &PlasmaLikeParams) -> Result<f64> {
    check_positive(xi, "imaginary frequency")?;
    let wp = params.plasma_frequency;
    let core: f64 = params.oscillators.iter().map(|o| o.imag_axis_term(xi)).sum();
    Ok(1.0 + wp * wp / (xi * xi) + core)
}

/// Drude term plus oscillators continued to the imaginary axis,
/// 1 + ωp²/(ξ(ξ+γ)) + Σ g_j/(ω_j² + ξ² + γ_j ξ).
pub fn oscillator_eps_imag(xi: f64, params: &DrudeParams, oscillators: &[Oscillator]) -> Result<f64> {
    let drude = drude_eps_imag(xi, params)?;
    Ok(drude + oscillators.iter().map(|o| o.imag_axis_term(xi)).sum::<f64>())
}

/// Complex permittivity on the real axis,
/// 1 − ωp²/(ω(ω+iγ)) + Σ g_j/(ω_j² − ω² − iγ_j ω).
pub fn oscillator_eps_real(omega: f64, params: &DrudeParams, oscillators: &[Oscillator]) -> Result<Complex64> {
    check_positive(omega, "real frequency")?;
    Ok(oscillator_eps_real_unchecked(omega, params, oscillators))
}

/// Same closed form without the ω > 0 check; valid for any nonzero real ω.
pub(crate) fn oscillator_eps_real_unchecked(omega: f64, params: &DrudeParams, oscillators: &[Oscillator]) -> Complex64 {
    let wp = params.plasma_frequency;
    let drude = Complex64::new(wp * wp, 0.0) / (omega * Complex64::new(omega, params.relaxation));
    let core: Complex64 = oscillators.iter().map(|o| o.real_axis_term(omega)).sum();
    Complex64::new(1.0, 0.0) - drude + core
}

#[cfg(test)]
mod tests {
    use super::*;

    fn au() -> DrudeParams {
        DrudeParams::new(9.0, 0.035).unwrap()
    }

    #[test]
    fn drude_imaginary_axis_values() {
        assert!((drude_eps_imag(9.0, &au()).unwrap() - (1.0 + 81.0 / (9.0 * 9.035))).abs() < 1e-12);
        assert!((drude_eps_imag(9.0, &au()).unwrap() - 1.99614).abs() / 1.99614 < 1e-5);
        assert!((drude_eps_imag(0.035, &au()).unwrap() - 33062.2).abs() < 0.05);
        assert!((drude_eps_imag(1e6, &au()).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn drude_rejects_non_positive_frequency() {
        assert!(matches!(drude_eps_imag(0.0, &au()), Err(Error::Domain(_))));
        assert!(matches!(drude_eps_imag(-1.0, &au()), Err(Error::Domain(_))));
        assert!(matches!(drude_im_eps_real(0.0, &au()), Err(Error::Domain(_))));
    }

    #[test]
    fn drude_real_axis_imaginary_part() {
        let p = au();
        let at_gamma = drude_im_eps_real(p.relaxation, &p).unwrap();
        let expected = 81.0 / (2.0 * 0.035 * 0.035);
        assert!((at_gamma - expected).abs() / expected < 1e-14);
        assert!((drude_im_eps_real(1.0, &p).unwrap() - 2.8315).abs() < 1e-4);
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let w = p.relaxation * 1.05f64.powi(i);
            let v = drude_im_eps_real(w, &p).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn plasma_like_values() {
        let pure = PlasmaLikeParams::new(8.9, vec![]).unwrap();
        assert!((plasma_like_eps_imag(8.9, &pure).unwrap() - 2.0).abs() < 1e-14);
        assert!((plasma_like_eps_imag(1.0, &pure).unwrap() - 80.21).abs() < 1e-12);
        let osc = PlasmaLikeParams::new(0.0, vec![Oscillator::new(1.0, 2.0, 0.1).unwrap()]).unwrap();
        assert!((plasma_like_eps_imag(1.0, &osc).unwrap() - 1.19608).abs() < 1e-5);
    }

    #[test]
    fn oscillator_on_resonance() {
        let none = DrudeParams {
            plasma_frequency: 0.0,
            relaxation: 0.0,
        };
        let eps = oscillator_eps_real(2.0, &none, &[Oscillator::new(1.0, 2.0, 0.1).unwrap()]).unwrap();
        assert!((eps.re - 1.0).abs() < 1e-12);
        assert!((eps.im - 5.0).abs() < 1e-12);
    }

    #[test]
    fn oscillator_real_axis_matches_drude_im_part_without_widths() {
        let p = au();
        let osc = [
            Oscillator::new(3.0, 2.5, 0.0).unwrap(),
            Oscillator::new(10.0, 4.0, 0.0).unwrap(),
        ];
        for w in [0.01, 0.3, 1.0, 3.3, 7.0] {
            let eps = oscillator_eps_real(w, &p, &osc).unwrap();
            let im = drude_im_eps_real(w, &p).unwrap();
            assert!((eps.im - im).abs() <= 1e-12 * im);
        }
    }

    #[test]
    fn reality_condition_on_random_grid() {
        use std::f64::consts::PI;
        let p = au();
        let osc = [
            Oscillator::new(1.5, 2.6, 0.4).unwrap(),
            Oscillator::new(20.0, 6.0, 2.0).unwrap(),
        ];
        // deterministic pseudo-random probes
        for i in 0..100 {
            let w = 0.01 + 20.0 * ((i as f64 * PI).sin().abs());
            let plus = oscillator_eps_real_unchecked(w, &p, &osc);
            let minus = oscillator_eps_real_unchecked(-w, &p, &osc);
            assert!((minus - plus.conj()).norm() <= 1e-12 * plus.norm());
            assert!(plus.im > 0.0);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(DrudeParams::new(0.0, 0.1).is_err());
        assert!(DrudeParams::new(9.0, -0.1).is_err());
        assert!(Oscillator::new(-1.0, 1.0, 0.1).is_err());
        assert!(Oscillator::new(1.0, 0.0, 0.1).is_err());
        assert!(PlasmaLikeParams::new(-1.0, vec![]).is_err());
    }
}
