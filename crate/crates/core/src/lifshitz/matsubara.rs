use std::f64::consts::PI;

use super::kernel::{inner_at, pressure_scale_mpa, y_integral};
use super::{check_separation, PressurePoint, QuadratureSettings};
use crate::error::{Error, Result};
use crate::permittivity::{PermittivityModel, ZeroMode};
use crate::units::{BOLTZMANN_EV_K, HBAR_C_EV_NM};

pub const MATSUBARA_MIN_TERMS: usize = 50;
pub const MATSUBARA_STOP_RELATIVE: f64 = 1e-9;
const MATSUBARA_MAX_TERMS: usize = 5_000_000;

/// Finite-temperature Lifshitz pressure as a Matsubara sum at `temperature_k`.
///
/// The l = 0 term takes r_TM = 1 for conductors and r_TE from the model's
/// [`ZeroMode`]: zero for Drude-like metals, the plasma-frequency form for
/// plasma-like ones.
pub fn pressure_matsubara(
    a_nm: f64,
    temperature_k: f64,
    model: &PermittivityModel,
    settings: &QuadratureSettings,
) -> Result<PressurePoint> {
    check_separation(a_nm)?;
    settings.validate()?;
    if !(temperature_k > 0.0 && temperature_k.is_finite()) {
        return Err(Error::domain(format!(
            "temperature must be positive, got {temperature_k} K"
        )));
    }
    let zero_mode = model.zero_mode()?;

    // spacing of ζ_l = 2aξ_l/c
    let step = 4.0 * PI * BOLTZMANN_EV_K * temperature_k * a_nm / HBAR_C_EV_NM;
    let xi_per_zeta = HBAR_C_EV_NM / (2.0 * a_nm);

    let zero = match zero_mode {
        ZeroMode::DrudeLike => y_integral(0.0, settings, |_| (1.0, 0.0))?,
        ZeroMode::PlasmaLike { plasma_frequency } => {
            let w = 2.0 * a_nm * plasma_frequency / HBAR_C_EV_NM;
            y_integral(0.0, settings, |y| {
                let s = y + (y * y + w * w).sqrt();
                (1.0, -(w * w) / (s * s))
            })?
        }
        ZeroMode::Dielectric { static_eps } => {
            let r = (static_eps - 1.0) / (static_eps + 1.0);
            y_integral(0.0, settings, |_| (r, 0.0))?
        }
    };

    let mut sum = 0.5 * zero.value;
    let mut err = 0.5 * zero.error;
    let mut quiet = 0;
    let mut l = 1;
    loop {
        let zeta = step * l as f64;
        let eps = model.eps_imag(zeta * xi_per_zeta)?;
        let term = inner_at(zeta, eps, settings)?;
        sum += term.value;
        err += term.error;
        if term.value.abs() < MATSUBARA_STOP_RELATIVE * sum.abs() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if (quiet >= 3 && l >= MATSUBARA_MIN_TERMS) || sum == 0.0 && l >= MATSUBARA_MIN_TERMS {
            break;
        }
        if l >= MATSUBARA_MAX_TERMS {
            return Err(Error::Accuracy {
                context: format!("Matsubara sum at a = {a_nm} nm, T = {temperature_k} K did not settle"),
                estimate: -pressure_scale_mpa(a_nm) * step * sum,
                error: f64::NAN,
            });
        }
        l += 1;
    }

    let scale = pressure_scale_mpa(a_nm) * step;
    let pressure = -scale * sum;
    // truncation: the neglected tail is bounded by a few of the last terms
    let error = scale * err + 3.0 * MATSUBARA_STOP_RELATIVE * pressure.abs();
    log::debug!(
        "Matsubara sum at a = {a_nm} nm, T = {temperature_k} K used {} terms",
        l + 1
    );
    Ok(PressurePoint {
        separation_nm: a_nm,
        pressure_mpa: pressure,
        error_mpa: error,
    })
}
