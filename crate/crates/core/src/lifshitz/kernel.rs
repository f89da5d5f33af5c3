use std::f64::consts::PI;

use super::reflection::coefficients;
use super::{check_separation, PressurePoint, QuadratureSettings};
use crate::error::{Error, Result};
use crate::permittivity::PermittivityModel;
use crate::quadrature::{try_integrate, Estimate, QuadOptions};
use crate::units::{HBAR_C_EV_NM, HBAR_C_J_M};

/// ħc/(32π²a⁴) in mPa for a separation in nm.
pub(crate) fn pressure_scale_mpa(a_nm: f64) -> f64 {
    let a = a_nm * 1e-9;
    HBAR_C_J_M / (32.0 * PI * PI * a.powi(4)) * 1e3
}

/// Mode-sum integrand r²e^{−y}/(1 − r²e^{−y}) for one polarisation.
#[inline]
fn mode(r2: f64, exp_neg_y: f64) -> f64 {
    let x = r2 * exp_neg_y;
    x / (1.0 - x)
}

/// ∫ y² Σ_α r_α²e^{−y}/(1 − r_α²e^{−y}) dy from `lower` to the y cutoff,
/// with reflection coefficients supplied as functions of y.
pub(crate) fn y_integral<R>(lower: f64, settings: &QuadratureSettings, reflect: R) -> Result<Estimate>
where
    R: Fn(f64) -> (f64, f64),
{
    let upper = settings.y_max.max(lower + 0.5 * settings.y_max);
    let points = [lower, lower + 1.0, lower + 4.0, lower + 12.0, upper];
    let est = try_integrate::<_, Error>(
        |y: f64| {
            let (tm, te) = reflect(y);
            let e = (-y).exp();
            Ok(y * y * (mode(tm * tm, e) + mode(te * te, e)))
        },
        &points,
        &QuadOptions::relative(settings.inner_rel_tol).with_max_intervals(500),
    )?;
    if !est.converged {
        return Err(Error::Accuracy {
            context: format!("y integral from {lower}"),
            estimate: est.value,
            error: est.error,
        });
    }
    Ok(est)
}

/// Inner integral at dimensionless frequency ζ for permittivity ε(iξ).
pub(crate) fn inner_at(zeta: f64, eps: f64, settings: &QuadratureSettings) -> Result<Estimate> {
    if !(eps >= 1.0) {
        return Err(Error::domain(format!("permittivity {eps} < 1 on the imaginary axis")));
    }
    y_integral(zeta, settings, |y| coefficients(y, zeta, eps))
}

/// Zero-temperature Lifshitz pressure at separation `a_nm` (nm).
pub fn pressure_t0(a_nm: f64, model: &PermittivityModel, settings: &QuadratureSettings) -> Result<PressurePoint> {
    check_separation(a_nm)?;
    settings.validate()?;
    let xi_per_zeta = HBAR_C_EV_NM / (2.0 * a_nm);
    let g = |zeta: f64| -> Result<f64> {
        let eps = model.eps_imag(zeta * xi_per_zeta)?;
        Ok(inner_at(zeta, eps, settings)?.value)
    };

    let cut = settings.xi_cutoff;
    let mut points: Vec<f64> = [0.0, 0.02, 0.2, 1.0, 3.0, 8.0, 20.0]
        .into_iter()
        .filter(|&z| z < cut)
        .collect();
    points.push(cut);

    let opts = QuadOptions::relative(settings.outer_rel_tol).with_max_intervals(1000);
    let mut total = try_integrate(&g, &points, &opts)?;
    // extend the ζ range until the integrand is negligible against the total
    let mut hi = cut;
    while g(hi)?.abs() > 1e-12 * total.value.abs() {
        let next = try_integrate(&g, &[hi, 2.0 * hi], &opts)?;
        total.value += next.value;
        total.error += next.error;
        total.converged &= next.converged;
        hi *= 2.0;
    }

    let scale = pressure_scale_mpa(a_nm);
    let pressure = -scale * total.value;
    let error = scale * total.error + settings.inner_rel_tol * pressure.abs();
    if !total.converged {
        return Err(Error::Accuracy {
            context: format!("pressure at a = {a_nm} nm"),
            estimate: pressure,
            error,
        });
    }
    Ok(PressurePoint {
        separation_nm: a_nm,
        pressure_mpa: pressure,
        error_mpa: error,
    })
}
