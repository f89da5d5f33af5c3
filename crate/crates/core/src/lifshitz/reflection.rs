use crate::error::{Error, Result};
use crate::units::HBAR_C_EV_NM;

/// TM and TE reflection coefficients at imaginary frequency ξ (eV) and
/// transverse wavenumber k⊥ (nm⁻¹) for a half-space with permittivity
/// ε = ε(iξ) ≥ 1.
pub fn reflection_coefficients(xi: f64, k_perp: f64, eps: f64) -> Result<(f64, f64)> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::domain(format!("imaginary frequency must be positive, got {xi}")));
    }
    if !(k_perp >= 0.0 && k_perp.is_finite()) {
        return Err(Error::domain(format!(
            "transverse wavenumber must be non-negative, got {k_perp}"
        )));
    }
    if !(eps >= 1.0) {
        return Err(Error::domain(format!("permittivity must be >= 1, got {eps}")));
    }
    let kappa = xi / HBAR_C_EV_NM;
    let q = (k_perp * k_perp + kappa * kappa).sqrt();
    Ok(coefficients(q, kappa, eps))
}

/// Reflection coefficients from q = (k⊥² + ξ²/c²)^{1/2} and ξ/c in any common
/// unit, written without the cancellation in q − k and εq − k:
///
/// r_TM = (ε−1)((ε+1)q² − ξ²/c²)/(εq + k)², r_TE = −(ε−1)(ξ/c)²/(q + k)².
#[inline]
pub(crate) fn coefficients(q: f64, kappa: f64, eps: f64) -> (f64, f64) {
    let em1 = eps - 1.0;
    if !eps.is_finite() {
        return (1.0, -1.0);
    }
    let k = (q * q + em1 * kappa * kappa).sqrt();
    let tm = em1 * ((eps + 1.0) * q * q - kappa * kappa) / (eps * q + k).powi(2);
    let te = -em1 * kappa * kappa / (q + k).powi(2);
    (tm, te)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_does_not_reflect() {
        let (tm, te) = reflection_coefficients(1.0, 0.01, 1.0).unwrap();
        assert_eq!((tm, te), (0.0, 0.0));
    }

    #[test]
    fn ideal_metal_limit() {
        let (tm, te) = reflection_coefficients(1.0, 0.003, 1e8).unwrap();
        assert!((tm - 1.0).abs() < 1e-3);
        assert!((te + 1.0).abs() < 1e-3);
    }

    #[test]
    fn grazing_limit() {
        let eps = 7.0;
        let (tm, te) = reflection_coefficients(1.0, 1e4, eps).unwrap();
        assert!(te <= 0.0 && te > -1e-9);
        assert!((tm - (eps - 1.0) / (eps + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn matches_textbook_form() {
        for &(xi, kp, eps) in &[(0.3, 0.002, 50.0), (2.0, 0.05, 3.0), (10.0, 0.0, 1.5)] {
            let kappa: f64 = xi / HBAR_C_EV_NM;
            let q = (kp * kp + kappa * kappa).sqrt();
            let k = (kp * kp + eps * kappa * kappa).sqrt();
            let (tm, te) = reflection_coefficients(xi, kp, eps).unwrap();
            assert!((tm - (eps * q - k) / (eps * q + k)).abs() < 1e-13);
            assert!((te - (q - k) / (q + k)).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(reflection_coefficients(0.0, 1.0, 2.0).is_err());
        assert!(reflection_coefficients(1.0, -1.0, 2.0).is_err());
        assert!(reflection_coefficients(1.0, 1.0, 0.5).is_err());
    }
}
