use serde::{Deserialize, Serialize};

use super::confidence::{scale_half_width, ConfidenceSpec};
use crate::error::{Error, Result};

/// Total theoretical error taken as the default band half-width, as a
/// fraction of |P|.
pub const DEFAULT_THEORY_BAND: f64 = 0.005;
/// Separation uncertainty at 95% confidence.
pub const DEFAULT_DELTA_A_NM: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandPoint {
    pub separation_nm: f64,
    pub lo_mpa: f64,
    pub hi_mpa: f64,
}

/// Experimental cross: mean with half-widths in pressure and separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cross {
    pub separation_nm: f64,
    pub pressure_mpa: f64,
    pub half_width_mpa: f64,
    pub delta_a_nm: f64,
}

/// Theory band P ± fraction·|P|, rescaled to the requested level.
pub fn theory_band(theory: &[(f64, f64)], fraction: f64, spec: &ConfidenceSpec) -> Result<Vec<BandPoint>> {
    theory
        .iter()
        .map(|&(a, p)| {
            let half = if fraction == 0.0 || p == 0.0 {
                0.0
            } else {
                scale_half_width(fraction * p.abs(), spec)?
            };
            Ok(BandPoint {
                separation_nm: a,
                lo_mpa: p - half,
                hi_mpa: p + half,
            })
        })
        .collect()
}

/// Linear interpolation (extrapolation past the ends) of the band edges.
fn band_at(band: &[BandPoint], a: f64) -> (f64, f64) {
    if band.len() == 1 {
        return (band[0].lo_mpa, band[0].hi_mpa);
    }
    let k = band.partition_point(|b| b.separation_nm <= a).clamp(1, band.len() - 1);
    let (l, r) = (&band[k - 1], &band[k]);
    let t = (a - l.separation_nm) / (r.separation_nm - l.separation_nm);
    (
        l.lo_mpa + t * (r.lo_mpa - l.lo_mpa),
        l.hi_mpa + t * (r.hi_mpa - l.hi_mpa),
    )
}

/// Whether each cross rectangle [a ± Δa] × [P ± Ξ] meets the band swept over
/// [a − Δa, a + Δa]. Intervals are closed, so touching counts as overlap.
pub fn band_cross_overlap(band: &[BandPoint], crosses: &[Cross]) -> Result<Vec<bool>> {
    if band.len() != crosses.len() {
        return Err(Error::validation(format!(
            "band has {} points but there are {} crosses",
            band.len(),
            crosses.len()
        )));
    }
    let unmatched: Vec<f64> = band
        .iter()
        .zip(crosses)
        .filter(|(b, c)| b.separation_nm != c.separation_nm)
        .map(|(_, c)| c.separation_nm)
        .collect();
    if !unmatched.is_empty() {
        return Err(Error::Alignment { unmatched });
    }
    Ok(crosses
        .iter()
        .map(|c| {
            let samples = [
                band_at(band, c.separation_nm - c.delta_a_nm),
                band_at(band, c.separation_nm),
                band_at(band, c.separation_nm + c.delta_a_nm),
            ];
            let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
            let hi = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
            c.pressure_mpa - c.half_width_mpa <= hi && c.pressure_mpa + c.half_width_mpa >= lo
        })
        .collect())
}
