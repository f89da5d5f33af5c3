use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// S_p counts as much smaller than S_eff below this ratio.
pub const SMALL_PATCH_RATIO: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatchCheck {
    /// Grain (patch) area πD²/4 in μm².
    pub patch_area_um2: f64,
    /// Effective interaction area 2πRa in μm².
    pub effective_area_um2: f64,
    pub small_patch_regime: bool,
}

/// Compares the patch area set by grain diameter `grain_nm` with the
/// effective sphere-plate interaction area at separation `a_nm`.
pub fn patch_area_check(grain_nm: f64, sphere_radius_um: f64, a_nm: f64) -> Result<PatchCheck> {
    if !(grain_nm >= 0.0 && grain_nm.is_finite()) {
        return Err(Error::domain(format!(
            "grain diameter must be non-negative, got {grain_nm}"
        )));
    }
    if !(sphere_radius_um > 0.0 && a_nm > 0.0) {
        return Err(Error::domain("sphere radius and separation must be positive"));
    }
    let d_um = grain_nm * 1e-3;
    let patch = PI * d_um * d_um / 4.0;
    let effective = 2.0 * PI * sphere_radius_um * a_nm * 1e-3;
    Ok(PatchCheck {
        patch_area_um2: patch,
        effective_area_um2: effective,
        small_patch_regime: patch < SMALL_PATCH_RATIO * effective,
    })
}
