use rayon::prelude::*;

use super::{pressure_matsubara, pressure_t0, PressurePoint, QuadratureSettings};
use crate::error::{Error, Result};
use crate::permittivity::PermittivityModel;

/// Pressure at every separation of an ascending grid, at zero temperature
/// or, with `temperature_k`, through the Matsubara sum.
///
/// Points are evaluated in parallel; each point's quadrature is sequential
/// and results are assembled by index, so output does not depend on
/// scheduling.
pub fn pressure_curve(
    grid_nm: &[f64],
    model: &PermittivityModel,
    settings: &QuadratureSettings,
    temperature_k: Option<f64>,
) -> Result<Vec<PressurePoint>> {
    if grid_nm.is_empty() {
        return Err(Error::validation("separation grid is empty"));
    }
    if let Some(i) = grid_nm.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::validation(format!(
            "separation grid must be strictly ascending (index {} -> {})",
            i,
            i + 1
        )));
    }
    pressure_points(grid_nm, model, settings, temperature_k)
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|source| Error::AtGridPoint {
                index,
                source: Box::new(source),
            })
        })
        .collect()
}

/// Evaluates every separation independently and keeps per-point failures.
/// The grid is not validated.
pub fn pressure_points(
    grid_nm: &[f64],
    model: &PermittivityModel,
    settings: &QuadratureSettings,
    temperature_k: Option<f64>,
) -> Vec<Result<PressurePoint>> {
    grid_nm
        .par_iter()
        .map(|&a| match temperature_k {
            None | Some(0.0) => pressure_t0(a, model, settings),
            Some(t) => pressure_matsubara(a, t, model, settings),
        })
        .collect()
}
