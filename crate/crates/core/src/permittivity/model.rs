use serde::{Deserialize, Serialize};

use super::analytic::{
    drude_eps_imag, oscillator_eps_imag, plasma_like_eps_imag, DrudeParams, Oscillator, PlasmaLikeParams,
};
use super::spectrum::{kk_transform, KkOptions, LowFrequencyExtension, MergedSpectrum};
use super::window::WindowedKk;
use crate::error::{Error, Result};

/// Zero-frequency behaviour of a model, used for the l = 0 Matsubara term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ZeroMode {
    /// ξε(iξ) finite as ξ → 0: r_TM = 1, r_TE = 0.
    DrudeLike,
    /// ξ²ε(iξ) → ωp²: r_TM = 1, r_TE from the plasma frequency.
    PlasmaLike { plasma_frequency: f64 },
    /// Finite static permittivity ε(0): r_TM = (ε₀−1)/(ε₀+1), r_TE = 0.
    Dielectric { static_eps: f64 },
}

/// A dielectric function evaluable on the imaginary frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub enum PermittivityModel {
    /// ε(iξ) independent of frequency.
    Constant(f64),
    /// Drude term plus optional Lorentz oscillators.
    Drude {
        params: DrudeParams,
        oscillators: Vec<Oscillator>,
    },
    PlasmaLike(PlasmaLikeParams),
    /// Tabulated Im ε through the standard Kramers-Kronig relation.
    Tabulated {
        spectrum: MergedSpectrum,
        options: KkOptions,
        zero_mode: Option<ZeroMode>,
    },
    /// Tabulated Re ε and Im ε through the windowed relation.
    Windowed {
        kk: WindowedKk,
        zero_mode: Option<ZeroMode>,
    },
}

impl PermittivityModel {
    pub fn drude(params: DrudeParams) -> Self {
        PermittivityModel::Drude {
            params,
            oscillators: Vec::new(),
        }
    }

    pub fn plasma(plasma_frequency: f64) -> Self {
        PermittivityModel::PlasmaLike(PlasmaLikeParams {
            plasma_frequency,
            oscillators: Vec::new(),
        })
    }

    pub fn tabulated(spectrum: MergedSpectrum) -> Self {
        PermittivityModel::Tabulated {
            spectrum,
            options: KkOptions::default(),
            zero_mode: None,
        }
    }

    /// ε(iξ) for ξ > 0 (eV).
    pub fn eps_imag(&self, xi: f64) -> Result<f64> {
        match self {
            PermittivityModel::Constant(eps) => {
                if !(xi > 0.0 && xi.is_finite()) {
                    return Err(Error::domain(format!("imaginary frequency must be positive, got {xi}")));
                }
                Ok(*eps)
            }
            PermittivityModel::Drude { params, oscillators } if oscillators.is_empty() => drude_eps_imag(xi, params),
            PermittivityModel::Drude { params, oscillators } => oscillator_eps_imag(xi, params, oscillators),
            PermittivityModel::PlasmaLike(p) => plasma_like_eps_imag(xi, p),
            PermittivityModel::Tabulated { spectrum, options, .. } => kk_transform(spectrum, xi, options),
            PermittivityModel::Windowed { kk, .. } => kk.eval(xi),
        }
    }

    /// Zero-frequency classification. Explicit metadata wins; otherwise it
    /// follows from the model's construction, never from numerics.
    pub fn zero_mode(&self) -> Result<ZeroMode> {
        match self {
            PermittivityModel::Constant(eps) => Ok(ZeroMode::Dielectric { static_eps: *eps }),
            PermittivityModel::Drude { .. } => Ok(ZeroMode::DrudeLike),
            PermittivityModel::PlasmaLike(p) if p.plasma_frequency > 0.0 => Ok(ZeroMode::PlasmaLike {
                plasma_frequency: p.plasma_frequency,
            }),
            PermittivityModel::PlasmaLike(p) => Ok(ZeroMode::Dielectric {
                static_eps: 1.0 + p.oscillators.iter().map(|o| o.imag_axis_term(0.0)).sum::<f64>(),
            }),
            PermittivityModel::Tabulated { zero_mode: Some(z), .. }
            | PermittivityModel::Windowed { zero_mode: Some(z), .. } => Ok(*z),
            PermittivityModel::Tabulated { spectrum, .. } => match spectrum.low_extension() {
                LowFrequencyExtension::Drude(_) => Ok(ZeroMode::DrudeLike),
                LowFrequencyExtension::None => Err(Error::config(
                    "tabulated model without a low-frequency extension has no zero-frequency classification",
                )),
            },
            PermittivityModel::Windowed { .. } => Err(Error::config(
                "windowed Kramers-Kronig model has no zero-frequency classification; set it explicitly",
            )),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PermittivityModel::Constant(eps) if !(*eps >= 1.0 && eps.is_finite()) => Err(Error::validation(format!(
                "constant permittivity must be >= 1, got {eps}"
            ))),
            PermittivityModel::Constant(_) => Ok(()),
            PermittivityModel::Drude { params, oscillators } => {
                params.validate()?;
                oscillators.iter().try_for_each(Oscillator::validate)
            }
            PermittivityModel::PlasmaLike(p) => p.validate(),
            PermittivityModel::Tabulated { .. } | PermittivityModel::Windowed { .. } => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PermittivityModel::Constant(eps) => format!("constant(eps={eps})"),
            PermittivityModel::Drude { params, oscillators } => format!(
                "drude(wp={}, gamma={}, oscillators={})",
                params.plasma_frequency,
                params.relaxation,
                oscillators.len()
            ),
            PermittivityModel::PlasmaLike(p) => {
                format!(
                    "plasma-like(wp={}, oscillators={})",
                    p.plasma_frequency,
                    p.oscillators.len()
                )
            }
            PermittivityModel::Tabulated { spectrum, .. } => format!("tabulated-kk({})", spectrum.table().label()),
            PermittivityModel::Windowed { kk, .. } => format!("windowed-kk({})", kk.table().label()),
        }
    }
}
