//! Im ε(ω) on the whole positive real axis and its Kramers-Kronig
//! transform to the imaginary axis,
//! ε(iξ) = 1 + (2/π) ∫₀^∞ ω Im ε(ω)/(ξ² + ω²) dω.

use serde::{Deserialize, Serialize};

use super::analytic::{drude_im_eps_unchecked, DrudeParams};
use super::table::OpticalTable;
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate, QuadOptions};

/// How Im ε continues below the lowest tabulated frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LowFrequencyExtension {
    /// Drude imaginary part ωp²γ/(ω(ω²+γ²)).
    Drude(DrudeParams),
    /// Im ε = 0 below the table.
    None,
}

/// How Im ε continues above the highest tabulated frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailPolicy {
    /// Im ε ∝ ω^{−s} with s fitted over the top decade, clamped to [2, 5].
    PowerLaw,
    /// Im ε = 0 above the table.
    HardCutoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawTail {
    /// Im ε at the last tabulated frequency.
    pub anchor: f64,
    pub exponent: f64,
}

pub const TAIL_EXPONENT_RANGE: (f64, f64) = (2.0, 5.0);

/// Optical table spliced with low- and high-frequency extensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedSpectrum {
    low: LowFrequencyExtension,
    table: OpticalTable,
    tail: Option<PowerLawTail>,
}

impl MergedSpectrum {
    pub fn new(table: OpticalTable, low: LowFrequencyExtension, tail: TailPolicy) -> Result<Self> {
        if let LowFrequencyExtension::Drude(p) = &low {
            p.validate()?;
        }
        let tail = match tail {
            TailPolicy::PowerLaw => fit_tail(&table),
            TailPolicy::HardCutoff => None,
        };
        let spectrum = MergedSpectrum { low, table, tail };
        if let Some(jump) = spectrum.junction_jump() {
            log::info!(
                "{}: Drude extension differs from the table at {} eV by {:+.4e} ({:+.3}%)",
                spectrum.table.label(),
                spectrum.omega_min(),
                jump,
                100.0 * jump / spectrum.table.rows()[0].im_eps.max(f64::MIN_POSITIVE)
            );
        }
        Ok(spectrum)
    }

    /// Table with no extension on either side.
    pub fn windowed(table: OpticalTable) -> Self {
        MergedSpectrum {
            low: LowFrequencyExtension::None,
            table,
            tail: None,
        }
    }

    pub fn table(&self) -> &OpticalTable {
        &self.table
    }

    pub fn low_extension(&self) -> &LowFrequencyExtension {
        &self.low
    }

    pub fn tail(&self) -> Option<&PowerLawTail> {
        self.tail.as_ref()
    }

    /// Junction frequency: the lowest tabulated frequency.
    pub fn omega_min(&self) -> f64 {
        self.table.omega_min()
    }

    /// Drude value minus tabulated value at the junction, when a Drude
    /// extension is present. The splice is not smoothed.
    pub fn junction_jump(&self) -> Option<f64> {
        match &self.low {
            LowFrequencyExtension::Drude(p) => {
                Some(drude_im_eps_unchecked(self.omega_min(), p) - self.table.rows()[0].im_eps)
            }
            LowFrequencyExtension::None => None,
        }
    }

    /// Im ε at real frequency ω > 0.
    pub fn im_eps(&self, omega: f64) -> Result<f64> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::domain(format!("real frequency must be positive, got {omega}")));
        }
        Ok(if omega < self.table.omega_min() {
            match &self.low {
                LowFrequencyExtension::Drude(p) => drude_im_eps_unchecked(omega, p),
                LowFrequencyExtension::None => 0.0,
            }
        } else if omega > self.table.omega_max() {
            match &self.tail {
                Some(t) => t.anchor * (self.table.omega_max() / omega).powf(t.exponent),
                None => 0.0,
            }
        } else {
            self.table.im_eps_at(omega).unwrap_or(0.0)
        })
    }
}

fn fit_tail(table: &OpticalTable) -> Option<PowerLawTail> {
    let rows = table.rows();
    let last = rows[rows.len() - 1];
    if last.im_eps <= 0.0 {
        return None;
    }
    let cut = table.omega_max() / 10.0;
    let mut pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.omega >= cut && r.im_eps > 0.0)
        .map(|r| (r.omega.ln(), r.im_eps.ln()))
        .collect();
    if pts.len() < 2 {
        pts = rows[rows.len() - 2..]
            .iter()
            .filter(|r| r.im_eps > 0.0)
            .map(|r| (r.omega.ln(), r.im_eps.ln()))
            .collect();
    }
    let exponent = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        -sxy / sxx
    } else {
        TAIL_EXPONENT_RANGE.0
    };
    Some(PowerLawTail {
        anchor: last.im_eps,
        exponent: exponent.clamp(TAIL_EXPONENT_RANGE.0, TAIL_EXPONENT_RANGE.1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KkOptions {
    pub rel_tol: f64,
}

impl Default for KkOptions {
    fn default() -> Self {
        KkOptions { rel_tol: 1e-8 }
    }
}

/// ∫₀^{ω₀} ω·ωp²γ/(ω(ω²+γ²)(ω²+ξ²)) dω.
fn drude_low_integral(p: &DrudeParams, omega0: f64, xi: f64, rel_tol: f64) -> Result<(f64, f64)> {
    let wp2 = p.plasma_frequency * p.plasma_frequency;
    let g = p.relaxation;
    if g == 0.0 {
        return Ok((0.0, 0.0));
    }
    if (xi - g).abs() > 1e-3 * xi {
        // partial fractions
        let atan_over = |s: f64| (omega0 / s).atan() / s;
        return Ok((wp2 * g * (atan_over(g) - atan_over(xi)) / (xi * xi - g * g), 0.0));
    }
    let est = try_integrate::<_, Error>(
        |w: f64| Ok(wp2 * g / ((w * w + g * g) * (w * w + xi * xi))),
        &[0.0, g.min(omega0), omega0],
        &QuadOptions::relative(rel_tol),
    )?;
    Ok((est.value, est.error))
}

/// Kramers-Kronig transform of a merged spectrum to ε(iξ).
pub fn kk_transform(spectrum: &MergedSpectrum, xi: f64, opts: &KkOptions) -> Result<f64> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::domain(format!("imaginary frequency must be positive, got {xi}")));
    }
    let table = spectrum.table();
    let xi2 = xi * xi;

    let (low, low_err) = match spectrum.low_extension() {
        LowFrequencyExtension::Drude(p) => drude_low_integral(p, table.omega_min(), xi, opts.rel_tol)?,
        LowFrequencyExtension::None => (0.0, 0.0),
    };

    // tabulated window in u = ln ω: ∫ ω² Im ε/(ξ²+ω²) du, one panel per row gap
    let nodes: Vec<f64> = table.rows().iter().map(|r| r.omega.ln()).collect();
    let integrand = |u: f64| -> std::result::Result<f64, Error> {
        let w = u.exp();
        let seg = table.segment_of(w);
        let w2 = w * w;
        Ok(w2 * table.im_eps_in_segment(seg, w) / (xi2 + w2))
    };
    let opts_tab = QuadOptions::relative(opts.rel_tol).with_max_intervals(nodes.len() + 4000);
    let mid = try_integrate(integrand, &nodes, &opts_tab)?;
    if !mid.converged {
        return Err(Error::Accuracy {
            context: format!("Kramers-Kronig integral over table at xi = {xi} eV"),
            estimate: 1.0 + 2.0 / std::f64::consts::PI * (low + mid.value),
            error: 2.0 / std::f64::consts::PI * mid.error,
        });
    }

    let (tail, tail_err) = match spectrum.tail() {
        Some(t) => {
            let wmax = table.omega_max();
            let s = t.exponent;
            let est = try_integrate::<_, Error>(
                |v: f64| Ok(v.powf(s - 1.0) / (xi2 * v * v + wmax * wmax)),
                &[0.0, 0.1, 1.0],
                &QuadOptions::relative(opts.rel_tol),
            )?;
            (t.anchor * wmax * wmax * est.value, t.anchor * wmax * wmax * est.error)
        }
        None => (0.0, 0.0),
    };

    let total = low + mid.value + tail;
    let err = low_err + mid.error + tail_err;
    if err > opts.rel_tol.max(1e-14) * total.abs() * 10.0 && err > 0.0 {
        return Err(Error::Accuracy {
            context: format!("Kramers-Kronig transform at xi = {xi} eV"),
            estimate: 1.0 + 2.0 / std::f64::consts::PI * total,
            error: 2.0 / std::f64::consts::PI * err,
        });
    }
    Ok(1.0 + 2.0 / std::f64::consts::PI * total)
}
