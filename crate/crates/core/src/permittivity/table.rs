//! Tabulated optical constants on an ascending frequency grid.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalRow {
    pub omega: f64,
    pub im_eps: f64,
    pub re_eps: Option<f64>,
}

/// Optical data `(ω, Im ε[, Re ε])` with ω in eV.
///
/// Im ε is interpolated linearly in log ω – log Im ε, Re ε linearly in
/// log ω – Re ε (it changes sign). Between two rows where Im ε vanishes at
/// either end, Im ε falls back to linear-in-log-ω interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalTable {
    rows: Vec<OpticalRow>,
    label: String,
}

impl OpticalTable {
    pub fn new(rows: Vec<OpticalRow>, label: impl Into<String>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::validation("optical table needs at least two rows"));
        }
        let with_re = rows[0].re_eps.is_some();
        for (i, r) in rows.iter().enumerate() {
            if !(r.omega > 0.0 && r.omega.is_finite()) {
                return Err(Error::validation(format!(
                    "row {i}: frequency must be positive, got {}",
                    r.omega
                )));
            }
            if !(r.im_eps >= 0.0 && r.im_eps.is_finite()) {
                return Err(Error::validation(format!(
                    "row {i}: Im eps must be non-negative, got {}",
                    r.im_eps
                )));
            }
            if r.re_eps.is_some() != with_re {
                return Err(Error::validation(format!(
                    "row {i}: Re eps must be given for all rows or none"
                )));
            }
            if let Some(re) = r.re_eps {
                if !re.is_finite() {
                    return Err(Error::validation(format!("row {i}: Re eps is not finite")));
                }
            }
            if i > 0 && r.omega <= rows[i - 1].omega {
                return Err(Error::validation(format!(
                    "row {i}: frequencies must be strictly ascending ({} after {})",
                    r.omega,
                    rows[i - 1].omega
                )));
            }
        }
        Ok(OpticalTable {
            rows,
            label: label.into(),
        })
    }

    /// Builds a table from refractive index data: Im ε = 2nk, Re ε = n² − k².
    pub fn from_nk(data: &[(f64, f64, f64)], label: impl Into<String>) -> Result<Self> {
        let rows = data
            .iter()
            .map(|&(omega, n, k)| OpticalRow {
                omega,
                im_eps: 2.0 * n * k,
                re_eps: Some(n * n - k * k),
            })
            .collect();
        Self::new(rows, label)
    }

    /// Samples a closed-form Im ε (and optionally Re ε) on a log grid with
    /// `per_decade` points per decade between `lo` and `hi`.
    pub fn sample<F>(lo: f64, hi: f64, per_decade: usize, label: impl Into<String>, mut eps: F) -> Result<Self>
    where
        F: FnMut(f64) -> (f64, Option<f64>),
    {
        if !(lo > 0.0 && hi > lo) || per_decade == 0 {
            return Err(Error::validation("sampling range must satisfy 0 < lo < hi"));
        }
        let decades = (hi / lo).log10();
        let n = (decades * per_decade as f64).round().max(1.0) as usize;
        let rows = (0..=n)
            .map(|i| {
                let omega = if i == n {
                    hi
                } else {
                    lo * 10f64.powf(decades * i as f64 / n as f64)
                };
                let (im_eps, re_eps) = eps(omega);
                OpticalRow { omega, im_eps, re_eps }
            })
            .collect();
        Self::new(rows, label)
    }

    pub fn rows(&self) -> &[OpticalRow] {
        &self.rows
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn omega_min(&self) -> f64 {
        self.rows[0].omega
    }

    pub fn omega_max(&self) -> f64 {
        self.rows[self.rows.len() - 1].omega
    }

    pub fn has_re_eps(&self) -> bool {
        self.rows[0].re_eps.is_some()
    }

    /// Index `i` of the segment `[ω_i, ω_{i+1}]` containing `omega`,
    /// clamped to the table's segments.
    pub(crate) fn segment_of(&self, omega: f64) -> usize {
        let idx = self.rows.partition_point(|r| r.omega <= omega);
        idx.clamp(1, self.rows.len() - 1) - 1
    }

    /// Interpolated Im ε; `None` outside the tabulated window.
    pub fn im_eps_at(&self, omega: f64) -> Option<f64> {
        if omega < self.omega_min() || omega > self.omega_max() {
            return None;
        }
        Some(self.im_eps_in_segment(self.segment_of(omega), omega))
    }

    /// Interpolated Re ε; `None` outside the window or without Re ε data.
    pub fn re_eps_at(&self, omega: f64) -> Option<f64> {
        if !self.has_re_eps() || omega < self.omega_min() || omega > self.omega_max() {
            return None;
        }
        Some(self.re_eps_in_segment(self.segment_of(omega), omega))
    }

    pub(crate) fn im_eps_in_segment(&self, seg: usize, omega: f64) -> f64 {
        let (a, b) = (&self.rows[seg], &self.rows[seg + 1]);
        let t = (omega / a.omega).ln() / (b.omega / a.omega).ln();
        if a.im_eps > 0.0 && b.im_eps > 0.0 {
            a.im_eps * (b.im_eps / a.im_eps).powf(t)
        } else {
            a.im_eps + t * (b.im_eps - a.im_eps)
        }
    }

    pub(crate) fn re_eps_in_segment(&self, seg: usize, omega: f64) -> f64 {
        let (a, b) = (&self.rows[seg], &self.rows[seg + 1]);
        let t = (omega / a.omega).ln() / (b.omega / a.omega).ln();
        let (ra, rb) = (a.re_eps.unwrap_or(1.0), b.re_eps.unwrap_or(1.0));
        ra + t * (rb - ra)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::file(path, e))?;
        Self::from_csv_reader(file, &path.display().to_string())
    }

    /// Reads `omega_eV,n,k` or `omega_eV,im_eps[,re_eps]` CSV; lines
    /// starting with `#` are comments.
    pub fn from_csv_reader<R: Read>(reader: R, source: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: source.to_string(),
            line,
            message,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| parse_err(0, e.to_string()))?
            .iter()
            .map(str::to_ascii_lowercase)
            .collect::<Vec<_>>();
        let header_line = rdr.position().line();
        let layout = match headers.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
            ["omega_ev", "n", "k"] => Layout::Nk,
            ["omega_ev", "im_eps"] => Layout::Im,
            ["omega_ev", "im_eps", "re_eps"] => Layout::ImRe,
            other => {
                return Err(parse_err(
                    header_line as usize,
                    format!("unrecognised header {other:?}; expected omega_eV,n,k or omega_eV,im_eps[,re_eps]"),
                ))
            }
        };

        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                parse_err(line, e.to_string())
            })?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
            let values = record
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| parse_err(line, format!("'{f}': {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let row = match layout {
                Layout::Nk => OpticalRow {
                    omega: values[0],
                    im_eps: 2.0 * values[1] * values[2],
                    re_eps: Some(values[1] * values[1] - values[2] * values[2]),
                },
                Layout::Im => OpticalRow {
                    omega: values[0],
                    im_eps: values[1],
                    re_eps: None,
                },
                Layout::ImRe => OpticalRow {
                    omega: values[0],
                    im_eps: values[1],
                    re_eps: Some(values[2]),
                },
            };
            if let Some(prev) = rows.last().map(|r: &OpticalRow| r.omega) {
                if row.omega <= prev {
                    return Err(parse_err(
                        line,
                        format!("frequency {} not ascending after {}", row.omega, prev),
                    ));
                }
            }
            rows.push(row);
        }
        Self::new(rows, source).map_err(|e| parse_err(0, e.to_string()))
    }
}

#[derive(Clone, Copy)]
enum Layout {
    Nk,
    Im,
    ImRe,
}
