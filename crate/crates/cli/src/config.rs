//! JSON run configuration. Command-line flags override fields after loading.

use std::path::{Path, PathBuf};

use casimir_core::comparison::{CombinationRule, ConfidenceLevel, ConfidenceSpec, Distribution, DEFAULT_THEORY_BAND};
use casimir_core::lifshitz::QuadratureSettings;
use casimir_core::permittivity::{
    DrudeParams, LowFrequencyExtension, MergedSpectrum, OpticalTable, Oscillator, PermittivityModel, PlasmaLikeParams,
    RootGuard, TailPolicy, WindowParams, WindowedKk, ZeroMode, DEFAULT_GUARD_RELATIVE,
};
use casimir_core::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    pub omega_re: f64,
    pub omega_im: f64,
    pub p: u32,
    pub q: u32,
}

impl WindowConfig {
    pub fn params(&self) -> Result<WindowParams> {
        WindowParams::new(Complex64::new(self.omega_re, self.omega_im), self.p, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelConfig {
    Drude {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tag: Option<String>,
        plasma_frequency: f64,
        relaxation: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        oscillators: Vec<Oscillator>,
    },
    PlasmaLike {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tag: Option<String>,
        plasma_frequency: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        oscillators: Vec<Oscillator>,
    },
    TabulatedKk {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tag: Option<String>,
        table: PathBuf,
        low_frequency: LowFrequencyExtension,
        #[serde(default = "default_tail")]
        tail: TailPolicy,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zero_mode: Option<ZeroMode>,
    },
    WindowedKk {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tag: Option<String>,
        table: PathBuf,
        /// `None` bypasses the window (f ≡ 1).
        window: Option<WindowConfig>,
        #[serde(default = "default_guard")]
        guard_relative: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        guard_range: Option<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zero_mode: Option<ZeroMode>,
    },
}

fn default_tail() -> TailPolicy {
    TailPolicy::PowerLaw
}

fn default_guard() -> f64 {
    DEFAULT_GUARD_RELATIVE
}

impl ModelConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ModelConfig::Drude { .. } => "drude",
            ModelConfig::PlasmaLike { .. } => "plasma-like",
            ModelConfig::TabulatedKk { .. } => "tabulated-kk",
            ModelConfig::WindowedKk { .. } => "windowed-kk",
        }
    }

    pub fn tag(&self) -> String {
        let tag = match self {
            ModelConfig::Drude { tag, .. }
            | ModelConfig::PlasmaLike { tag, .. }
            | ModelConfig::TabulatedKk { tag, .. }
            | ModelConfig::WindowedKk { tag, .. } => tag.clone(),
        };
        tag.unwrap_or_else(|| self.kind().to_string())
    }

    /// Builds the model. For the windowed model without an explicit guard
    /// range, `eval_range` widens the table span used to normalise the
    /// near-root guard.
    pub fn build(&self, eval_range: Option<(f64, f64)>) -> Result<PermittivityModel> {
        let model = match self {
            ModelConfig::Drude {
                plasma_frequency,
                relaxation,
                oscillators,
                ..
            } => PermittivityModel::Drude {
                params: DrudeParams::new(*plasma_frequency, *relaxation)?,
                oscillators: oscillators.clone(),
            },
            ModelConfig::PlasmaLike {
                plasma_frequency,
                oscillators,
                ..
            } => PermittivityModel::PlasmaLike(PlasmaLikeParams::new(*plasma_frequency, oscillators.clone())?),
            ModelConfig::TabulatedKk {
                table,
                low_frequency,
                tail,
                zero_mode,
                ..
            } => {
                let table = OpticalTable::from_csv_path(table)?;
                let spectrum = MergedSpectrum::new(table, *low_frequency, *tail)?;
                if let Some(jump) = spectrum.junction_jump() {
                    log::warn!(
                        "Drude/table junction at {} eV: Im eps jumps by {:+.6e}",
                        spectrum.omega_min(),
                        jump
                    );
                }
                let mut model = PermittivityModel::tabulated(spectrum);
                if let PermittivityModel::Tabulated { zero_mode: z, .. } = &mut model {
                    *z = *zero_mode;
                }
                model
            }
            ModelConfig::WindowedKk {
                table,
                window,
                guard_relative,
                guard_range,
                zero_mode,
                ..
            } => {
                let table = OpticalTable::from_csv_path(table)?;
                let range = guard_range.unwrap_or_else(|| {
                    let (lo, hi) = (table.omega_min(), table.omega_max());
                    match eval_range {
                        Some((a, b)) => (lo.min(a), hi.max(b)),
                        None => (lo, hi),
                    }
                });
                let window = window.as_ref().map(WindowConfig::params).transpose()?;
                let guard = RootGuard {
                    relative: *guard_relative,
                    range,
                };
                PermittivityModel::Windowed {
                    kk: WindowedKk::new(table, window, Some(guard))?,
                    zero_mode: *zero_mode,
                }
            }
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

fn default_spacing() -> Spacing {
    Spacing::Linear
}

impl GridConfig {
    pub fn points(&self) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Err(Error::config("grid count must be at least 1"));
        }
        if !(self.start > 0.0 && self.stop >= self.start && self.stop.is_finite()) {
            return Err(Error::config(format!(
                "grid needs 0 < start <= stop, got [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        if self.stop == self.start {
            return Err(Error::config("grid with several points needs start < stop"));
        }
        let n = (self.count - 1) as f64;
        Ok((0..self.count)
            .map(|i| {
                if i == self.count - 1 {
                    return self.stop;
                }
                let t = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => self.start * (self.stop / self.start).powf(t),
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum ConfidenceChoice {
    #[serde(rename = "0.95")]
    #[value(name = "0.95")]
    P95,
    #[serde(rename = "0.70")]
    #[value(name = "0.70")]
    P70,
    #[serde(rename = "both")]
    #[value(name = "both")]
    Both,
}

impl ConfidenceChoice {
    pub fn levels(self) -> Vec<ConfidenceLevel> {
        match self {
            ConfidenceChoice::P95 => vec![ConfidenceLevel::P95],
            ConfidenceChoice::P70 => vec![ConfidenceLevel::P70],
            ConfidenceChoice::Both => vec![ConfidenceLevel::P95, ConfidenceLevel::P70],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoughnessConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plate: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    /// Further models compared against the same experiment.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub additional_models: Vec<ModelConfig>,
    /// Kelvin; 0 selects the zero-temperature formula.
    #[serde(default)]
    pub temperature_k: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_grid: Option<GridConfig>,
    #[serde(default)]
    pub quadrature: QuadratureSettings,
    #[serde(default = "default_confidence")]
    pub confidence: ConfidenceChoice,
    #[serde(default = "default_distribution")]
    pub distribution: Distribution,
    #[serde(default = "default_band")]
    pub theory_band_fraction: f64,
    #[serde(default)]
    pub combination: CombinationRule,
    /// 95% separation uncertainty. Falls back to the experiment file's
    /// metadata, then to 0.6 nm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_a_nm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roughness: Option<RoughnessConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<PathBuf>,
    #[serde(default)]
    pub interpolate: bool,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default = "default_format")]
    pub format: Format,
}

fn default_confidence() -> ConfidenceChoice {
    ConfidenceChoice::Both
}
fn default_distribution() -> Distribution {
    Distribution::Normal
}
fn default_band() -> f64 {
    DEFAULT_THEORY_BAND
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}
fn default_format() -> Format {
    Format::Csv
}

impl RunConfig {
    pub fn new(model: ModelConfig) -> Self {
        RunConfig {
            model,
            additional_models: Vec::new(),
            temperature_k: 0.0,
            grid: None,
            xi_grid: None,
            quadrature: QuadratureSettings::default(),
            confidence: default_confidence(),
            distribution: default_distribution(),
            theory_band_fraction: default_band(),
            combination: CombinationRule::default(),
            delta_a_nm: None,
            roughness: None,
            experiment: None,
            interpolate: false,
            output: default_output(),
            format: default_format(),
        }
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn from_json(text: &str, source: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            path: source.to_string(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    #[cfg(test)]
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn confidence_specs(&self) -> Vec<ConfidenceSpec> {
        self.confidence
            .levels()
            .into_iter()
            .map(|level| ConfidenceSpec::new(level, self.distribution))
            .collect()
    }

    pub fn temperature(&self) -> Option<f64> {
        (self.temperature_k != 0.0).then_some(self.temperature_k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"{
        "model": {"kind": "drude", "plasma_frequency": 8.9, "relaxation": 0.0357, "tag": "drude-std"},
        "additional_models": [{"kind": "plasma-like", "plasma_frequency": 8.9,
            "oscillators": [{"strength": 1.0, "frequency": 2.0, "width": 0.1}]}],
        "temperature_k": 300,
        "grid": {"start": 160, "stop": 750, "count": 60, "spacing": "log"},
        "quadrature": {"inner_rel_tol": 1e-7, "outer_rel_tol": 1e-6, "y_max": 80, "xi_cutoff": 50},
        "confidence": "both",
        "distribution": "uniform",
        "theory_band_fraction": 0.005,
        "combination": "linear-sum",
        "roughness": {"plate": "plate.csv"},
        "experiment": "exp.csv",
        "output": "results",
        "format": "both"
    }"#;

    #[test]
    fn config_round_trips() {
        let cfg = RunConfig::from_json(FULL, "full.json").unwrap();
        let again = RunConfig::from_json(&cfg.to_json(), "echo").unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.model.tag(), "drude-std");
        assert_eq!(cfg.additional_models[0].tag(), "plasma-like");
        assert_eq!(cfg.confidence_specs().len(), 2);
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = RunConfig::from_json(r#"{"model": {"kind": "plasma-like", "plasma_frequency": 8.9}}"#, "m").unwrap();
        assert_eq!(cfg.temperature(), None);
        assert_eq!(cfg.quadrature, QuadratureSettings::default());
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(RunConfig::from_json(&cfg.to_json(), "echo").unwrap(), cfg);
    }

    #[test]
    fn windowed_config_round_trips() {
        let text = r#"{"model": {"kind": "windowed-kk", "table": "t.csv",
            "window": {"omega_re": 1.0, "omega_im": -2.0, "p": 1, "q": 3}}}"#;
        let cfg = RunConfig::from_json(text, "w").unwrap();
        assert_eq!(RunConfig::from_json(&cfg.to_json(), "echo").unwrap(), cfg);
        let text = r#"{"model": {"kind": "tabulated-kk", "table": "t.csv",
            "low_frequency": {"kind": "drude", "plasma_frequency": 9.0, "relaxation": 0.035}}}"#;
        let cfg = RunConfig::from_json(text, "t").unwrap();
        assert_eq!(RunConfig::from_json(&cfg.to_json(), "echo").unwrap(), cfg);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = RunConfig::from_json("{\n  \"model\": {\"kind\": \"nope\"}\n}", "bad.json").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn grids() {
        let lin = GridConfig {
            start: 100.0,
            stop: 200.0,
            count: 3,
            spacing: Spacing::Linear,
        };
        assert_eq!(lin.points().unwrap(), vec![100.0, 150.0, 200.0]);
        let log = GridConfig {
            start: 1.0,
            stop: 100.0,
            count: 3,
            spacing: Spacing::Log,
        };
        let p = log.points().unwrap();
        assert!((p[1] - 10.0).abs() < 1e-12 && p[2] == 100.0);
        let one = GridConfig {
            start: 5.0,
            stop: 9.0,
            count: 1,
            spacing: Spacing::Log,
        };
        assert_eq!(one.points().unwrap(), vec![5.0]);
        assert!(GridConfig {
            start: 5.0,
            stop: 9.0,
            count: 0,
            spacing: Spacing::Log
        }
        .points()
        .is_err());
        assert!(GridConfig {
            start: -1.0,
            stop: 9.0,
            count: 4,
            spacing: Spacing::Linear
        }
        .points()
        .is_err());
    }
}
