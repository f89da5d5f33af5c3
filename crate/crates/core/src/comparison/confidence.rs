use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ξ₀.₉₅/Ξ₀.₇ for a uniform distribution: 0.95/0.7 ≈ 1.357.
pub const UNIFORM_RATIO: f64 = 0.95 / 0.7;
/// Ξ₀.₉₅/Ξ₀.₇ taken for a normal distribution. The exact two-sided quantile
/// ratio is 1.960/1.036 ≈ 1.89; the rounder factor 2 is used.
pub const NORMAL_RATIO: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConfidenceLevel {
    #[serde(rename = "0.95")]
    P95,
    #[serde(rename = "0.70")]
    P70,
}

impl ConfidenceLevel {
    pub fn from_fraction(level: f64) -> Result<Self> {
        if (level - 0.95).abs() < 1e-9 {
            Ok(ConfidenceLevel::P95)
        } else if (level - 0.70).abs() < 1e-9 {
            Ok(ConfidenceLevel::P70)
        } else {
            Err(Error::config(format!(
                "unsupported confidence level {level}; use 0.95 or 0.70"
            )))
        }
    }

    pub fn fraction(self) -> f64 {
        match self {
            ConfidenceLevel::P95 => 0.95,
            ConfidenceLevel::P70 => 0.70,
        }
    }
}

impl fmt::Display for ConfidenceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfidenceLevel::P95 => "0.95",
            ConfidenceLevel::P70 => "0.70",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    Uniform,
    Normal,
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distribution::Uniform => "uniform",
            Distribution::Normal => "normal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfidenceSpec {
    pub level: ConfidenceLevel,
    pub distribution: Distribution,
}

impl ConfidenceSpec {
    pub fn new(level: ConfidenceLevel, distribution: Distribution) -> Self {
        ConfidenceSpec { level, distribution }
    }

    /// Ξ₀.₉₅/Ξ_level.
    pub fn ratio(&self) -> f64 {
        match (self.level, self.distribution) {
            (ConfidenceLevel::P95, _) => 1.0,
            (ConfidenceLevel::P70, Distribution::Uniform) => UNIFORM_RATIO,
            (ConfidenceLevel::P70, Distribution::Normal) => NORMAL_RATIO,
        }
    }
}

/// Rescales a 95% half-width to the requested level.
pub fn scale_half_width(xi95: f64, spec: &ConfidenceSpec) -> Result<f64> {
    if !(xi95 > 0.0 && xi95.is_finite()) {
        return Err(Error::validation(format!("half-width must be positive, got {xi95}")));
    }
    Ok(xi95 / spec.ratio())
}

/// How experimental and theoretical 95% half-widths are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CombinationRule {
    #[default]
    Rss,
    LinearSum,
}

pub fn combine_half_widths(experiment: f64, theory: f64, rule: CombinationRule) -> f64 {
    match rule {
        CombinationRule::Rss => experiment.hypot(theory),
        CombinationRule::LinearSum => experiment + theory,
    }
}
