//! Theory-experiment comparison at chosen confidence levels.
//!
//! Two views are supported: theoretical bands against experimental crosses,
//! and theory−experiment differences against the confidence interval
//! [−Ξ(a), Ξ(a)]. A point is outside when |difference| > Ξ strictly.

mod confidence;
mod dataset;
mod difference;
mod normality;
mod overlap;
mod patch;

pub use confidence::{
    combine_half_widths, scale_half_width, CombinationRule, ConfidenceLevel, ConfidenceSpec, Distribution,
    NORMAL_RATIO, UNIFORM_RATIO,
};
pub use dataset::{ExperimentDataset, ExperimentPoint};
pub use difference::{
    difference_analysis, exclusion_intervals, ComparisonReport, ExclusionInterval, LevelSummary, PointRecord, Verdict,
};
pub use normality::{normality_probe, NormalityProbe, MIN_SAMPLES as NORMALITY_MIN_SAMPLES};
pub use overlap::{band_cross_overlap, theory_band, BandPoint, Cross, DEFAULT_DELTA_A_NM, DEFAULT_THEORY_BAND};
pub use patch::{patch_area_check, PatchCheck, SMALL_PATCH_RATIO};
