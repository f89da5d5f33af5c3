use serde::{Deserialize, Serialize};

use super::confidence::{combine_half_widths, scale_half_width, CombinationRule, ConfidenceSpec};
use super::dataset::ExperimentDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Every difference lies within ±Ξ.
    Consistent,
    /// At least one difference lies outside ±Ξ.
    Excluded,
}

/// Maximal run of consecutive points lying outside the confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExclusionInterval {
    pub start_nm: f64,
    pub end_nm: f64,
    pub first_index: usize,
    pub last_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub separation_nm: f64,
    pub theory_mpa: f64,
    pub experiment_mpa: f64,
    pub difference_mpa: f64,
    /// Ξ per requested level, in the order of `ComparisonReport::levels`.
    pub half_widths_mpa: Vec<f64>,
    pub outside: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub spec: ConfidenceSpec,
    pub exclusion_intervals: Vec<ExclusionInterval>,
    pub excluded_points: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub model: String,
    pub theory_band_fraction: f64,
    pub combination: CombinationRule,
    pub levels: Vec<LevelSummary>,
    pub points: Vec<PointRecord>,
}

/// Maximal runs of `true` in `outside`, labelled by separation.
pub fn exclusion_intervals(separations_nm: &[f64], outside: &[bool]) -> Vec<ExclusionInterval> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..=outside.len() {
        let flag = outside.get(i).copied().unwrap_or(false);
        match (flag, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push(ExclusionInterval {
                    start_nm: separations_nm[s],
                    end_nm: separations_nm[i - 1],
                    first_index: s,
                    last_index: i - 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Compares theory with experiment through differences and confidence
/// intervals.
///
/// `theory_mpa[i]` is the theoretical pressure at the i-th experimental
/// separation. The 95% half-width combines the experimental Ξ₀.₉₅ with the
/// theoretical error `theory_band_fraction · |P_theory|` by `rule`, and is
/// then rescaled to each requested level.
pub fn difference_analysis(
    model: &str,
    theory_mpa: &[f64],
    experiment: &ExperimentDataset,
    specs: &[ConfidenceSpec],
    theory_band_fraction: f64,
    rule: CombinationRule,
) -> Result<ComparisonReport> {
    let points = experiment.points();
    if points.is_empty() {
        return Err(Error::validation("experiment dataset is empty"));
    }
    if theory_mpa.len() != points.len() {
        return Err(Error::validation(format!(
            "{} theory values for {} experimental points",
            theory_mpa.len(),
            points.len()
        )));
    }
    if specs.is_empty() {
        return Err(Error::config("no confidence level requested"));
    }
    if !(theory_band_fraction >= 0.0 && theory_band_fraction.is_finite()) {
        return Err(Error::validation(format!(
            "theory band fraction must be >= 0, got {theory_band_fraction}"
        )));
    }

    let records = points
        .iter()
        .zip(theory_mpa)
        .map(|(p, &theory)| {
            let difference = theory - p.pressure_mpa;
            let xi95 = combine_half_widths(p.xi95_mpa, theory_band_fraction * theory.abs(), rule);
            let half_widths = specs
                .iter()
                .map(|s| scale_half_width(xi95, s))
                .collect::<Result<Vec<f64>>>()?;
            let outside = half_widths.iter().map(|&xi| difference.abs() > xi).collect();
            Ok(PointRecord {
                separation_nm: p.separation_nm,
                theory_mpa: theory,
                experiment_mpa: p.pressure_mpa,
                difference_mpa: difference,
                half_widths_mpa: half_widths,
                outside,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let seps: Vec<f64> = records.iter().map(|r| r.separation_nm).collect();
    let levels = specs
        .iter()
        .enumerate()
        .map(|(k, spec)| {
            let flags: Vec<bool> = records.iter().map(|r| r.outside[k]).collect();
            let excluded_points = flags.iter().filter(|&&f| f).count();
            LevelSummary {
                spec: *spec,
                exclusion_intervals: exclusion_intervals(&seps, &flags),
                excluded_points,
                verdict: if excluded_points == 0 {
                    Verdict::Consistent
                } else {
                    Verdict::Excluded
                },
            }
        })
        .collect();

    Ok(ComparisonReport {
        model: model.to_string(),
        theory_band_fraction,
        combination: rule,
        levels,
        points: records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::{ConfidenceLevel, Distribution, ExperimentPoint};
    use proptest::prelude::*;

    fn dataset(rows: &[(f64, f64, f64)]) -> ExperimentDataset {
        ExperimentDataset::new(
            rows.iter()
                .map(|&(a, p, xi)| ExperimentPoint {
                    separation_nm: a,
                    pressure_mpa: p,
                    xi95_mpa: xi,
                })
                .collect(),
            "fixture",
        )
        .unwrap()
    }

    fn both_normal() -> Vec<ConfidenceSpec> {
        vec![
            ConfidenceSpec::new(ConfidenceLevel::P95, Distribution::Normal),
            ConfidenceSpec::new(ConfidenceLevel::P70, Distribution::Normal),
        ]
    }

    #[test]
    fn identical_theory_is_consistent() {
        let ds = dataset(&[(200.0, -500.0, 3.0), (300.0, -100.0, 1.0)]);
        let theory: Vec<f64> = ds.points().iter().map(|p| p.pressure_mpa).collect();
        let r = difference_analysis("m", &theory, &ds, &both_normal(), 0.005, CombinationRule::Rss).unwrap();
        assert!(r
            .levels
            .iter()
            .all(|l| l.verdict == Verdict::Consistent && l.exclusion_intervals.is_empty()));
    }

    #[test]
    fn uniform_offset_beyond_interval_is_one_run() {
        let ds = dataset(&[(200.0, -10.0, 2.0), (210.0, -10.0, 2.0), (220.0, -10.0, 2.0)]);
        let theory = [-7.0, -7.0, -7.0];
        let spec = [ConfidenceSpec::new(ConfidenceLevel::P95, Distribution::Normal)];
        let r = difference_analysis("m", &theory, &ds, &spec, 0.0, CombinationRule::Rss).unwrap();
        assert_eq!(
            r.levels[0].exclusion_intervals,
            vec![ExclusionInterval {
                start_nm: 200.0,
                end_nm: 220.0,
                first_index: 0,
                last_index: 2
            }]
        );
        assert_eq!(r.levels[0].verdict, Verdict::Excluded);
    }

    #[test]
    fn touching_the_border_counts_as_inside() {
        let ds = dataset(&[(200.0, -10.0, 2.0)]);
        let spec = [ConfidenceSpec::new(ConfidenceLevel::P95, Distribution::Normal)];
        let r = difference_analysis("m", &[-8.0], &ds, &spec, 0.0, CombinationRule::Rss).unwrap();
        assert!(!r.points[0].outside[0]);
    }

    #[test]
    fn middle_band_excluded_only_at_seventy_percent() {
        // |diff| = 0.75 Ξ95 on 300..400 nm, 0.25 Ξ95 elsewhere; Ξ70 = Ξ95/2
        let rows: Vec<(f64, f64, f64)> = (0..11).map(|i| (250.0 + 20.0 * i as f64, -50.0, 4.0)).collect();
        let ds = dataset(&rows);
        let theory: Vec<f64> = rows
            .iter()
            .map(|&(a, p, xi)| {
                if (300.0..=400.0).contains(&a) {
                    p + 0.75 * xi
                } else {
                    p - 0.25 * xi
                }
            })
            .collect();
        let r = difference_analysis("m", &theory, &ds, &both_normal(), 0.0, CombinationRule::Rss).unwrap();
        assert_eq!(r.levels[0].verdict, Verdict::Consistent);
        let iv = &r.levels[1].exclusion_intervals;
        assert_eq!(iv.len(), 1);
        assert_eq!((iv[0].start_nm, iv[0].end_nm), (310.0, 390.0));
    }

    #[test]
    fn theory_band_widens_interval() {
        let ds = dataset(&[(200.0, -100.0, 3.0)]);
        let spec = [ConfidenceSpec::new(ConfidenceLevel::P95, Distribution::Normal)];
        let r = difference_analysis("m", &[-96.0], &ds, &spec, 0.04, CombinationRule::Rss).unwrap();
        assert!((r.points[0].half_widths_mpa[0] - 3.0f64.hypot(0.04 * 96.0)).abs() < 1e-12);
        assert!(!r.points[0].outside[0]);
        let r = difference_analysis("m", &[-96.0], &ds, &spec, 0.0, CombinationRule::Rss).unwrap();
        assert!(r.points[0].outside[0]);
    }

    #[test]
    fn rejects_mismatched_input() {
        let ds = dataset(&[(200.0, -100.0, 3.0)]);
        assert!(difference_analysis("m", &[], &ds, &both_normal(), 0.0, CombinationRule::Rss).is_err());
        assert!(difference_analysis("m", &[-1.0], &ds, &[], 0.0, CombinationRule::Rss).is_err());
    }

    fn fixture() -> impl Strategy<Value = (Vec<(f64, f64, f64)>, Vec<f64>)> {
        prop::collection::vec((-100.0f64..-1.0, 0.1f64..5.0, -10.0f64..10.0), 1..40).prop_map(|rows| {
            let data: Vec<(f64, f64, f64)> = rows
                .iter()
                .enumerate()
                .map(|(i, r)| (100.0 + 5.0 * i as f64, r.0, r.1))
                .collect();
            let theory = rows.iter().map(|r| r.0 + r.2).collect();
            (data, theory)
        })
    }

    proptest! {
        #[test]
        fn verdict_monotonicity((rows, theory) in fixture(), uniform in any::<bool>()) {
            let dist = if uniform { Distribution::Uniform } else { Distribution::Normal };
            let specs = [ConfidenceSpec::new(ConfidenceLevel::P95, dist), ConfidenceSpec::new(ConfidenceLevel::P70, dist)];
            let r = difference_analysis("m", &theory, &dataset(&rows), &specs, 0.005, CombinationRule::Rss).unwrap();
            for p in &r.points {
                prop_assert!(!p.outside[0] || p.outside[1]);
            }
        }

        #[test]
        fn intervals_reproduce_flags((rows, theory) in fixture()) {
            let r = difference_analysis("m", &theory, &dataset(&rows), &both_normal(), 0.0, CombinationRule::LinearSum).unwrap();
            for (k, level) in r.levels.iter().enumerate() {
                let mut rebuilt = vec![false; r.points.len()];
                for iv in &level.exclusion_intervals {
                    for f in &mut rebuilt[iv.first_index..=iv.last_index] {
                        *f = true;
                    }
                }
                let flags: Vec<bool> = r.points.iter().map(|p| p.outside[k]).collect();
                prop_assert_eq!(&rebuilt, &flags);
                for w in level.exclusion_intervals.windows(2) {
                    // disjoint, ascending and maximal (separated by at least one inside point)
                    prop_assert!(w[1].first_index > w[0].last_index + 1);
                }
            }
        }

        #[test]
        fn shift_invariance((rows, theory) in fixture(), shift in -50.0f64..50.0) {
            let shifted_rows: Vec<_> = rows.iter().map(|&(a, p, xi)| (a, p + shift, xi)).collect();
            let shifted_theory: Vec<f64> = theory.iter().map(|t| t + shift).collect();
            let a = difference_analysis("m", &theory, &dataset(&rows), &both_normal(), 0.0, CombinationRule::Rss).unwrap();
            let b = difference_analysis("m", &shifted_theory, &dataset(&shifted_rows), &both_normal(), 0.0, CombinationRule::Rss).unwrap();
            for (pa, pb) in a.points.iter().zip(&b.points) {
                prop_assert!((pa.difference_mpa - pb.difference_mpa).abs() < 1e-9);
            }
            let flags_a: Vec<_> = a.points.iter().map(|p| p.outside.clone()).collect();
            let flags_b: Vec<_> = b.points.iter().map(|p| p.outside.clone()).collect();
            // flags may only differ where |difference| sits on Ξ to rounding
            for (i, (fa, fb)) in flags_a.iter().zip(&flags_b).enumerate() {
                if fa != fb {
                    let p = &a.points[i];
                    prop_assert!(p.half_widths_mpa.iter().any(|xi| (p.difference_mpa.abs() - xi).abs() < 1e-9));
                }
            }
        }
    }
}
