use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalityProbe {
    pub samples: usize,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// |skewness| < 0.5 and |excess kurtosis| < 1.
    pub normal_compatible: bool,
}

/// Moment check of the distribution of `values` about a running mean.
///
/// With `window = None` values are centred on their overall mean; otherwise
/// on a centred moving average over `window` points (truncated at the ends).
pub fn normality_probe(values: &[f64], window: Option<usize>) -> Result<NormalityProbe> {
    let n = values.len();
    if n < MIN_SAMPLES {
        return Err(Error::validation(format!(
            "normality probe needs at least {MIN_SAMPLES} values, got {n}"
        )));
    }
    let residuals: Vec<f64> = match window {
        None => {
            let mean = values.iter().sum::<f64>() / n as f64;
            values.iter().map(|v| v - mean).collect()
        }
        Some(w) if w >= 1 => {
            let half = w / 2;
            (0..n)
                .map(|i| {
                    let lo = i.saturating_sub(half);
                    let hi = (i + half + 1).min(n);
                    let mean = values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
                    values[i] - mean
                })
                .collect()
        }
        Some(_) => return Err(Error::validation("running-mean window must be at least 1")),
    };
    // recentre so the moments below are central moments
    let shift = residuals.iter().sum::<f64>() / n as f64;
    let moment = |k: i32| residuals.iter().map(|r| (r - shift).powi(k)).sum::<f64>() / n as f64;
    let m2 = moment(2);
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(m2 > (1e-12 * scale).powi(2)) {
        return Err(Error::validation("normality probe: values have zero variance"));
    }
    let skewness = moment(3) / m2.powf(1.5);
    let excess_kurtosis = moment(4) / (m2 * m2) - 3.0;
    Ok(NormalityProbe {
        samples: n,
        skewness,
        excess_kurtosis,
        normal_compatible: skewness.abs() < 0.5 && excess_kurtosis.abs() < 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn normal_sample_is_compatible() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let xs: Vec<f64> = (0..200)
            .map(|_| 3.0 + 0.5 * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let probe = normality_probe(&xs, None).unwrap();
        assert!(probe.normal_compatible, "{probe:?}");
    }

    #[test]
    fn uniform_sample_is_flagged() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..200).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let probe = normality_probe(&xs, None).unwrap();
        assert!((probe.excess_kurtosis + 1.2).abs() < 0.25, "{probe:?}");
        assert!(!probe.normal_compatible);
    }

    #[test]
    fn running_mean_removes_trend() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..300)
            .map(|i| 0.05 * i as f64 + rng.sample::<f64, _>(StandardNormal))
            .collect();
        let probe = normality_probe(&xs, Some(21)).unwrap();
        assert!(probe.normal_compatible, "{probe:?}");
    }

    #[test]
    fn degenerate_inputs() {
        assert!(normality_probe(&[1.0; 50], None).is_err());
        assert!(normality_probe(&[1.0, 2.0, 3.0], None).is_err());
        assert!(normality_probe(&(0..30).map(f64::from).collect::<Vec<_>>(), Some(0)).is_err());
    }
}
