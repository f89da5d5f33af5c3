//! Geometric averaging over discrete roughness profiles.
//!
//! Each body is described by pairs (v_i, h_i): the fraction of surface area
//! at height h_i. Relative to the zero-roughness level H = Σ v_i h_i the
//! rough-plate pressure is
//!
//! P_rough(a) = Σ_i Σ_j v_j^(s) v_i^(p) P(a + H_s + H_p − h_j^(s) − h_i^(p)).
//!
//! Diffraction-type corrections beyond this averaging are not modelled.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const AREA_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoughnessLevel {
    /// Fractional area.
    pub fraction: f64,
    /// Height in nm.
    pub height_nm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoughnessProfile {
    levels: Vec<RoughnessLevel>,
    zero_level_nm: f64,
}

/// Σ v_i h_i, the height about which the profile has zero mean.
pub fn zero_level(levels: &[RoughnessLevel]) -> Result<f64> {
    if levels.is_empty() {
        return Err(Error::validation("roughness profile is empty"));
    }
    if let Some(l) = levels.iter().find(|l| !(l.fraction > 0.0) || !l.height_nm.is_finite()) {
        return Err(Error::validation(format!(
            "area fractions must be positive and heights finite, got ({}, {})",
            l.fraction, l.height_nm
        )));
    }
    let total: f64 = levels.iter().map(|l| l.fraction).sum();
    if (total - 1.0).abs() > AREA_SUM_TOLERANCE {
        return Err(Error::validation(format!("area fractions sum to {total}, expected 1")));
    }
    Ok(levels.iter().map(|l| l.fraction * l.height_nm).sum())
}

impl RoughnessProfile {
    pub fn new(levels: Vec<RoughnessLevel>) -> Result<Self> {
        let zero_level_nm = zero_level(&levels)?;
        Ok(RoughnessProfile { levels, zero_level_nm })
    }

    /// A smooth surface: one level at height zero.
    pub fn flat() -> Self {
        RoughnessProfile {
            levels: vec![RoughnessLevel {
                fraction: 1.0,
                height_nm: 0.0,
            }],
            zero_level_nm: 0.0,
        }
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(fraction, height_nm)| RoughnessLevel { fraction, height_nm })
                .collect(),
        )
    }

    pub fn levels(&self) -> &[RoughnessLevel] {
        &self.levels
    }

    pub fn zero_level_nm(&self) -> f64 {
        self.zero_level_nm
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_csv_reader(
            std::fs::File::open(path).map_err(|e| Error::file(path, e))?,
            &path.display().to_string(),
        )
    }

    /// Reads `v,h_nm` rows; `#` starts a comment line.
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
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| parse_err(0, e.to_string()))?
            .iter()
            .map(str::to_ascii_lowercase)
            .collect();
        if headers != ["v", "h_nm"] {
            return Err(parse_err(
                rdr.position().line() as usize,
                format!("unrecognised header {headers:?}; expected v,h_nm"),
            ));
        }
        let mut levels = Vec::new();
        for record in rdr.records() {
            let record =
                record.map_err(|e| parse_err(e.position().map(|p| p.line() as usize).unwrap_or(0), e.to_string()))?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
            let num = |i: usize| -> Result<f64> {
                let f = &record[i];
                f.parse::<f64>().map_err(|e| parse_err(line, format!("'{f}': {e}")))
            };
            levels.push(RoughnessLevel {
                fraction: num(0)?,
                height_nm: num(1)?,
            });
        }
        Self::new(levels).map_err(|e| parse_err(0, e.to_string()))
    }
}

/// Distinct shifted separations a + H_s + H_p − h_j − h_i, ascending.
pub fn shifted_separations(a_nm: f64, plate: &RoughnessProfile, sphere: &RoughnessProfile) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(plate.levels.len() * sphere.levels.len());
    let base = a_nm + sphere.zero_level_nm + plate.zero_level_nm;
    for (i, p) in plate.levels.iter().enumerate() {
        for (j, s) in sphere.levels.iter().enumerate() {
            let d = base - s.height_nm - p.height_nm;
            if !(d > 0.0) {
                return Err(Error::domain(format!(
                    "shifted separation {d} nm <= 0 for plate level {i} (h = {}) and sphere level {j} (h = {})",
                    p.height_nm, s.height_nm
                )));
            }
            out.push(d);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

/// Rough-plate pressure from a smooth-plate pressure function. The smooth
/// function is called once per distinct shifted separation.
pub fn rough_pressure<F>(a_nm: f64, plate: &RoughnessProfile, sphere: &RoughnessProfile, smooth: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let distinct = shifted_separations(a_nm, plate, sphere)?;
    let values = distinct.iter().map(|&d| smooth(d)).collect::<Result<Vec<f64>>>()?;
    let base = a_nm + sphere.zero_level_nm + plate.zero_level_nm;
    // accumulate weights per distinct offset, then sum in ascending order
    let mut weights = vec![0.0; distinct.len()];
    for p in &plate.levels {
        for s in &sphere.levels {
            let d = base - s.height_nm - p.height_nm;
            let k = distinct.partition_point(|&x| x < d);
            weights[k] += s.fraction * p.fraction;
        }
    }
    Ok(weights.iter().zip(&values).map(|(w, v)| w * v).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ideal_metal_pressure_mpa;
    use proptest::prelude::*;

    fn ideal(a: f64) -> Result<f64> {
        Ok(ideal_metal_pressure_mpa(a))
    }

    #[test]
    fn zero_levels() {
        let lv = |p: &[(f64, f64)]| RoughnessProfile::from_pairs(p).unwrap().zero_level_nm();
        assert_eq!(lv(&[(1.0, 0.0)]), 0.0);
        assert_eq!(lv(&[(0.5, 0.0), (0.5, 10.0)]), 5.0);
        assert!((lv(&[(0.2, 1.0), (0.3, 2.0), (0.5, 3.0)]) - 2.3).abs() < 1e-12);
        let p = RoughnessProfile::from_pairs(&[(0.2, 1.0), (0.3, 2.0), (0.5, 3.0)]).unwrap();
        let residual: f64 = p
            .levels()
            .iter()
            .map(|l| (p.zero_level_nm() - l.height_nm) * l.fraction)
            .sum();
        assert!(residual.abs() < 1e-15);
    }

    #[test]
    fn fractions_must_sum_to_one() {
        assert!(RoughnessProfile::from_pairs(&[(0.5, 0.0), (0.4, 1.0)]).is_err());
        assert!(RoughnessProfile::from_pairs(&[(0.5, 0.0), (0.5 + 5e-7, 1.0)]).is_ok());
        assert!(RoughnessProfile::from_pairs(&[(1.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(RoughnessProfile::from_pairs(&[]).is_err());
    }

    #[test]
    fn flat_profiles_are_identity() {
        let flat = RoughnessProfile::from_pairs(&[(1.0, 7.0)]).unwrap();
        for a in [100.0, 300.0, 750.0] {
            let r = rough_pressure(a, &flat, &RoughnessProfile::flat(), ideal).unwrap();
            assert_eq!(r, ideal_metal_pressure_mpa(a));
        }
    }

    #[test]
    fn two_level_plate_against_closed_form() {
        let plate = RoughnessProfile::from_pairs(&[(0.5, 0.0), (0.5, 10.0)]).unwrap();
        let rough = rough_pressure(300.0, &plate, &RoughnessProfile::flat(), ideal).unwrap();
        let expected = 0.5 * ideal_metal_pressure_mpa(305.0) + 0.5 * ideal_metal_pressure_mpa(295.0);
        assert!((rough - expected).abs() < 1e-12 * expected.abs());
        // P(300) = -160.509 mPa, rough = -160.956 mPa
        assert!((ideal_metal_pressure_mpa(300.0) + 160.509).abs() < 1e-3);
        assert!((rough + 160.956).abs() < 1e-3);
        assert!(rough.abs() > ideal_metal_pressure_mpa(300.0).abs());
    }

    #[test]
    fn smooth_function_called_once_per_offset() {
        use std::cell::Cell;
        let calls = Cell::new(0);
        let plate = RoughnessProfile::from_pairs(&[(0.25, 0.0), (0.5, 5.0), (0.25, 10.0)]).unwrap();
        let sphere = RoughnessProfile::from_pairs(&[(0.5, 0.0), (0.5, 5.0)]).unwrap();
        rough_pressure(200.0, &plate, &sphere, |a| {
            calls.set(calls.get() + 1);
            ideal(a)
        })
        .unwrap();
        // offsets 0, 5, 10, 15 in total height
        assert_eq!(calls.get(), 4);
    }

    #[test]
    fn non_positive_shift_is_a_domain_error() {
        let plate = RoughnessProfile::from_pairs(&[(0.5, 0.0), (0.5, 100.0)]).unwrap();
        match rough_pressure(40.0, &plate, &RoughnessProfile::flat(), ideal) {
            Err(Error::Domain(msg)) => assert!(msg.contains("plate level 1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_csv() {
        let text = "# plate AFM levels\nv,h_nm\n0.25,0\n0.5,4\n0.25,8\n";
        let p = RoughnessProfile::from_csv_reader(text.as_bytes(), "plate.csv").unwrap();
        assert_eq!(p.levels().len(), 3);
        assert_eq!(p.zero_level_nm(), 4.0);
        assert!(matches!(
            RoughnessProfile::from_csv_reader("v,h\n1,0\n".as_bytes(), "x"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            RoughnessProfile::from_csv_reader("v,h_nm\n1,zz\n".as_bytes(), "x"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    fn profile() -> impl Strategy<Value = RoughnessProfile> {
        prop::collection::vec((0.05f64..1.0, 0.0f64..20.0), 1..6).prop_map(|raw| {
            let total: f64 = raw.iter().map(|r| r.0).sum();
            let mut pairs: Vec<(f64, f64)> = raw.iter().map(|&(v, h)| (v / total, h)).collect();
            let fix: f64 = 1.0 - pairs.iter().map(|p| p.0).sum::<f64>();
            pairs[0].0 += fix;
            RoughnessProfile::from_pairs(&pairs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn exchange_symmetry_and_convexity(plate in profile(), sphere in profile(), a in 100.0f64..800.0) {
            let ps = rough_pressure(a, &plate, &sphere, ideal).unwrap();
            let sp = rough_pressure(a, &sphere, &plate, ideal).unwrap();
            prop_assert!((ps - sp).abs() <= 1e-12 * ps.abs());
            prop_assert!(ps.abs() >= ideal_metal_pressure_mpa(a).abs() * (1.0 - 1e-12));
        }

        #[test]
        fn invariant_under_level_reordering(plate in profile(), a in 100.0f64..800.0) {
            let mut rev = plate.levels().to_vec();
            rev.reverse();
            let reordered = RoughnessProfile::new(rev).unwrap();
            let x = rough_pressure(a, &plate, &RoughnessProfile::flat(), ideal).unwrap();
            let y = rough_pressure(a, &reordered, &RoughnessProfile::flat(), ideal).unwrap();
            prop_assert!((x - y).abs() <= 1e-12 * x.abs());
        }
    }
}
