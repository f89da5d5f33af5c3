use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPoint {
    pub separation_nm: f64,
    pub pressure_mpa: f64,
    /// 95% confidence half-width.
    pub xi95_mpa: f64,
}

/// Mean measured pressures with their 95% half-widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentDataset {
    points: Vec<ExperimentPoint>,
    pub temperature_k: Option<f64>,
    pub delta_a_nm: Option<f64>,
    pub provenance: String,
}

impl ExperimentDataset {
    pub fn new(points: Vec<ExperimentPoint>, provenance: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::validation("experiment dataset is empty"));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.separation_nm > 0.0 && p.pressure_mpa.is_finite() && p.xi95_mpa > 0.0 && p.xi95_mpa.is_finite()) {
                return Err(Error::validation(format!("row {i}: invalid point {p:?}")));
            }
            if i > 0 && p.separation_nm <= points[i - 1].separation_nm {
                return Err(Error::validation(format!(
                    "row {i}: separations must be strictly ascending"
                )));
            }
        }
        Ok(ExperimentDataset {
            points,
            temperature_k: None,
            delta_a_nm: None,
            provenance: provenance.into(),
        })
    }

    pub fn points(&self) -> &[ExperimentPoint] {
        &self.points
    }

    pub fn separations(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.separation_nm).collect()
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_csv_reader(
            std::fs::File::open(path).map_err(|e| Error::file(path, e))?,
            &path.display().to_string(),
        )
    }

    /// Reads `a_nm,P_mPa,Xi95_mPa`. Comment lines of the form
    /// `# temperature_K: 300` or `# delta_a_nm = 0.6` set metadata.
    pub fn from_csv_reader<R: Read>(mut reader: R, source: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: source.to_string(),
            line,
            message,
        };
        let mut text = String::new();
        reader.read_to_string(&mut text)?;

        let mut temperature_k = None;
        let mut delta_a_nm = None;
        for (i, line) in text.lines().enumerate() {
            let Some(body) = line.trim_start().strip_prefix('#') else {
                continue;
            };
            let Some((key, value)) = body.split_once([':', '=']) else {
                continue;
            };
            let target = match key.trim().to_ascii_lowercase().as_str() {
                "temperature_k" => &mut temperature_k,
                "delta_a_nm" => &mut delta_a_nm,
                _ => continue,
            };
            let v = value
                .trim()
                .parse::<f64>()
                .map_err(|e| parse_err(i + 1, format!("metadata '{}': {e}", key.trim())))?;
            *target = Some(v);
        }

        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| parse_err(0, e.to_string()))?
            .iter()
            .map(str::to_ascii_lowercase)
            .collect();
        if headers != ["a_nm", "p_mpa", "xi95_mpa"] {
            return Err(parse_err(
                rdr.position().line() as usize,
                format!("unrecognised header {headers:?}; expected a_nm,P_mPa,Xi95_mPa"),
            ));
        }
        let mut points: Vec<ExperimentPoint> = Vec::new();
        for record in rdr.records() {
            let record =
                record.map_err(|e| parse_err(e.position().map(|p| p.line() as usize).unwrap_or(0), e.to_string()))?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
            let num = |i: usize| -> Result<f64> {
                let f = &record[i];
                f.parse::<f64>().map_err(|e| parse_err(line, format!("'{f}': {e}")))
            };
            let p = ExperimentPoint {
                separation_nm: num(0)?,
                pressure_mpa: num(1)?,
                xi95_mpa: num(2)?,
            };
            if !(p.xi95_mpa > 0.0) {
                return Err(parse_err(line, format!("Xi95 must be positive, got {}", p.xi95_mpa)));
            }
            if let Some(prev) = points.last() {
                if p.separation_nm <= prev.separation_nm {
                    return Err(parse_err(line, format!("separation {} not ascending", p.separation_nm)));
                }
            }
            points.push(p);
        }
        let mut ds = Self::new(points, source).map_err(|e| parse_err(0, e.to_string()))?;
        ds.temperature_k = temperature_k;
        ds.delta_a_nm = delta_a_nm;
        Ok(ds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_metadata() {
        let text =
            "# synthetic run\n# temperature_K: 300\n# delta_a_nm = 0.6\na_nm,P_mPa,Xi95_mPa\n160,-1000,5\n170,-800,4\n";
        let ds = ExperimentDataset::from_csv_reader(text.as_bytes(), "exp.csv").unwrap();
        assert_eq!(ds.points().len(), 2);
        assert_eq!(ds.temperature_k, Some(300.0));
        assert_eq!(ds.delta_a_nm, Some(0.6));
        assert_eq!(ds.separations(), vec![160.0, 170.0]);
    }

    #[test]
    fn rejects_bad_rows() {
        let neg = "a_nm,P_mPa,Xi95_mPa\n160,-1000,-5\n";
        assert!(matches!(
            ExperimentDataset::from_csv_reader(neg.as_bytes(), "x"),
            Err(Error::Parse { line: 2, .. })
        ));
        let unsorted = "a_nm,P_mPa,Xi95_mPa\n170,-1000,5\n160,-900,5\n";
        assert!(matches!(
            ExperimentDataset::from_csv_reader(unsorted.as_bytes(), "x"),
            Err(Error::Parse { line: 3, .. })
        ));
        let empty = "a_nm,P_mPa,Xi95_mPa\n";
        assert!(ExperimentDataset::from_csv_reader(empty.as_bytes(), "x").is_err());
        assert!(ExperimentDataset::new(vec![], "x").is_err());
    }
}
