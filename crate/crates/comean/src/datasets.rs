//! Embedded example datasets and CSV ingestion.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::estimators::TwoSampleData;

/// A named two-sample dataset compiled into the library.
#[derive(Debug, Clone)]
pub struct NamedDataset {
    pub name: &'static str,
    pub data: TwoSampleData,
    pub description: &'static str,
    pub source: &'static str,
}

/// Heyl and Cook gravity measurements (deviations from g).
pub const GRAVITY_X1: [f64; 11] = [78., 78., 78., 86., 87., 81., 73., 67., 75., 82., 83.];
pub const GRAVITY_X2: [f64; 12] = [84., 86., 85., 82., 77., 76., 80., 83., 81., 78., 78., 78.];

/// Strength measurements of eight-year-old Japanese children.
pub const CHILD_GIRLS: [f64; 7] = [52.95, 55.72, 56.14, 54.24, 58.19, 55.32, 54.45];
pub const CHILD_BOYS: [f64; 7] = [52.55, 54.08, 54.25, 52.92, 56.31, 53.63, 52.52];

/// Chip-width summary record. The raw measurements were never published, so
/// only the reported summary statistics are embedded; the chip tables cannot
/// be reproduced numerically from this crate.
#[derive(Debug, Clone, Copy)]
pub struct ChipSummary {
    pub n1: usize,
    pub n2: usize,
    pub mean1: f64,
    pub mean2: f64,
    pub sd1: f64,
    pub sd2: f64,
}

pub fn chip_summary() -> ChipSummary {
    ChipSummary {
        n1: 240,
        n2: 240,
        mean1: 6.293254,
        mean2: 6.292667,
        sd1: 0.003785844,
        sd2: 0.004962341,
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["gravity", "child-girls-first", "child-boys-first"];

pub fn load_builtin(name: &str) -> Result<NamedDataset> {
    let (name, data, description, source) = match name {
        "gravity" => (
            "gravity",
            TwoSampleData::from_values(GRAVITY_X1.to_vec(), GRAVITY_X2.to_vec())?,
            "Heyl and Cook acceleration-due-to-gravity measurements",
            "gravity data",
        ),
        "child-girls-first" => (
            "child-girls-first",
            TwoSampleData::from_values(CHILD_GIRLS.to_vec(), CHILD_BOYS.to_vec())?,
            "Japanese child strength data, girls as sample 1",
            "child data",
        ),
        "child-boys-first" => (
            "child-boys-first",
            TwoSampleData::from_values(CHILD_BOYS.to_vec(), CHILD_GIRLS.to_vec())?,
            "Japanese child strength data, boys as sample 1",
            "child data",
        ),
        other => return Err(Error::UnknownDataset(other.to_string())),
    };
    Ok(NamedDataset { name, data, description, source })
}

/// Parses the two-column CSV form `sample,value` with `sample` in {1, 2};
/// a header row is required. Input order is preserved within each sample.
pub fn read_two_column_csv<R: BufRead>(reader: R) -> Result<TwoSampleData> {
    let mut v1 = Vec::new();
    let mut v2 = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line_number = lineno + 1;
        let line = line.map_err(|e| Error::Io(e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if lineno == 0 {
            // header row
            continue;
        }
        let mut parts = trimmed.splitn(2, ',');
        let sample_field = parts.next().unwrap_or("").trim();
        let value_field = parts
            .next()
            .ok_or_else(|| Error::Parse {
                line: line_number,
                message: "expected two comma-separated fields".into(),
            })?
            .trim();
        let value: f64 = value_field.parse().map_err(|_| Error::Parse {
            line: line_number,
            message: format!("invalid value '{value_field}'"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: line_number,
                message: format!("non-finite value '{value_field}'"),
            });
        }
        match sample_field {
            "1" => v1.push(value),
            "2" => v2.push(value),
            other => {
                return Err(Error::Parse {
                    line: line_number,
                    message: format!("sample must be 1 or 2, got '{other}'"),
                })
            }
        }
    }
    if v1.is_empty() {
        return Err(Error::MissingSample(1));
    }
    if v2.is_empty() {
        return Err(Error::MissingSample(2));
    }
    TwoSampleData::from_values(v1, v2)
}

/// Parses the two-files form: one value per line in each file.
pub fn read_value_lines<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line_number = lineno + 1;
        let line = line.map_err(|e| Error::Io(e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| Error::Parse {
            line: line_number,
            message: format!("invalid value '{trimmed}'"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: line_number,
                message: format!("non-finite value '{trimmed}'"),
            });
        }
        values.push(value);
    }
    values.first().ok_or(Error::MissingSample(1))?;
    Ok(values)
}

/// Writes the two-column CSV form with 17 significant digits, so that
/// read-back reproduces the values exactly.
pub fn write_two_column_csv(data: &TwoSampleData) -> String {
    let mut out = String::from("sample,value\n");
    for v in data.sample1.values() {
        out.push_str(&format!("1,{v:.17e}\n"));
    }
    for v in data.sample2.values() {
        out.push_str(&format!("2,{v:.17e}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::summarize;
    use approx::assert_relative_eq;

    #[test]
    fn builtins_reproduce_reported_summaries() {
        let gravity = load_builtin("gravity").unwrap();
        assert_eq!(gravity.data.n1(), 11);
        assert_eq!(gravity.data.n2(), 12);
        let s1 = summarize(gravity.data.sample1.values()).unwrap();
        let s2 = summarize(gravity.data.sample2.values()).unwrap();
        assert_relative_eq!(s1.var_unbiased, 34.09091, epsilon = 1e-5);
        assert_relative_eq!(s2.var_unbiased, 11.15152, epsilon = 1e-5);

        let child = load_builtin("child-girls-first").unwrap();
        let g = summarize(child.data.sample1.values()).unwrap();
        assert_relative_eq!(g.mean, 387.01 / 7.0, epsilon = 1e-12);
    }

    #[test]
    fn child_variants_are_swaps() {
        let gf = load_builtin("child-girls-first").unwrap();
        let bf = load_builtin("child-boys-first").unwrap();
        assert_eq!(gf.data.sample1, bf.data.sample2);
        assert_eq!(gf.data.sample2, bf.data.sample1);
    }

    #[test]
    fn unknown_dataset_errors() {
        assert!(matches!(load_builtin("nonexistent"), Err(Error::UnknownDataset(_))));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let data = load_builtin("child-girls-first").unwrap().data;
        let csv = write_two_column_csv(&data);
        let back = read_two_column_csv(csv.as_bytes()).unwrap();
        assert_eq!(back, data);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let err = read_two_column_csv("sample,value\n1,abc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_two_column_csv("sample,value\n3,1.0\n2,1.0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_two_column_csv("sample,value\n1,1.0\n".as_bytes()).unwrap_err();
        assert_eq!(err, Error::MissingSample(2));
    }
}
