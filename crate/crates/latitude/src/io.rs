//! CSV ingestion, matrix serialization and the column preprocessing
//! pipeline.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! save/load cycle reproduces every value bit for bit.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// A loaded CSV matrix together with the header names, when present.
#[derive(Debug, Clone)]
pub struct CsvMatrix {
    pub matrix: DenseMatrix,
    pub column_names: Option<Vec<String>>,
}

/// Reads a rectangular numeric CSV. A non-numeric first row is treated as a
/// header.
pub fn load_csv<P: AsRef<Path>>(path: P) -> Result<CsvMatrix> {
    let file = File::open(path.as_ref())?;
    let reader = BufReader::new(file);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut column_names: Option<Vec<String>> = None;
    let mut cols: Option<usize> = None;

    for (line_idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = line_idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(values) => {
                if let Some(c) = cols {
                    if values.len() != c {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("expected {c} fields, found {}", values.len()),
                        });
                    }
                } else {
                    cols = Some(values.len());
                }
                for (i, v) in values.iter().enumerate() {
                    if !v.is_finite() {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("non-finite value in field {}", i + 1),
                        });
                    }
                }
                rows.push(values);
            }
            Err(e) => {
                if rows.is_empty() && column_names.is_none() {
                    column_names = Some(fields.iter().map(|s| s.to_string()).collect());
                    cols = Some(fields.len());
                } else {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("non-numeric cell: {e}"),
                    });
                }
            }
        }
    }

    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "no data rows".into(),
        });
    }
    let cols = cols.unwrap();
    let nrows = rows.len();
    let values = rows.into_iter().flatten().collect();
    Ok(CsvMatrix {
        matrix: DenseMatrix::from_vec(nrows, cols, values)?,
        column_names,
    })
}

pub fn save_matrix_csv<P: AsRef<Path>>(path: P, m: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    for i in 0..m.rows() {
        let row = m.row(i);
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a vector as a single-column CSV.
pub fn save_vector_csv<P: AsRef<Path>>(path: P, v: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    for x in v {
        writeln!(w, "{x}")?;
    }
    w.flush()?;
    Ok(())
}

/// Which per-column transformations to apply, in the fixed order
/// mean-centering, minimum subtraction, division by standard deviation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PreprocessSpec {
    pub column_mean_center_first: bool,
    pub column_min_subtract: bool,
    pub column_std_divide: bool,
    /// Population std (denominator n) by default; sample std on request.
    pub sample_std: bool,
}

impl PreprocessSpec {
    /// Parses a comma-separated flag list: `meancenter`, `minsub`, `stddiv`,
    /// `samplestd`.
    pub fn parse_flags(s: &str) -> Result<Self> {
        let mut spec = Self::default();
        for flag in s.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            match flag {
                "meancenter" => spec.column_mean_center_first = true,
                "minsub" => spec.column_min_subtract = true,
                "stddiv" => spec.column_std_divide = true,
                "samplestd" => spec.sample_std = true,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown preprocessing flag `{other}`"
                    )))
                }
            }
        }
        Ok(spec)
    }
}

/// Applies the per-column preprocessing pipeline. Zero-variance columns are
/// left undivided.
pub fn preprocess(a: &DenseMatrix, spec: &PreprocessSpec) -> DenseMatrix {
    let (n, m) = (a.rows(), a.cols());
    let mut out = a.clone();
    for j in 0..m {
        let mut col: Vec<f64> = (0..n).map(|i| out.get(i, j)).collect();
        if spec.column_mean_center_first {
            let mean = col.iter().sum::<f64>() / n as f64;
            col.iter_mut().for_each(|v| *v -= mean);
        }
        if spec.column_min_subtract {
            let min = col.iter().copied().fold(f64::INFINITY, f64::min);
            col.iter_mut().for_each(|v| *v -= min);
        }
        if spec.column_std_divide {
            let mean = col.iter().sum::<f64>() / n as f64;
            let denom = if spec.sample_std && n > 1 {
                (n - 1) as f64
            } else {
                n as f64
            };
            let std = (col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / denom).sqrt();
            if std > 0.0 {
                col.iter_mut().for_each(|v| *v /= std);
            }
        }
        for i in 0..n {
            out.set(i, j, col[i]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn minimal_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        std::fs::write(&path, "1,2\n3,4\n").unwrap();
        let loaded = load_csv(&path).unwrap();
        assert_eq!(loaded.matrix.values(), &[1.0, 2.0, 3.0, 4.0]);
        assert!(loaded.column_names.is_none());
    }

    #[test]
    fn header_detection() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        let loaded = load_csv(&path).unwrap();
        assert_eq!(loaded.matrix.values(), &[1.0, 2.0]);
        assert_eq!(loaded.column_names.unwrap(), vec!["a", "b"]);
    }

    #[test]
    fn ragged_and_bad_cells_report_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        std::fs::write(&path, "1,2\n3\n").unwrap();
        match load_csv(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        std::fs::write(&path, "1,2\n3,x\n").unwrap();
        assert!(matches!(load_csv(&path), Err(Error::Parse { line: 2, .. })));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(b"").unwrap();
        drop(f);
        assert!(matches!(load_csv(&path), Err(Error::Parse { .. })));
    }

    #[test]
    fn save_load_round_trip_bit_identical() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(123);
        let m = DenseMatrix::from_vec(7, 5, (0..35).map(|_| rng.gen::<f64>() * 1e3).collect())
            .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        save_matrix_csv(&path, &m).unwrap();
        let loaded = load_csv(&path).unwrap();
        assert_eq!(loaded.matrix.values(), m.values());
    }

    #[test]
    fn min_subtract_only() {
        let a = DenseMatrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let spec = PreprocessSpec {
            column_min_subtract: true,
            ..Default::default()
        };
        assert_eq!(preprocess(&a, &spec).values(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn constant_column_division_skipped() {
        let a = DenseMatrix::from_rows(&[vec![5.0], vec![5.0]]).unwrap();
        let spec = PreprocessSpec {
            column_min_subtract: true,
            column_std_divide: true,
            ..Default::default()
        };
        assert_eq!(preprocess(&a, &spec).values(), &[0.0, 0.0]);
    }

    #[test]
    fn population_std() {
        // Population std of [0, 2] is 1, so min-subtract + std-divide is a
        // no-op here.
        let a = DenseMatrix::from_rows(&[vec![0.0], vec![2.0]]).unwrap();
        let spec = PreprocessSpec {
            column_min_subtract: true,
            column_std_divide: true,
            ..Default::default()
        };
        assert_eq!(preprocess(&a, &spec).values(), &[0.0, 2.0]);
    }

    #[test]
    fn mean_center_applies_first() {
        let a = DenseMatrix::from_rows(&[vec![10.0], vec![14.0]]).unwrap();
        let spec = PreprocessSpec {
            column_mean_center_first: true,
            column_min_subtract: true,
            ..Default::default()
        };
        // Centered to [-2, 2], then shifted to [0, 4].
        assert_eq!(preprocess(&a, &spec).values(), &[0.0, 4.0]);
    }

    #[test]
    fn parse_flags() {
        let spec = PreprocessSpec::parse_flags("minsub,stddiv").unwrap();
        assert!(spec.column_min_subtract && spec.column_std_divide);
        assert!(!spec.column_mean_center_first);
        assert!(PreprocessSpec::parse_flags("bogus").is_err());
    }
}
