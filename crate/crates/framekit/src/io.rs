//! Matrix file formats.
//!
//! The canonical interchange format is a JSON object
//! `{"rows": D, "cols": M, "data": [[re, im], ...]}` with the entries in
//! row-major order. CSV is accepted on input only, with complex entries
//! written as `a`, `a+bi`, `a-bi`, `bi`, or `i`.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::Error;
use crate::frames::VectorSequence;
use crate::linalg::{CMat, C64};
use crate::Result;

/// Serializable form of a complex matrix.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                data.push([z.re, z.im]);
            }
        }
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Parse {
                line: 0,
                col: 0,
                msg: format!(
                    "expected {} entries for a {}x{} matrix, found {}",
                    self.rows * self.cols,
                    self.rows,
                    self.cols,
                    self.data.len()
                ),
            });
        }
        let mut m = CMat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let [re, im] = self.data[r * self.cols + c];
                m[(r, c)] = C64::new(re, im);
            }
        }
        Ok(m)
    }
}

/// Serializes a matrix to the canonical JSON format. The f64 formatting is
/// shortest-round-trip, so parse(print(m)) is bit-exact.
pub fn matrix_to_json(m: &CMat) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix serialization")
}

pub fn matrix_from_json(s: &str) -> Result<CMat> {
    let mj: MatrixJson = serde_json::from_str(s)?;
    mj.to_matrix()
}

/// Parses one complex entry in `a`, `a+bi`, `a-bi`, `bi`, `i` form.
fn parse_complex(s: &str, line: usize, col: usize) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse {
            line,
            col,
            msg: "empty entry".into(),
        });
    }
    let err = |msg: String| Error::Parse { line, col, msg };
    if let Some(body) = t.strip_suffix(['i', 'j']) {
        // Split into real and imaginary parts at the last +/- that is not
        // part of an exponent and not leading.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let ch = bytes[k] as char;
            if (ch == '+' || ch == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = body[..k]
                    .parse()
                    .map_err(|e| err(format!("bad real part {:?}: {e}", &body[..k])))?;
                let im_str = &body[k..];
                let im: f64 = match im_str {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => im_str
                        .parse()
                        .map_err(|e| err(format!("bad imaginary part {im_str:?}: {e}")))?,
                };
                Ok(C64::new(re, im))
            }
            None => {
                let im: f64 = match body {
                    "" => 1.0,
                    "-" => -1.0,
                    "+" => 1.0,
                    _ => body
                        .parse()
                        .map_err(|e| err(format!("bad imaginary part {body:?}: {e}")))?,
                };
                Ok(C64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t
            .parse()
            .map_err(|e| err(format!("bad real entry {t:?}: {e}")))?;
        Ok(C64::new(re, 0.0))
    }
}

/// Parses a CSV matrix: one row per line, comma-separated complex entries.
pub fn matrix_from_csv(s: &str) -> Result<CMat> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (ln, line) in s.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (cn, cell) in line.split(',').enumerate() {
            row.push(parse_complex(cell, ln + 1, cn + 1)?);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            col: 0,
            msg: "empty matrix".into(),
        });
    }
    let cols = rows[0].len();
    if let Some((ln, _)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(Error::Parse {
            line: ln + 1,
            col: 0,
            msg: format!("inconsistent row length (expected {cols} entries)"),
        });
    }
    let mut m = CMat::zeros(rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, &z) in row.iter().enumerate() {
            m[(r, c)] = z;
        }
    }
    Ok(m)
}

/// Loads a matrix from a `.json` or `.csv` file, dispatching on extension
/// (anything other than `.csv` is treated as JSON).
pub fn load_matrix(path: &Path) -> Result<CMat> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => matrix_from_csv(&text),
        _ => matrix_from_json(&text),
    }
}

pub fn load_sequence(path: &Path) -> Result<VectorSequence> {
    Ok(VectorSequence::from_matrix(load_matrix(path)?))
}

pub fn save_matrix(path: &Path, m: &CMat) -> Result<()> {
    std::fs::write(path, matrix_to_json(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_is_bit_exact() {
        let mut m = CMat::zeros(2, 3);
        m[(0, 0)] = C64::new(1.0 / 3.0, -2.0e-17);
        m[(1, 2)] = C64::new(std::f64::consts::PI, 1.0);
        let s = matrix_to_json(&m);
        let back = matrix_from_json(&s).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn csv_complex_forms() {
        let m = matrix_from_csv("1, 2+3i, -i\n0.5, 4i, 1-1i\n").unwrap();
        assert_eq!(m[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(m[(0, 1)], C64::new(2.0, 3.0));
        assert_eq!(m[(0, 2)], C64::new(0.0, -1.0));
        assert_eq!(m[(1, 1)], C64::new(0.0, 4.0));
        assert_eq!(m[(1, 2)], C64::new(1.0, -1.0));
    }

    #[test]
    fn csv_reports_position() {
        let err = matrix_from_csv("1, x\n").unwrap_err();
        match err {
            Error::Parse { line, col, .. } => {
                assert_eq!((line, col), (1, 2));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn csv_rejects_ragged_rows() {
        assert!(matrix_from_csv("1,2\n3\n").is_err());
    }

    #[test]
    fn csv_scientific_notation() {
        let m = matrix_from_csv("1e-3+2e-4i\n").unwrap();
        assert_eq!(m[(0, 0)], C64::new(1e-3, 2e-4));
    }
}
