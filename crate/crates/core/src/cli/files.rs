//! JSON input files. State and sensor indices are 1-based in every file and
//! report; the library itself is 0-based.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::SystemTriple;
use crate::numeric::RealMatrix;
use crate::structural::{PatternMatrix, PatternTriple};

/// Numeric system: dense real matrices as arrays of rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    /// Missing or `[]` means no sensors.
    #[serde(rename = "C", default)]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<f64>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<f64>>>,
}

/// Structured system: 0/1 grids where 1 marks a free parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<u8>>,
    #[serde(rename = "C", default)]
    pub c: Vec<Vec<u8>>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<u8>>>,
    /// Functional states (1-based); alternative to `F`.
    #[serde(rename = "XF", default, skip_serializing_if = "Option::is_none")]
    pub xf: Option<Vec<usize>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<u8>>>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> std::result::Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn dense(rows: &[Vec<f64>], cols: usize, field: &str) -> Result<RealMatrix> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(Error::DimensionMismatch(format!(
                "field \"{field}\" row {} has {} entries, expected {cols}",
                i + 1,
                r.len()
            )));
        }
    }
    Ok(RealMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

fn square_size<T>(a: &[Vec<T>]) -> Result<usize> {
    let n = a.len();
    if n == 0 {
        return Err(Error::InvalidInput(
            "field \"A\" must have at least one row".into(),
        ));
    }
    Ok(n)
}

pub fn to_one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

/// Converts 1-based indices to 0-based, checking the range `1..=limit`.
pub fn from_one_based(xs: &[usize], limit: usize, what: &str) -> Result<Vec<usize>> {
    xs.iter()
        .map(|&x| {
            if x == 0 || x > limit {
                Err(Error::InvalidInput(format!(
                    "{what} index {x} is outside 1..={limit}"
                )))
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}

impl SystemFile {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn matrices(&self) -> Result<(RealMatrix, RealMatrix, RealMatrix)> {
        let n = square_size(&self.a)?;
        Ok((
            dense(&self.a, n, "A")?,
            dense(&self.c, n, "C")?,
            dense(&self.f, n, "F")?,
        ))
    }

    pub fn triple(&self) -> Result<SystemTriple> {
        let (a, c, f) = self.matrices()?;
        SystemTriple::new(a, c, f)
    }
}

impl PatternFile {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    fn grid(rows: &[Vec<u8>], cols: usize, field: &str) -> Result<PatternMatrix> {
        PatternMatrix::from_grid(rows, cols).map_err(|e| match e {
            Error::DimensionMismatch(m) => {
                Error::DimensionMismatch(format!("field \"{field}\": {m}"))
            }
            Error::InvalidInput(m) => Error::InvalidInput(format!("field \"{field}\": {m}")),
            other => other,
        })
    }

    pub fn state_pattern(&self) -> Result<PatternMatrix> {
        let n = square_size(&self.a)?;
        Self::grid(&self.a, n, "A")
    }

    pub fn output_pattern(&self) -> Result<PatternMatrix> {
        Self::grid(&self.c, self.n(), "C")
    }

    pub fn input_pattern(&self) -> Result<PatternMatrix> {
        let b = self
            .b
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("field \"B\" is required".into()))?;
        let m = b.first().map_or(0, Vec::len);
        Self::grid(b, m, "B")
    }

    pub fn triple(&self) -> Result<PatternTriple> {
        let a = self.state_pattern()?;
        let c = self.output_pattern()?;
        match (&self.f, &self.xf) {
            (Some(_), Some(_)) => Err(Error::InvalidInput(
                "fields \"F\" and \"XF\" are mutually exclusive".into(),
            )),
            (None, None) => Err(Error::InvalidInput(
                "one of \"F\" or \"XF\" is required".into(),
            )),
            (Some(f), None) => PatternTriple::new(a, c, Self::grid(f, self.n(), "F")?),
            (None, Some(xf)) => {
                let states = from_one_based(xf, self.n(), "XF state")?;
                PatternTriple::with_functional_states(a, c, &states)
            }
        }
    }
}
