//! Descriptive statistics and Pearson correlation.

use crate::error::{Error, Result};
use crate::survey::SurveyTable;

pub fn mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Sample standard deviation (divisor `n - 1`).
pub fn stddev(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: values.len(),
        });
    }
    let m = mean(values)?;
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Ok((ss / (values.len() - 1) as f64).sqrt())
}

/// Pearson's r in raw-sum form:
///
/// ```text
///            n·Σxy − Σx·Σy
/// r = ─────────────────────────────────
///     √[(n·Σx² − (Σx)²)(n·Σy² − (Σy)²)]
/// ```
///
/// Returns `None` when either column is constant (zero variance term).
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    if is_constant(x) || is_constant(y) {
        return Ok(None);
    }
    let n = x.len() as f64;
    let (mut sx, mut sy, mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sx += a;
        sy += b;
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx <= 0.0 || vy <= 0.0 {
        return Ok(None);
    }
    let r = (n * sxy - sx * sy) / (vx * vy).sqrt();
    Ok(Some(r.clamp(-1.0, 1.0)))
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&a| a == v[0])
}

/// Symmetric matrix of pairwise correlations; `None` marks pairs involving a
/// constant column.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    names: Vec<String>,
    entries: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    /// Builds a matrix from explicit entries, checking shape and symmetry.
    pub fn new(names: Vec<String>, entries: Vec<Vec<Option<f64>>>) -> Result<Self> {
        let k = names.len();
        if entries.len() != k || entries.iter().any(|row| row.len() != k) {
            return Err(Error::LengthMismatch {
                left: k,
                right: entries.len(),
            });
        }
        for i in 0..k {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Graph(format!(
                        "correlation matrix not symmetric at ({}, {})",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(Self { names, entries })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.entries[i][j]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Upper-triangle pairs `(i, j, r)` with `i < j`, row-major.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Option<f64>)> + '_ {
        let k = self.len();
        (0..k).flat_map(move |i| (i + 1..k).map(move |j| (i, j, self.entries[i][j])))
    }
}

/// Pairwise Pearson correlations over `columns`, in the given order.
pub fn correlation_matrix(table: &SurveyTable, columns: &[String]) -> Result<CorrelationMatrix> {
    let data: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| table.column(c))
        .collect::<Result<_>>()?;
    let k = columns.len();
    let mut entries = vec![vec![None; k]; k];
    for i in 0..k {
        entries[i][i] = if data[i].len() >= 2 && !is_constant(&data[i]) {
            Some(1.0)
        } else {
            None
        };
        for j in i + 1..k {
            let r = pearson(&data[i], &data[j])?;
            entries[i][j] = r;
            entries[j][i] = r;
        }
    }
    CorrelationMatrix::new(columns.to_vec(), entries)
}
