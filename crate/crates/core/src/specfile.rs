//! JSON description of a cocycle.
//!
//! ```json
//! {
//!   "d": 2,
//!   "alphabet": 2,
//!   "adjacency": [[1, 1], [1, 1]],
//!   "matrices": [[[2, 0], [0, 1]], [0.54, -0.84, 0.84, 0.54]],
//!   "theta": 0.5,
//!   "holder_alpha": 1.0
//! }
//! ```
//!
//! Each matrix is given either as nested rows or as a flat row-major array.
//! A block cocycle replaces `matrices` by `block_radius` and a `blocks` table
//! keyed by 1-based words of length `2 * block_radius + 1`; it is recoded to a
//! one-step cocycle on load.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cocycle::{BlockCocycle, Cocycle, Recoded};
use crate::matalg::Matrix;
use crate::symbolic::{Subshift, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixEntry {
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpecFile {
    pub d: usize,
    pub alphabet: usize,
    pub adjacency: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<MatrixEntry>>,
    pub theta: f64,
    pub holder_alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_radius: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BTreeMap<String, MatrixEntry>>,
}

/// A loaded spec: the one-step cocycle every command works with, plus the
/// recoding when the file described a block cocycle.
#[derive(Debug, Clone)]
pub struct LoadedSpec {
    pub file: CocycleSpecFile,
    pub cocycle: Cocycle,
    pub recoded: Option<Recoded>,
}

/// 1-based line and column of the first occurrence of `"key"`.
fn key_position(text: &str, key: &str) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    for (i, line) in text.lines().enumerate() {
        if let Some(col) = line.find(&needle) {
            return (i + 1, col + 1);
        }
    }
    (1, 1)
}

fn at(text: &str, key: &str, err: Error) -> Error {
    let (line, column) = key_position(text, key);
    let message = match err {
        Error::SpecFile { message, .. } => message,
        other => format!("{key}: {other}"),
    };
    Error::SpecFile { line, column, message }
}

fn to_matrix(entry: &MatrixEntry, d: usize, label: &str) -> Result<Matrix> {
    let flat: Vec<f64> = match entry {
        MatrixEntry::Rows(rows) => {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::InvalidMatrix(format!("{label} is not {d}x{d}")));
            }
            rows.iter().flatten().copied().collect()
        }
        MatrixEntry::Flat(v) => {
            if v.len() != d * d {
                return Err(Error::InvalidMatrix(format!(
                    "{label} has {} entries, expected {}",
                    v.len(),
                    d * d
                )));
            }
            v.clone()
        }
    };
    Ok(Matrix::from_row_slice(d, d, &flat))
}

impl CocycleSpecFile {
    pub fn from_cocycle(c: &Cocycle, theta: f64) -> Self {
        let d = c.d();
        CocycleSpecFile {
            d,
            alphabet: c.q(),
            adjacency: c.subshift().adjacency_rows(),
            matrices: Some(
                c.generators()
                    .iter()
                    .map(|g| MatrixEntry::Rows((0..d).map(|i| g.row(i).iter().copied().collect()).collect()))
                    .collect(),
            ),
            theta,
            holder_alpha: c.holder_alpha(),
            block_radius: None,
            blocks: None,
        }
    }
}

/// Parses and validates a spec file, reporting the line of the offending
/// field.
pub fn parse(text: &str) -> Result<LoadedSpec> {
    let file: CocycleSpecFile = serde_json::from_str(text).map_err(|e| Error::SpecFile {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.d == 0 {
        return Err(at(text, "d", Error::InvalidArgument("d must be positive".into())));
    }
    if file.adjacency.len() != file.alphabet || file.adjacency.iter().any(|r| r.len() != file.alphabet) {
        return Err(at(
            text,
            "adjacency",
            Error::InvalidAdjacency(format!("expected {0}x{0} rows for alphabet {0}", file.alphabet)),
        ));
    }
    let shift = Subshift::new(&file.adjacency, file.theta).map_err(|e| {
        let key = if matches!(e, Error::InvalidArgument(_)) { "theta" } else { "adjacency" };
        at(text, key, e)
    })?;
    let (cocycle, recoded) = match (&file.matrices, &file.block_radius, &file.blocks) {
        (Some(ms), None, None) => {
            if ms.len() != file.alphabet {
                return Err(at(
                    text,
                    "matrices",
                    Error::InvalidArgument(format!("{} matrices for alphabet {}", ms.len(), file.alphabet)),
                ));
            }
            let gens = ms
                .iter()
                .enumerate()
                .map(|(i, m)| to_matrix(m, file.d, &format!("matrix {}", i + 1)))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| at(text, "matrices", e))?;
            let c = Cocycle::new(shift, gens, file.holder_alpha).map_err(|e| {
                let key = if matches!(e, Error::InvalidArgument(ref m) if m.contains("Hoelder")) {
                    "holder_alpha"
                } else {
                    "matrices"
                };
                at(text, key, e)
            })?;
            (c, None)
        }
        (None, Some(radius), Some(blocks)) => {
            let mut table = BTreeMap::new();
            for (key, entry) in blocks {
                let word = Word::parse(key).map_err(|e| at(text, key, e))?;
                table.insert(word, to_matrix(entry, file.d, &format!("block {key}")).map_err(|e| at(text, key, e))?);
            }
            let block = BlockCocycle::new(shift, *radius, table, file.holder_alpha).map_err(|e| at(text, "blocks", e))?;
            let rec = block.recode().map_err(|e| at(text, "blocks", e))?;
            (rec.cocycle.clone(), Some(rec))
        }
        _ => {
            return Err(at(
                text,
                "d",
                Error::InvalidArgument("give either `matrices`, or `block_radius` together with `blocks`".into()),
            ))
        }
    };
    if cocycle.d() != file.d {
        return Err(at(text, "d", Error::InvalidArgument(format!("d = {} but matrices are {}x{}", file.d, cocycle.d(), cocycle.d()))));
    }
    Ok(LoadedSpec { file, cocycle, recoded })
}
