//! Frame-loop and matrix-stream files.
//!
//! JSON form:
//!
//! ```json
//! {"n": 3, "count": 2, "layout": "row-major", "matrices": [[...9 numbers...], [...]]}
//! ```
//!
//! with an optional `"params"` array of increasing values from 0 to 1. The
//! text form holds one matrix per block of whitespace-separated numbers,
//! blocks separated by blank lines; `#` starts a comment.

use std::fs;
use std::path::Path;

use eigenloop::homotopy::FrameLoop;
use eigenloop::skewlin::validate_so;
use eigenloop::Config;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const ROW_MAJOR: &str = "row-major";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub count: usize,
    pub layout: String,
    pub matrices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrices(matrices: &[DMatrix<f64>], params: Option<Vec<f64>>) -> Self {
        let n = matrices.first().map_or(0, |m| m.nrows());
        Self {
            n,
            count: matrices.len(),
            layout: ROW_MAJOR.into(),
            matrices: matrices
                .iter()
                .map(|m| m.transpose().iter().copied().collect())
                .collect(),
            params,
        }
    }

    fn check(&self, name: &str) -> CliResult<()> {
        if self.layout != ROW_MAJOR {
            return Err(CliError::parse(
                name,
                format!(
                    "unsupported layout '{}', expected '{ROW_MAJOR}'",
                    self.layout
                ),
            ));
        }
        if self.n == 0 {
            return Err(CliError::parse(name, "n must be positive"));
        }
        if self.count != self.matrices.len() {
            return Err(CliError::parse(
                name,
                format!(
                    "header says {} matrices, file has {}",
                    self.count,
                    self.matrices.len()
                ),
            ));
        }
        if let Some(k) = self
            .matrices
            .iter()
            .position(|m| m.len() != self.n * self.n)
        {
            return Err(CliError::parse(
                name,
                format!(
                    "matrix {k} has {} entries, expected {}",
                    self.matrices[k].len(),
                    self.n * self.n
                ),
            ));
        }
        if let Some(p) = &self.params {
            if p.len() != self.count {
                return Err(CliError::parse(
                    name,
                    format!("{} params for {} matrices", p.len(), self.count),
                ));
            }
        }
        Ok(())
    }

    pub fn to_matrices(&self) -> Vec<DMatrix<f64>> {
        self.matrices
            .iter()
            .map(|m| DMatrix::from_row_slice(self.n, self.n, m))
            .collect()
    }

    /// Blocks of `n` rows, separated by blank lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, m) in self.matrices.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            for row in m.chunks(self.n) {
                let cells: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

fn parse_text(name: &str, text: &str) -> CliResult<MatrixFile> {
    let mut blocks: Vec<Vec<f64>> = Vec::new();
    let mut current: Vec<f64> = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
            continue;
        }
        for tok in line.split_whitespace() {
            let x: f64 = tok.parse().map_err(|_| {
                CliError::parse(
                    name,
                    format!("line {}: '{tok}' is not a number", line_no + 1),
                )
            })?;
            current.push(x);
        }
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    let Some(first) = blocks.first() else {
        return Err(CliError::parse(name, "no matrices found"));
    };
    let n = (first.len() as f64).sqrt().round() as usize;
    if n * n != first.len() {
        return Err(CliError::parse(
            name,
            format!(
                "first block has {} numbers, not a square count",
                first.len()
            ),
        ));
    }
    Ok(MatrixFile {
        n,
        count: blocks.len(),
        layout: ROW_MAJOR.into(),
        matrices: blocks,
        params: None,
    })
}

/// Parses either format, chosen by the first non-blank character.
pub fn parse_matrix_file(name: &str, text: &str) -> CliResult<MatrixFile> {
    let file = if text.trim_start().starts_with('{') {
        serde_json::from_str::<MatrixFile>(text)
            .map_err(|e| CliError::parse(name, e.to_string()))?
    } else {
        parse_text(name, text)?
    };
    file.check(name)?;
    Ok(file)
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_string(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_matrix_file(path: &Path) -> CliResult<MatrixFile> {
    parse_matrix_file(&path.display().to_string(), &read_to_string(path)?)
}

/// Validates every sample as a rotation and builds the loop.
pub fn frame_loop_from_file(file: &MatrixFile, cfg: &Config) -> CliResult<FrameLoop> {
    let samples = file
        .to_matrices()
        .into_iter()
        .map(|m| validate_so(m, cfg))
        .collect::<eigenloop::Result<Vec<_>>>()?;
    Ok(match &file.params {
        Some(p) => FrameLoop::new(samples, p.clone(), cfg)?,
        None => FrameLoop::uniform(samples, cfg)?,
    })
}

pub fn frame_loop_to_file(l: &FrameLoop) -> MatrixFile {
    let matrices: Vec<DMatrix<f64>> = l.samples().iter().map(|s| s.as_matrix().clone()).collect();
    MatrixFile::from_matrices(&matrices, Some(l.params().to_vec()))
}

/// A JSON array of points, each an array of coordinates.
pub fn read_points(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    let name = path.display().to_string();
    let points: Vec<Vec<f64>> = serde_json::from_str(&read_to_string(path)?)
        .map_err(|e| CliError::parse(&name, e.to_string()))?;
    if let Some(first) = points.first() {
        if points.iter().any(|p| p.len() != first.len()) {
            return Err(CliError::parse(&name, "points have inconsistent dimension"));
        }
    }
    Ok(points)
}
