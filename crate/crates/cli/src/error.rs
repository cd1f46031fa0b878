use std::path::PathBuf;

use serde_json::{json, Value};
use thiserror::Error;

/// Library error codes in a fixed order; the exit code of the n-th entry is `10 + n`.
pub const LIBRARY_CODES: [&str; 23] = [
    "NOT_ORTHOGONAL",
    "NEGATIVE_DETERMINANT",
    "NUMERICAL_FAILURE",
    "ANGLE_NEAR_PI",
    "BRANCH_AMBIGUOUS",
    "REFINEMENT_UNAVAILABLE",
    "MAX_DEPTH_EXCEEDED",
    "DEGENERATE_SAMPLES",
    "NOT_QUANTIZED",
    "WRONG_DIMENSION",
    "STEP_TOO_LARGE",
    "DIMENSION_MISMATCH",
    "NOT_SCALAR",
    "DEGENERATE_ON_LOOP",
    "OVERLAP_TOO_WEAK",
    "NOT_SIGNED_PERMUTATION",
    "PERMUTED",
    "CONDITION_VIOLATED",
    "RANK_DEFICIENT",
    "OVERLAP_VANISHES",
    "SWEEP_DISCONTINUOUS",
    "DEGENERATE_ON_SURFACE",
    "INVALID_INPUT",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{source_name}: {message}")]
    Parse {
        source_name: String,
        message: String,
    },
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Library(#[from] eigenloop::Error),
}

impl CliError {
    pub fn parse(source_name: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse {
            source_name: source_name.into(),
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "USAGE_ERROR",
            CliError::Parse { .. } => "PARSE_ERROR",
            CliError::Config(_) => "CONFIG_ERROR",
            CliError::Io { .. } => "IO_ERROR",
            CliError::Library(e) => e.code(),
        }
    }

    pub fn stage(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "cli",
            CliError::Parse { .. } => "parse",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Library(e) => e.stage(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code_for(self.code())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "error": {
                "code": self.code(),
                "stage": self.stage(),
                "message": self.to_string(),
            }
        })
    }
}

pub fn exit_code_for(code: &str) -> i32 {
    match code {
        "USAGE_ERROR" => 2,
        "PARSE_ERROR" => 3,
        "CONFIG_ERROR" => 4,
        "IO_ERROR" => 5,
        other => LIBRARY_CODES
            .iter()
            .position(|c| *c == other)
            .map(|i| 10 + i as i32)
            .unwrap_or(1),
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn exit_codes_are_distinct() {
        let mut seen = BTreeSet::new();
        for code in ["USAGE_ERROR", "PARSE_ERROR", "CONFIG_ERROR", "IO_ERROR"]
            .iter()
            .chain(LIBRARY_CODES.iter())
        {
            let e = exit_code_for(code);
            assert!(e != 0 && e != 1);
            assert!(seen.insert(e), "{code} reuses {e}");
        }
    }

    #[test]
    fn library_codes_are_listed() {
        let samples = [
            eigenloop::Error::InvalidInput(String::new()),
            eigenloop::Error::PermutedClosure { perm: vec![] },
            eigenloop::Error::ConditionViolated {
                index: 0,
                t: 0.0,
                band: 0,
                overlap: 0.0,
                bound: 0.0,
            },
        ];
        for e in samples {
            assert!(LIBRARY_CODES.contains(&e.code()));
        }
    }
}
