use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Each variant has a stable machine-readable [`code`](Error::code) and names
/// the pipeline [`stage`](Error::stage) it belongs to.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not orthogonal: max |RᵀR − I| = {residual:.3e}")]
    NotOrthogonal { residual: f64 },
    #[error("orthogonal matrix has determinant {det:.6} (improperly oriented frame)")]
    NegativeDeterminant { det: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("rotation angle {angle:.9} is within tolerance of π; principal logarithm is ill-conditioned")]
    AngleNearPi { angle: f64 },
    #[error("branch selection is ambiguous: {0}")]
    BranchAmbiguous(String),
    #[error("refinement needed near t = {t:.6} but no sampler is available")]
    RefinementUnavailable { t: f64 },
    #[error("refinement depth {depth} exceeded near t = {t:.6}")]
    MaxDepthExceeded { depth: usize, t: f64 },
    #[error("consecutive samples at t = {t:.6} differ by {step:.3e} (> {bound:.3e})")]
    DegenerateSamples { t: f64, step: f64, bound: f64 },
    #[error("endpoint angles are not quantized: worst residual {residual:.3e}")]
    NotQuantized { residual: f64 },
    #[error("wrong dimension: {0}")]
    WrongDimension(String),
    #[error("step too large near sample {index}: {detail}")]
    StepTooLarge { index: usize, detail: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("accumulated rotor is not ±1: scalar part {scalar:.6}, residual {residual:.3e}")]
    NotScalar { scalar: f64, residual: f64 },
    #[error("Hamiltonian is degenerate on the loop at t = {t:.6} (gap {gap:.3e})")]
    DegenerateOnLoop { t: f64, gap: f64 },
    #[error("eigenvector overlap {overlap:.4} too weak at t = {t:.6}")]
    OverlapTooWeak { t: f64, overlap: f64 },
    #[error("closure matrix is not a signed permutation (worst deviation {deviation:.3e})")]
    NotSignedPermutation { deviation: f64 },
    #[error("closure is a nontrivial permutation {perm:?}: inconsistent transport")]
    PermutedClosure { perm: Vec<usize> },
    #[error("projection condition violated at sample {index} (t = {t:.6}), band {band}: overlap {overlap:.6} ≤ bound {bound:.6}")]
    ConditionViolated {
        index: usize,
        t: f64,
        band: usize,
        overlap: f64,
        bound: f64,
    },
    #[error("projected vectors are rank deficient at sample {index} (σ_min = {sigma:.3e})")]
    RankDeficient { index: usize, sigma: f64 },
    #[error("consecutive state overlap {overlap:.3e} vanishes at index {index}")]
    OverlapVanishes { index: usize, overlap: f64 },
    #[error("phase jumps by {jump:.4} between sweep loops {index} and {next}", next = index + 1)]
    SweepDiscontinuous { index: usize, jump: f64 },
    #[error("selected band is degenerate on the surface at loop {loop_index}, point {point} (gap {gap:.3e})")]
    DegenerateOnSurface {
        loop_index: usize,
        point: usize,
        gap: f64,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotOrthogonal { .. } => "NOT_ORTHOGONAL",
            Error::NegativeDeterminant { .. } => "NEGATIVE_DETERMINANT",
            Error::NumericalFailure(_) => "NUMERICAL_FAILURE",
            Error::AngleNearPi { .. } => "ANGLE_NEAR_PI",
            Error::BranchAmbiguous(_) => "BRANCH_AMBIGUOUS",
            Error::RefinementUnavailable { .. } => "REFINEMENT_UNAVAILABLE",
            Error::MaxDepthExceeded { .. } => "MAX_DEPTH_EXCEEDED",
            Error::DegenerateSamples { .. } => "DEGENERATE_SAMPLES",
            Error::NotQuantized { .. } => "NOT_QUANTIZED",
            Error::WrongDimension(_) => "WRONG_DIMENSION",
            Error::StepTooLarge { .. } => "STEP_TOO_LARGE",
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::NotScalar { .. } => "NOT_SCALAR",
            Error::DegenerateOnLoop { .. } => "DEGENERATE_ON_LOOP",
            Error::OverlapTooWeak { .. } => "OVERLAP_TOO_WEAK",
            Error::NotSignedPermutation { .. } => "NOT_SIGNED_PERMUTATION",
            Error::PermutedClosure { .. } => "PERMUTED",
            Error::ConditionViolated { .. } => "CONDITION_VIOLATED",
            Error::RankDeficient { .. } => "RANK_DEFICIENT",
            Error::OverlapVanishes { .. } => "OVERLAP_VANISHES",
            Error::SweepDiscontinuous { .. } => "SWEEP_DISCONTINUOUS",
            Error::DegenerateOnSurface { .. } => "DEGENERATE_ON_SURFACE",
            Error::InvalidInput(_) => "INVALID_INPUT",
        }
    }

    pub fn stage(&self) -> &'static str {
        match self {
            Error::NotOrthogonal { .. }
            | Error::NegativeDeterminant { .. }
            | Error::NumericalFailure(_)
            | Error::AngleNearPi { .. }
            | Error::BranchAmbiguous(_) => "skewlin",
            Error::RefinementUnavailable { .. }
            | Error::MaxDepthExceeded { .. }
            | Error::DegenerateSamples { .. }
            | Error::NotQuantized { .. }
            | Error::WrongDimension(_)
            | Error::DimensionMismatch(_) => "homotopy",
            Error::StepTooLarge { .. } | Error::NotScalar { .. } => "oracle",
            Error::DegenerateOnLoop { .. }
            | Error::OverlapTooWeak { .. }
            | Error::NotSignedPermutation { .. }
            | Error::PermutedClosure { .. } => "transport",
            Error::ConditionViolated { .. } | Error::RankDeficient { .. } => "subspace",
            Error::OverlapVanishes { .. }
            | Error::SweepDiscontinuous { .. }
            | Error::DegenerateOnSurface { .. } => "stone",
            Error::InvalidInput(_) => "input",
        }
    }
}
