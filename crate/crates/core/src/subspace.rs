//! The test restricted to a fixed p-dimensional reference subspace: project p
//! transported eigenvectors, check that the projections stay independent,
//! orthonormalize them and classify the resulting loop in SO(p).

use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::homotopy::{FrameLoop, FrameSampler};
use crate::report::{Reason, TestReport};
use crate::skewlin::validate_so;
use crate::transport::{
    closure_classify, loop_report, transport_frames, ClosureKind, HamiltonianSampler,
    ParameterLoop, TransportResult,
};

/// Orthonormal basis `{|i⟩}` of a fixed subspace, stored as `n × p` columns.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceSubspace {
    basis: DMatrix<f64>,
}

impl ReferenceSubspace {
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let (n, p) = basis.shape();
        if p == 0 || p >= n {
            return Err(Error::InvalidInput(format!(
                "reference subspace needs 0 < p < n, got p = {p}, n = {n}"
            )));
        }
        let residual = (basis.transpose() * &basis - DMatrix::identity(p, p)).amax();
        if residual > 1e-10 {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(Self { basis })
    }

    /// Span of the first `p` coordinate vectors of ℝⁿ.
    pub fn coordinates(n: usize, p: usize) -> Result<Self> {
        Self::new(DMatrix::identity(n, p))
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Coefficients `Bᵀ Ψ` of the projected columns in the reference basis.
    pub fn coefficients(&self, frame: &DMatrix<f64>) -> DMatrix<f64> {
        self.basis.transpose() * frame
    }
}

/// Projection overlaps `⟨φᵢ|φᵢ⟩` along the loop and the resulting checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionDiagnostics {
    /// Per sample, per selected vector.
    pub overlaps: Vec<Vec<f64>>,
    pub min_overlap: f64,
    /// Sample and vector index of `min_overlap`.
    pub worst: (usize, usize),
    /// `1 − 1/p`.
    pub bound: f64,
    /// `min_overlap − bound`.
    pub margin: f64,
    pub condition_met: bool,
    /// Smallest singular value of any coefficient matrix.
    pub min_sigma: f64,
}

/// Lower bound on `⟨φᵢ|φᵢ⟩` that forces independence of the projections.
pub fn overlap_bound(p: usize) -> f64 {
    1.0 - 1.0 / p as f64
}

/// Computes overlaps and singular values without judging them.
pub fn project(
    frames: &[DMatrix<f64>],
    reference: &ReferenceSubspace,
    cfg: &Config,
) -> ProjectionDiagnostics {
    let p = reference.rank();
    let per_sample: Vec<(Vec<f64>, f64)> = cfg.exec.map(frames, |f| {
        let c = reference.coefficients(f);
        let overlaps = (0..c.ncols()).map(|i| c.column(i).norm_squared()).collect();
        let sigma = c.singular_values().min();
        (overlaps, sigma)
    });
    let mut min_overlap = f64::INFINITY;
    let mut worst = (0, 0);
    let mut min_sigma = f64::INFINITY;
    for (k, (o, s)) in per_sample.iter().enumerate() {
        min_sigma = min_sigma.min(*s);
        for (i, &x) in o.iter().enumerate() {
            if x < min_overlap {
                min_overlap = x;
                worst = (k, i);
            }
        }
    }
    let bound = overlap_bound(p);
    ProjectionDiagnostics {
        overlaps: per_sample.into_iter().map(|(o, _)| o).collect(),
        min_overlap,
        worst,
        bound,
        margin: min_overlap - bound,
        condition_met: min_overlap > bound + cfg.overlap_margin,
        min_sigma,
    }
}

static RANK_FAILURES: AtomicUsize = AtomicUsize::new(0);

/// How often, in this process, a projected set failed the independence
/// check after passing the overlap condition. Should stay zero.
pub fn rank_failures() -> usize {
    RANK_FAILURES.load(Ordering::Relaxed)
}

/// Projects and enforces the overlap condition, then independence.
///
/// Independence is implied by the condition, so a rank failure after the
/// condition passed indicates a numerical fault rather than bad input.
pub fn project_and_check(
    frames: &[DMatrix<f64>],
    params: &[f64],
    reference: &ReferenceSubspace,
    cfg: &Config,
) -> Result<ProjectionDiagnostics> {
    let d = project(frames, reference, cfg);
    if !d.condition_met {
        let (index, band) = d.worst;
        return Err(Error::ConditionViolated {
            index,
            t: params.get(index).copied().unwrap_or(f64::NAN),
            band,
            overlap: d.min_overlap,
            bound: d.bound,
        });
    }
    if d.min_sigma <= cfg.sigma_min {
        let index = frames
            .iter()
            .position(|f| reference.coefficients(f).singular_values().min() <= cfg.sigma_min)
            .unwrap_or(0);
        RANK_FAILURES.fetch_add(1, Ordering::Relaxed);
        log::error!(
            "projected set rank deficient although the overlap condition holds (σ = {:.3e})",
            d.min_sigma
        );
        return Err(Error::RankDeficient {
            index,
            sigma: d.min_sigma,
        });
    }
    Ok(d)
}

/// Classical Gram-Schmidt on the columns, in index order.
pub fn gram_schmidt_frame(phi: &DMatrix<f64>, cfg: &Config) -> Result<DMatrix<f64>> {
    let p = phi.ncols();
    let mut q = DMatrix::<f64>::zeros(phi.nrows(), p);
    for i in 0..p {
        let mut v = phi.column(i).into_owned();
        for j in 0..i {
            let proj = q.column(j).dot(&phi.column(i));
            v -= q.column(j) * proj;
        }
        let norm = v.norm();
        if norm <= cfg.sigma_min {
            return Err(Error::RankDeficient {
                index: i,
                sigma: norm,
            });
        }
        q.set_column(i, &(v / norm));
    }
    Ok(q)
}

fn flip_last(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let last = m.ncols() - 1;
    let mut col = m.column_mut(last);
    col *= -1.0;
    m
}

/// Gram-Schmidt frames of the projections as a loop in SO(p), oriented on
/// the first sample and refinable through the transport.
fn projected_loop(
    tr: &TransportResult,
    reference: &ReferenceSubspace,
    cfg: &Config,
) -> Result<FrameLoop> {
    let gs = cfg.exec.try_map_range(tr.frames.len(), |k| {
        gram_schmidt_frame(&reference.coefficients(&tr.frames[k]), cfg)
    })?;
    let flip = gs[0].determinant() < 0.0;
    let samples = gs
        .into_iter()
        .map(|g| validate_so(if flip { flip_last(g) } else { g }, cfg))
        .collect::<Result<Vec<_>>>()?;
    if !tr.is_refinable() {
        return FrameLoop::new(samples, tr.params.clone(), cfg);
    }
    let params = tr.params.clone();
    let (tr, reference, owned) = (tr.clone(), reference.clone(), cfg.clone());
    let sampler: FrameSampler = Arc::new(move |t| {
        let g = gram_schmidt_frame(&reference.coefficients(&tr.frame_at(t)?), &owned)?;
        validate_so(if flip { flip_last(g) } else { g }, &owned)
    });
    FrameLoop::densified(samples, params, sampler, cfg)
}

/// Where the projection condition was verified.
pub const CHECKED_LOOP_ONLY: &str = "loop_only";
pub const CHECKED_LOOP_AND_INTERIOR: &str = "loop_and_interior_samples";

/// Transport of the selected bands, projection onto `reference`, and the
/// homotopy test on the Gram-Schmidt frames in SO(p). `interior` points are
/// extra spot checks of the overlap condition inside the spanning surface.
pub fn subspace_degeneracy_test(
    h: &HamiltonianSampler,
    l: &ParameterLoop,
    reference: &ReferenceSubspace,
    bands: Range<usize>,
    interior: &[Vec<f64>],
    cfg: &Config,
) -> Result<(TestReport, ProjectionDiagnostics)> {
    let p = reference.rank();
    if bands.len() != p {
        return Err(Error::DimensionMismatch(format!(
            "{} bands selected for a rank-{p} reference",
            bands.len()
        )));
    }
    if reference.ambient_dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "reference lives in ℝ^{}, Hamiltonian is {}×{}",
            reference.ambient_dim(),
            h.dim(),
            h.dim()
        )));
    }
    let tr = transport_frames(h, l, Some(bands.clone()), cfg)?;
    let diag = project_and_check(&tr.frames, &tr.params, reference, cfg)?;

    if !interior.is_empty() {
        let frames = cfg.exec.try_map_range(interior.len(), |k| {
            let eig = nalgebra::SymmetricEigen::new(h.eval(&interior[k], cfg)?);
            let mut order: Vec<usize> = (0..h.dim()).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let cols: Vec<_> = order[bands.clone()]
                .iter()
                .map(|&c| eig.eigenvectors.column(c).into_owned())
                .collect();
            Ok::<_, Error>(DMatrix::from_columns(&cols))
        })?;
        project_and_check(&frames, &vec![f64::NAN; frames.len()], reference, cfg)?;
    }

    let mut report = match closure_classify(&tr.closure, cfg)? {
        ClosureKind::SignReversal(signs) => {
            let mut r = TestReport::new(Reason::SignReversal);
            r.invariants.closure_signs = Some(signs);
            r.invariants.closure_kind = Some("SIGN_REVERSAL".into());
            r
        }
        ClosureKind::ClosedLoop => {
            let mut r = loop_report(&projected_loop(&tr, reference, cfg)?, cfg)?;
            r.invariants.closure_kind = Some("CLOSED_LOOP".into());
            r
        }
    };
    report.surface_condition_checked = Some(
        if interior.is_empty() {
            CHECKED_LOOP_ONLY
        } else {
            CHECKED_LOOP_AND_INTERIOR
        }
        .into(),
    );
    report.diagnostics.samples = Some(tr.params.len());
    report.diagnostics.min_gap = Some(tr.min_gap);
    report.diagnostics.overlap_quality = Some(tr.overlap_quality);
    report.diagnostics.min_overlap = Some(diag.min_overlap);
    report.diagnostics.condition_margin = Some(diag.margin);
    let lift = report.diagnostics.refinements.unwrap_or(0);
    report.diagnostics.refinements = Some(tr.refinements + lift);
    Ok((report, diag))
}
