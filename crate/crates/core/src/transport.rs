//! Eigenframe loops of real symmetric families: continuous eigenvector
//! matching around a parameter loop, sign fixing, gap monitoring and closure
//! analysis, and the full degeneracy test built on top.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::homotopy::{classify_loop, winding_number, FrameLoop, FrameSampler, LiftedCurve};
use crate::report::{Reason, TestReport};
use crate::skewlin::validate_so;

/// Weight scale for the integer assignment solver.
const ASSIGN_SCALE: f64 = 1e9;

pub type HamiltonianFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// A real symmetric `n × n` family over a `d`-dimensional parameter space.
#[derive(Clone)]
pub struct HamiltonianSampler {
    n: usize,
    d: usize,
    eval: HamiltonianFn,
}

impl fmt::Debug for HamiltonianSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianSampler")
            .field("n", &self.n)
            .field("d", &self.d)
            .finish()
    }
}

impl HamiltonianSampler {
    pub fn new<F>(n: usize, d: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        Self {
            n,
            d,
            eval: Arc::new(f),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn param_dim(&self) -> usize {
        self.d
    }

    /// Evaluates and checks shape and symmetry.
    pub fn eval(&self, q: &[f64], cfg: &Config) -> Result<DMatrix<f64>> {
        if q.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "parameter point of length {} for d = {}",
                q.len(),
                self.d
            )));
        }
        let h = (self.eval)(q);
        check_symmetric(&h, self.n, cfg)?;
        Ok(h)
    }
}

fn check_symmetric(h: &DMatrix<f64>, n: usize, cfg: &Config) -> Result<()> {
    if h.nrows() != n || h.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n}×{n}, got {}×{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let asym = (h - h.transpose()).amax();
    if asym > cfg.tol_sym * h.amax().max(1.0) {
        return Err(Error::InvalidInput(format!(
            "matrix is not symmetric (max |H − Hᵀ| = {asym:.3e})"
        )));
    }
    if h.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Shape of a closed loop in parameter space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopGeometry {
    /// Closed polyline traversed at constant speed; first vertex equals last.
    Polyline { vertices: Vec<Vec<f64>> },
    /// `c + cos(2πt)·u + sin(2πt)·v`.
    Ellipse {
        center: Vec<f64>,
        u: Vec<f64>,
        v: Vec<f64>,
    },
}

/// A loop Γ in parameter space together with its sampling density.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterLoop {
    geometry: LoopGeometry,
    /// Grid points including both ends `t = 0` and `t = 1`.
    samples: usize,
    cumulative: Vec<f64>,
}

impl ParameterLoop {
    pub fn new(geometry: LoopGeometry, samples: usize) -> Result<Self> {
        if samples < 3 {
            return Err(Error::InvalidInput(
                "a parameter loop needs at least three samples".into(),
            ));
        }
        let mut cumulative = Vec::new();
        match &geometry {
            LoopGeometry::Polyline { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::InvalidInput(
                        "a closed polyline needs at least three vertices".into(),
                    ));
                }
                let d = vertices[0].len();
                if d == 0 || vertices.iter().any(|v| v.len() != d) {
                    return Err(Error::DimensionMismatch(
                        "polyline vertices have inconsistent length".into(),
                    ));
                }
                if vertices[0] != *vertices.last().unwrap() {
                    return Err(Error::InvalidInput(
                        "polyline must end at its first vertex".into(),
                    ));
                }
                cumulative.push(0.0);
                for w in vertices.windows(2) {
                    let len = dist(&w[0], &w[1]);
                    if len == 0.0 {
                        return Err(Error::InvalidInput(
                            "consecutive polyline vertices coincide".into(),
                        ));
                    }
                    cumulative.push(cumulative.last().unwrap() + len);
                }
            }
            LoopGeometry::Ellipse { center, u, v } => {
                if center.is_empty() || u.len() != center.len() || v.len() != center.len() {
                    return Err(Error::DimensionMismatch(
                        "ellipse center and axes differ in length".into(),
                    ));
                }
                let cross = u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
                let nu = u.iter().map(|a| a * a).sum::<f64>();
                let nv = v.iter().map(|a| a * a).sum::<f64>();
                if nu * nv - cross * cross <= 1e-24 * (nu * nv).max(1.0) {
                    return Err(Error::InvalidInput(
                        "ellipse axes must be linearly independent".into(),
                    ));
                }
            }
        }
        Ok(Self {
            geometry,
            samples,
            cumulative,
        })
    }

    /// Circle of radius `r` around `(cx, cy)`, counterclockwise.
    pub fn circle(cx: f64, cy: f64, r: f64, samples: usize) -> Result<Self> {
        Self::ellipse([cx, cy], [r, r], 0.0, samples)
    }

    /// Planar ellipse with semi-axes `(a, b)` rotated by `tilt`.
    pub fn ellipse(center: [f64; 2], semi: [f64; 2], tilt: f64, samples: usize) -> Result<Self> {
        let (s, c) = tilt.sin_cos();
        Self::new(
            LoopGeometry::Ellipse {
                center: center.to_vec(),
                u: vec![semi[0] * c, semi[0] * s],
                v: vec![-semi[1] * s, semi[1] * c],
            },
            samples,
        )
    }

    pub fn geometry(&self) -> &LoopGeometry {
        &self.geometry
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn param_dim(&self) -> usize {
        match &self.geometry {
            LoopGeometry::Polyline { vertices } => vertices[0].len(),
            LoopGeometry::Ellipse { center, .. } => center.len(),
        }
    }

    /// The same loop with every interval halved.
    pub fn refined(&self) -> Self {
        Self {
            samples: 2 * self.samples - 1,
            ..self.clone()
        }
    }

    pub fn params(&self) -> Vec<f64> {
        let last = (self.samples - 1) as f64;
        (0..self.samples).map(|k| k as f64 / last).collect()
    }

    /// Point at `t ∈ [0, 1]`; `point(0) == point(1)` exactly.
    pub fn point(&self, t: f64) -> Vec<f64> {
        let t = if t >= 1.0 { 0.0 } else { t.max(0.0) };
        match &self.geometry {
            LoopGeometry::Polyline { vertices } => {
                let total = *self.cumulative.last().unwrap();
                let s = t * total;
                let k = self
                    .cumulative
                    .partition_point(|&c| c <= s)
                    .clamp(1, vertices.len() - 1)
                    - 1;
                let seg = self.cumulative[k + 1] - self.cumulative[k];
                let f = ((s - self.cumulative[k]) / seg).clamp(0.0, 1.0);
                vertices[k]
                    .iter()
                    .zip(&vertices[k + 1])
                    .map(|(a, b)| a + f * (b - a))
                    .collect()
            }
            LoopGeometry::Ellipse { center, u, v } => {
                let (s, c) = (TAU * t).sin_cos();
                (0..center.len())
                    .map(|i| center[i] + c * u[i] + s * v[i])
                    .collect()
            }
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub type PathRefiner = Arc<dyn Fn(f64) -> Result<DMatrix<f64>> + Send + Sync>;

/// Hamiltonian samples `H(t_k)` along a loop, optionally with a callback
/// that evaluates new parameters for refinement.
#[derive(Clone)]
pub struct HamiltonianPath {
    pub params: Vec<f64>,
    pub matrices: Vec<DMatrix<f64>>,
    pub refiner: Option<PathRefiner>,
}

impl fmt::Debug for HamiltonianPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianPath")
            .field("samples", &self.params.len())
            .field("refinable", &self.refiner.is_some())
            .finish()
    }
}

impl HamiltonianPath {
    /// Samples `h` along `l` on its uniform grid.
    pub fn from_sampler(h: &HamiltonianSampler, l: &ParameterLoop, cfg: &Config) -> Result<Self> {
        if h.param_dim() != l.param_dim() {
            return Err(Error::DimensionMismatch(format!(
                "model has {} parameters, loop lives in {} dimensions",
                h.param_dim(),
                l.param_dim()
            )));
        }
        let params = l.params();
        let matrices = cfg
            .exec
            .try_map_range(params.len(), |k| h.eval(&l.point(params[k]), cfg))?;
        let (h, l, c) = (h.clone(), l.clone(), cfg.clone());
        let refiner: PathRefiner = Arc::new(move |t| h.eval(&l.point(t), &c));
        Ok(Self {
            params,
            matrices,
            refiner: Some(refiner),
        })
    }

    /// Precomputed samples on a uniform grid, without refinement.
    pub fn from_table(matrices: Vec<DMatrix<f64>>) -> Result<Self> {
        if matrices.len() < 3 {
            return Err(Error::InvalidInput(
                "a Hamiltonian table needs at least three samples".into(),
            ));
        }
        let last = (matrices.len() - 1) as f64;
        let params = (0..matrices.len()).map(|k| k as f64 / last).collect();
        Ok(Self {
            params,
            matrices,
            refiner: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }
}

/// Eigenpairs with eigenvalues ascending.
fn eigen_sorted(h: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let eig = SymmetricEigen::try_new(h.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect::<Vec<_>>(),
    );
    Ok((values, vectors))
}

/// Eigenvalues and the selected eigenvector columns at one sample.
#[derive(Clone, Debug)]
struct Eigen {
    values: DVector<f64>,
    vectors: DMatrix<f64>,
}

fn eigen_bands(h: &DMatrix<f64>, bands: &Range<usize>, cfg: &Config) -> Result<Eigen> {
    check_symmetric(h, h.nrows(), cfg)?;
    let (values, vectors) = eigen_sorted(h)?;
    Ok(Eigen {
        values,
        vectors: vectors.columns(bands.start, bands.len()).into_owned(),
    })
}

/// Smallest eigenvalue gap that touches a selected band.
fn relevant_gap(values: &DVector<f64>, bands: &Range<usize>) -> f64 {
    let n = values.len();
    let lo = bands.start.saturating_sub(1);
    let hi = bands.end.min(n - 1);
    (lo..hi)
        .map(|i| values[i + 1] - values[i])
        .fold(f64::INFINITY, f64::min)
}

/// Matches the columns of `cur` to `prev` by optimal assignment on
/// `|prevᵀ cur|`, reorders and sign-fixes them. Returns the worst matched
/// overlap and whether the assignment left eigenvalue order.
fn match_frame(prev: &DMatrix<f64>, cur: &DMatrix<f64>) -> (DMatrix<f64>, f64, bool) {
    let p = prev.ncols();
    let overlaps = prev.transpose() * cur;
    let weights = Matrix::from_fn(p, p, |(i, j)| {
        (overlaps[(i, j)].abs() * ASSIGN_SCALE).round() as i64
    });
    let (_, assign) = kuhn_munkres(&weights);
    let mut out = DMatrix::zeros(cur.nrows(), p);
    let mut worst = f64::INFINITY;
    for (i, &j) in assign.iter().enumerate() {
        let o = overlaps[(i, j)];
        worst = worst.min(o.abs());
        let sign = if o < 0.0 { -1.0 } else { 1.0 };
        out.set_column(i, &(cur.column(j) * sign));
    }
    let permuted = assign.iter().enumerate().any(|(i, &j)| i != j);
    (out, worst, permuted)
}

/// Outcome of transporting eigenvectors around the loop.
#[derive(Clone)]
pub struct TransportResult {
    pub params: Vec<f64>,
    /// `n × p` frames with the selected eigenvectors as columns.
    pub frames: Vec<DMatrix<f64>>,
    /// Full sorted spectrum at each sample.
    pub eigenvalues: Vec<DVector<f64>>,
    pub bands: Range<usize>,
    pub min_gap: f64,
    /// `Ψ(t₀)ᵀ Ψ(t_N)`.
    pub closure: DMatrix<f64>,
    pub overlap_quality: f64,
    pub refinements: usize,
    refiner: Option<PathRefiner>,
    cfg: Config,
}

impl fmt::Debug for TransportResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransportResult")
            .field("samples", &self.params.len())
            .field("bands", &self.bands)
            .field("min_gap", &self.min_gap)
            .field("overlap_quality", &self.overlap_quality)
            .field("refinements", &self.refinements)
            .finish()
    }
}

impl TransportResult {
    pub fn dim(&self) -> usize {
        self.frames[0].nrows()
    }

    pub fn is_refinable(&self) -> bool {
        self.refiner.is_some()
    }

    /// Frame at a new parameter, matched against the nearest stored sample.
    pub fn frame_at(&self, t: f64) -> Result<DMatrix<f64>> {
        let refine = self
            .refiner
            .as_ref()
            .ok_or(Error::RefinementUnavailable { t })?;
        let e = eigen_bands(&refine(t)?, &self.bands, &self.cfg)?;
        let k = self
            .params
            .partition_point(|&s| s < t)
            .min(self.params.len() - 1);
        let nearest = if k > 0 && (t - self.params[k - 1]) < (self.params[k] - t) {
            k - 1
        } else {
            k
        };
        let (frame, worst, _) = match_frame(&self.frames[nearest], &e.vectors);
        if worst < self.cfg.overlap_min {
            return Err(Error::OverlapTooWeak { t, overlap: worst });
        }
        Ok(frame)
    }

    /// Square frames as an SO(n) loop, with a sampler when refinable.
    pub fn frame_loop(&self) -> Result<FrameLoop> {
        if self.bands.len() != self.dim() {
            return Err(Error::WrongDimension(
                "frame loop needs all bands; use the subspace test".into(),
            ));
        }
        let samples = self
            .frames
            .iter()
            .map(|f| validate_so(f.clone(), &self.cfg))
            .collect::<Result<Vec<_>>>()?;
        let l = FrameLoop::new(samples, self.params.clone(), &self.cfg)?;
        Ok(match self.refiner {
            Some(_) => {
                let me = self.clone();
                let cfg = self.cfg.clone();
                let sampler: FrameSampler = Arc::new(move |t| validate_so(me.frame_at(t)?, &cfg));
                l.with_sampler(sampler)
            }
            None => l,
        })
    }
}

struct Transporter<'a> {
    bands: &'a Range<usize>,
    cfg: &'a Config,
    refiner: Option<&'a PathRefiner>,
    params: Vec<f64>,
    frames: Vec<DMatrix<f64>>,
    eigenvalues: Vec<DVector<f64>>,
    worst: f64,
    refinements: usize,
    /// Gaps below this count as degeneracies on the path.
    gap_floor: f64,
    min_gap: f64,
}

impl Transporter<'_> {
    fn advance(&mut self, t1: f64, e1: Eigen, depth: usize) -> Result<()> {
        let gap = relevant_gap(&e1.values, self.bands);
        if gap < self.gap_floor {
            return Err(Error::DegenerateOnLoop { t: t1, gap });
        }
        self.min_gap = self.min_gap.min(gap);
        let t0 = *self.params.last().unwrap();
        let prev = self.frames.last().unwrap();
        let (frame, worst, permuted) = match_frame(prev, &e1.vectors);
        let step = (&frame - prev).amax();
        let smooth = worst >= self.cfg.overlap_min && step <= self.cfg.delta_step;
        // A reordering can only be resolved by sampling the avoided crossing;
        // when that is impossible keep it and let the closure report it.
        let settle = permuted && (self.refiner.is_none() || depth >= self.cfg.max_depth);
        if smooth && (!permuted || settle) {
            self.worst = self.worst.min(worst);
            self.params.push(t1);
            self.frames.push(frame);
            self.eigenvalues.push(e1.values);
            return Ok(());
        }
        let Some(refine) = self.refiner else {
            return Err(if worst < self.cfg.overlap_min {
                Error::OverlapTooWeak {
                    t: t1,
                    overlap: worst,
                }
            } else {
                Error::RefinementUnavailable { t: t1 }
            });
        };
        if depth >= self.cfg.max_depth {
            return Err(if worst < self.cfg.overlap_min {
                Error::OverlapTooWeak {
                    t: t1,
                    overlap: worst,
                }
            } else {
                Error::MaxDepthExceeded { depth, t: t1 }
            });
        }
        let mid = 0.5 * (t0 + t1);
        let em = eigen_bands(&refine(mid)?, self.bands, self.cfg)?;
        self.refinements += 1;
        self.advance(mid, em, depth + 1)?;
        self.advance(t1, e1, depth + 1)
    }
}

/// Transports the eigenvectors of the selected bands (all by default) around
/// the path.
pub fn transport_path(
    path: &HamiltonianPath,
    bands: Option<Range<usize>>,
    cfg: &Config,
) -> Result<TransportResult> {
    let n = path.dim();
    let bands = bands.unwrap_or(0..n);
    if bands.is_empty() || bands.end > n {
        return Err(Error::InvalidInput(format!(
            "band range {bands:?} outside 0..{n}"
        )));
    }
    if path.params.len() != path.matrices.len() || path.params.len() < 2 {
        return Err(Error::InvalidInput(
            "path needs matching parameter and matrix lists".into(),
        ));
    }
    let eig = cfg.exec.try_map_range(path.matrices.len(), |k| {
        eigen_bands(&path.matrices[k], &bands, cfg)
    })?;

    // Spectral range over the given samples sets the scale for gaps.
    let range = eig
        .iter()
        .map(|e| e.values[e.values.len() - 1] - e.values[0])
        .fold(0.0, f64::max);
    let scale = if range > 0.0 { range } else { 1.0 };
    let gap_floor = cfg.tol_gap * scale;
    let gap0 = relevant_gap(&eig[0].values, &bands);
    if gap0 < gap_floor {
        return Err(Error::DegenerateOnLoop {
            t: path.params[0],
            gap: gap0,
        });
    }

    let mut start = eig[0].vectors.clone();
    if bands.len() == n && start.determinant() < 0.0 {
        let mut last = start.column_mut(n - 1);
        last *= -1.0;
    }
    let mut tr = Transporter {
        bands: &bands,
        cfg,
        refiner: path.refiner.as_ref(),
        params: vec![path.params[0]],
        frames: vec![start],
        eigenvalues: vec![eig[0].values.clone()],
        worst: f64::INFINITY,
        refinements: 0,
        gap_floor,
        min_gap: gap0,
    };
    for (k, e) in eig.into_iter().enumerate().skip(1) {
        tr.advance(path.params[k], e, 0)?;
    }
    let Transporter {
        params,
        frames,
        eigenvalues,
        worst,
        refinements,
        min_gap,
        ..
    } = tr;
    let closure = frames[0].transpose() * frames.last().unwrap();
    Ok(TransportResult {
        params,
        frames,
        eigenvalues,
        bands,
        min_gap,
        closure,
        overlap_quality: worst,
        refinements,
        refiner: path.refiner.clone(),
        cfg: cfg.clone(),
    })
}

/// Samples `h` around `l` and transports the selected bands.
pub fn transport_frames(
    h: &HamiltonianSampler,
    l: &ParameterLoop,
    bands: Option<Range<usize>>,
    cfg: &Config,
) -> Result<TransportResult> {
    transport_path(&HamiltonianPath::from_sampler(h, l, cfg)?, bands, cfg)
}

/// How the transported frame closes on itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClosureKind {
    ClosedLoop,
    /// Diagonal closure with these signs, at least one of them `−1`.
    SignReversal(Vec<i8>),
}

impl ClosureKind {
    pub fn label(&self) -> &'static str {
        match self {
            ClosureKind::ClosedLoop => "CLOSED_LOOP",
            ClosureKind::SignReversal(_) => "SIGN_REVERSAL",
        }
    }
}

/// Reads a closure matrix as a signed permutation.
pub fn closure_classify(closure: &DMatrix<f64>, cfg: &Config) -> Result<ClosureKind> {
    let p = closure.nrows();
    if closure.ncols() != p {
        return Err(Error::DimensionMismatch(
            "closure matrix must be square".into(),
        ));
    }
    let mut perm = vec![0; p];
    let mut signs = vec![1i8; p];
    let mut deviation: f64 = 0.0;
    for i in 0..p {
        let row = closure.row(i);
        let j = row.transpose().iamax();
        perm[i] = j;
        signs[i] = if row[j] < 0.0 { -1 } else { 1 };
        deviation = deviation.max((row[j].abs() - 1.0).abs());
        for (c, x) in row.iter().enumerate() {
            if c != j {
                deviation = deviation.max(x.abs());
            }
        }
    }
    let mut seen = vec![false; p];
    for &j in &perm {
        if std::mem::replace(&mut seen[j], true) {
            deviation = deviation.max(1.0);
        }
    }
    if deviation > cfg.tol_perm {
        return Err(Error::NotSignedPermutation { deviation });
    }
    if perm.iter().enumerate().any(|(i, &j)| i != j) {
        return Err(Error::PermutedClosure { perm });
    }
    Ok(if signs.iter().any(|&s| s < 0) {
        ClosureKind::SignReversal(signs)
    } else {
        ClosureKind::ClosedLoop
    })
}

/// Homotopy verdict for a closed frame loop: winding for SO(2), the Z₂ class
/// for SO(n ≥ 3), nothing for SO(1).
pub fn loop_report(l: &FrameLoop, cfg: &Config) -> Result<TestReport> {
    Ok(loop_report_with_lift(l, cfg)?.0)
}

/// [`loop_report`] that also hands back the lifted curve for n ≥ 3.
pub fn loop_report_with_lift(
    l: &FrameLoop,
    cfg: &Config,
) -> Result<(TestReport, Option<LiftedCurve>)> {
    match l.dim() {
        1 => Ok((TestReport::new(Reason::None), None)),
        2 => {
            let w = winding_number(l, cfg)?;
            let mut r = TestReport::new(if w != 0 {
                Reason::NonzeroWinding
            } else {
                Reason::None
            });
            r.invariants.winding = Some(w);
            Ok((r, None))
        }
        _ => {
            let (lifted, v) = classify_loop(l, cfg)?;
            let reason = if v.h.rem_euclid(2) == 1 {
                Reason::NontrivialLoop
            } else {
                Reason::None
            };
            let mut r = TestReport::new(reason);
            r.invariants.k_list = Some(v.k_list);
            r.invariants.h = Some(v.h);
            r.invariants.parity = Some(v.parity);
            r.diagnostics.max_int_residual = Some(v.max_int_residual);
            r.diagnostics.refinements = Some(lifted.refinements);
            Ok((r, Some(lifted)))
        }
    }
}

/// Everything a full run produced, for diagnostics output.
#[derive(Clone, Debug)]
pub struct PathRun {
    pub report: TestReport,
    pub transport: TransportResult,
    /// Present when the closure was the identity and n ≥ 3.
    pub lift: Option<LiftedCurve>,
}

/// Full test: transport, closure analysis, then the homotopy class.
pub fn run_degeneracy_test(
    h: &HamiltonianSampler,
    l: &ParameterLoop,
    cfg: &Config,
) -> Result<TestReport> {
    run_path_test(&HamiltonianPath::from_sampler(h, l, cfg)?, cfg)
}

/// [`run_degeneracy_test`] on precomputed samples.
pub fn run_path_test(path: &HamiltonianPath, cfg: &Config) -> Result<TestReport> {
    Ok(run_path_detailed(path, cfg)?.report)
}

/// [`run_path_test`] keeping the transport and the lift.
pub fn run_path_detailed(path: &HamiltonianPath, cfg: &Config) -> Result<PathRun> {
    let tr = transport_path(path, None, cfg)?;
    let kind = closure_classify(&tr.closure, cfg)?;
    let (mut report, lift) = match &kind {
        ClosureKind::SignReversal(signs) => {
            let mut r = TestReport::new(Reason::SignReversal);
            r.invariants.closure_signs = Some(signs.clone());
            (r, None)
        }
        ClosureKind::ClosedLoop => {
            let (mut r, lift) = loop_report_with_lift(&tr.frame_loop()?, cfg)?;
            r.invariants.closure_signs = Some(vec![1; tr.dim()]);
            (r, lift)
        }
    };
    report.invariants.closure_kind = Some(kind.label().into());
    report.diagnostics.samples = Some(tr.params.len());
    report.diagnostics.min_gap = Some(tr.min_gap);
    report.diagnostics.overlap_quality = Some(tr.overlap_quality);
    let lift_refinements = report.diagnostics.refinements.unwrap_or(0);
    report.diagnostics.refinements = Some(tr.refinements + lift_refinements);
    Ok(PathRun {
        report,
        transport: tr,
        lift,
    })
}
