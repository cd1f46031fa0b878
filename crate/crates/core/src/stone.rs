//! Surface-sweep Berry-phase test for complex Hermitian families.
//!
//! A closed surface is swept by loops `L₁ … L_N` that start and end as points.
//! The cyclic Pancharatnam phase of one band is tracked continuously across
//! the sweep; it must return to a multiple `2πk` of its starting value, and
//! `k ≠ 0` forces a degeneracy inside the surface.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::report::{Reason, TestReport};

/// Overlap magnitude below which the discrete phase is meaningless.
const MIN_OVERLAP: f64 = 0.1;

/// Sphere sweeps are refined at most this many times on a phase jump.
const MAX_SWEEP_REFINEMENTS: usize = 2;

pub type HermitianFn = Arc<dyn Fn(&[f64]) -> DMatrix<Complex<f64>> + Send + Sync>;

/// A complex Hermitian `n × n` family over a `d`-dimensional parameter space.
#[derive(Clone)]
pub struct HermitianSampler {
    n: usize,
    d: usize,
    eval: HermitianFn,
}

impl fmt::Debug for HermitianSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermitianSampler")
            .field("n", &self.n)
            .field("d", &self.d)
            .finish()
    }
}

impl HermitianSampler {
    pub fn new<F>(n: usize, d: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<Complex<f64>> + Send + Sync + 'static,
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

    pub fn eval(&self, q: &[f64], cfg: &Config) -> Result<DMatrix<Complex<f64>>> {
        if q.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "parameter point of length {} for d = {}",
                q.len(),
                self.d
            )));
        }
        let h = (self.eval)(q);
        if h.nrows() != self.n || h.ncols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}×{0}, got {1}×{2}",
                self.n,
                h.nrows(),
                h.ncols()
            )));
        }
        let asym = (&h - h.adjoint())
            .iter()
            .fold(0.0, |m: f64, c| m.max(c.norm()));
        let scale = h.iter().fold(1.0, |m: f64, c| m.max(c.norm()));
        if asym > cfg.tol_sym * scale {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian (max |H − H†| = {asym:.3e})"
            )));
        }
        Ok(h)
    }
}

/// `γ = −arg Π⟨ψⱼ|ψⱼ₊₁⟩` over the closed chain (last state back to the first),
/// in `(−π, π]`. Independent of the phase of each state.
pub fn berry_phase(states: &[DVector<Complex<f64>>]) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::InvalidInput(
            "berry_phase needs at least one state".into(),
        ));
    }
    let mut prod = Complex::new(1.0, 0.0);
    for j in 0..states.len() {
        let next = &states[(j + 1) % states.len()];
        let o = states[j].dotc(next);
        if o.norm() < MIN_OVERLAP {
            return Err(Error::OverlapVanishes {
                index: j,
                overlap: o.norm(),
            });
        }
        prod *= o / o.norm();
    }
    let g = -prod.arg();
    Ok(if g <= -PI { g + TAU } else { g })
}

/// Family of loops sweeping a closed surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceSweep {
    /// Latitude circles from the north pole (`+z`) to the south pole, each
    /// traversed counterclockwise about `+z`.
    Sphere {
        center: [f64; 3],
        radius: f64,
        n_sweep: usize,
        n_loop: usize,
    },
    /// Explicit loops; each is a list of points, closed implicitly.
    Loops(Vec<Vec<Vec<f64>>>),
}

impl SurfaceSweep {
    pub fn sphere(center: [f64; 3], radius: f64, n_sweep: usize, n_loop: usize) -> Result<Self> {
        if n_sweep < 3 || n_loop < 3 {
            return Err(Error::InvalidInput(
                "sphere sweep needs n_sweep ≥ 3 and n_loop ≥ 3".into(),
            ));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        Ok(SurfaceSweep::Sphere {
            center,
            radius,
            n_sweep,
            n_loop,
        })
    }

    /// The same sweep with loop count and loop sampling doubled.
    pub fn refined(&self) -> Option<Self> {
        match *self {
            SurfaceSweep::Sphere {
                center,
                radius,
                n_sweep,
                n_loop,
            } => Some(SurfaceSweep::Sphere {
                center,
                radius,
                n_sweep: 2 * n_sweep - 1,
                n_loop: 2 * n_loop,
            }),
            SurfaceSweep::Loops(_) => None,
        }
    }

    /// The same surface with opposite orientation (every loop reversed).
    pub fn reversed_orientation(&self) -> Self {
        let mut loops = self.loops();
        for l in &mut loops {
            l.reverse();
        }
        SurfaceSweep::Loops(loops)
    }

    pub fn loops(&self) -> Vec<Vec<Vec<f64>>> {
        match self {
            SurfaceSweep::Sphere {
                center,
                radius,
                n_sweep,
                n_loop,
            } => (0..*n_sweep)
                .map(|i| {
                    let theta = PI * i as f64 / (*n_sweep - 1) as f64;
                    // Exact poles so the end loops are points.
                    let (st, ct) = if i == 0 {
                        (0.0, 1.0)
                    } else if i == n_sweep - 1 {
                        (0.0, -1.0)
                    } else {
                        theta.sin_cos()
                    };
                    (0..*n_loop)
                        .map(|j| {
                            let (sp, cp) = (TAU * j as f64 / *n_loop as f64).sin_cos();
                            vec![
                                center[0] + radius * st * cp,
                                center[1] + radius * st * sp,
                                center[2] + radius * ct,
                            ]
                        })
                        .collect()
                })
                .collect(),
            SurfaceSweep::Loops(loops) => loops.clone(),
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

fn diameter(points: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max(dist(a, b));
        }
    }
    d
}

fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let one_way = |x: &[Vec<f64>], y: &[Vec<f64>]| {
        x.iter()
            .map(|p| y.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

fn validate_sweep(loops: &[Vec<Vec<f64>>], d: usize, cfg: &Config) -> Result<()> {
    if loops.len() < 2 {
        return Err(Error::InvalidInput(
            "a sweep needs at least two loops".into(),
        ));
    }
    if loops
        .iter()
        .any(|l| l.is_empty() || l.iter().any(|p| p.len() != d))
    {
        return Err(Error::DimensionMismatch(format!(
            "sweep points must have {d} coordinates"
        )));
    }
    for end in [&loops[0], loops.last().unwrap()] {
        let size = diameter(end);
        if size > cfg.tol_point {
            return Err(Error::InvalidInput(format!(
                "end loops must be points (diameter {size:.3e})"
            )));
        }
    }
    for (i, w) in loops.windows(2).enumerate() {
        let h = hausdorff(&w[0], &w[1]);
        if h > cfg.sweep_step {
            return Err(Error::InvalidInput(format!(
                "loops {i} and {} are {h:.3e} apart (> sweep_step)",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Result of a surface sweep for one band.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Continuously unwrapped loop phases, starting at 0.
    pub gammas: Vec<f64>,
    pub k: i64,
    pub residual: f64,
    /// Smallest gap around the selected band over the surface.
    pub min_gap: f64,
    pub loops: usize,
    pub samples_per_loop: usize,
}

/// Selected-band eigenvectors along one loop and the smallest adjacent gap.
fn band_states(
    h: &HermitianSampler,
    points: &[Vec<f64>],
    band: usize,
    loop_index: usize,
    cfg: &Config,
) -> Result<(Vec<DVector<Complex<f64>>>, f64)> {
    let n = h.dim();
    let mut states = Vec::with_capacity(points.len());
    let mut min_gap = f64::INFINITY;
    for (j, q) in points.iter().enumerate() {
        let eig = SymmetricEigen::try_new(h.eval(q, cfg)?, 1e-15, 10_000).ok_or_else(|| {
            Error::NumericalFailure("Hermitian eigensolver did not converge".into())
        })?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let spread = (vals[n - 1] - vals[0]).abs().max(1.0);
        let mut gap = f64::INFINITY;
        if band > 0 {
            gap = gap.min(vals[band] - vals[band - 1]);
        }
        if band + 1 < n {
            gap = gap.min(vals[band + 1] - vals[band]);
        }
        if gap < cfg.tol_gap * spread {
            return Err(Error::DegenerateOnSurface {
                loop_index,
                point: j,
                gap,
            });
        }
        min_gap = min_gap.min(gap);
        states.push(eig.eigenvectors.column(order[band]).into_owned());
    }
    Ok((states, min_gap))
}

fn sweep_once(
    h: &HermitianSampler,
    sweep: &SurfaceSweep,
    band: usize,
    cfg: &Config,
) -> Result<SweepResult> {
    let loops = sweep.loops();
    validate_sweep(&loops, h.param_dim(), cfg)?;
    let per_loop = cfg.exec.try_map_range(loops.len(), |i| {
        let (states, gap) = band_states(h, &loops[i], band, i, cfg)?;
        Ok::<_, Error>((berry_phase(&states)?, gap))
    })?;
    let mut gammas = Vec::with_capacity(loops.len());
    gammas.push(0.0);
    for i in 1..per_loop.len() {
        let prev = gammas[i - 1];
        let raw = per_loop[i].0;
        let jump = (raw - prev + PI).rem_euclid(TAU) - PI;
        if jump.abs() > cfg.max_phase_step {
            return Err(Error::SweepDiscontinuous { index: i - 1, jump });
        }
        gammas.push(prev + jump);
    }
    let turns = gammas.last().unwrap() / TAU;
    let k = turns.round();
    let residual = (turns - k).abs();
    if residual > cfg.k_round_tol {
        return Err(Error::NotQuantized { residual });
    }
    let min_gap = per_loop.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok(SweepResult {
        gammas,
        k: k as i64,
        residual,
        min_gap,
        loops: loops.len(),
        samples_per_loop: loops.iter().map(Vec::len).max().unwrap_or(0),
    })
}

/// Sweeps the surface and returns the winding `k` of the Berry phase of
/// `band` (0 = lowest). Parametric sweeps are refined on a phase jump.
pub fn stone_test(
    h: &HermitianSampler,
    sweep: &SurfaceSweep,
    band: usize,
    cfg: &Config,
) -> Result<SweepResult> {
    if band >= h.dim() {
        return Err(Error::InvalidInput(format!(
            "band {band} outside 0..{}",
            h.dim()
        )));
    }
    let mut current = sweep.clone();
    let mut attempts = 0;
    loop {
        match sweep_once(h, &current, band, cfg) {
            Err(Error::SweepDiscontinuous { .. }) if attempts < MAX_SWEEP_REFINEMENTS => {
                if let Some(finer) = current.refined() {
                    current = finer;
                    attempts += 1;
                    continue;
                }
                return sweep_once(h, &current, band, cfg);
            }
            other => return other,
        }
    }
}

/// Report for a sweep: certified iff `k ≠ 0`.
pub fn stone_report(result: &SweepResult) -> TestReport {
    let mut r = TestReport::new(if result.k != 0 {
        Reason::NonzeroStoneK
    } else {
        Reason::None
    });
    r.invariants.stone_k = Some(result.k);
    r.diagnostics.stone_residual = Some(result.residual);
    r.diagnostics.min_gap = Some(result.min_gap);
    r.diagnostics.samples = Some(result.loops * result.samples_per_loop);
    r
}
