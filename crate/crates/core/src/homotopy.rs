//! Loops in SO(n): lifting to 𝔰𝔬(n) by branch-matched continuation, the Z₂
//! class for n ≥ 3, the winding number for n = 2, and loop algebra.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::skewlin::{
    nearest_log, skew_canonical_form, CanonicalSkewForm, SkewSymmetricMatrix,
    SpecialOrthogonalMatrix,
};

/// Evaluates the loop at a new parameter in `[0, 1]`.
pub type FrameSampler = Arc<dyn Fn(f64) -> Result<SpecialOrthogonalMatrix> + Send + Sync>;

/// A closed, sampled loop `F(t₀) … F(t_N)` in SO(n) with `t₀ = 0`, `t_N = 1`.
#[derive(Clone)]
pub struct FrameLoop {
    samples: Vec<SpecialOrthogonalMatrix>,
    params: Vec<f64>,
    sampler: Option<FrameSampler>,
}

impl fmt::Debug for FrameLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrameLoop")
            .field("n", &self.dim())
            .field("samples", &self.samples.len())
            .field("refinable", &self.sampler.is_some())
            .finish()
    }
}

impl FrameLoop {
    /// Builds a loop and checks closure, step continuity and the parameter grid.
    pub fn new(
        samples: Vec<SpecialOrthogonalMatrix>,
        params: Vec<f64>,
        cfg: &Config,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidInput(
                "a frame loop needs at least two samples".into(),
            ));
        }
        if params.len() != samples.len() {
            return Err(Error::InvalidInput(format!(
                "{} samples but {} parameters",
                samples.len(),
                params.len()
            )));
        }
        let n = samples[0].dim();
        if let Some(bad) = samples.iter().find(|s| s.dim() != n) {
            return Err(Error::DimensionMismatch(format!(
                "sample of size {} in a loop of size {n}",
                bad.dim()
            )));
        }
        if params[0] != 0.0 || *params.last().unwrap() != 1.0 {
            return Err(Error::InvalidInput(
                "loop parameters must run from 0 to 1".into(),
            ));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(
                "loop parameters must be strictly increasing".into(),
            ));
        }
        let gap = samples[0].distance(samples.last().unwrap());
        if gap > cfg.tol_closure {
            return Err(Error::InvalidInput(format!(
                "loop is not closed: |F(1) − F(0)| = {gap:.3e}"
            )));
        }
        for (k, w) in samples.windows(2).enumerate() {
            let step = w[0].distance(&w[1]);
            if step > cfg.delta_step {
                return Err(Error::DegenerateSamples {
                    t: params[k],
                    step,
                    bound: cfg.delta_step,
                });
            }
        }
        Ok(Self {
            samples,
            params,
            sampler: None,
        })
    }

    /// Samples on the uniform grid `t_k = k/N`.
    pub fn uniform(samples: Vec<SpecialOrthogonalMatrix>, cfg: &Config) -> Result<Self> {
        let last = samples.len().saturating_sub(1).max(1) as f64;
        let params = (0..samples.len()).map(|k| k as f64 / last).collect();
        Self::new(samples, params, cfg)
    }

    /// Evaluates `f` on `count` uniform points and keeps it for refinement.
    pub fn from_fn<F>(count: usize, f: F, cfg: &Config) -> Result<Self>
    where
        F: Fn(f64) -> Result<SpecialOrthogonalMatrix> + Send + Sync + 'static,
    {
        if count < 2 {
            return Err(Error::InvalidInput(
                "a frame loop needs at least two samples".into(),
            ));
        }
        let last = (count - 1) as f64;
        let samples = cfg.exec.try_map_range(count, |k| f(k as f64 / last))?;
        Ok(Self::uniform(samples, cfg)?.with_sampler(Arc::new(f)))
    }

    pub fn with_sampler(mut self, sampler: FrameSampler) -> Self {
        self.sampler = Some(sampler);
        self
    }

    pub fn without_sampler(mut self) -> Self {
        self.sampler = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[SpecialOrthogonalMatrix] {
        &self.samples
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn sampler(&self) -> Option<&FrameSampler> {
        self.sampler.as_ref()
    }

    pub fn is_refinable(&self) -> bool {
        self.sampler.is_some()
    }

    /// Inserts the midpoint of every interval. Requires a sampler.
    pub fn refined(&self, cfg: &Config) -> Result<Self> {
        let sampler = self
            .sampler
            .clone()
            .ok_or(Error::RefinementUnavailable { t: 0.0 })?;
        let mids = cfg.exec.try_map_range(self.params.len() - 1, |k| {
            sampler(0.5 * (self.params[k] + self.params[k + 1]))
        })?;
        let mut samples = Vec::with_capacity(2 * self.samples.len() - 1);
        let mut params = Vec::with_capacity(samples.capacity());
        for (k, mid) in mids.into_iter().enumerate() {
            samples.push(self.samples[k].clone());
            params.push(self.params[k]);
            samples.push(mid);
            params.push(0.5 * (self.params[k] + self.params[k + 1]));
        }
        samples.push(self.samples.last().unwrap().clone());
        params.push(1.0);
        Ok(Self::new(samples, params, cfg)?.with_sampler(sampler))
    }

    /// `Q F(t) Qᵀ` for a fixed rotation `Q`.
    pub fn conjugated(&self, q: &SpecialOrthogonalMatrix) -> Self {
        let conj = |r: &SpecialOrthogonalMatrix| q.compose(r).compose(&q.transpose());
        let sampler = self.sampler.clone().map(|s| {
            let q = q.clone();
            Arc::new(move |t: f64| {
                let r = s(t)?;
                Ok(q.compose(&r).compose(&q.transpose()))
            }) as FrameSampler
        });
        Self {
            samples: self.samples.iter().map(conj).collect(),
            params: self.params.clone(),
            sampler,
        }
    }

    /// Like [`FrameLoop::new`], but bisects any interval whose step exceeds
    /// `delta_step` through `sampler` (up to `max_depth` levels) first.
    pub fn densified(
        samples: Vec<SpecialOrthogonalMatrix>,
        params: Vec<f64>,
        sampler: FrameSampler,
        cfg: &Config,
    ) -> Result<Self> {
        fn fill(
            out: &mut (Vec<SpecialOrthogonalMatrix>, Vec<f64>),
            t1: f64,
            r1: SpecialOrthogonalMatrix,
            sampler: &FrameSampler,
            depth: usize,
            cfg: &Config,
        ) -> Result<()> {
            let t0 = *out.1.last().unwrap();
            let step = out.0.last().unwrap().distance(&r1);
            if step > cfg.delta_step {
                if depth >= cfg.max_depth {
                    return Err(Error::DegenerateSamples {
                        t: t0,
                        step,
                        bound: cfg.delta_step,
                    });
                }
                let mid = 0.5 * (t0 + t1);
                let rm = sampler(mid)?;
                fill(out, mid, rm, sampler, depth + 1, cfg)?;
                return fill(out, t1, r1, sampler, depth + 1, cfg);
            }
            out.0.push(r1);
            out.1.push(t1);
            Ok(())
        }
        if samples.len() != params.len() || samples.is_empty() {
            return Self::new(samples, params, cfg);
        }
        let mut out = (vec![samples[0].clone()], vec![params[0]]);
        for (r, t) in samples.into_iter().zip(params).skip(1) {
            fill(&mut out, t, r, &sampler, 0, cfg)?;
        }
        Ok(Self::new(out.0, out.1, cfg)?.with_sampler(sampler))
    }

    fn based_at_identity(&self, cfg: &Config) -> bool {
        self.samples[0].distance(&SpecialOrthogonalMatrix::identity(self.dim())) <= cfg.tol_closure
    }
}

/// Left-multiplies every sample by `F(t₀)ᵀ` so the loop starts at the identity.
pub fn normalize_base_point(l: &FrameLoop) -> FrameLoop {
    let base = l.samples[0].transpose();
    let samples = l.samples.iter().map(|s| base.compose(s)).collect();
    let sampler = l.sampler.clone().map(|s| {
        let base = base.clone();
        Arc::new(move |t: f64| Ok(base.compose(&s(t)?))) as FrameSampler
    });
    FrameLoop {
        samples,
        params: l.params.clone(),
        sampler,
    }
}

/// Discretized curve in 𝔰𝔬(n) with `exp(F̃(t_k)) = F(t_k)` and `F̃(t₀) = 0`.
#[derive(Clone, Debug)]
pub struct LiftedCurve {
    pub params: Vec<f64>,
    pub points: Vec<SkewSymmetricMatrix>,
    /// Number of samples inserted by refinement.
    pub refinements: usize,
    /// Index of the last point of each segment. A loop that returns to the
    /// identity at an interior sample is lifted as a chain of loops, each
    /// restarting from zero.
    pub segment_ends: Vec<usize>,
}

impl LiftedCurve {
    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn endpoint(&self) -> &SkewSymmetricMatrix {
        self.points.last().unwrap()
    }

    /// Endpoint of every segment, in order.
    pub fn segment_endpoints(&self) -> impl Iterator<Item = &SkewSymmetricMatrix> {
        self.segment_ends.iter().map(|&i| &self.points[i])
    }

    /// Largest max-norm jump between consecutive points of the same segment.
    pub fn max_step(&self) -> f64 {
        (1..self.points.len())
            .filter(|i| !self.segment_ends.contains(&(i - 1)))
            .map(|i| self.points[i - 1].distance(&self.points[i]))
            .fold(0.0, f64::max)
    }
}

struct Lifter<'a> {
    l: &'a FrameLoop,
    cfg: &'a Config,
    params: Vec<f64>,
    points: Vec<SkewSymmetricMatrix>,
    frames: Vec<SpecialOrthogonalMatrix>,
    refinements: usize,
}

impl Lifter<'_> {
    fn step(&mut self, tb: f64, rb: SpecialOrthogonalMatrix, depth: usize) -> Result<()> {
        let ta = *self.params.last().unwrap();
        let ra = self.frames.last().unwrap().clone();
        let xa = self.points.last().unwrap().clone();
        let step = ra.distance(&rb);
        let attempt = (step <= self.cfg.delta_step).then(|| nearest_log(&rb, &xa, self.cfg));
        let failure = match attempt {
            Some(Ok(xb)) if xb.distance(&xa) <= self.cfg.delta_lift => {
                self.params.push(tb);
                self.points.push(xb);
                self.frames.push(rb);
                return Ok(());
            }
            Some(Ok(_)) | Some(Err(Error::BranchAmbiguous(_))) | None => None,
            Some(Err(e)) => Some(e),
        };
        if let Some(e) = failure {
            return Err(e);
        }
        let Some(sampler) = self.l.sampler.clone() else {
            return Err(if step > self.cfg.delta_step {
                Error::DegenerateSamples {
                    t: ta,
                    step,
                    bound: self.cfg.delta_step,
                }
            } else {
                Error::RefinementUnavailable { t: ta }
            });
        };
        if depth >= self.cfg.max_depth {
            return Err(if step > self.cfg.delta_step {
                Error::DegenerateSamples {
                    t: ta,
                    step,
                    bound: self.cfg.delta_step,
                }
            } else {
                Error::MaxDepthExceeded { depth, t: ta }
            });
        }
        let tm = 0.5 * (ta + tb);
        let rm = sampler(tm)?;
        self.refinements += 1;
        self.step(tm, rm, depth + 1)?;
        self.step(tb, rb, depth + 1)
    }
}

/// Lifts a loop based at the identity to 𝔰𝔬(n).
///
/// Starts from `F̃(t₀) = 0` and takes each next point as the logarithm of the
/// next sample nearest the previous point. Ambiguous branches and continuity
/// violations are resolved by bisecting the interval through the loop's
/// sampler. The last sample is taken as exactly `F(t₀)`, which the loop's
/// closure tolerance already vouches for.
///
/// Interior samples within the closure tolerance of the identity end a
/// segment: `exp` is singular over the identity once the lift has left zero,
/// so no continuous branch choice exists there. The lift restarts from zero
/// and the segment classes are added by [`classify`].
pub fn lift_loop(l: &FrameLoop, cfg: &Config) -> Result<LiftedCurve> {
    if !l.based_at_identity(cfg) {
        return Err(Error::InvalidInput(
            "loop must start at the identity; normalize the base point first".into(),
        ));
    }
    let n = l.dim();
    let mut lifter = Lifter {
        l,
        cfg,
        params: vec![0.0],
        points: vec![SkewSymmetricMatrix::zeros(n)],
        frames: vec![SpecialOrthogonalMatrix::identity(n)],
        refinements: 0,
    };
    let last = l.len() - 1;
    let identity = SpecialOrthogonalMatrix::identity(n);
    let mut segment_ends = Vec::new();
    for k in 1..=last {
        let at_identity = k == last || l.samples[k].distance(&identity) <= cfg.tol_closure;
        let rb = if at_identity {
            identity.clone()
        } else {
            l.samples[k].clone()
        };
        lifter.step(l.params[k], rb, 0)?;
        if at_identity {
            segment_ends.push(lifter.points.len() - 1);
            if k < last {
                lifter.params.push(l.params[k]);
                lifter.points.push(SkewSymmetricMatrix::zeros(n));
                lifter.frames.push(identity.clone());
            }
        }
    }
    Ok(LiftedCurve {
        params: lifter.params,
        points: lifter.points,
        refinements: lifter.refinements,
        segment_ends,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Trivial,
    Nontrivial,
}

impl Parity {
    pub fn from_sign(sign: i8) -> Self {
        if sign < 0 {
            Parity::Nontrivial
        } else {
            Parity::Trivial
        }
    }

    pub fn xor(self, other: Self) -> Self {
        if self == other {
            Parity::Trivial
        } else {
            Parity::Nontrivial
        }
    }
}

/// Z₂ class of a loop in SO(n ≥ 3) read from its lifted endpoint.
#[derive(Clone, Debug)]
pub struct HomotopyVerdict {
    pub k_list: Vec<i64>,
    pub h: i64,
    pub parity: Parity,
    pub endpoint_form: CanonicalSkewForm,
    pub max_int_residual: f64,
}

/// Quantizes the endpoint angles as `αᵢ = 2π kᵢ`; the loop is nontrivial iff
/// `Σ kᵢ` is odd.
///
/// For a lift split into several segments the per-segment lists are added
/// elementwise and `endpoint_form` is that of the final segment.
pub fn classify(lifted: &LiftedCurve, cfg: &Config) -> Result<HomotopyVerdict> {
    let n = lifted.dim();
    if n < 3 {
        return Err(Error::WrongDimension(format!(
            "classify needs n ≥ 3, got n = {n}; use winding_number"
        )));
    }
    let mut k_list = vec![0i64; n / 2];
    let mut worst: f64 = 0.0;
    let mut form = None;
    for end in lifted.segment_endpoints() {
        let f = skew_canonical_form(end)?;
        for (k, &a) in k_list.iter_mut().zip(&f.angles) {
            let turns = a / TAU;
            let r = turns.round();
            worst = worst.max((turns - r).abs());
            *k += r as i64;
        }
        form = Some(f);
    }
    let form = form.expect("lift has at least one segment");
    if worst > cfg.k_round_tol {
        return Err(Error::NotQuantized { residual: worst });
    }
    let h: i64 = k_list.iter().sum();
    let parity = if h.rem_euclid(2) == 1 {
        Parity::Nontrivial
    } else {
        Parity::Trivial
    };
    Ok(HomotopyVerdict {
        k_list,
        h,
        parity,
        endpoint_form: form,
        max_int_residual: worst,
    })
}

/// Normalizes, lifts and classifies in one go.
pub fn classify_loop(l: &FrameLoop, cfg: &Config) -> Result<(LiftedCurve, HomotopyVerdict)> {
    if l.dim() < 3 {
        return Err(Error::WrongDimension(format!(
            "classify needs n ≥ 3, got n = {}",
            l.dim()
        )));
    }
    let based = normalize_base_point(l);
    let lifted = lift_loop(&based, cfg)?;
    let verdict = classify(&lifted, cfg)?;
    Ok((lifted, verdict))
}

/// Winding number of a loop in SO(2).
pub fn winding_number(l: &FrameLoop, cfg: &Config) -> Result<i64> {
    if l.dim() != 2 {
        return Err(Error::WrongDimension(format!(
            "winding number needs n = 2, got n = {}",
            l.dim()
        )));
    }
    let angle = |r: &SpecialOrthogonalMatrix| {
        let m = r.as_matrix();
        m[(1, 0)].atan2(m[(0, 0)])
    };
    let mut total = 0.0;
    let mut prev = angle(&l.samples[0]);
    for (k, s) in l.samples.iter().enumerate().skip(1) {
        let a = angle(s);
        let d = (a - prev + PI).rem_euclid(TAU) - PI;
        if d.abs() >= PI / 2.0 {
            return Err(Error::StepTooLarge {
                index: k,
                detail: format!("angle step {d:.4} ≥ π/2"),
            });
        }
        total += d;
        prev = a;
    }
    let turns = total / TAU;
    let w = turns.round();
    if (turns - w).abs() >= cfg.k_round_tol {
        return Err(Error::NotQuantized {
            residual: (turns - w).abs(),
        });
    }
    Ok(w as i64)
}

fn require_based(l: &FrameLoop, cfg: &Config) -> Result<()> {
    if l.based_at_identity(cfg) {
        Ok(())
    } else {
        Err(Error::InvalidInput(
            "loop algebra needs loops based at the identity".into(),
        ))
    }
}

/// Path concatenation: `a` on `[0, ½]`, then `b` on `[½, 1]`.
pub fn concatenate(a: &FrameLoop, b: &FrameLoop, cfg: &Config) -> Result<FrameLoop> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cannot concatenate SO({}) and SO({}) loops",
            a.dim(),
            b.dim()
        )));
    }
    require_based(a, cfg)?;
    require_based(b, cfg)?;
    let mut samples = a.samples.clone();
    let mut params: Vec<f64> = a.params.iter().map(|t| 0.5 * t).collect();
    samples.extend(b.samples.iter().skip(1).cloned());
    params.extend(b.params.iter().skip(1).map(|t| 0.5 + 0.5 * t));
    *params.last_mut().unwrap() = 1.0;
    let sampler = match (a.sampler.clone(), b.sampler.clone()) {
        (Some(fa), Some(fb)) => Some(Arc::new(move |t: f64| {
            if t <= 0.5 {
                fa(2.0 * t)
            } else {
                fb(2.0 * t - 1.0)
            }
        }) as FrameSampler),
        _ => None,
    };
    let out = FrameLoop::new(samples, params, cfg)?;
    Ok(FrameLoop { sampler, ..out })
}

/// The loop traversed backwards.
pub fn reverse(a: &FrameLoop) -> FrameLoop {
    let samples = a.samples.iter().rev().cloned().collect();
    let params = a.params.iter().rev().map(|t| 1.0 - t).collect();
    let sampler = a
        .sampler
        .clone()
        .map(|s| Arc::new(move |t: f64| s(1.0 - t)) as FrameSampler);
    FrameLoop {
        samples,
        params,
        sampler,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skewlin::skew_exp;

    fn cfg() -> Config {
        Config::default()
    }

    fn geodesic(gen: SkewSymmetricMatrix, count: usize) -> FrameLoop {
        FrameLoop::from_fn(count, move |t| skew_exp(&gen.scale(t)), &cfg()).unwrap()
    }

    fn so2_loop(turns: f64, count: usize) -> FrameLoop {
        geodesic(
            SkewSymmetricMatrix::generator(2, 0, 1).scale(TAU * turns),
            count,
        )
    }

    #[test]
    fn constant_loop_lifts_to_zero() {
        let l = FrameLoop::uniform(vec![SpecialOrthogonalMatrix::identity(4); 10], &cfg()).unwrap();
        let lifted = lift_loop(&l, &cfg()).unwrap();
        assert!(lifted.points.iter().all(|p| p.max_abs() == 0.0));
        let v = classify(&lifted, &cfg()).unwrap();
        assert_eq!(v.h, 0);
        assert_eq!(v.parity, Parity::Trivial);
    }

    #[test]
    fn constant_loop_normalizes_to_identity() {
        let r0 = skew_exp(&SkewSymmetricMatrix::generator(3, 0, 2).scale(0.7)).unwrap();
        let l = FrameLoop::uniform(vec![r0; 5], &cfg()).unwrap();
        let based = normalize_base_point(&l);
        for s in based.samples() {
            assert!(s.distance(&SpecialOrthogonalMatrix::identity(3)) < 1e-15);
        }
    }

    #[test]
    fn geodesic_lift_is_linear() {
        let y1 = SkewSymmetricMatrix::generator(4, 0, 1);
        let l = geodesic(y1.scale(TAU), 64);
        let lifted = lift_loop(&l, &cfg()).unwrap();
        for (t, p) in lifted.params.iter().zip(&lifted.points) {
            assert!(p.distance(&y1.scale(TAU * t)) < 1e-10, "t = {t}");
        }
        let v = classify(&lifted, &cfg()).unwrap();
        assert_eq!(v.k_list, vec![1, 0]);
        assert_eq!(v.parity, Parity::Nontrivial);
    }

    #[test]
    fn tight_lift_bound_refines_through_sampler() {
        let y1 = SkewSymmetricMatrix::generator(3, 0, 1);
        let l = geodesic(y1.scale(TAU), 16);
        let tight = Config {
            delta_lift: 0.1,
            ..cfg()
        };
        let lifted = lift_loop(&l, &tight).unwrap();
        assert!(lifted.refinements > 0);
        assert!(lifted.max_step() <= 0.1);
        assert_eq!(classify(&lifted, &tight).unwrap().h, 1);
        let bare = l.clone().without_sampler();
        assert!(matches!(
            lift_loop(&bare, &tight),
            Err(Error::RefinementUnavailable { .. })
        ));
        let shallow = Config {
            max_depth: 1,
            ..tight
        };
        assert!(matches!(
            lift_loop(&l, &shallow),
            Err(Error::MaxDepthExceeded { .. })
        ));
    }

    #[test]
    fn classify_rejects_so2() {
        let l = so2_loop(1.0, 32);
        let lifted = lift_loop(&l, &cfg()).unwrap();
        assert!(matches!(
            classify(&lifted, &cfg()),
            Err(Error::WrongDimension(_))
        ));
    }

    #[test]
    fn winding_numbers() {
        let c = FrameLoop::uniform(vec![SpecialOrthogonalMatrix::identity(2); 4], &cfg()).unwrap();
        assert_eq!(winding_number(&c, &cfg()).unwrap(), 0);
        assert_eq!(winding_number(&so2_loop(1.0, 32), &cfg()).unwrap(), 1);
        assert_eq!(winding_number(&so2_loop(-2.0, 64), &cfg()).unwrap(), -2);
        let loose = Config {
            delta_step: 2.5,
            ..cfg()
        };
        let gen = SkewSymmetricMatrix::generator(2, 0, 1).scale(TAU);
        let coarse = FrameLoop::from_fn(4, move |t| skew_exp(&gen.scale(t)), &loose).unwrap();
        assert!(matches!(
            winding_number(&coarse, &loose),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn concatenation_and_reverse() {
        let a = so2_loop(1.0, 32);
        let b = so2_loop(-3.0, 80);
        let ab = concatenate(&a, &b, &cfg()).unwrap();
        assert_eq!(winding_number(&ab, &cfg()).unwrap(), -2);
        assert_eq!(winding_number(&reverse(&b), &cfg()).unwrap(), 3);
        let c = geodesic(SkewSymmetricMatrix::generator(3, 1, 2).scale(TAU), 40);
        let cc = concatenate(&c, &reverse(&c), &cfg()).unwrap();
        let (_, v) = classify_loop(&cc, &cfg()).unwrap();
        assert_eq!(v.parity, Parity::Trivial);
        let two = geodesic(SkewSymmetricMatrix::generator(5, 0, 1).scale(TAU), 40);
        assert!(matches!(
            concatenate(&c, &two, &cfg()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn loop_validation() {
        let r = skew_exp(&SkewSymmetricMatrix::generator(3, 0, 1).scale(0.3)).unwrap();
        let open = vec![SpecialOrthogonalMatrix::identity(3), r];
        assert!(matches!(
            FrameLoop::uniform(open, &cfg()),
            Err(Error::InvalidInput(_))
        ));
        let far = skew_exp(&SkewSymmetricMatrix::generator(3, 0, 1).scale(2.0)).unwrap();
        let jumpy = vec![
            SpecialOrthogonalMatrix::identity(3),
            far,
            SpecialOrthogonalMatrix::identity(3),
        ];
        assert!(matches!(
            FrameLoop::uniform(jumpy, &cfg()),
            Err(Error::DegenerateSamples { .. })
        ));
    }
}
