//! Built-in Hamiltonian families and frame-loop generators with known answers.

use std::collections::BTreeMap;
use std::f64::consts::{SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::homotopy::{FrameLoop, Parity};
use crate::oracles::spin_lift_sign;
use crate::skewlin::{
    principal_log, skew_canonical_form, skew_exp, SkewSymmetricMatrix, SpecialOrthogonalMatrix,
};
use crate::stone::HermitianSampler;
use crate::transport::HamiltonianSampler;

/// Largest rotation angle per sample step of generated loops.
const ARC_STEP: f64 = 0.2;

/// `F(θ)`, the worked SO(3) frame loop: a rotation by θ about `(−1, 0, 1)/√2`.
pub fn jt_frame(theta: f64) -> SpecialOrthogonalMatrix {
    let (s, c) = theta.sin_cos();
    let r = s / SQRT_2;
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            0.5 * (c + 1.0),
            -r,
            0.5 * (c - 1.0),
            r,
            c,
            r,
            0.5 * (c - 1.0),
            -r,
            0.5 * (c + 1.0),
        ],
    );
    SpecialOrthogonalMatrix::from_matrix_unchecked(m)
}

/// The explicit lift `F̃(θ) = (θ/√2)·[[0,−1,0],[1,0,1],[0,−1,0]]`.
pub fn jt_lift(theta: f64) -> SkewSymmetricMatrix {
    let mut a = SkewSymmetricMatrix::zeros(3);
    a.set(1, 0, 1.0);
    a.set(1, 2, 1.0);
    a.scale(theta / SQRT_2)
}

/// `F(2πt)` on `num_samples` uniform points (both ends included), refinable.
pub fn jt_frame_loop(num_samples: usize, cfg: &Config) -> Result<FrameLoop> {
    if num_samples < 16 {
        return Err(Error::InvalidInput(format!(
            "need at least 16 samples, got {num_samples}"
        )));
    }
    FrameLoop::from_fn(num_samples, |t| Ok(jt_frame(TAU * t)), cfg)
}

/// `r·F(θ) diag(−1, 0, 1) F(θ)ᵀ` at `(x, y) = r(cos θ, sin θ)`; its
/// eigenframe around any loop enclosing the origin is the `F(θ)` loop.
pub fn jt_t_tau2(x: f64, y: f64) -> DMatrix<f64> {
    let r = x.hypot(y);
    let f = jt_frame(y.atan2(x)).into_matrix();
    let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-r, 0.0, r]));
    let h = &f * lambda * f.transpose();
    (&h + h.transpose()) * 0.5
}

/// `[[x, y], [y, −x]]`, a conical intersection at the origin.
pub fn two_level_ci(x: f64, y: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[x, y, y, -x])
}

/// `[[f, g], [g, −f]]` with `f + ig = ((x − a) + iy)((x + a) + iy)`:
/// conical intersections at `(±a, 0)` only.
pub fn two_center_ci(x: f64, y: f64, a: f64) -> DMatrix<f64> {
    let f = x * x - a * a - y * y;
    let g = 2.0 * x * y;
    DMatrix::from_row_slice(2, 2, &[f, g, g, -f])
}

/// `Q·σ = [[z, x − iy], [x + iy, −z]]`, degenerate only at the origin.
pub fn spin_half_monopole(q: &[f64]) -> DMatrix<Complex<f64>> {
    let (x, y, z) = (q[0], q[1], q[2]);
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex::new(z, 0.0),
            Complex::new(x, -y),
            Complex::new(x, y),
            Complex::new(-z, 0.0),
        ],
    )
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = gaussian_matrix(rng, n, n);
    (&a + a.transpose()) * 0.5
}

/// `A₀ + x A₁ + y A₂` with seeded Gaussian symmetric `Aᵢ`.
pub fn random_symmetric_family(n: usize, seed: u64) -> HamiltonianSampler {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<DMatrix<f64>> = (0..3).map(|_| random_symmetric(&mut rng, n)).collect();
    HamiltonianSampler::new(n, 2, move |q| &a[0] + &a[1] * q[0] + &a[2] * q[1])
}

/// The 3×3 block coupled to `n − 3` spectator levels:
/// `[[H₃(Q), ε C(Q)], [ε C(Q)ᵀ, H_rest]]` with `H₃ = jt_t_tau2`,
/// `C(Q) = C₀ + x C₁ + y C₂` seeded, and `H_rest = diag(2, 2.37, …)`.
pub fn embedded_block(n: usize, eps: f64, seed: u64) -> Result<HamiltonianSampler> {
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "embedded_block needs n ≥ 4, got {n}"
        )));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidInput(format!(
            "embedded_block needs 0 ≤ eps < 1, got {eps}"
        )));
    }
    let m = n - 3;
    let [c0, c1, c2] = coupling_terms(n, seed);
    Ok(HamiltonianSampler::new(n, 2, move |q| {
        let mut h = DMatrix::zeros(n, n);
        h.view_mut((0, 0), (3, 3)).copy_from(&jt_t_tau2(q[0], q[1]));
        let c = (&c0 + &c1 * q[0] + &c2 * q[1]) * eps;
        h.view_mut((0, 3), (3, m)).copy_from(&c);
        h.view_mut((3, 0), (m, 3)).copy_from(&c.transpose());
        for j in 0..m {
            h[(3 + j, 3 + j)] = 2.0 + 0.37 * j as f64;
        }
        h
    }))
}

/// Coupling block `C(Q)` of [`embedded_block`] without the ε factor.
pub fn embedded_coupling(n: usize, seed: u64, q: &[f64]) -> DMatrix<f64> {
    let [c0, c1, c2] = coupling_terms(n, seed);
    c0 + c1 * q[0] + c2 * q[1]
}

fn coupling_terms(n: usize, seed: u64) -> [DMatrix<f64>; 3] {
    let m = n - 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c0 = DMatrix::from_fn(3, m, |_, _| rng.gen_range(-2.0..2.0));
    let c1 = DMatrix::from_fn(3, m, |_, _| rng.gen_range(-1.0..1.0));
    let c2 = DMatrix::from_fn(3, m, |_, _| rng.gen_range(-1.0..1.0));
    [c0, c1, c2]
}

fn random_rotation(rng: &mut ChaCha8Rng, n: usize) -> Result<SpecialOrthogonalMatrix> {
    let a = gaussian_matrix(rng, n, n);
    skew_exp(&SkewSymmetricMatrix::from_skew_part(&(a * 2.0)))
}

fn random_generator(rng: &mut ChaCha8Rng, n: usize, angle: f64) -> Result<SkewSymmetricMatrix> {
    let a = SkewSymmetricMatrix::from_skew_part(&gaussian_matrix(rng, n, n));
    let widest = skew_canonical_form(&a)?
        .angles
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(a.scale(angle / widest))
}

/// Piecewise geodesic loop `t ↦ W_i exp(s X_i)`.
#[derive(Clone)]
struct ArcLoop {
    arcs: Vec<(SpecialOrthogonalMatrix, SkewSymmetricMatrix)>,
    /// Generator of a full turn multiplied in pointwise, `B(t)·exp(t·Y)`.
    twist: Option<SkewSymmetricMatrix>,
}

impl ArcLoop {
    fn eval(&self, t: f64) -> Result<SpecialOrthogonalMatrix> {
        let count = self.arcs.len();
        if t >= 1.0 {
            return Ok(SpecialOrthogonalMatrix::identity(self.arcs[0].0.dim()));
        }
        let pos = t.max(0.0) * count as f64;
        let i = (pos.floor() as usize).min(count - 1);
        let (w, x) = &self.arcs[i];
        let base = w.compose(&skew_exp(&x.scale(pos - i as f64))?);
        match &self.twist {
            Some(y) => Ok(base.compose(&skew_exp(&y.scale(t.max(0.0)))?)),
            None => Ok(base),
        }
    }

    fn widest_angle(&self) -> Result<f64> {
        let mut widest: f64 = 0.0;
        for (_, x) in &self.arcs {
            widest = widest.max(
                skew_canonical_form(x)?
                    .angles
                    .iter()
                    .fold(0.0, |m, a| m.max(a.abs())),
            );
        }
        Ok(widest)
    }

    fn to_loop(&self, cfg: &Config) -> Result<FrameLoop> {
        let per_arc = ((self.widest_angle()? / ARC_STEP).ceil() as usize).max(2);
        let mut count = self.arcs.len() * per_arc;
        if self.twist.is_some() {
            // Half the step budget each for the arcs and the turn.
            count = 2 * count.max((TAU / ARC_STEP).ceil() as usize);
        }
        let me = self.clone();
        FrameLoop::from_fn(count + 1, move |t| me.eval(t), cfg)
    }
}

/// A full turn in a random plane.
fn random_turn(rng: &mut ChaCha8Rng, n: usize) -> Result<SkewSymmetricMatrix> {
    let q = random_rotation(rng, n)?;
    Ok(SkewSymmetricMatrix::generator(n, 0, 1)
        .scale(TAU)
        .conjugate(q.as_matrix()))
}

/// A smooth random loop in SO(n) of the requested class, built from random
/// geodesic arcs closed by a principal-logarithm arc. When the class has to
/// flip, the loop is multiplied pointwise by a full turn in a random plane,
/// which keeps it away from the identity between its endpoints. The class is
/// verified by the spin oracle for n ≤ 12.
pub fn random_so_loop(n: usize, seed: u64, target: Parity, cfg: &Config) -> Result<FrameLoop> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "random_so_loop needs n ≥ 3, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs = loop {
        let count = rng.gen_range(2..=4);
        let mut w = SpecialOrthogonalMatrix::identity(n);
        let mut arcs = Vec::with_capacity(count + 1);
        for _ in 0..count {
            let angle = rng.gen_range(0.5..3.0);
            let x = random_generator(&mut rng, n, angle)?;
            let next = w.compose(&skew_exp(&x)?);
            arcs.push((w, x));
            w = next;
        }
        match principal_log(&w.transpose(), cfg) {
            Ok(back) => {
                arcs.push((w, back));
                break arcs;
            }
            Err(Error::AngleNearPi { .. }) => continue,
            Err(e) => return Err(e),
        }
    };
    let turn = random_turn(&mut rng, n)?;
    if n <= crate::oracles::MAX_ROTOR_DIM {
        let mut l = ArcLoop {
            arcs: arcs.clone(),
            twist: None,
        }
        .to_loop(cfg)?;
        if Parity::from_sign(spin_lift_sign(&l, cfg)?) != target {
            l = ArcLoop {
                arcs,
                twist: Some(turn),
            }
            .to_loop(cfg)?;
        }
        let got = Parity::from_sign(spin_lift_sign(&l, cfg)?);
        if got != target {
            return Err(Error::NumericalFailure(format!(
                "generated loop has class {got:?}, wanted {target:?}"
            )));
        }
        Ok(l)
    } else {
        // No oracle this large: retrace the open chain, which is contractible
        // by construction, and twist by a full turn for the nontrivial class.
        let open = &arcs[..arcs.len() - 1];
        let mut retraced = open.to_vec();
        for (w, x) in open.iter().rev() {
            retraced.push((w.compose(&skew_exp(x)?), x.scale(-1.0)));
        }
        ArcLoop {
            arcs: retraced,
            twist: (target == Parity::Nontrivial).then_some(turn),
        }
        .to_loop(cfg)
    }
}

/// A loop in SO(2) winding `turns` times, with a seeded smooth speed profile.
pub fn random_so2_loop(turns: i64, seed: u64, cfg: &Config) -> Result<FrameLoop> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wobble: f64 = rng.gen_range(-0.9..0.9);
    let phase: f64 = rng.gen_range(0.0..TAU);
    let total = TAU * turns as f64;
    // θ(t) = total·t + w·(sin(2πt + φ) − sin φ)/2π keeps θ(0)=0, θ(1)=total.
    let angle = move |t: f64| total * t + wobble * ((TAU * t + phase).sin() - phase.sin());
    let count = ((total.abs() + 2.0 * wobble.abs() * TAU) / ARC_STEP).ceil() as usize + 8;
    FrameLoop::from_fn(
        count,
        move |t| {
            skew_exp(&SkewSymmetricMatrix::generator(2, 0, 1).scale(if t >= 1.0 {
                0.0
            } else {
                angle(t)
            }))
        },
        cfg,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    TwoLevelCi,
    TwoCenterCi,
    JtTTau2,
    EmbeddedBlock,
    RandomSymmetricFamily,
    SpinHalfMonopole,
}

impl ModelName {
    pub const ALL: [ModelName; 6] = [
        ModelName::TwoLevelCi,
        ModelName::TwoCenterCi,
        ModelName::JtTTau2,
        ModelName::EmbeddedBlock,
        ModelName::RandomSymmetricFamily,
        ModelName::SpinHalfMonopole,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::TwoLevelCi => "two_level_ci",
            ModelName::TwoCenterCi => "two_center_ci",
            ModelName::JtTTau2 => "jt_t_tau2",
            ModelName::EmbeddedBlock => "embedded_block",
            ModelName::RandomSymmetricFamily => "random_symmetric_family",
            ModelName::SpinHalfMonopole => "spin_half_monopole",
        }
    }

    /// Accepted parameters with their defaults.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            ModelName::TwoLevelCi | ModelName::JtTTau2 | ModelName::SpinHalfMonopole => &[],
            ModelName::TwoCenterCi => &[("a", 1.0)],
            ModelName::EmbeddedBlock => &[("n", 10.0), ("eps", 0.05)],
            ModelName::RandomSymmetricFamily => &[("n", 4.0)],
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown model '{s}'")))
    }
}

/// A named model with parameters and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub name: ModelName,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(name: ModelName) -> Self {
        Self {
            name,
            params: BTreeMap::new(),
            seed: 0,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Parameters with defaults filled in; unknown names are rejected.
    pub fn resolved(&self) -> Result<BTreeMap<String, f64>> {
        let defaults = self.name.defaults();
        if let Some(bad) = self
            .params
            .keys()
            .find(|k| !defaults.iter().any(|(d, _)| d == k))
        {
            return Err(Error::InvalidInput(format!(
                "model {} has no parameter '{bad}'",
                self.name
            )));
        }
        Ok(defaults
            .iter()
            .map(|(k, v)| (k.to_string(), self.params.get(*k).copied().unwrap_or(*v)))
            .collect())
    }

    fn int_param(p: &BTreeMap<String, f64>, key: &str) -> Result<usize> {
        let v = p[key];
        if v < 1.0 || v.fract() != 0.0 {
            return Err(Error::InvalidInput(format!(
                "parameter '{key}' must be a positive integer, got {v}"
            )));
        }
        Ok(v as usize)
    }

    /// Real symmetric family; fails for the complex model.
    pub fn build(&self) -> Result<HamiltonianSampler> {
        let p = self.resolved()?;
        Ok(match self.name {
            ModelName::TwoLevelCi => HamiltonianSampler::new(2, 2, |q| two_level_ci(q[0], q[1])),
            ModelName::TwoCenterCi => {
                let a = p["a"];
                HamiltonianSampler::new(2, 2, move |q| two_center_ci(q[0], q[1], a))
            }
            ModelName::JtTTau2 => HamiltonianSampler::new(3, 2, |q| jt_t_tau2(q[0], q[1])),
            ModelName::EmbeddedBlock => {
                embedded_block(Self::int_param(&p, "n")?, p["eps"], self.seed)?
            }
            ModelName::RandomSymmetricFamily => {
                random_symmetric_family(Self::int_param(&p, "n")?, self.seed)
            }
            ModelName::SpinHalfMonopole => {
                return Err(Error::InvalidInput(
                    "spin_half_monopole is complex Hermitian; use the stone test".into(),
                ))
            }
        })
    }

    /// Complex Hermitian family; real models are promoted.
    pub fn build_hermitian(&self) -> Result<HermitianSampler> {
        if self.name == ModelName::SpinHalfMonopole {
            self.resolved()?;
            return Ok(HermitianSampler::new(2, 3, spin_half_monopole));
        }
        let real = self.build()?;
        let n = real.dim();
        let cfg = Config::default();
        Ok(HermitianSampler::new(n, real.param_dim(), move |q| {
            real.eval(q, &cfg)
                .expect("built-in models are symmetric")
                .map(|x| Complex::new(x, 0.0))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::quaternion_lift;
    use crate::skewlin::rotation_decomposition;
    use nalgebra::SymmetricEigen;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn jt_frame_values() {
        assert!(jt_frame(0.0).distance(&SpecialOrthogonalMatrix::identity(3)) == 0.0);
        let at_pi =
            DMatrix::from_row_slice(3, 3, &[0.0, 0.0, -1.0, 0.0, -1.0, 0.0, -1.0, 0.0, 0.0]);
        assert!((jt_frame(std::f64::consts::PI).as_matrix() - at_pi).amax() < 1e-15);
        for k in 1..40 {
            let theta = TAU * k as f64 / 40.0;
            let f = jt_frame(theta);
            assert!(SpecialOrthogonalMatrix::new(f.as_matrix().clone(), &cfg()).is_ok());
            assert!(f.distance(&skew_exp(&jt_lift(theta)).unwrap()) < 1e-12);
            let angle = rotation_decomposition(&f).unwrap().angles(3)[0];
            let expect = if theta <= std::f64::consts::PI {
                theta
            } else {
                TAU - theta
            };
            assert!((angle - expect).abs() < 1e-9, "θ = {theta}");
        }
    }

    #[test]
    fn jt_hamiltonian_eigenframe_is_f() {
        for k in 0..12 {
            let theta = TAU * k as f64 / 12.0;
            let (x, y) = (2.0 * theta.cos(), 2.0 * theta.sin());
            let h = jt_t_tau2(x, y);
            let f = jt_frame(theta).into_matrix();
            let d = f.transpose() * h * &f;
            let expect = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-2.0, 0.0, 2.0]));
            assert!((d - expect).amax() < 1e-12);
        }
    }

    #[test]
    fn conical_models() {
        let e = SymmetricEigen::new(two_level_ci(1.0, 0.0)).eigenvalues;
        assert!((e.max() - 1.0).abs() < 1e-15 && (e.min() + 1.0).abs() < 1e-15);
        assert_eq!(two_level_ci(0.0, 0.0), DMatrix::zeros(2, 2));
        for a in [0.5, 1.0, 2.0] {
            assert_eq!(two_center_ci(a, 0.0, a), DMatrix::zeros(2, 2));
            assert_eq!(two_center_ci(-a, 0.0, a), DMatrix::zeros(2, 2));
            assert!(two_center_ci(0.0, 0.0, a).amax() > 0.0);
        }
        let m = spin_half_monopole(&[0.0, 0.0, 1.0]);
        assert_eq!(m[(0, 0)], Complex::new(1.0, 0.0));
        assert!(spin_half_monopole(&[0.0, 0.0, 0.0])
            .iter()
            .all(|c| c.norm() == 0.0));
    }

    #[test]
    fn embedded_block_structure() {
        let cfg = cfg();
        let h0 = embedded_block(10, 0.0, 7).unwrap();
        let m = h0.eval(&[0.3, -0.4], &cfg).unwrap();
        assert!((m.view((0, 0), (3, 3)).into_owned() - jt_t_tau2(0.3, -0.4)).amax() == 0.0);
        assert!(m.view((0, 3), (3, 7)).amax() == 0.0);
        let h = embedded_block(10, 0.05, 7).unwrap();
        for k in 0..32 {
            let t = TAU * k as f64 / 32.0;
            let q = [t.cos(), t.sin()];
            let e = SymmetricEigen::new(h.eval(&q, &cfg).unwrap()).eigenvalues;
            let mut e: Vec<f64> = e.iter().copied().collect();
            e.sort_by(f64::total_cmp);
            let c = embedded_coupling(10, 7, &q).norm();
            assert!(
                e[3] - e[2] >= 1.0 - 2.0 * 0.05 * c,
                "gap {} at t = {t}",
                e[3] - e[2]
            );
        }
        assert!(embedded_block(3, 0.1, 0).is_err());
        assert!(embedded_block(5, 1.0, 0).is_err());
    }

    #[test]
    fn random_loops_hit_their_class() {
        for n in 3..=5 {
            for seed in 0..6 {
                for target in [Parity::Trivial, Parity::Nontrivial] {
                    let l = random_so_loop(n, seed, target, &cfg()).unwrap();
                    let closure = l.samples()[0].distance(l.samples().last().unwrap());
                    assert!(closure <= 1e-12);
                    assert_eq!(
                        Parity::from_sign(spin_lift_sign(&l, &cfg()).unwrap()),
                        target
                    );
                    if n == 3 {
                        assert_eq!(
                            Parity::from_sign(quaternion_lift(&l, &cfg()).unwrap()),
                            target
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn random_loops_are_deterministic() {
        let a = random_so_loop(4, 11, Parity::Nontrivial, &cfg()).unwrap();
        let b = random_so_loop(4, 11, Parity::Nontrivial, &cfg()).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert_eq!(x.as_matrix(), y.as_matrix());
        }
    }

    #[test]
    fn model_specs() {
        let spec = ModelSpec::new(ModelName::TwoCenterCi).with_param("a", 2.0);
        assert_eq!(spec.resolved().unwrap()["a"], 2.0);
        assert!(ModelSpec::new(ModelName::TwoLevelCi)
            .with_param("b", 1.0)
            .build()
            .is_err());
        assert!(ModelSpec::new(ModelName::SpinHalfMonopole).build().is_err());
        assert!(ModelSpec::new(ModelName::SpinHalfMonopole)
            .build_hermitian()
            .is_ok());
        assert!(ModelSpec::new(ModelName::EmbeddedBlock)
            .with_param("n", 4.5)
            .build()
            .is_err());
        assert_eq!(
            "jt_t_tau2".parse::<ModelName>().unwrap(),
            ModelName::JtTTau2
        );
        assert!("nope".parse::<ModelName>().is_err());
        let json = r#"{"name":"embedded_block","params":{"eps":0.1},"seed":3}"#;
        let parsed: ModelSpec = serde_json::from_str(json).unwrap();
        assert_eq!(parsed.resolved().unwrap()["n"], 10.0);
    }
}
