//! Brute-force Z₂ oracles through the double cover: unit quaternions for
//! n = 3 and even Clifford rotors in Spin(n) for 3 ≤ n ≤ 12.
//!
//! A closed loop in SO(n) lifts to a path in Spin(n) that ends at +1 or −1.
//! The end sign is the homotopy class, computed here without any reference to
//! the 𝔰𝔬(n) lift used by the classifier.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, Matrix3, Quaternion, Rotation3, UnitQuaternion};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::homotopy::FrameLoop;
use crate::skewlin::{rotation_decomposition, SkewSymmetricMatrix, SpecialOrthogonalMatrix};

/// Largest dimension accepted by the Clifford oracle.
pub const MAX_ROTOR_DIM: usize = 12;

const SERIES_TERMS: usize = 20;
const SERIES_TOL: f64 = 1e-14;

/// Sign of the blade product `e_a e_b` for blade bitmasks `a`, `b` in a
/// Euclidean signature, from the number of transpositions needed to sort.
fn blade_sign(a: usize, b: usize) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Element of the even Clifford algebra Cl⁺(n), coefficients indexed by blade bitmask.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotor {
    n: usize,
    coeffs: Vec<f64>,
}

impl Rotor {
    pub fn one(n: usize) -> Self {
        let mut coeffs = vec![0.0; 1 << n];
        coeffs[0] = 1.0;
        Self { n, coeffs }
    }

    fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![0.0; 1 << n],
        }
    }

    /// The bivector `−½ Σ_{i<j} B_ij e_i e_j` of a skew matrix.
    pub fn bivector(b: &SkewSymmetricMatrix) -> Self {
        let n = b.dim();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                out.coeffs[(1 << i) | (1 << j)] = -0.5 * b.get(i, j);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn scalar(&self) -> f64 {
        self.coeffs[0]
    }

    /// Euclidean norm of the coefficient vector; equals √⟨r r̃⟩₀.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        self.scaled(1.0 / self.norm())
    }

    fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// Largest coefficient magnitude outside the scalar slot.
    pub fn non_scalar_residual(&self) -> f64 {
        self.coeffs[1..].iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Grade-sum of odd blades; zero for every element built here.
    pub fn odd_part(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| k.count_ones() % 2 == 1)
            .fold(0.0, |m, (_, c)| m.max(c.abs()))
    }

    /// Geometric product, skipping zero coefficients on both sides.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "rotor dimensions differ");
        let mut out = Self::zero(self.n);
        let rhs: Vec<(usize, f64)> = other
            .coeffs
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, c)| *c != 0.0)
            .collect();
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for &(b, cb) in &rhs {
                out.coeffs[a ^ b] += blade_sign(a, b) * ca * cb;
            }
        }
        out
    }

    /// Reversion: a grade-k blade picks up `(−1)^{k(k−1)/2}`.
    pub fn reverse(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let g = k.count_ones();
                if (g * (g.saturating_sub(1)) / 2) % 2 == 0 {
                    *c
                } else {
                    -c
                }
            })
            .collect();
        Self { n: self.n, coeffs }
    }

    /// `exp(b)` by scaling and squaring around a truncated power series.
    pub fn exp(b: &Self) -> Self {
        let norm = b.norm();
        let mut squarings = 0;
        while norm / f64::powi(2.0, squarings) > 0.5 {
            squarings += 1;
        }
        let small = b.scaled(f64::powi(2.0, -squarings));
        let mut sum = Self::one(b.n);
        let mut term = Self::one(b.n);
        for m in 1..=SERIES_TERMS {
            term = term.mul(&small).scaled(1.0 / m as f64);
            sum.add_assign(&term);
            if term.norm() < SERIES_TOL {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum);
        }
        sum
    }

    /// `exp(b)` for a simple bivector (a single plane), where `b² = −|b|²`.
    fn exp_simple(b: &Self) -> Self {
        let phi = b.norm();
        let mut out = if phi > 0.0 {
            b.scaled(phi.sin() / phi)
        } else {
            Self::zero(b.n)
        };
        out.coeffs[0] += phi.cos();
        out
    }

    /// Rotor of `exp(−½ Σ B_ij e_i e_j)`; its sandwich action is `exp(B)ᵀ`.
    pub fn from_generator(b: &SkewSymmetricMatrix) -> Self {
        Self::exp(&Self::bivector(b))
    }

    /// Matrix of `v ↦ r v r̃` on the vector grade.
    pub fn action(&self) -> DMatrix<f64> {
        let rev = self.reverse();
        let mut m = DMatrix::zeros(self.n, self.n);
        for j in 0..self.n {
            let mut e = Self::zero(self.n);
            e.coeffs[1 << j] = 1.0;
            let image = self.mul(&e).mul(&rev);
            for i in 0..self.n {
                m[(i, j)] = image.coeffs[1 << i];
            }
        }
        m
    }
}

fn check_based(l: &FrameLoop, cfg: &Config) -> Result<()> {
    let base = l.samples()[0].distance(&SpecialOrthogonalMatrix::identity(l.dim()));
    if base > cfg.tol_closure {
        return Err(Error::InvalidInput(format!(
            "oracle loop must start at the identity (|F(0) − I| = {base:.3e})"
        )));
    }
    Ok(())
}

/// Lifts a closed SO(n) loop to Spin(n) and returns the sign of the endpoint.
/// `−1` means the loop is not contractible.
pub fn spin_lift_sign(l: &FrameLoop, cfg: &Config) -> Result<i8> {
    let n = l.dim();
    if !(3..=MAX_ROTOR_DIM).contains(&n) {
        return Err(Error::WrongDimension(format!(
            "spin oracle supports 3 ≤ n ≤ {MAX_ROTOR_DIM}, got n = {n}"
        )));
    }
    check_based(l, cfg)?;
    let mut acc = Rotor::one(n);
    for (k, w) in l.samples().windows(2).enumerate() {
        let step = w[1].compose(&w[0].transpose());
        let dec = rotation_decomposition(&step)?;
        let widest = dec.planes.iter().map(|p| p.theta).fold(0.0, f64::max);
        if widest >= FRAC_PI_2 {
            return Err(Error::StepTooLarge {
                index: k + 1,
                detail: format!("increment angle {widest:.4} ≥ π/2"),
            });
        }
        // ρ(r_k) = ΔF_kᵀ and F_N = ΔF_{N−1}⋯ΔF_0, so F_Nᵀ = ρ(r_0 r_1 ⋯ r_{N−1}).
        // The planes are orthogonal, so r_k factors into commuting plane rotors.
        for p in &dec.planes {
            let b = SkewSymmetricMatrix::from_skew_part(&(p.generator() * p.theta));
            acc = acc.mul(&Rotor::exp_simple(&Rotor::bivector(&b)));
        }
        let drift = (acc.norm() - 1.0).abs();
        if drift > 1e-12 {
            log::debug!("rotor norm drift {drift:.3e} at step {k}");
        }
        acc = acc.normalized();
    }
    let scalar = acc.scalar();
    let residual = acc.non_scalar_residual().max((scalar.abs() - 1.0).abs());
    if residual > cfg.tol_rotor {
        return Err(Error::NotScalar { scalar, residual });
    }
    Ok(if scalar > 0.0 { 1 } else { -1 })
}

/// Unit quaternion double-cover lift for SO(3) loops; returns the sign of the
/// final quaternion relative to the starting `+1`.
pub fn quaternion_lift(l: &FrameLoop, cfg: &Config) -> Result<i8> {
    if l.dim() != 3 {
        return Err(Error::WrongDimension(format!(
            "quaternion oracle needs n = 3, got n = {}",
            l.dim()
        )));
    }
    check_based(l, cfg)?;
    // Increment angle < π/2 ⇔ |⟨q_k, q_{k+1}⟩| > cos(π/4).
    let min_dot = (FRAC_PI_2 / 2.0).cos();
    let mut prev = UnitQuaternion::identity();
    for (k, s) in l.samples().iter().enumerate().skip(1) {
        let m = s.as_matrix();
        let rot = Rotation3::from_matrix_unchecked(Matrix3::from_fn(|i, j| m[(i, j)]));
        let mut q = UnitQuaternion::from_rotation_matrix(&rot);
        let dot = prev.coords.dot(&q.coords);
        if dot.abs() <= min_dot {
            return Err(Error::StepTooLarge {
                index: k,
                detail: format!("quaternion overlap {:.4}", dot.abs()),
            });
        }
        if dot < 0.0 {
            q = UnitQuaternion::new_unchecked(Quaternion::from(-q.coords));
        }
        prev = q;
    }
    let w = prev.w;
    let residual = prev.imag().amax().max((w.abs() - 1.0).abs());
    if residual > cfg.tol_rotor {
        return Err(Error::NotScalar {
            scalar: w,
            residual,
        });
    }
    Ok(if w > 0.0 { 1 } else { -1 })
}
