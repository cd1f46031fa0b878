#![allow(dead_code)]

use std::f64::consts::TAU;

use eigenloop::skewlin::{skew_exp, SkewSymmetricMatrix, SpecialOrthogonalMatrix};
use eigenloop::Config;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

/// Haar-ish random rotation from the QR factor of a Gaussian matrix.
pub fn rotation(rng: &mut ChaCha8Rng, n: usize) -> SpecialOrthogonalMatrix {
    let qr = gaussian(rng, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut c = q.column_mut(j);
            c *= -1.0;
        }
    }
    if q.determinant() < 0.0 {
        let mut c = q.column_mut(0);
        c *= -1.0;
    }
    SpecialOrthogonalMatrix::new(q, &Config::default()).unwrap()
}

/// `Q D(α) Qᵀ` with the given block angles.
pub fn skew_with_angles(rng: &mut ChaCha8Rng, n: usize, angles: &[f64]) -> SkewSymmetricMatrix {
    let mut d = DMatrix::zeros(n, n);
    for (i, &a) in angles.iter().enumerate() {
        d[(2 * i + 1, 2 * i)] = a;
        d[(2 * i, 2 * i + 1)] = -a;
    }
    let q = rotation(rng, n).into_matrix();
    SkewSymmetricMatrix::from_skew_part(&(&q * d * q.transpose()))
}

pub fn random_skew(rng: &mut ChaCha8Rng, n: usize) -> SkewSymmetricMatrix {
    SkewSymmetricMatrix::from_skew_part(&gaussian(rng, n))
}

/// Geodesic loop `exp(t·2π·X)` for a unit-plane generator `X`: one full turn.
pub fn full_turn(n: usize, i: usize, j: usize, cfg: &Config) -> eigenloop::homotopy::FrameLoop {
    let g = SkewSymmetricMatrix::generator(n, i, j).scale(TAU);
    eigenloop::homotopy::FrameLoop::from_fn(64, move |t| skew_exp(&g.scale(t.min(1.0))), cfg)
        .unwrap()
}

/// Number of times the closed polygon winds counterclockwise around `p`.
pub fn polygon_winding(points: &[Vec<f64>], p: [f64; 2]) -> i64 {
    let mut total = 0.0;
    for k in 0..points.len() {
        let a = &points[k];
        let b = &points[(k + 1) % points.len()];
        let (ax, ay) = (a[0] - p[0], a[1] - p[1]);
        let (bx, by) = (b[0] - p[0], b[1] - p[1]);
        total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
    }
    (total / TAU).round() as i64
}
