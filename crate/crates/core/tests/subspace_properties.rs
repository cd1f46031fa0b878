mod common;

use eigenloop::models::embedded_block;
use eigenloop::report::Verdict;
use eigenloop::skewlin::skew_exp;
use eigenloop::subspace::{project, subspace_degeneracy_test, ReferenceSubspace};
use eigenloop::transport::{run_degeneracy_test, ParameterLoop};
use eigenloop::Config;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 256,
        ..ProptestConfig::default()
    }
}

/// `p` unit vectors spanning at most `p − 1` dimensions of ℝ^m: random
/// vectors in a random subspace, or a perturbed regular simplex, which is
/// the extremal configuration.
fn dependent_set(p: usize, seed: u64, simplex: bool) -> Vec<DVector<f64>> {
    let mut rng = common::rng(seed);
    let m = p + 2;
    let basis = common::rotation(&mut rng, m)
        .into_matrix()
        .columns(0, p - 1)
        .into_owned();
    let coords: Vec<DVector<f64>> = if simplex {
        // Centered standard basis of ℝ^p lies in the hyperplane Σx = 0.
        let centered: Vec<DVector<f64>> = (0..p)
            .map(|i| {
                let mut v = DVector::from_element(p, -1.0 / p as f64);
                v[i] += 1.0;
                v
            })
            .collect();
        // Orthonormal basis of Σx = 0 from a QR of the centered vectors.
        let q = DMatrix::from_columns(&centered)
            .qr()
            .q()
            .columns(0, p - 1)
            .into_owned();
        centered
            .iter()
            .map(|v| {
                let mut c = q.transpose() * v;
                for x in c.iter_mut() {
                    *x += 1e-3 * rng.gen_range(-1.0..1.0);
                }
                c
            })
            .collect()
    } else {
        (0..p)
            .map(|_| DVector::from_fn(p - 1, |_, _| rng.sample(rand_distr::StandardNormal)))
            .collect()
    };
    coords
        .into_iter()
        .map(|c| (&basis * c).normalize())
        .collect()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn dependent_unit_vectors_have_a_close_pair(p in 2usize..7, seed in any::<u64>(), simplex in any::<bool>()) {
        let vs = dependent_set(p, seed, simplex);
        let mut best: f64 = 0.0;
        for i in 0..p {
            for j in i + 1..p {
                best = best.max(vs[i].dot(&vs[j]).abs());
            }
        }
        prop_assert!(best >= 1.0 / (p - 1) as f64 - 1e-12, "p = {p}, best = {best}");
    }

    #[test]
    fn overlap_condition_forces_independence(n in 3usize..9, seed in any::<u64>(), s in 0.0f64..1.5) {
        let mut rng = common::rng(seed);
        let p = rng.gen_range(2..n);
        let x = common::random_skew(&mut rng, n).scale(s / n as f64);
        let q = skew_exp(&x).unwrap().into_matrix();
        let frame = q.columns(0, p).into_owned();
        let reference = ReferenceSubspace::coordinates(n, p).unwrap();
        let cfg = Config::default();
        let d = project(&[frame], &reference, &cfg);
        if d.condition_met {
            prop_assert!(d.min_sigma > cfg.sigma_min, "σ = {}", d.min_sigma);
        }
    }
}

#[test]
fn projected_test_agrees_with_full_test() {
    let cfg = Config::default();
    let h = embedded_block(10, 0.05, 0).unwrap();
    let l = ParameterLoop::circle(0.0, 0.0, 1.0, 64).unwrap();
    let reference = ReferenceSubspace::coordinates(10, 3).unwrap();
    let (sub, diag) = subspace_degeneracy_test(&h, &l, &reference, 0..3, &[], &cfg).unwrap();
    assert!(diag.condition_met);
    assert!(diag.margin > 0.0);
    assert_eq!(sub.verdict, Verdict::DegeneracyCertified);
    let full = run_degeneracy_test(&h, &l, &cfg).unwrap();
    assert_eq!(full.verdict, sub.verdict);
    assert_eq!(full.invariants.parity, sub.invariants.parity);
}

#[test]
fn strong_coupling_refuses_a_verdict() {
    let cfg = Config::default();
    let l = ParameterLoop::circle(0.0, 0.0, 1.0, 64).unwrap();
    let reference = ReferenceSubspace::coordinates(10, 3).unwrap();
    let h = embedded_block(10, 0.95, 0).unwrap();
    match subspace_degeneracy_test(&h, &l, &reference, 0..3, &[], &cfg) {
        Err(eigenloop::Error::ConditionViolated { overlap, bound, .. }) => {
            assert!(overlap <= bound + cfg.overlap_margin)
        }
        other => panic!("expected a refusal, got {other:?}"),
    }
}
