use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use eigenloop::models::{embedded_block, random_symmetric_family, spin_half_monopole};
use eigenloop::stone::{stone_test, HermitianSampler, SurfaceSweep};
use eigenloop::subspace::{subspace_degeneracy_test, ReferenceSubspace};
use eigenloop::transport::{run_degeneracy_test, ParameterLoop};
use eigenloop::{Config, Exec};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn transport(c: &mut Criterion) {
    let mut group = c.benchmark_group("transport");
    group.sample_size(10);
    let h = random_symmetric_family(24, 1);
    let l = ParameterLoop::circle(0.0, 0.0, 1.0, 2000).unwrap();
    for (name, exec) in MODES {
        let cfg = Config::default().with_exec(exec);
        group.bench_with_input(BenchmarkId::new(name, "n24x2000"), &cfg, |b, cfg| {
            b.iter(|| black_box(run_degeneracy_test(&h, &l, cfg).unwrap()))
        });
    }
    group.finish();
}

fn subspace(c: &mut Criterion) {
    let mut group = c.benchmark_group("subspace");
    group.sample_size(10);
    let h = embedded_block(40, 0.05, 0).unwrap();
    let l = ParameterLoop::circle(0.0, 0.0, 1.0, 1000).unwrap();
    let reference = ReferenceSubspace::coordinates(40, 3).unwrap();
    for (name, exec) in MODES {
        let cfg = Config::default().with_exec(exec);
        group.bench_with_input(BenchmarkId::new(name, "n40p3x1000"), &cfg, |b, cfg| {
            b.iter(|| {
                black_box(subspace_degeneracy_test(&h, &l, &reference, 0..3, &[], cfg).unwrap())
            })
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("stone");
    group.sample_size(10);
    let h = HermitianSampler::new(2, 3, spin_half_monopole);
    let s = SurfaceSweep::sphere([0.0; 3], 1.0, 200, 400).unwrap();
    for (name, exec) in MODES {
        let cfg = Config::default().with_exec(exec);
        group.bench_with_input(BenchmarkId::new(name, "200x400"), &cfg, |b, cfg| {
            b.iter(|| black_box(stone_test(&h, &s, 0, cfg).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, transport, subspace, sweep);
criterion_main!(benches);
