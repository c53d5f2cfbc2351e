//! Parallel (default rayon pool) against sequential (one worker) on the
//! data-parallel hot paths.

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use harmonic_kernels::kernel_transform::{bergman_kernel_expansion, poisson_kernel_expansion};
use harmonic_kernels::numeric_oracle::quadrature::ball_integral;
use harmonic_kernels::numeric_oracle::transforms::check_lattice_family;
use harmonic_kernels::numeric_oracle::{solve_dirichlet_fd, BallRegion, FdGrid, SpectralBall};
use harmonic_kernels::par;
use harmonic_kernels::reference_kernels::{eval_bergman_closed, ClosedKind, PointPair};
use harmonic_kernels::symbol_algebra::DomainSpec;

fn schedules() -> [(&'static str, usize); 2] {
    [("parallel", par::threads().max(2)), ("sequential", 1)]
}

fn expansions(c: &mut Criterion) {
    let mut g = c.benchmark_group("expansion_n3");
    g.sample_size(10);
    let dom = DomainSpec::symbolic(3, 3).unwrap();
    for (name, t) in schedules() {
        g.bench_function(BenchmarkId::new("poisson", name), |b| {
            b.iter(|| par::with_threads(t, || poisson_kernel_expansion(black_box(&dom), 3).unwrap()).unwrap())
        });
        g.bench_function(BenchmarkId::new("bergman", name), |b| {
            b.iter(|| par::with_threads(t, || bergman_kernel_expansion(black_box(&dom), 2).unwrap()).unwrap())
        });
    }
    g.finish();
}

fn fd_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("fd_disk_h1_128");
    g.sample_size(10);
    let grid = FdGrid::new(Arc::new(BallRegion::unit(2)), 1.0 / 128.0).unwrap();
    let u = |p: &[f64]| p[0].powi(4) - 6.0 * p[0] * p[0] * p[1] * p[1] + p[1].powi(4);
    for (name, t) in schedules() {
        g.bench_function(name, |b| b.iter(|| par::with_threads(t, || solve_dirichlet_fd(&grid, u).unwrap()).unwrap()));
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("ball_reproduction_n3");
    g.sample_size(10);
    let x = [0.2, -0.1, 0.3];
    for (name, t) in schedules() {
        g.bench_function(name, |b| {
            b.iter(|| {
                par::with_threads(t, || {
                    ball_integral(3, 24, |y| {
                        let pp = PointPair::new(x.to_vec(), y.to_vec()).unwrap();
                        y[0] * y[1] * eval_bergman_closed(ClosedKind::unit_ball(), &pp).unwrap()
                    })
                })
                .unwrap()
            })
        });
    }
    g.finish();
}

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice_family_n3_p-2");
    g.sample_size(10);
    for (name, t) in schedules() {
        g.bench_function(name, |b| b.iter(|| par::with_threads(t, || check_lattice_family(3, -2).unwrap()).unwrap()));
    }
    g.finish();
}

fn spectral(c: &mut Criterion) {
    let sb = SpectralBall::new(60, 3).unwrap();
    let pts: Vec<[f64; 3]> = (0..2000).map(|i| {
        let s = i as f64 * 0.001;
        [0.5 * s.sin(), 0.4 * (2.0 * s).cos(), 0.3 * s.cos()]
    }).collect();
    let mut g = c.benchmark_group("spectral_ball_2000pts");
    for (name, t) in schedules() {
        g.bench_function(name, |b| {
            b.iter(|| {
                par::with_threads(t, || par::map(&pts, |p| sb.bergman(p, &[0.1, 0.2, 0.3]).unwrap())).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, expansions, fd_solve, quadrature, transforms, spectral);
criterion_main!(benches);
