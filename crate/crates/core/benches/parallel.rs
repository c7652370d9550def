//! Batch operations (rayon-parallel under the default `parallel` feature)
//! against hand-rolled sequential loops over the single-item calls.
//! Rebuild with --no-default-features to measure the sequential fallback
//! of the batch path itself.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};

use sturm_core::eigensolver::{self, BoundaryCondition, SolverOptions};
use sturm_core::oracle::{self, FdProblem};
use sturm_core::potential::Potential;

const BC: BoundaryCondition = BoundaryCondition::Dirichlet;
const N_EIGS: usize = 8;
const FD_NODES: usize = 4000;

fn bench_fd(c: &mut Criterion) {
    let p = Potential::barrier_sin(-5.0, 4.0);
    let mut g = c.benchmark_group("fd_eigenvalues");
    g.sample_size(10).measurement_time(Duration::from_secs(3));
    g.bench_function("batch", |b| {
        b.iter(|| oracle::fd_eigenvalues(&p, 1.0, N_EIGS, FD_NODES, BC).unwrap())
    });
    g.bench_function("sequential", |b| {
        b.iter(|| {
            let fd = FdProblem::new(&p, 1.0, FD_NODES, BC).unwrap();
            (1..=N_EIGS).map(|k| fd.eigenvalue(k)).collect::<Vec<_>>()
        })
    });
    g.finish();
}

fn bench_shooting(c: &mut Criterion) {
    let p = Potential::barrier_sin(-5.0, 4.0);
    let opts = SolverOptions::default();
    let mut g = c.benchmark_group("solve_range");
    g.sample_size(10).measurement_time(Duration::from_secs(3));
    g.bench_function("batch", |b| {
        b.iter(|| eigensolver::solve_range(&p, N_EIGS, BC, 1.0).unwrap())
    });
    g.bench_function("sequential", |b| {
        b.iter(|| {
            (1..=N_EIGS)
                .map(|n| eigensolver::solve_one_with(&p, n, BC, 1.0, &opts).unwrap())
                .collect::<Vec<_>>()
        })
    });
    g.finish();
}

criterion_group!(benches, bench_fd, bench_shooting);
criterion_main!(benches);
