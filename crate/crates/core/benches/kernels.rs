//! Parallel-versus-sequential comparison for the heavy kernels. The same
//! binary measures both arms by flipping the runtime switch, so build once
//! with the default `parallel` feature and read the paired groups.

use criterion::{criterion_group, criterion_main, Criterion};
use modamen_core::diagonal::{find_module_diagonal, tensor_setup_for_semigroup, DiagonalOutcome};
use modamen_core::module_algebra::analyze;
use modamen_core::par;
use modamen_core::semigroup::partial_perm::symmetric_inverse_monoid;
use modamen_core::Guards;

fn with_mode<R>(parallel: bool, f: impl FnOnce() -> R) -> R {
    par::force_sequential(!parallel);
    let out = f();
    par::force_sequential(false);
    out
}

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn bench_module_analysis(c: &mut Criterion) {
    let s = symmetric_inverse_monoid(3).unwrap();
    let guards = Guards::default();
    let mut g = c.benchmark_group("module_analysis_symmetric_inverse_monoid_3");
    g.sample_size(10);
    for (label, on) in modes() {
        g.bench_function(label, |b| {
            b.iter(|| {
                with_mode(on, || {
                    let a = analyze(&s, &guards).unwrap();
                    assert_eq!(a.j.dim(), 33);
                    a.congruence.classes.len()
                })
            })
        });
    }
    g.finish();
}

fn bench_ideal_saturation(c: &mut Criterion) {
    let s = symmetric_inverse_monoid(2).unwrap();
    let guards = Guards::default();
    let mut g = c.benchmark_group("tensor_ideal_saturation_symmetric_inverse_monoid_2");
    g.sample_size(10);
    for (label, on) in modes() {
        g.bench_function(label, |b| {
            b.iter(|| {
                with_mode(on, || {
                    let setup = tensor_setup_for_semigroup(&s, &guards).unwrap();
                    setup.ideal.dim()
                })
            })
        });
    }
    g.finish();
}

fn bench_diagonal_solve(c: &mut Criterion) {
    let s = symmetric_inverse_monoid(2).unwrap();
    let guards = Guards::default();
    let setup = tensor_setup_for_semigroup(&s, &guards).unwrap();
    let mut g = c.benchmark_group("diagonal_solve_symmetric_inverse_monoid_2");
    g.sample_size(10);
    for (label, on) in modes() {
        g.bench_function(label, |b| {
            b.iter(|| {
                with_mode(on, || {
                    assert!(matches!(
                        find_module_diagonal(&setup),
                        DiagonalOutcome::Feasible(_)
                    ));
                })
            })
        });
    }
    g.finish();
}

criterion_group!(kernels, bench_module_analysis, bench_ideal_saturation, bench_diagonal_solve);
criterion_main!(kernels);
