use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qwalk_core::analysis::{fit_decoherence_with, sample_trajectories_with};
use qwalk_core::lattice::{evolve, evolve_with, Mode, StepSchedule, WalkTemplate};
use qwalk_core::Exec;

const STRATEGIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn density_evolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("density_evolution");
    group.sample_size(10);
    for steps in [20usize, 60, 120] {
        let schedule =
            StepSchedule::uniform(&WalkTemplate::default().with_q(0.3), steps, &[-1]).unwrap();
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, steps), &schedule, |b, s| {
                b.iter(|| evolve_with(s, Mode::Density, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn trajectories(c: &mut Criterion) {
    let mut group = c.benchmark_group("trajectories");
    group.sample_size(10);
    let schedule = StepSchedule::uniform(&WalkTemplate::default().with_q(0.5), 20, &[]).unwrap();
    for samples in [10_000usize, 50_000] {
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, samples), &samples, |b, &n| {
                b.iter(|| sample_trajectories_with(&schedule, n, 7, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn decoherence_fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit_decoherence");
    group.sample_size(10);
    for steps in [5usize, 15] {
        let template = StepSchedule::uniform(&WalkTemplate::default(), steps, &[]).unwrap();
        let measured = evolve(&template.with_uniform_q(0.4).unwrap(), Mode::Density)
            .unwrap()
            .final_distribution()
            .clone();
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, steps), &steps, |b, _| {
                b.iter(|| fit_decoherence_with(&measured, &template, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, density_evolution, trajectories, decoherence_fit);
criterion_main!(benches);
