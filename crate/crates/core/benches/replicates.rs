//! Serial vs data-parallel replicate schedules.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ktree_lab::harness::{distance_experiment, geometric_ladder, mc_distribution, ExperimentConfig};
use ktree_lab::oracle::enumerate_laws;
use ktree_lab::schedule::Schedule;
use ktree_lab::table::{NodeSelector, Parameter};

const SCHEDULES: [(&str, Schedule); 2] = [("serial", Schedule::Serial), ("parallel", Schedule::Parallel)];

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_distribution");
    group.sample_size(10);
    for (name, schedule) in SCHEDULES {
        let config = ExperimentConfig::new(2, 200, Parameter::Descendants, NodeSelector::Random)
            .replicates(4096)
            .schedule(schedule);
        group.bench_with_input(BenchmarkId::new(name, "k2_n200_4096reps"), &config, |b, config| {
            b.iter(|| mc_distribution(config).unwrap())
        });
    }
    group.finish();
}

fn distances(c: &mut Criterion) {
    let mut group = c.benchmark_group("distance_experiment");
    group.sample_size(10);
    let ladder = geometric_ladder(8, 12);
    for (name, schedule) in SCHEDULES {
        group.bench_with_input(BenchmarkId::new(name, "k2_2^8..2^12_512reps"), &schedule, |b, &schedule| {
            b.iter(|| distance_experiment(2, &ladder, 512, 1, schedule).unwrap())
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_laws");
    group.sample_size(10);
    for (name, schedule) in SCHEDULES {
        group.bench_with_input(BenchmarkId::new(name, "k2_n6"), &schedule, |b, &schedule| {
            b.iter(|| enumerate_laws(2, 6, Parameter::Outdegree, u64::MAX, schedule).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, distances, enumeration);
criterion_main!(benches);
