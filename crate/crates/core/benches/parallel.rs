//! Sequential vs rayon execution of the sample-parallel audits.
//!
//! Without the `parallel` feature both arms run on one thread, which makes
//! the fallback's overhead visible too.

use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dbo_core::fractional::samples::{random_trig_polynomials, random_wave_packets, PacketRanges};
use dbo_core::fractional::{commutator_bound_audit, equivalence_audit, AuditGrid};
use dbo_core::par::Exec;

fn grid(half_length: f64, resolutions: Vec<usize>, exec: Exec) -> AuditGrid {
    AuditGrid {
        exec,
        ..AuditGrid::new(half_length, resolutions)
    }
}

fn commutator(c: &mut Criterion) {
    let trig = random_trig_polynomials(1, 128, 6.0 * PI, 8);
    let pairs: Vec<_> = trig.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect();
    let mut group = c.benchmark_group("commutator_audit");
    for exec in [Exec::Sequential, Exec::Parallel] {
        let g = grid(6.0 * PI, vec![1024], exec);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &g, |b, g| {
            b.iter(|| commutator_bound_audit(0.5, &pairs, g).unwrap())
        });
    }
    group.finish();
}

fn stein_equivalence(c: &mut Criterion) {
    let samples = random_wave_packets(3, 8, PacketRanges::default());
    let mut group = c.benchmark_group("stein_equivalence_audit");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let g = grid(8.0 * PI, vec![512], exec);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &g, |b, g| {
            b.iter(|| equivalence_audit(0.5, &samples, g).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, commutator, stein_equivalence);
criterion_main!(benches);
