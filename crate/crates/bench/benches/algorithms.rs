use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use coxcell::{CoxeterSystem, GroupBall, HeckeAlgebra, KlTable};
use coxcell_bench::{ball, groups};

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("ball");
    for (name, config) in groups() {
        let system = CoxeterSystem::new(config);
        g.bench_function(BenchmarkId::new(name, 7), |b| {
            b.iter(|| GroupBall::enumerate(black_box(&system), 7).unwrap())
        });
    }
    g.finish();
}

fn t_products(c: &mut Criterion) {
    let mut g = c.benchmark_group("t_products");
    for (name, config) in groups() {
        let ball = ball(config, 8);
        g.bench_function(BenchmarkId::new(name, 4), |b| {
            b.iter(|| {
                let alg = HeckeAlgebra::new(ball.clone());
                for x in ball.up_to(4) {
                    black_box(alg.t_row(x, 4).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn kl_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("kl_table");
    g.sample_size(10);
    for (name, config) in groups() {
        let ball = ball(config, 6);
        g.bench_function(BenchmarkId::new(name, 6), |b| {
            b.iter(|| {
                let kl = KlTable::new(ball.clone());
                kl.build(6).unwrap();
                kl
            })
        });
        g.bench_function(BenchmarkId::new(format!("{name}_products"), 3), |b| {
            let kl = KlTable::new(ball.clone());
            kl.build(6).unwrap();
            b.iter(|| kl.product_table(3).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, enumeration, t_products, kl_table);
criterion_main!(benches);
