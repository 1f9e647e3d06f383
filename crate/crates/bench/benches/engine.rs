use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use lrbi::arith::rat;
use lrbi::axb::{axb_r, axb_relation_suite, axb_spec, build_axb};
use lrbi::deform::{twistor_validate, Twistor};
use lrbi::drinfeld::duality_roundtrip_standard;
use lrbi::jets::Side;
use lrbi::lie_rinehart::random_valid_spec;
use lrbi::properties::{property_suite, SampleSize};
use lrbi::Envelope;

fn twistor(c: &mut Criterion) {
    let env = Arc::new(Envelope::new(axb_spec()));
    c.bench_function("axb twistor validate N=4", |b| {
        b.iter(|| {
            let tw = Twistor::exponential(&env, axb_r(&env), rat(1, 2), 4);
            twistor_validate(env.clone(), black_box(&tw))
        })
    });
}

fn duals(c: &mut Criterion) {
    let mut g = c.benchmark_group("axb duals");
    g.sample_size(10);
    g.bench_function("relation suite N=4 d=4", |b| b.iter(|| axb_relation_suite(&build_axb(4, 4).ctx)));
    g.bench_function("roundtrip N=4 d=4", |b| {
        b.iter(|| duality_roundtrip_standard(&build_axb(4, 4).ctx, Side::Left, 4))
    });
    g.finish();
}

fn properties(c: &mut Criterion) {
    let spec = random_valid_spec(0);
    let size = SampleSize::default();
    let mut g = c.benchmark_group("properties");
    g.sample_size(10);
    g.bench_function("property suite seed 0", |b| b.iter(|| property_suite(black_box(&spec), 0, &size)));
    g.finish();
}

criterion_group!(benches, twistor, duals, properties);
criterion_main!(benches);
