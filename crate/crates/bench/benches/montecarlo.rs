use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use rand::SeedableRng;
use twoway_fso::montecarlo::{mc_ber, mc_outage, IrradianceSampler, McRng};
use twoway_fso::{LinkConfig, McConfig, Regime};
use twoway_fso_bench::{plain_pair, pointed_pair};

const N: usize = 1 << 18;

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    group.throughput(Throughput::Elements(1));
    for (name, hops) in [
        ("plain", plain_pair(Regime::Strong)),
        ("pointed", pointed_pair(Regime::Strong)),
    ] {
        let sampler = IrradianceSampler::for_hop(&hops.hop1).unwrap();
        let mut rng = McRng::seed_from_u64(1);
        group.bench_function(name, |b| b.iter(|| sampler.sample(black_box(&mut rng))));
    }
    group.finish();
}

fn estimates(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate");
    group.sample_size(10);
    group.throughput(Throughput::Elements(N as u64));
    let hops = plain_pair(Regime::Weak);
    let link = LinkConfig::from_db(20.0).unwrap();
    let mc = McConfig::new(N, 7).unwrap();
    group.bench_function("outage", |b| {
        b.iter(|| mc_outage(&link, 1.0, &hops, black_box(&mc)).unwrap())
    });
    group.bench_function("ber", |b| {
        b.iter(|| mc_ber(&link, &hops, black_box(&mc)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, sampling, estimates);
criterion_main!(benches);
