use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use iwacoh_bench::{group, trivial_module};
use iwacoh_core::cochain::tate::tate_cohomology;
use iwacoh_core::cochain::{cochain_cohomology, cochain_complex};
use iwacoh_core::compact::{compact_les, LocalDatum, Place};
use iwacoh_core::iwasawa::{colim_cohomology, TowerSpec};
use iwacoh_core::linalg::howell::howell_form;
use iwacoh_core::random::{random_map_matrix, random_module};
use iwacoh_core::RingSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn howell(c: &mut Criterion) {
    let mut g = c.benchmark_group("howell_form");
    let ring = RingSpec::new(2, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [16, 64, 128] {
        let exps = vec![3; n];
        let m = random_map_matrix(&mut rng, &exps, &exps, &ring);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| howell_form(black_box(m), &ring)));
    }
    g.finish();
}

fn group_cohomology(c: &mut Criterion) {
    let mut g = c.benchmark_group("cochain_cohomology");
    for (name, deg) in [("cyclic:4", 3), ("s3", 2), ("q8", 2)] {
        let m = trivial_module(name, 2, 2, 1);
        g.bench_function(format!("{name}/H^{deg}"), |b| b.iter(|| cochain_cohomology(black_box(&m), deg).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = random_module(&mut rng, RingSpec::new(3, 2).unwrap(), group("s3"), 3);
    g.bench_function("s3/complex top 3", |b| b.iter(|| cochain_complex(black_box(&m), 3).unwrap()));
    g.finish();
}

fn tate(c: &mut Criterion) {
    let mut g = c.benchmark_group("tate_cohomology");
    for (name, p) in [("cyclic:8", 2), ("cyclic:9", 3), ("klein", 2)] {
        let m = trivial_module(name, p, 2, 1);
        g.bench_function(format!("{name}/Ĥ^-2"), |b| b.iter(|| tate_cohomology(black_box(&m), -2).unwrap()));
    }
    g.finish();
}

fn compact(c: &mut Criterion) {
    let g = group("cyclic:4");
    let m = trivial_module("cyclic:4", 2, 2, 1);
    let d = LocalDatum::new(g.clone(), vec![Place::subgroup(&g, &[0, 2], false).unwrap(), Place::identity(g.clone(), true)]).unwrap();
    c.bench_function("compact_les/cyclic:4 two places", |b| b.iter(|| compact_les(black_box(&d), &m, 3).unwrap()));
}

fn towers(c: &mut Criterion) {
    let t = TowerSpec::cyclic_p_tower(2, 4, 1).unwrap();
    let m = iwacoh_core::GModule::trivial(RingSpec::new(2, 1).unwrap(), t.group().clone(), vec![1]);
    c.bench_function("colim_cohomology/Z_2 tower H^1", |b| b.iter(|| colim_cohomology(black_box(&t), &m, 1).unwrap()));
}

criterion_group!(benches, howell, group_cohomology, tate, compact, towers);
criterion_main!(benches);
