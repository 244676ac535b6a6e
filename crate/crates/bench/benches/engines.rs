use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use modlab_bench::{kripke_pair, nbd_pair, rng, vars};
use modlab_core::bisim::{greatest_tau_bisim, zigzag_free_subrelation};
use modlab_core::formula::{enumerate_formulas, var};
use modlab_core::positivity::{check_monotone, positivity_witness_search, synthesize_positive, SearchMode};
use modlab_core::product::{check_product, max_product};
use modlab_core::repro::{cluster, f0, lin_models, phi_cluster, phi_lin, random_bisim_pair};
use modlab_core::sample::random_full_relation;
use modlab_core::{Frame, Guards, LiteralSet};

fn semantics(c: &mut Criterion) {
    let (m1, _, _) = lin_models();
    let f = phi_lin();
    c.bench_function("eval phi_lin on f0", |b| b.iter(|| black_box(m1.eval(&f))));
    let lits = LiteralSet::all_of(&vars());
    c.bench_function("enumerate formulas to size 6", |b| {
        b.iter(|| enumerate_formulas(&lits, 6).count())
    });
}

fn bisimulation(c: &mut Criterion) {
    let tau = LiteralSet::all_of(&vars());
    let (k1, k2) = kripke_pair(1, 32);
    c.bench_function("greatest bisimulation, Kripke 32x32", |b| {
        b.iter(|| greatest_tau_bisim(&k1, &k2, &tau).unwrap())
    });
    let (n1, n2) = nbd_pair(2, 5);
    c.bench_function("greatest bisimulation, neighborhood 5x5", |b| {
        b.iter(|| greatest_tau_bisim(&n1, &n2, &tau).unwrap())
    });
    let mut r = rng(3);
    c.bench_function("zigzag-free subrelation 6x6", |b| {
        b.iter_batched(
            || random_full_relation(&mut r, 6, 6),
            |z| zigzag_free_subrelation(&z).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn positivity(c: &mut Criterion) {
    let g = Guards::default();
    let p = [var("p")];
    let f0 = Frame::Kripke(f0());
    let lin = phi_lin();
    c.bench_function("monotonicity sweep of phi_lin on f0", |b| {
        b.iter(|| check_monotone(&f0, &lin, &p, &g).unwrap())
    });
    let c2 = Frame::Kripke(cluster(2).unwrap());
    let c3 = Frame::Kripke(cluster(3).unwrap());
    let f2 = phi_cluster(2, 0).unwrap();
    let f3 = phi_cluster(3, 1).unwrap();
    c.bench_function("witness search on the 2-cluster", |b| {
        b.iter(|| positivity_witness_search(&c2, &f2, &p, &SearchMode::Exhaustive, &g).unwrap())
    });
    c.bench_function("witness search on the 3-cluster", |b| {
        b.iter(|| positivity_witness_search(&c3, &f3, &p, &SearchMode::Exhaustive, &g).unwrap())
    });
    let mut group = c.benchmark_group("synthesis");
    group.sample_size(10);
    group.bench_function("no positive equivalent up to 9 on the 2-cluster", |b| {
        b.iter(|| synthesize_positive(&c2, &f2, &p, 9, &g).unwrap())
    });
    group.finish();
}

fn products(c: &mut Criterion) {
    let g = Guards::default();
    let mut r = rng(8);
    let pairs: Vec<_> = (0..16).map(|_| random_bisim_pair(&mut r, &g).unwrap()).collect();
    c.bench_function("max product and exhaustive check, 16 pairs", |b| {
        b.iter(|| {
            for (f1, f2, z) in &pairs {
                let p = max_product(f1, f2, z, &g).unwrap();
                assert!(check_product(&p, f1, f2).unwrap().is_none());
            }
        })
    });
}

criterion_group!(benches, semantics, bisimulation, positivity, products);
criterion_main!(benches);
