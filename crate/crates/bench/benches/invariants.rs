use criterion::{black_box, criterion_group, criterion_main, Criterion};
use semple_bench::{corpus, worked_curve, WORKED_DERIVED};
use semple_core::codes::{count_codes, pc_from_derived, DerivedVector, RuleThreeReading, Tower};
use semple_core::cohomology::{betti_numbers, reduce, Polynomial, TowerPresentation};
use semple_core::curves::{characteristic_of, milnor_oracle};
use semple_core::milnor::{milnor_block, milnor_chain, BlockCode, ChainCode};
use semple_core::prolong::regularization_level;

fn characteristics(c: &mut Criterion) {
    let curve = worked_curve();
    c.bench_function("characteristic of worked curve", |b| {
        b.iter(|| characteristic_of(black_box(&curve)).unwrap())
    });
    let pc = characteristic_of(&curve).unwrap();
    c.bench_function("semigroup oracle", |b| {
        b.iter(|| milnor_oracle(black_box(&pc)))
    });
    let d = DerivedVector::new(WORKED_DERIVED.to_vec()).unwrap();
    c.bench_function("der2pc", |b| {
        b.iter(|| pc_from_derived(black_box(&d)).unwrap())
    });
}

fn prolongation(c: &mut Criterion) {
    let curves = corpus(50);
    c.bench_function("regularize 50 corpus curves", |b| {
        b.iter(|| {
            for curve in &curves {
                black_box(regularization_level(curve, 200).unwrap());
            }
        })
    });
}

fn formulas(c: &mut Criterion) {
    c.bench_function("milnor block 3 5 2", |b| {
        b.iter(|| milnor_block(black_box(&BlockCode::new(3, 5, 2))))
    });
    let chain = ChainCode::new(vec![(2, 2), (3, 1), (1, 3)]).unwrap();
    c.bench_function("milnor chain 2,2 3,1 1,3", |b| {
        b.iter(|| milnor_chain(black_box(&chain)))
    });
    c.bench_function("planar census level 500", |b| {
        b.iter(|| count_codes(black_box(500), Tower::Planar, RuleThreeReading::L1Only))
    });
}

fn cohomology(c: &mut Criterion) {
    let pres = TowerPresentation::product(12).unwrap();
    c.bench_function("betti 12 levels", |b| {
        b.iter(|| betti_numbers(black_box(&pres)))
    });
    let mut c1 = std::collections::BTreeMap::new();
    for k in 2..=8usize {
        c1.insert(k, (1..k).map(|i| ((i % 3) as i64 - 1).into()).collect());
    }
    let twisted = TowerPresentation::new(8, &c1).unwrap();
    let sum = (1..=8).fold(Polynomial::zero(), |acc, k| {
        &acc + &Polynomial::generator(k)
    });
    let p = sum.pow(4);
    c.bench_function("reduce (x1 + ... + x8)^4", |b| {
        b.iter(|| reduce(black_box(&p), &twisted).unwrap())
    });
}

criterion_group!(benches, characteristics, prolongation, formulas, cohomology);
criterion_main!(benches);
