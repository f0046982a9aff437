use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semple_core::cohomology::{
    betti_numbers, multiply, reduce, reduce_with, CohomologyClass, Polynomial, Strategy as Rewrite,
    TowerPresentation,
};

fn random_presentation(rng: &mut ChaCha8Rng, n: usize) -> TowerPresentation {
    let c1: BTreeMap<usize, Vec<BigInt>> = (2..=n)
        .map(|k| {
            (
                k,
                (1..k)
                    .map(|_| BigInt::from(rng.gen_range(-3..=3)))
                    .collect(),
            )
        })
        .collect();
    TowerPresentation::new(n, &c1).unwrap()
}

fn random_polynomial(rng: &mut ChaCha8Rng, n: usize, max_degree: u32) -> Polynomial {
    let terms = (0..rng.gen_range(1..=5)).map(|_| {
        let degree = rng.gen_range(0..=max_degree);
        let mut e = vec![0u32; n];
        for _ in 0..degree {
            e[rng.gen_range(0..n)] += 1;
        }
        (e, BigInt::from(rng.gen_range(-5..=5)))
    });
    Polynomial::from_terms(terms)
}

#[test]
fn rewriting_is_confluent() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let pres = random_presentation(&mut rng, n);
        let p = random_polynomial(&mut rng, n, 6);
        let high = reduce_with(&p, &pres, Rewrite::HighestFirst).unwrap();
        let low = reduce_with(&p, &pres, Rewrite::LowestFirst).unwrap();
        assert_eq!(high, low, "{p}");
    }
}

#[test]
fn reduction_preserves_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..300 {
        let n = rng.gen_range(2..=6);
        let pres = random_presentation(&mut rng, n);
        let degree = rng.gen_range(1..=5);
        let mut e = vec![0u32; n];
        for _ in 0..degree {
            e[rng.gen_range(0..n)] += 1;
        }
        let p = Polynomial::from_terms([(e, BigInt::from(1))]);
        let r = reduce(&p, &pres).unwrap();
        assert!(r.is_zero() || r.gradings() == vec![2 * degree], "{p}");
    }
}

#[test]
fn betti_numbers_count_normal_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=10 {
        let pres = random_presentation(&mut rng, n);
        let mut direct = vec![0u64; n + 1];
        for mask in 0u64..(1 << n) {
            let m = CohomologyClass::monomial(mask);
            assert_eq!(reduce(&m.to_polynomial(), &pres).unwrap(), m);
            direct[mask.count_ones() as usize] += 1;
        }
        let betti: Vec<u64> = betti_numbers(&pres)
            .iter()
            .map(|b| b.try_into().unwrap())
            .collect();
        assert_eq!(betti, direct, "n = {n}");
        assert_eq!(
            betti,
            betti_numbers(&TowerPresentation::product(n).unwrap())
                .iter()
                .map(|b| b.try_into().unwrap())
                .collect::<Vec<u64>>()
        );
    }
}

#[test]
fn nonzero_chern_data_leaves_a_surviving_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let pres = random_presentation(&mut rng, n);
        match pres.nontriviality_witness() {
            Some((k, square)) => {
                assert!(!pres.is_product_presentation());
                let expected =
                    Polynomial::from_terms(pres.c1(k).iter().enumerate().map(|(j, c)| {
                        let mut e = vec![0; k];
                        e[j] = 1;
                        e[k - 1] = 1;
                        (e, c.clone())
                    }));
                assert_eq!(square, reduce(&expected, &pres).unwrap());
            }
            None => assert!(pres.is_product_presentation()),
        }
    }
}

fn class_strategy(n: usize) -> impl Strategy<Value = CohomologyClass> {
    prop::collection::btree_map(0u64..(1 << n), -4i64..=4, 0..5).prop_map(|terms| {
        let p = Polynomial::from_terms(terms.into_iter().map(|(mask, c)| {
            (
                (0..64).map(|b| ((mask >> b) & 1) as u32).collect(),
                BigInt::from(c),
            )
        }));
        reduce(&p, &TowerPresentation::product(6).unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(
        a in class_strategy(6),
        b in class_strategy(6),
        c in class_strategy(6),
        seed in 0u64..10_000,
    ) {
        let pres = random_presentation(&mut ChaCha8Rng::seed_from_u64(seed), 6);
        let ab = multiply(&a, &b, &pres).unwrap();
        prop_assert_eq!(&ab, &multiply(&b, &a, &pres).unwrap());
        let left = multiply(&ab, &c, &pres).unwrap();
        let right = multiply(&a, &multiply(&b, &c, &pres).unwrap(), &pres).unwrap();
        prop_assert_eq!(left, right);
    }
}
