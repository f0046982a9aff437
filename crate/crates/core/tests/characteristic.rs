use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use semple_core::corpus::random_curves;
use semple_core::curves::{
    characteristic_of, milnor_oracle, semigroup, PlaneCurveGerm, PuiseuxCharacteristic,
};
use semple_core::series::{Rational, TruncatedSeries};

fn pc(l: &[u32]) -> PuiseuxCharacteristic {
    PuiseuxCharacteristic::new(l.to_vec()).unwrap()
}

#[test]
fn two_exponent_branches() {
    for m in 2..=12u32 {
        for n in m + 1..=40 {
            if m.gcd(&n) != 1 {
                continue;
            }
            let expected = u64::from((m - 1) * (n - 1));
            let char = pc(&[m, n]);
            assert_eq!(milnor_oracle(&char), expected, "[{m}; {n}]");
            let s = semigroup(&char);
            assert_eq!(s.conductor, expected);
            assert_eq!(s.generators, vec![u64::from(m), u64::from(n)]);
        }
    }
}

#[test]
fn worked_characteristic() {
    let char = pc(&[24, 90, 94, 103]);
    assert_eq!(char.e(), &[24, 6, 2, 1]);
    let s = semigroup(&char);
    assert_eq!(s.conductor, 2 * s.delta);
    assert_eq!(s.generators, vec![24, 90, 364, 1101]);
}

#[test]
fn symmetric_semigroups_on_corpus() {
    for c in random_curves(100, 24, 11) {
        let char = characteristic_of(&c).unwrap();
        let s = semigroup(&char);
        assert_eq!(s.conductor, 2 * s.delta, "{c}");
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=3).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn characteristic_ignores_reparametrization(
        seed in 0u64..1000,
        a in small_rational(),
        b in small_rational(),
    ) {
        let c = &random_curves(1, 12, seed)[0];
        let trunc = c.trunc();
        let phi = TruncatedSeries::from_terms(
            [(1, Rational::from_integer(1.into())), (2, a), (3, b)],
            trunc,
        );
        let moved = PlaneCurveGerm::new(
            c.x().compose(&phi).unwrap(),
            c.y().compose(&phi).unwrap(),
        ).unwrap();
        prop_assert_eq!(characteristic_of(&moved).unwrap(), characteristic_of(c).unwrap());
    }

    #[test]
    fn characteristic_ignores_coordinate_swap(seed in 0u64..1000) {
        let c = &random_curves(1, 16, seed)[0];
        prop_assert_eq!(characteristic_of(&c.swapped()).unwrap(), characteristic_of(c).unwrap());
    }
}
