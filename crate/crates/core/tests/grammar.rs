use num_bigint::BigUint;
use proptest::prelude::*;
use semple_core::codes::{
    count_codes, derived_from_sgv, enumerate_codes, parse_code, pc_from_derived, sgv_from_derived,
    DerivedVector, RuleThreeReading, SmallGrowthVector, Tower,
};
use semple_core::curves::PuiseuxCharacteristic;
use semple_core::Error;

const READINGS: [RuleThreeReading; 2] = [RuleThreeReading::L1Only, RuleThreeReading::AnyL];

#[test]
fn census_matches_enumeration() {
    for reading in READINGS {
        for tower in [Tower::Planar, Tower::Spatial] {
            for level in 1..=8 {
                assert_eq!(
                    count_codes(level, tower, reading),
                    BigUint::from(enumerate_codes(level, tower, reading)),
                    "{tower:?} level {level} {reading:?}"
                );
            }
        }
    }
}

#[test]
fn census_values() {
    let r = RuleThreeReading::L1Only;
    let planar: Vec<BigUint> = (1..=5).map(|l| count_codes(l, Tower::Planar, r)).collect();
    assert_eq!(planar, [1u32, 2, 5, 13, 34].map(BigUint::from));
    let spatial: Vec<BigUint> = (1..=4).map(|l| count_codes(l, Tower::Spatial, r)).collect();
    assert_eq!(spatial, [1u32, 2, 6, 23].map(BigUint::from));
}

#[test]
fn planar_recurrence() {
    let r = RuleThreeReading::L1Only;
    let counts: Vec<BigUint> = (1..=60).map(|l| count_codes(l, Tower::Planar, r)).collect();
    for l in 2..counts.len() {
        assert_eq!(
            &counts[l] + &counts[l - 2],
            &counts[l - 1] * 3u32,
            "level {}",
            l + 1
        );
    }
}

fn derived_vector() -> impl Strategy<Value = DerivedVector> {
    prop::collection::vec(0u32..3, 0..12).prop_map(|steps| {
        let mut entries = vec![1];
        for s in steps {
            let last = *entries.last().unwrap();
            entries.push(last + s);
        }
        DerivedVector::new(entries).unwrap()
    })
}

fn growth_vector() -> impl Strategy<Value = SmallGrowthVector> {
    prop::collection::vec(0u32..=1, 0..30).prop_map(|steps| {
        let mut dims = vec![2];
        for s in steps {
            let last = *dims.last().unwrap();
            dims.push(last + s);
        }
        SmallGrowthVector::new(dims).unwrap()
    })
}

proptest! {
    #[test]
    fn derived_round_trip(d in derived_vector()) {
        prop_assert_eq!(derived_from_sgv(&sgv_from_derived(&d)).unwrap(), d);
    }

    #[test]
    fn growth_round_trip(s in growth_vector()) {
        if let Ok(d) = derived_from_sgv(&s) {
            prop_assert_eq!(sgv_from_derived(&d), s);
        }
    }

    #[test]
    fn derived_characteristics_are_valid(d in derived_vector()) {
        match pc_from_derived(&d) {
            Ok(pc) => {
                prop_assert_eq!(pc.e().last(), Some(&1));
                prop_assert_eq!(PuiseuxCharacteristic::new(pc.lambda().to_vec()).unwrap(), pc);
            }
            Err(e) => prop_assert!(matches!(e, Error::MalformedVector(_))),
        }
    }

    #[test]
    fn code_strings_round_trip(
        letters in prop::collection::vec(prop::sample::select(vec!["R", "V", "T1", "T2", "L1", "L2", "L3"]), 1..12),
    ) {
        let text: String = letters.concat();
        let code = parse_code(&text, None).unwrap();
        prop_assert_eq!(parse_code(&code.to_string(), None).unwrap(), code.clone());
        prop_assert_eq!(parse_code(&code.compact(), None).unwrap(), code);
    }
}
