use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liouville_core::modular::is_prime;
use liouville_core::verify::batch::{run_lemma, BatchParams};
use liouville_core::verify::comb::verify_comb;
use liouville_core::witness::{least_witness, scan_range, ScanConfig, Sign};
use liouville_core::{liouville_segment, Error, LemmaId, PrimeModulus};

/// `(-1)^Omega(n)` by trial division, independent of the library's sieve.
fn lambda_oracle(mut n: u64) -> i8 {
    let mut parity = 0u32;
    let mut p = 2u64;
    while p * p <= n {
        while n % p == 0 {
            n /= p;
            parity ^= 1;
        }
        p += 1;
    }
    if n > 1 {
        parity ^= 1;
    }
    if parity == 0 { 1 } else { -1 }
}

#[test]
fn segment_agrees_with_oracle_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let lo = rng.gen_range(1..10_000_000_000u64);
        let table = liouville_segment(lo, lo + 100_000).unwrap();
        for _ in 0..1_000 {
            let n = rng.gen_range(lo..lo + 100_000);
            assert_eq!(table.get(n), lambda_oracle(n), "n = {n}");
        }
    }
}

#[test]
fn witnesses_are_minimal_on_random_records() {
    let reports = scan_range(3, 199, 0.0, &ScanConfig::default()).unwrap();
    let records: Vec<_> = reports.iter().flat_map(|r| r.per_class.iter().copied()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for r in records.choose_multiple(&mut rng, 100) {
        for (least, sign) in [(r.least_plus, 1i8), (r.least_minus, -1)] {
            assert_eq!(least % r.q, r.a);
            assert_eq!(lambda_oracle(least), sign);
            let mut n = r.a;
            while n < least {
                assert_ne!(lambda_oracle(n), sign, "{n} precedes {least} for {r:?}");
                n += r.q;
            }
        }
        assert_ne!(r.least_plus, r.least_minus);
    }
}

#[test]
fn n_of_q_is_the_max_over_its_rows() {
    for r in scan_range(3, 97, 0.0, &ScanConfig::default()).unwrap() {
        let max = r.per_class.iter().map(|w| w.least_plus.max(w.least_minus)).max().unwrap();
        assert_eq!(r.n_of_q, max);
        let classes: BTreeSet<u64> = r.per_class.iter().map(|w| w.a).collect();
        assert_eq!(classes, (1..r.q).collect());
    }
}

#[test]
fn range_errors_and_empty_ranges() {
    let config = ScanConfig::default();
    assert!(scan_range(2, 10, 0.0, &config).is_err());
    assert!(scan_range(10, 9, 0.0, &config).is_err());
    assert!(scan_range(24, 28, 0.0, &config).unwrap().is_empty());
    assert!(ScanConfig::new(512).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enlarging_the_cap_keeps_the_witness(qi in 0usize..20, a_seed in 0u64..1_000, extra in 0u64..50_000, minus in any::<bool>()) {
        let primes: Vec<u64> = (3..200).filter(|&p| is_prime(p)).collect();
        let q = PrimeModulus::new(primes[qi % primes.len()]).unwrap();
        let a = 1 + a_seed % (q.q() - 1);
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let cap = (q.q() as f64).powf(2.5).ceil() as u64;
        let found = least_witness(&q, a, sign, cap, 1024).unwrap().unwrap();
        prop_assert_eq!(least_witness(&q, a, sign, found, 1024).unwrap(), Some(found));
        prop_assert_eq!(least_witness(&q, a, sign, cap + extra, 4096).unwrap(), Some(found));
        if found > a {
            prop_assert_eq!(least_witness(&q, a, sign, found - 1, 2048).unwrap(), None);
        }
    }

    #[test]
    fn reports_carry_exactly_the_schema_fields(qi in 0usize..6, li in 0usize..12) {
        let q = [5u64, 7, 11, 13, 29, 101][qi];
        let lemma = LemmaId::ALL[li];
        let report = run_lemma(lemma, &BatchParams::new(q)).unwrap();
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let keys: BTreeSet<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
        let expected: BTreeSet<&str> =
            ["lemma", "params", "lhs", "rhs", "residual", "tolerance", "pass", "runtime_ms"].into();
        prop_assert_eq!(keys, expected);
        prop_assert_eq!(value["lemma"].as_str().unwrap(), lemma.name());
        prop_assert_eq!(lemma.name().parse::<LemmaId>().unwrap(), lemma);
        prop_assert!(report.pass, "{}", report.to_json());
    }

    #[test]
    fn comb_hypothesis_is_enforced(qi in 0usize..8, seed in any::<u64>()) {
        let q = PrimeModulus::new([3u64, 5, 7, 11, 13, 17, 19, 23][qi]).unwrap();
        let phi = q.phi() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let units: Vec<u64> = (1..q.q()).collect();
        let size_a = rng.gen_range(1..=phi);
        let a: Vec<u64> = units.choose_multiple(&mut rng, size_a).copied().collect();
        let size_b = rng.gen_range(1..=phi);
        let b: Vec<u64> = units.choose_multiple(&mut rng, size_b).copied().collect();
        match verify_comb(&q, &a, &b) {
            Ok(r) => {
                prop_assert!(size_a + size_b > phi);
                prop_assert!(r.pass);
            }
            Err(Error::HypothesisViolated(_)) => prop_assert!(size_a + size_b <= phi),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
