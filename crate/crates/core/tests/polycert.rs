mod common;

use common::*;
use dsbound::bounds::{ds_sauer_bound, extremal_class};
use dsbound::class::words;
use dsbound::dims::ds_dimension;
use dsbound::polycert::*;
use dsbound::{all_nonempty_classes, DEFAULT_ENUMERATION_CAP};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bareiss_rank_matches_rational_oracle(
        rows in proptest::collection::vec(proptest::collection::vec(-4i64..5, 5), 1..7)
    ) {
        let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        prop_assert_eq!(rank_fraction_free(m.clone(), DEFAULT_BIT_CAP).unwrap(), rank_rational_oracle(&m));
    }

    #[test]
    fn spanning_holds_on_random_classes(seed in any::<u64>(), n in 1usize..5, k in 2u32..5, ell_raw in 0usize..4) {
        let h = random_class_in(n, k, &mut rng(seed));
        let ell = 1 + ell_raw % (k as usize - 1);
        let d = ds_dimension(&h, ell).unwrap().value;
        let r = spanning_certificate(&h, ell, d, DEFAULT_ENUMERATION_CAP).unwrap();
        prop_assert!(r.spans);
    }

    #[test]
    fn replay_is_unit_triangular(seed in any::<u64>(), n in 1usize..5, k in 2u32..4, size in 1usize..21, ell_raw in 0usize..3) {
        let h = random_subset(n, k, size, &mut rng(seed));
        let ell = 1 + ell_raw % k as usize;
        let d = ds_dimension(&h, ell).unwrap().value;
        let cert = construct_q(&h, ell, d, DEFAULT_ENUMERATION_CAP).unwrap();
        let check = verify_certificate(&cert);
        prop_assert!(check.is_valid(), "{:?}", check);
        let a = cert.eval_matrix.as_ref().unwrap();
        for (t, row) in a.iter().enumerate() {
            prop_assert!(row[t].is_one());
            prop_assert!(row[t + 1..].iter().all(Zero::is_zero));
        }
    }
}

#[test]
fn monomial_count_equals_bound() {
    for n in 0..=6 {
        for k in 2..=5u32 {
            for ell in 1..=k as usize {
                for d in 0..=n {
                    let m = monomial_set(n, k, ell, d, DEFAULT_ENUMERATION_CAP).unwrap();
                    assert_eq!(BigUint::from(m.len()), ds_sauer_bound(n, k, ell, d).unwrap());
                }
            }
        }
    }
}

/// Every `(n, k)` with `n·k^n ≤ 10^5`: each tested indicator is evaluated on
/// all of `[k]^n`. Small cubes test every pattern; larger ones a fixed sample.
#[test]
fn indicators_are_kronecker_deltas() {
    let mut r = rng(5);
    for k in 2..=64u32 {
        for n in 1..=16usize {
            let points = match (k as usize).checked_pow(n as u32) {
                Some(p) if n * p <= 100_000 => p,
                _ => break,
            };
            let all: Vec<_> = words(n, k).collect();
            let tested: Vec<usize> = if points <= 64 {
                (0..points).collect()
            } else {
                let mut idx = vec![0, points - 1];
                idx.extend((0..6).map(|_| r.gen_range(0..points)));
                idx
            };
            for t in tested {
                let values = indicator_poly(&all[t], k).eval_grid(k);
                for (x, v) in values.iter().enumerate() {
                    let expect = if x == t { BigRational::one() } else { BigRational::zero() };
                    assert_eq!(v, &expect, "n={n} k={k} h={} x={}", all[t], all[x]);
                }
            }
        }
    }
}

#[test]
fn spanning_on_exhaustive_sweep() {
    for h in all_nonempty_classes(2, 3).unwrap() {
        for ell in 1..=2 {
            let d = ds_dimension(&h, ell).unwrap().value;
            assert!(spanning_certificate(&h, ell, d, DEFAULT_ENUMERATION_CAP).unwrap().spans, "{h}");
        }
    }
}

#[test]
fn extremal_classes_have_square_invertible_matrices() {
    for (n, k, ell, d) in [(2, 3, 1, 1), (3, 3, 1, 1), (3, 3, 2, 2), (3, 4, 2, 1), (4, 2, 1, 2)] {
        let h = extremal_class(n, k, ell, d, DEFAULT_ENUMERATION_CAP).unwrap();
        let r = spanning_certificate(&h, ell, d, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(r.spans);
        assert_eq!(r.monomials, h.len());
    }
}

#[test]
fn serialized_certificates_verify() {
    let h = extremal_class(3, 3, 1, 1, DEFAULT_ENUMERATION_CAP).unwrap();
    let cert = construct_q(&h, 1, 1, DEFAULT_ENUMERATION_CAP).unwrap();
    let json = cert.to_json();
    let back = Certificate::from_json(&json).unwrap();
    assert!(verify_certificate(&back).is_valid());
    assert_eq!(back.to_text().lines().count(), h.len() + 1);

    let peel = peeling_order(&h, 1, 1).unwrap();
    let back = Certificate::from_json(&peel.to_json()).unwrap();
    assert!(back.q_polys.is_none());
    assert!(verify_certificate(&back).is_valid());
}

#[test]
fn support_stays_in_the_monomial_set() {
    let h = class(3, 3, &[&[0, 0, 0], &[0, 1, 2], &[1, 0, 0], &[2, 2, 1], &[0, 0, 1], &[1, 1, 1]]);
    for ell in 1..=2 {
        let d = ds_dimension(&h, ell).unwrap().value;
        let cert = construct_q(&h, ell, d, DEFAULT_ENUMERATION_CAP).unwrap();
        let m = monomial_set(3, 3, ell, d, DEFAULT_ENUMERATION_CAP).unwrap();
        for q in cert.q_polys.as_ref().unwrap() {
            assert!(q.terms().keys().all(|e| m.admits(e)));
        }
    }
}
