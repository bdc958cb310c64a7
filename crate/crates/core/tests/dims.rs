mod common;

use common::*;
use dsbound::class::words;
use dsbound::dims::*;
use dsbound::{all_nonempty_classes, ClassFormat, CoordinateSet, HypothesisClass, Label, Pattern};
use proptest::prelude::*;

fn arb_class(max_n: usize, max_k: Label, max_size: usize) -> impl Strategy<Value = HypothesisClass> {
    (1..=max_n, 2..=max_k).prop_flat_map(move |(n, k)| {
        let total = (k as usize).pow(n as u32);
        proptest::sample::subsequence(words(n, k).collect::<Vec<_>>(), 1..=total.min(max_size))
            .prop_map(move |ps| HypothesisClass::new(n, k, ps).unwrap())
    })
}

fn sub_class(h: &HypothesisClass, mask: u64) -> HypothesisClass {
    let ps: Vec<Pattern> = h.patterns().iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, p)| p.clone()).collect();
    HypothesisClass::new(h.n(), h.k(), ps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialization_round_trips(h in arb_class(4, 4, 40)) {
        for fmt in [ClassFormat::Text, ClassFormat::Json] {
            let text = h.serialize(fmt);
            let back = dsbound::parse_class(&text, fmt).unwrap();
            prop_assert_eq!(&back, &h);
            prop_assert_eq!(back.serialize(fmt), text);
        }
    }

    #[test]
    fn projection_composes(h in arb_class(4, 3, 40), s_mask in 1u32..16, t_mask in 1u32..16) {
        let s: Vec<usize> = (0..h.n()).filter(|i| s_mask >> i & 1 == 1).collect();
        prop_assume!(!s.is_empty());
        let t: Vec<usize> = (0..s.len()).filter(|i| t_mask >> i & 1 == 1).collect();
        prop_assume!(!t.is_empty());
        let s = CoordinateSet::new(s, h.n()).unwrap();
        let t = CoordinateSet::new(t, s.len()).unwrap();
        let lhs = h.project(&s).unwrap().project(&t).unwrap();
        let rhs = h.project(&s.select(&t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(h.project(&s).unwrap().len() <= h.len());
    }

    #[test]
    fn peeling_core_is_the_maximal_pseudocube(h in arb_class(3, 3, 14), m in 1usize..4) {
        let report = max_pseudocube_core(&h, m).unwrap();
        let raw: Vec<Vec<Label>> = h.patterns().iter().map(|p| p.0.clone()).collect();
        let oracle: Vec<Vec<Label>> = max_pseudocube_bruteforce(&raw, h.n(), m).into_iter().collect();
        let core: Vec<Vec<Label>> = report.core.iter().map(|p| p.0.clone()).collect();
        prop_assert_eq!(core, oracle);
        prop_assert_eq!(report.core.len() + report.peel_trace.len(), h.len());
        prop_assert_eq!(report.is_pseudo_cube, is_pseudocube(&h, m).unwrap());
    }

    #[test]
    fn dimensions_match_oracles(h in arb_class(3, 3, 12), ell in 1usize..3) {
        let ds = ds_dimension(&h, ell).unwrap();
        let nat = natarajan_dimension(&h, ell).unwrap();
        let exp = exponential_dimension(&h, ell).unwrap();
        prop_assert_eq!(ds.value, ds_bruteforce(&h, ell));
        prop_assert_eq!(nat.value, natarajan_bruteforce(&h, ell));
        prop_assert_eq!(exp.value, exponential_bruteforce(&h, ell));
        prop_assert!(ds.verify(&h) && nat.verify(&h) && exp.verify(&h));
    }

    #[test]
    fn dimension_chain_and_monotonicity(h in arb_class(4, 4, 60), ell in 1usize..4, mask in any::<u64>()) {
        let ds = ds_dimension(&h, ell).unwrap();
        let nat = natarajan_dimension(&h, ell).unwrap();
        let exp = exponential_dimension(&h, ell).unwrap();
        prop_assert!(nat.value <= ds.value && ds.value <= exp.value);
        prop_assert!(ds.verify(&h) && nat.verify(&h) && exp.verify(&h));
        let sub = sub_class(&h, mask);
        prop_assume!(!sub.is_empty());
        prop_assert!(ds_dimension(&sub, ell).unwrap().value <= ds.value);
        prop_assert!(natarajan_dimension(&sub, ell).unwrap().value <= nat.value);
        prop_assert!(exponential_dimension(&sub, ell).unwrap().value <= exp.value);
    }

    #[test]
    fn graph_witnesses_verify(h in arb_class(3, 3, 20)) {
        let c = ListClass::from_class(&h);
        let g = graph_dimension(&c, dsbound::DEFAULT_ENUMERATION_CAP).unwrap();
        prop_assert!(c.verify_graph_witness(&g));
        // Singleton lists: the graph dimension dominates the Natarajan dimension at ℓ = 1.
        prop_assert!(g.value >= natarajan_dimension(&h, 1).unwrap().value);
    }
}

#[test]
fn chain_holds_on_exhaustive_small_cube() {
    for h in all_nonempty_classes(2, 3).unwrap() {
        for ell in 1..=2 {
            let ds = ds_dimension(&h, ell).unwrap();
            let nat = natarajan_dimension(&h, ell).unwrap();
            let exp = exponential_dimension(&h, ell).unwrap();
            assert!(nat.value <= ds.value && ds.value <= exp.value, "{h}");
            assert_eq!(ds.value, ds_bruteforce(&h, ell), "{h}");
            assert_eq!(nat.value, natarajan_bruteforce(&h, ell), "{h}");
        }
    }
}

#[test]
fn chain_holds_on_random_corpus() {
    let mut r = rng(17);
    for _ in 0..1000 {
        let h = random_class_in(3, 4, &mut r);
        for ell in 1..=3 {
            let ds = ds_dimension(&h, ell).unwrap().value;
            let nat = natarajan_dimension(&h, ell).unwrap().value;
            let exp = exponential_dimension(&h, ell).unwrap().value;
            assert!(nat <= ds && ds <= exp, "{h} ℓ={ell}");
        }
    }
}

#[test]
fn small_worked_examples() {
    let corner = class(2, 2, &[&[0, 0], &[0, 1], &[1, 0]]);
    let oracle = max_pseudocube_bruteforce(&[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1], vec![2, 2]], 2, 2);
    assert_eq!(oracle.len(), 4);
    assert!(max_pseudocube_bruteforce(&[vec![0, 0], vec![0, 1], vec![1, 0]], 2, 2).is_empty());
    assert_eq!(ds_bruteforce(&corner, 1), 1);
    let hexagon = class(2, 7, &[&[1, 2], &[3, 2], &[3, 4], &[5, 4], &[5, 6], &[1, 6]]);
    assert_eq!(natarajan_bruteforce(&hexagon, 1), 1);
    assert_eq!(natarajan_dimension(&hexagon, 1).unwrap().value, 1);
    assert_eq!(exponential_bruteforce(&corner, 1), 1);
}

#[test]
fn ell_at_least_k_is_dimension_zero_with_note() {
    let h = HypothesisClass::full_cube(2, 3, 1 << 10).unwrap();
    for ell in [3, 4] {
        let r = ds_dimension(&h, ell).unwrap();
        assert_eq!(r.value, 0);
        assert!(!r.notes.is_empty());
        assert_eq!(natarajan_dimension(&h, ell).unwrap().value, 0);
    }
}

#[test]
fn tie_break_is_lexicographic() {
    // Both single coordinates are shattered; the witness is {0}.
    let h = class(2, 2, &[&[0, 0], &[1, 1]]);
    let r = ds_dimension(&h, 1).unwrap();
    assert_eq!(r.value, 1);
    assert_eq!(r.witness.indices(), &[0]);
}
