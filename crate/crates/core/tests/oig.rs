mod common;

use common::*;
use dsbound::dims::exponential_dimension;
use dsbound::oig::*;
use dsbound::{HypothesisClass, DEFAULT_ENUMERATION_CAP};
use num_rational::Ratio;
use proptest::prelude::*;

fn ceil(r: Ratio<u64>) -> u64 {
    r.ceil().to_integer()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn edges_match_naive_grouping(seed in any::<u64>(), n in 1usize..4, k in 2u32..4) {
        let h = random_class_in(n, k, &mut rng(seed));
        let g = build_oig(&h).unwrap();
        let ours: Vec<Vec<usize>> = g.edges().iter().map(|e| e.members.clone()).collect();
        prop_assert_eq!(ours, edges_naive(&h));
        prop_assert_eq!(g.edges().iter().map(|e| e.len()).sum::<usize>(), n * h.len());
        for v in 0..h.len() {
            for i in 0..n {
                let e = &g.edges()[g.edge_of(v, i)];
                prop_assert!(e.direction == i && e.members.contains(&v));
            }
        }
    }

    #[test]
    fn shifting_laws(seed in any::<u64>(), n in 1usize..4, k in 2u32..5, ell in 1usize..4, i_raw in 0usize..4) {
        let h = random_class_in(n, k, &mut rng(seed));
        let i = i_raw % n;
        let s = shift(&h, i).unwrap();
        prop_assert_eq!(s.len(), h.len());
        prop_assert!(savd(&s, ell).unwrap() >= savd(&h, ell).unwrap());
        prop_assert!(exponential_dimension(&s, ell).unwrap().value <= exponential_dimension(&h, ell).unwrap().value);
        let (fp, _) = shift_fixed_point(&h);
        prop_assert_eq!(fp.len(), h.len());
        prop_assert!(is_downward_closed(&fp));
        for j in 0..n {
            prop_assert_eq!(shift(&fp, j).unwrap(), fp.clone());
        }
    }

    #[test]
    fn savd_matches_definition_and_is_below_exponential(seed in any::<u64>(), n in 1usize..4, k in 2u32..5, ell in 1usize..4) {
        let h = random_class_in(n, k, &mut rng(seed));
        let s = degree_stats(&build_oig(&h).unwrap(), ell);
        let (num, den) = savd_naive(&h, ell);
        prop_assert_eq!(s.savd, Ratio::new(num, den));
        prop_assert!(s.savd <= s.avd);
        prop_assert!(s.ell_degrees.iter().all(|&d| d <= n));
        prop_assert!(s.savd <= Ratio::from_integer(exponential_dimension(&h, ell).unwrap().value as u64));
    }

    #[test]
    fn orientation_is_optimal_on_tiny_classes(seed in any::<u64>(), n in 1usize..4, k in 2u32..4, size in 1usize..9, ell in 1usize..3) {
        let h = random_subset(n, k, size, &mut rng(seed));
        let g = build_oig(&h).unwrap();
        let o = orient_minmax(&g, ell);
        prop_assert_eq!(o.c_star, minmax_outdegree_bruteforce(&h, ell));
        prop_assert!(o.max_outdegree() <= o.c_star);
        for (e, list) in g.edges().iter().zip(&o.lists) {
            prop_assert!(list.len() == e.len().min(ell));
            prop_assert!(list.iter().all(|v| e.members.contains(v)));
        }
    }

    #[test]
    fn flow_saturates_at_rounded_density(seed in any::<u64>(), n in 1usize..4, k in 2u32..4, size in 1usize..13, ell in 1usize..3) {
        let h = random_subset(n, k, size, &mut rng(seed));
        let g = build_oig(&h).unwrap();
        let md = max_density_bruteforce(&h, ell, DEFAULT_SUBSET_CAP).unwrap();
        prop_assert_eq!(flow_value_at(&g, ell, ceil(md)), g.total_excess(ell) as u64);
        prop_assert!(orient_minmax(&g, ell).c_star as u64 <= ceil(md));
        prop_assert!(md >= degree_stats(&g, ell).savd);
    }
}

#[test]
fn full_binary_cube_density() {
    for n in 1..=4 {
        let h = HypothesisClass::full_cube(n, 2, DEFAULT_ENUMERATION_CAP).unwrap();
        let g = build_oig(&h).unwrap();
        assert_eq!(g.edges().len(), n * (1 << (n - 1)));
        assert_eq!(degree_stats(&g, 1).savd, Ratio::new(n as u64, 2));
    }
}

#[test]
fn orientation_dump_is_deterministic() {
    let h = class(2, 3, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1], &[2, 0]]);
    let g = build_oig(&h).unwrap();
    let a = orient_minmax(&g, 1).to_string();
    let b = orient_minmax(&g, 1).to_string();
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), g.edges().len());
    assert!(a.lines().all(|l| l.starts_with("dir=") && l.contains(" fixed=(") && l.contains(" list=")));
}
