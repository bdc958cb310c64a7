//! Brute-force oracles, written directly from the definitions and sharing no
//! code with the library's search routines.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use dsbound::{HypothesisClass, Label, Pattern};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn class(n: usize, k: Label, rows: &[&[Label]]) -> HypothesisClass {
    HypothesisClass::new(n, k, rows.iter().map(|r| Pattern(r.to_vec())).collect()).unwrap()
}

/// Number of members of `set` that differ from `v` exactly at coordinate `i`.
fn neighbours(set: &[&Vec<Label>], v: &[Label], i: usize) -> usize {
    set.iter()
        .filter(|w| w[i] != v[i] && (0..v.len()).all(|j| j == i || w[j] == v[j]))
        .count()
}

/// Definition check: nonempty and every member has `m − 1` neighbours in every direction.
pub fn is_pseudocube_naive(set: &[&Vec<Label>], n: usize, m: usize) -> bool {
    !set.is_empty() && set.iter().all(|v| (0..n).all(|i| neighbours(set, v, i) + 1 >= m))
}

/// Union of all pseudo-cube subsets, found by enumerating every subset.
pub fn max_pseudocube_bruteforce(points: &[Vec<Label>], n: usize, m: usize) -> BTreeSet<Vec<Label>> {
    assert!(points.len() <= 16, "oracle is exponential");
    let mut union = BTreeSet::new();
    for mask in 1u32..(1 << points.len()) {
        let subset: Vec<&Vec<Label>> = (0..points.len()).filter(|i| mask >> i & 1 == 1).map(|i| &points[i]).collect();
        if is_pseudocube_naive(&subset, n, m) {
            union.extend(subset.into_iter().cloned());
        }
    }
    union
}

fn projection(h: &HypothesisClass, coords: &[usize]) -> Vec<Vec<Label>> {
    h.patterns()
        .iter()
        .map(|p| coords.iter().map(|&c| p[c]).collect::<Vec<_>>())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// ℓ-DS dimension by subset enumeration inside every projection.
pub fn ds_bruteforce(h: &HypothesisClass, ell: usize) -> usize {
    (1..=h.n())
        .rev()
        .find(|&d| {
            (0..h.n()).combinations(d).any(|s| {
                let proj = projection(h, &s);
                !max_pseudocube_bruteforce(&proj, d, ell + 1).is_empty()
            })
        })
        .unwrap_or(0)
}

/// ℓ-Natarajan dimension by trying every product of `(ℓ+1)`-subsets.
pub fn natarajan_bruteforce(h: &HypothesisClass, ell: usize) -> usize {
    let labels: Vec<Label> = (0..h.k()).collect();
    (1..=h.n())
        .rev()
        .find(|&d| {
            (0..h.n()).combinations(d).any(|s| {
                let proj: BTreeSet<Vec<Label>> = projection(h, &s).into_iter().collect();
                let choices: Vec<Vec<Label>> = labels.iter().copied().combinations(ell + 1).collect();
                (0..d).map(|_| choices.iter()).multi_cartesian_product().any(|factors| {
                    factors
                        .iter()
                        .map(|y| y.iter().copied())
                        .multi_cartesian_product()
                        .all(|t| proj.contains(&t))
                })
            })
        })
        .unwrap_or(0)
}

/// ℓ-exponential dimension over coordinate sequences with repetition.
pub fn exponential_bruteforce(h: &HypothesisClass, ell: usize) -> usize {
    (1..=h.n())
        .rev()
        .find(|&d| {
            (0..d).map(|_| 0..h.n()).multi_cartesian_product().any(|seq| {
                let size = h.patterns().iter().map(|p| seq.iter().map(|&c| p[c]).collect::<Vec<_>>()).unique().count();
                size as u128 >= ((ell + 1) as u128).pow(d as u32)
            })
        })
        .unwrap_or(0)
}

/// Edges of the one-inclusion graph, as sorted lists of pattern indices.
pub fn edges_naive(h: &HypothesisClass) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<(usize, Vec<Option<Label>>), Vec<usize>> = BTreeMap::new();
    for (v, p) in h.patterns().iter().enumerate() {
        for i in 0..h.n() {
            let key: Vec<Option<Label>> = p.iter().enumerate().map(|(j, &l)| (j != i).then_some(l)).collect();
            groups.entry((i, key)).or_default().push(v);
        }
    }
    groups.into_values().collect()
}

/// `Σ_e (|e| − ℓ)_+ / |H|` as a reduced fraction `(num, den)`.
pub fn savd_naive(h: &HypothesisClass, ell: usize) -> (u64, u64) {
    let excess: u64 = edges_naive(h).iter().map(|e| e.len().saturating_sub(ell) as u64).sum();
    let g = num_integer::gcd(excess, h.len() as u64);
    (excess / g, h.len() as u64 / g)
}

/// Minimum over all list orientations of the maximum ℓ-outdegree.
pub fn minmax_outdegree_bruteforce(h: &HypothesisClass, ell: usize) -> usize {
    assert!(h.len() <= 8, "oracle is exponential");
    let heavy: Vec<Vec<usize>> = edges_naive(h).into_iter().filter(|e| e.len() > ell).collect();
    let options: Vec<Vec<Vec<usize>>> = heavy.iter().map(|e| e.iter().copied().combinations(ell).collect()).collect();
    if options.is_empty() {
        return 0;
    }
    options
        .iter()
        .map(|o| o.iter())
        .multi_cartesian_product()
        .map(|choice| {
            let mut out = vec![0usize; h.len()];
            for (e, kept) in heavy.iter().zip(choice) {
                for v in e.iter().filter(|v| !kept.contains(v)) {
                    out[*v] += 1;
                }
            }
            out.into_iter().max().unwrap_or(0)
        })
        .min()
        .unwrap()
}

/// Rank over the rationals, eliminating from the last column backwards and
/// pivoting on the entry of largest magnitude.
pub fn rank_rational_oracle(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in (0..cols).rev() {
        let Some(p) = (rank..m.len()).filter(|&r| !m[r][c].is_zero()).max_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()))
        else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for j in 0..cols {
                    let delta = &f * &m[rank][j];
                    m[r][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A uniformly random subset of `[k]^n` of the given size.
pub fn random_subset(n: usize, k: Label, size: usize, rng: &mut ChaCha8Rng) -> HypothesisClass {
    let all: Vec<Vec<Label>> = (0..n).map(|_| 0..k).multi_cartesian_product().collect();
    let chosen: Vec<Pattern> = all.choose_multiple(rng, size.min(all.len())).cloned().map(Pattern).collect();
    HypothesisClass::new(n, k, chosen).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_class_in(n: usize, k: Label, rng: &mut ChaCha8Rng) -> HypothesisClass {
    let total = (k as usize).pow(n as u32);
    let size = rng.gen_range(1..=total);
    random_subset(n, k, size, rng)
}
