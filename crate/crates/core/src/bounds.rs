//! Sauer-type upper bounds, the classes attaining them, and the small-case
//! combinatorial checks (extension graphs for `ℓ = 1`, bipartite peeling for `n = 2`).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::class::{check_cap, HypothesisClass, Label, Pattern};
use crate::dims::ds_dimension;
use crate::error::{Error, Result};

/// Big integers as decimal strings rather than digit arrays.
fn decimal<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn binomial(n: usize, r: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn pow(base: u64, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

fn check_d(n: usize, d: usize) -> Result<()> {
    if d > n {
        return Err(Error::InvalidParameter(format!("d = {d} exceeds n = {n}")));
    }
    Ok(())
}

/// `Σ_{i=0}^{d} C(n,i) (k−ℓ)^i ℓ^{n−i}`.
pub fn ds_sauer_bound(n: usize, k: Label, ell: usize, d: usize) -> Result<BigUint> {
    check_d(n, d)?;
    if ell == 0 || ell > k as usize {
        return Err(Error::InvalidParameter(format!("need 1 <= ℓ <= k (got ℓ = {ell}, k = {k})")));
    }
    let free = k as u64 - ell as u64;
    Ok((0..=d)
        .map(|i| binomial(n, i) * pow(free, i) * pow(ell as u64, n - i))
        .sum())
}

/// `ℓ^{n−d} Σ_{i=0}^{d} C(n,i) C(k,ℓ+1)^i`.
pub fn natarajan_sauer_bound(n: usize, k: Label, ell: usize, d: usize) -> Result<BigUint> {
    check_d(n, d)?;
    if ell == 0 || ell + 1 > k as usize {
        return Err(Error::InvalidParameter(format!("need 1 <= ℓ < k (got ℓ = {ell}, k = {k})")));
    }
    let choose = binomial(k as usize, ell + 1);
    let sum: BigUint = (0..=d).map(|i| binomial(n, i) * num_traits::pow(choose.clone(), i)).sum();
    Ok(pow(ell as u64, n - d) * sum)
}

/// All patterns with at most `d` coordinates whose label is `>= ℓ`.
pub fn extremal_class(n: usize, k: Label, ell: usize, d: usize, cap: u128) -> Result<HypothesisClass> {
    let size = ds_sauer_bound(n, k, ell, d)?;
    let size_u128 = u128::try_from(&size).unwrap_or(u128::MAX);
    check_cap("extremal class", size_u128, cap)?;
    // Words with at most d labels >= ℓ, enumerated depth-first in
    // lexicographic order so the work is proportional to the output.
    fn extend(prefix: &mut Vec<Label>, high: usize, n: usize, k: Label, ell: usize, d: usize, out: &mut Vec<Pattern>) {
        if prefix.len() == n {
            out.push(Pattern(prefix.clone()));
            return;
        }
        for l in 0..k {
            let high = high + usize::from(l as usize >= ell);
            if high > d {
                break;
            }
            prefix.push(l);
            extend(prefix, high, n, k, ell, d, out);
            prefix.pop();
        }
    }
    let mut patterns = Vec::with_capacity(size_u128 as usize);
    extend(&mut Vec::with_capacity(n), 0, n, k, ell, d, &mut patterns);
    debug_assert_eq!(BigUint::from(patterns.len()), size);
    HypothesisClass::new(n, k, patterns)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: Label,
    pub ell: usize,
    pub class_size: usize,
    /// DS dimension as computed from the class.
    pub ds_dimension: usize,
    /// Dimension at which both bounds were evaluated.
    pub d_used: usize,
    #[serde(serialize_with = "decimal")]
    pub ds_bound: BigUint,
    #[serde(serialize_with = "decimal")]
    pub nat_bound: BigUint,
    pub holds: bool,
    /// `ds_bound − class_size`.
    #[serde(serialize_with = "decimal")]
    pub slack: BigInt,
}

/// Checks `|H| <= ds_sauer_bound(n, k, ℓ, d)` at the DS dimension of `H`.
/// A violation is returned as [`Error::BoundViolated`].
pub fn verify_sauer(h: &HypothesisClass, ell: usize) -> Result<BoundReport> {
    verify_sauer_at(h, ell, None)
}

/// Like [`verify_sauer`], but evaluates the bound at a claimed dimension,
/// which must not be below the computed one.
pub fn verify_sauer_at(h: &HypothesisClass, ell: usize, claimed: Option<usize>) -> Result<BoundReport> {
    h.require_nonempty()?;
    if ell == 0 || ell >= h.k() as usize {
        return Err(Error::InvalidParameter(format!("need 1 <= ℓ < k (got ℓ = {ell}, k = {})", h.k())));
    }
    let d = ds_dimension(h, ell)?.value;
    let d_used = match claimed {
        Some(c) if c < d => {
            return Err(Error::Precondition(format!(
                "claimed dimension {c} is below the computed DS dimension {d}"
            )))
        }
        Some(c) => c,
        None => d,
    };
    let ds_bound = ds_sauer_bound(h.n(), h.k(), ell, d_used)?;
    let nat_bound = natarajan_sauer_bound(h.n(), h.k(), ell, d_used)?;
    let report = BoundReport {
        n: h.n(),
        k: h.k(),
        ell,
        class_size: h.len(),
        ds_dimension: d,
        d_used,
        holds: BigUint::from(h.len()) <= ds_bound,
        slack: BigInt::from(ds_bound.clone()) - BigInt::from(h.len()),
        ds_bound,
        nat_bound,
    };
    if report.holds {
        Ok(report)
    } else {
        Err(Error::BoundViolated(Box::new(report)))
    }
}

/// Bipartite graph between the projections onto all coordinates but one
/// (left, kept only with at least two extensions) and the labels of the
/// remaining coordinate (right).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionGraph {
    pub coordinate: usize,
    pub left_vertices: Vec<Vec<Label>>,
    pub right_vertices: Vec<Label>,
    /// `(left index, label)`.
    pub edges: Vec<(usize, Label)>,
}

impl ExtensionGraph {
    pub fn new(h: &HypothesisClass, coordinate: usize) -> Result<Self> {
        if coordinate >= h.n() {
            return Err(Error::InvalidParameter(format!("coordinate {coordinate} out of range for n = {}", h.n())));
        }
        let mut ext: BTreeMap<Vec<Label>, Vec<Label>> = BTreeMap::new();
        for p in h.patterns() {
            let mut u = p.0.clone();
            let a = u.remove(coordinate);
            ext.entry(u).or_default().push(a);
        }
        let mut left_vertices = Vec::new();
        let mut edges = Vec::new();
        for (u, labels) in ext.into_iter().filter(|(_, l)| l.len() >= 2) {
            let idx = left_vertices.len();
            edges.extend(labels.into_iter().map(|a| (idx, a)));
            left_vertices.push(u);
        }
        Ok(ExtensionGraph { coordinate, left_vertices, right_vertices: (0..h.k()).collect(), edges })
    }

    /// Forest test by union-find.
    pub fn is_acyclic(&self) -> bool {
        let offset = self.left_vertices.len();
        let mut parent: Vec<usize> = (0..offset + self.right_vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(u, a) in &self.edges {
            let (ru, ra) = (find(&mut parent, u), find(&mut parent, offset + a as usize));
            if ru == ra {
                return false;
            }
            parent[ru] = ra;
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppendixReport {
    pub coordinate: usize,
    pub acyclic: bool,
    #[serde(serialize_with = "decimal")]
    pub bound: BigUint,
    pub class_size: usize,
    pub holds: bool,
    pub left_vertices: usize,
    pub edges: usize,
}

/// For classes of DS dimension at most 1 (`ℓ = 1`): the extension graph on
/// the last coordinate is a forest and `|H| <= 1 + n(k−1)`.
pub fn appendix_check(h: &HypothesisClass) -> Result<AppendixReport> {
    h.require_nonempty()?;
    appendix_check_at(h, h.n() - 1)
}

/// [`appendix_check`] repeated for every choice of the split coordinate.
pub fn appendix_check_all(h: &HypothesisClass) -> Result<Vec<AppendixReport>> {
    h.require_nonempty()?;
    (0..h.n()).map(|c| appendix_check_at(h, c)).collect()
}

fn appendix_check_at(h: &HypothesisClass, coordinate: usize) -> Result<AppendixReport> {
    let d = ds_dimension(h, 1)?.value;
    if d > 1 {
        return Err(Error::Precondition(format!("DS dimension at ℓ = 1 is {d}, expected at most 1")));
    }
    let graph = ExtensionGraph::new(h, coordinate)?;
    let bound = BigUint::one() + BigUint::from(h.n()) * BigUint::from(h.k() - 1);
    Ok(AppendixReport {
        coordinate,
        acyclic: graph.is_acyclic(),
        holds: BigUint::from(h.len()) <= bound,
        bound,
        class_size: h.len(),
        left_vertices: graph.left_vertices.len(),
        edges: graph.edges.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "side", content = "label", rename_all = "lowercase")]
pub enum Side {
    Left(Label),
    Right(Label),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelReport {
    pub edges_removed: usize,
    pub success: bool,
    pub order: Vec<Side>,
    /// `ℓ(2k − ℓ)`.
    #[serde(serialize_with = "decimal")]
    pub bound: BigUint,
    pub size_within_bound: bool,
}

/// Treats a two-coordinate class as a bipartite graph (first labels vs.
/// second labels, one edge per pattern) and repeatedly deletes the
/// smallest vertex of positive degree at most `ℓ`, left side first.
pub fn bipartite_peel(h: &HypothesisClass, ell: usize) -> Result<PeelReport> {
    if h.n() != 2 {
        return Err(Error::InvalidParameter(format!("bipartite peeling needs n = 2 (got n = {})", h.n())));
    }
    if ell == 0 || ell > h.k() as usize {
        return Err(Error::InvalidParameter(format!("need 1 <= ℓ <= k (got ℓ = {ell}, k = {})", h.k())));
    }
    let k = h.k() as usize;
    let mut alive = vec![true; h.len()];
    let mut deg = vec![0usize; 2 * k];
    for p in h.patterns() {
        deg[p[0] as usize] += 1;
        deg[k + p[1] as usize] += 1;
    }
    let mut order = Vec::new();
    let mut removed = 0;
    while let Some(v) = (0..2 * k).find(|&v| deg[v] > 0 && deg[v] <= ell) {
        order.push(if v < k { Side::Left(v as Label) } else { Side::Right((v - k) as Label) });
        for (e, p) in h.patterns().iter().enumerate() {
            let (a, b) = (p[0] as usize, k + p[1] as usize);
            if alive[e] && (a == v || b == v) {
                alive[e] = false;
                deg[a] -= 1;
                deg[b] -= 1;
                removed += 1;
            }
        }
    }
    let bound = BigUint::from(ell) * BigUint::from(2 * k - ell);
    Ok(PeelReport {
        edges_removed: removed,
        success: removed == h.len(),
        order,
        size_within_bound: BigUint::from(h.len()) <= bound,
        bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: Label,
    pub ell: usize,
    pub d: usize,
    pub size: usize,
    #[serde(serialize_with = "decimal")]
    pub ds_bound: BigUint,
    #[serde(serialize_with = "decimal")]
    pub nat_bound: BigUint,
    #[serde(serialize_with = "decimal")]
    pub slack: BigInt,
    pub holds: bool,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "n,k,ell,d,size,dsBound,natBound,slack,holds";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n, self.k, self.ell, self.d, self.size, self.ds_bound, self.nat_bound, self.slack, self.holds
        )
    }
}

impl From<&BoundReport> for SweepRow {
    fn from(r: &BoundReport) -> Self {
        SweepRow {
            n: r.n,
            k: r.k,
            ell: r.ell,
            d: r.d_used,
            size: r.class_size,
            ds_bound: r.ds_bound.clone(),
            nat_bound: r.nat_bound.clone(),
            slack: r.slack.clone(),
            holds: r.holds,
        }
    }
}

/// One row per class, in input order. Violations become rows with
/// `holds = false` rather than aborting the sweep.
pub fn sweep(classes: &[HypothesisClass], ell: usize) -> Result<Vec<SweepRow>> {
    classes
        .par_iter()
        .map(|h| match verify_sauer(h, ell) {
            Ok(r) => Ok(SweepRow::from(&r)),
            Err(Error::BoundViolated(r)) => Ok(SweepRow::from(r.as_ref())),
            Err(e) => Err(e),
        })
        .collect()
}

/// Number of edges of a class viewed as a bipartite graph compared with
/// `k^{2 − 1/(ℓ+1)}`; descriptive only.
pub fn turan_ratio(h: &HypothesisClass, ell: usize) -> f64 {
    if h.n() != 2 || h.is_empty() {
        return 0.0;
    }
    h.len() as f64 / (h.k() as f64).powf(2.0 - 1.0 / (ell as f64 + 1.0))
}

impl BoundReport {
    pub fn is_tight(&self) -> bool {
        self.slack.is_zero()
    }
}
