//! Shattering dimensions of finite classes, computed exactly.
//!
//! Every search walks coordinate subsets from the largest admissible size
//! downward and returns the first hit in lexicographic order, so witnesses are
//! reproducible.

use std::collections::HashSet;

use itertools::Itertools;
use serde::Serialize;

use crate::class::{check_cap, CoordinateSet, HypothesisClass, Label, Pattern};
use crate::error::{Error, Result};
use crate::lines::peel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudoCubeReport {
    pub core: Vec<Pattern>,
    pub is_pseudo_cube: bool,
    /// Removed patterns in order, with the direction that was deficient.
    pub peel_trace: Vec<(Pattern, usize)>,
}

/// True iff every pattern of `b` has at least `m - 1` neighbours in every direction.
pub fn is_pseudocube(b: &HypothesisClass, m: usize) -> Result<bool> {
    b.require_nonempty()?;
    if m == 0 {
        return Err(Error::InvalidParameter("pseudo-cube order must be at least 1".into()));
    }
    let (alive, _) = peel(b.patterns(), b.n(), m);
    // A single deficient pattern starts the peel, so the class is a pseudo-cube
    // iff nothing was removed.
    Ok(alive.iter().all(|&a| a))
}

/// The largest subset of `p` that is an `m`-pseudo-cube (empty if none).
/// Pseudo-cubes are closed under union, so this is the fixed point of
/// deleting deficient patterns.
pub fn max_pseudocube_core(p: &HypothesisClass, m: usize) -> Result<PseudoCubeReport> {
    if m == 0 {
        return Err(Error::InvalidParameter("pseudo-cube order must be at least 1".into()));
    }
    let (alive, trace) = peel(p.patterns(), p.n(), m);
    let core: Vec<Pattern> = p
        .patterns()
        .iter()
        .zip(&alive)
        .filter(|(_, &a)| a)
        .map(|(pat, _)| pat.clone())
        .collect();
    Ok(PseudoCubeReport {
        is_pseudo_cube: !p.is_empty() && trace.is_empty(),
        peel_trace: trace.into_iter().map(|(i, d)| (p.patterns()[i].clone(), d)).collect(),
        core,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DimensionKind {
    Ds,
    Natarajan,
    Exponential,
    Graph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// Dimension zero, nothing to exhibit.
    None,
    /// An `(ℓ+1)`-pseudo-cube inside the projection onto the witness coordinates.
    PseudoCube { patterns: Vec<Pattern> },
    /// Factor sets `Y_1, …, Y_d`, each of size `ℓ+1`, whose product lies in the projection.
    Cube { factors: Vec<Vec<Label>> },
    /// Size of the projection onto the witness coordinates.
    Projection { size: usize },
    /// A pivot and one member per sign pattern `b` (bit `j` refers to the `j`-th witness coordinate).
    Graph { pivot: Vec<Label>, members: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionResult {
    pub kind: DimensionKind,
    pub ell: usize,
    pub value: usize,
    pub witness: CoordinateSet,
    pub structure: Witness,
    pub notes: Vec<String>,
}

impl DimensionResult {
    fn zero(kind: DimensionKind, ell: usize) -> Self {
        DimensionResult {
            kind,
            ell,
            value: 0,
            witness: CoordinateSet::empty(),
            structure: Witness::None,
            notes: Vec::new(),
        }
    }

    /// Re-checks the witness against `h` with the matching shattering predicate.
    /// Graph-dimension witnesses are checked by [`ListClass::verify_graph_witness`].
    pub fn verify(&self, h: &HypothesisClass) -> bool {
        if self.witness.len() != self.value {
            return false;
        }
        if self.value == 0 {
            return match self.structure {
                Witness::None => true,
                Witness::Projection { size } => size == 1 && !h.is_empty(),
                _ => false,
            };
        }
        let Ok(proj) = h.project(&self.witness) else {
            return false;
        };
        match (&self.kind, &self.structure) {
            (DimensionKind::Ds, Witness::PseudoCube { patterns }) => {
                let Ok(cube) = HypothesisClass::new(self.value, h.k(), patterns.clone()) else {
                    return false;
                };
                !cube.is_empty()
                    && cube.is_subset_of(&proj)
                    && is_pseudocube(&cube, self.ell + 1).unwrap_or(false)
            }
            (DimensionKind::Natarajan, Witness::Cube { factors }) => {
                factors.len() == self.value
                    && factors.iter().all(|y| {
                        y.len() == self.ell + 1 && y.iter().all_unique() && y.iter().all(|&l| l < h.k())
                    })
                    && factors.iter().map(|y| y.iter().copied()).multi_cartesian_product().all(|t| proj.contains(&t))
            }
            (DimensionKind::Exponential, Witness::Projection { size }) => {
                *size == proj.len() && pow_le(self.ell + 1, self.value, proj.len())
            }
            _ => false,
        }
    }
}

/// `base^exp <= bound`, without overflow.
fn pow_le(base: usize, exp: usize, bound: usize) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc *= base as u128;
        if acc > bound as u128 {
            return false;
        }
    }
    true
}

/// Largest `d` with `base^d <= size`.
fn log_floor(size: usize, base: usize) -> usize {
    let mut d = 0;
    while pow_le(base, d + 1, size) {
        d += 1;
    }
    d
}

fn check_ell(ell: usize) -> Result<()> {
    if ell == 0 {
        Err(Error::InvalidParameter("list size ℓ must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn degenerate_ell_note(ell: usize, k: Label) -> String {
    format!("ℓ = {ell} >= k = {k}: no line can carry ℓ+1 labels, dimension is 0 by convention")
}

/// Largest coordinate set whose projection contains an `(ℓ+1)`-pseudo-cube.
pub fn ds_dimension(h: &HypothesisClass, ell: usize) -> Result<DimensionResult> {
    h.require_nonempty()?;
    check_ell(ell)?;
    let mut result = DimensionResult::zero(DimensionKind::Ds, ell);
    if ell >= h.k() as usize {
        result.notes.push(degenerate_ell_note(ell, h.k()));
        return Ok(result);
    }
    // An m-pseudo-cube on d coordinates has at least m^d members.
    let upper = h.n().min(log_floor(h.len(), ell + 1));
    let found = levelwise_search(h.n(), upper, |coords| {
        let proj = h.project(&CoordinateSet::new(coords.to_vec(), h.n())?)?;
        let core = max_pseudocube_core(&proj, ell + 1)?.core;
        Ok((!core.is_empty()).then_some(core))
    })?;
    if let Some((coords, core)) = found {
        result.value = coords.len();
        result.witness = CoordinateSet::new(coords, h.n())?;
        result.structure = Witness::PseudoCube { patterns: core };
    }
    Ok(result)
}

/// Level-wise search for the largest coordinate set accepted by `test`, for
/// properties closed under taking subsets (projections of pseudo-cubes and of
/// cubes are again pseudo-cubes and cubes). A `(d+1)`-set is only tested when
/// all of its `d`-subsets passed, so the cost tracks the number of accepted
/// sets rather than `C(n, d)`. Returns the lexicographically first accepted set
/// of maximum size, up to `upper`.
fn levelwise_search<T>(
    n: usize,
    upper: usize,
    mut test: impl FnMut(&[usize]) -> Result<Option<T>>,
) -> Result<Option<(Vec<usize>, T)>> {
    let mut level: Vec<(Vec<usize>, T)> = Vec::new();
    if upper == 0 {
        return Ok(None);
    }
    for i in 0..n {
        if let Some(w) = test(&[i])? {
            level.push((vec![i], w));
        }
    }
    for _ in 1..upper {
        let accepted: HashSet<&[usize]> = level.iter().map(|(c, _)| c.as_slice()).collect();
        let mut next = Vec::new();
        // Candidates are joins of two accepted sets sharing all but the last
        // coordinate; `level` is lexicographically sorted, so `next` is too.
        for (a, (x, _)) in level.iter().enumerate() {
            let prefix = &x[..x.len() - 1];
            for (y, _) in level[a + 1..].iter().take_while(|(y, _)| &y[..y.len() - 1] == prefix) {
                let mut cand = x.clone();
                cand.push(*y.last().expect("nonempty"));
                let closed = (0..cand.len() - 2).all(|skip| {
                    let sub: Vec<usize> =
                        cand.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &c)| c).collect();
                    accepted.contains(sub.as_slice())
                });
                if closed {
                    if let Some(w) = test(&cand)? {
                        next.push((cand, w));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    Ok(level.into_iter().next())
}

/// Largest coordinate set whose projection contains a product of `(ℓ+1)`-sets.
pub fn natarajan_dimension(h: &HypothesisClass, ell: usize) -> Result<DimensionResult> {
    h.require_nonempty()?;
    check_ell(ell)?;
    let mut result = DimensionResult::zero(DimensionKind::Natarajan, ell);
    if ell >= h.k() as usize {
        result.notes.push(degenerate_ell_note(ell, h.k()));
        return Ok(result);
    }
    let upper = h.n().min(log_floor(h.len(), ell + 1));
    let found = levelwise_search(h.n(), upper, |coords| {
        let proj = h.project(&CoordinateSet::new(coords.to_vec(), h.n())?)?;
        // Any cube is a pseudo-cube, hence lies inside the maximal one.
        let core = max_pseudocube_core(&proj, ell + 1)?.core;
        Ok(if core.is_empty() { None } else { find_product(&core, coords.len(), ell + 1) })
    })?;
    if let Some((coords, factors)) = found {
        result.value = coords.len();
        result.witness = CoordinateSet::new(coords, h.n())?;
        result.structure = Witness::Cube { factors };
    }
    Ok(result)
}

/// Lexicographically first product `Y_1 × … × Y_d` (each `|Y_j| = size`)
/// contained in `set`.
fn find_product(set: &[Pattern], d: usize, size: usize) -> Option<Vec<Vec<Label>>> {
    // prefixes[t] holds the projections of `set` onto coordinates 0..=t.
    let prefixes: Vec<HashSet<Vec<Label>>> = (0..d)
        .map(|t| set.iter().map(|p| p.0[..=t].to_vec()).collect())
        .collect();
    let values: Vec<Vec<Label>> = (0..d)
        .map(|j| set.iter().map(|p| p.0[j]).sorted().dedup().collect())
        .collect();

    fn extend(
        t: usize,
        tuples: Vec<Vec<Label>>,
        chosen: &mut Vec<Vec<Label>>,
        values: &[Vec<Label>],
        prefixes: &[HashSet<Vec<Label>>],
        size: usize,
    ) -> bool {
        if t == values.len() {
            return true;
        }
        for y in values[t].iter().copied().combinations(size) {
            let next: Vec<Vec<Label>> = tuples
                .iter()
                .flat_map(|tup| {
                    y.iter().map(move |&v| {
                        let mut e = tup.clone();
                        e.push(v);
                        e
                    })
                })
                .collect();
            if next.iter().all(|e| prefixes[t].contains(e)) {
                chosen.push(y);
                if extend(t + 1, next, chosen, values, prefixes, size) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::new();
    extend(0, vec![Vec::new()], &mut chosen, &values, &prefixes, size).then_some(chosen)
}

/// Largest coordinate set `S` with `|H|_S| >= (ℓ+1)^|S|`. Sequences with
/// repeated coordinates never project to more patterns, so subsets suffice.
pub fn exponential_dimension(h: &HypothesisClass, ell: usize) -> Result<DimensionResult> {
    h.require_nonempty()?;
    check_ell(ell)?;
    let upper = h.n().min(log_floor(h.len(), ell + 1));
    for d in (1..=upper).rev() {
        for coords in (0..h.n()).combinations(d) {
            let s = CoordinateSet::new(coords, h.n())?;
            let size = h.project(&s)?.len();
            if pow_le(ell + 1, d, size) {
                return Ok(DimensionResult {
                    kind: DimensionKind::Exponential,
                    ell,
                    value: d,
                    witness: s,
                    structure: Witness::Projection { size },
                    notes: Vec::new(),
                });
            }
        }
    }
    let mut result = DimensionResult::zero(DimensionKind::Exponential, ell);
    result.structure = Witness::Projection { size: 1 };
    Ok(result)
}

/// A finite class of list predictors over instances `0..n`. Each member maps
/// every instance to a nonempty label set of size at most `ℓ`, stored as a
/// bitmask (so `k <= 64`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListClass {
    n: usize,
    k: Label,
    ell: usize,
    members: Vec<Vec<u64>>,
}

impl ListClass {
    pub fn new(n: usize, k: Label, ell: usize, members: Vec<Vec<u64>>) -> Result<Self> {
        check_ell(ell)?;
        if n == 0 || !(2..=64).contains(&k) {
            return Err(Error::InvalidParameter(format!(
                "list classes need n >= 1 and 2 <= k <= 64 (got n = {n}, k = {k})"
            )));
        }
        let allowed = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        for (idx, m) in members.iter().enumerate() {
            if m.len() != n {
                return Err(Error::InvalidParameter(format!("member #{idx} has {} lists, expected {n}", m.len())));
            }
            for &set in m {
                let size = set.count_ones() as usize;
                if set & !allowed != 0 || size == 0 || size > ell {
                    return Err(Error::InvalidParameter(format!(
                        "member #{idx}: list {set:#b} must be a nonempty subset of [k] of size <= {ell}"
                    )));
                }
            }
        }
        if !members.iter().all_unique() {
            return Err(Error::InvalidParameter("list class members must be distinct".into()));
        }
        Ok(ListClass { n, k, ell, members })
    }

    /// Each pattern becomes the predictor returning its singleton label.
    pub fn from_class(h: &HypothesisClass) -> Self {
        ListClass {
            n: h.n(),
            k: h.k(),
            ell: 1,
            members: h
                .patterns()
                .iter()
                .map(|p| p.iter().map(|&l| 1u64 << l).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Label {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Vec<u64>] {
        &self.members
    }

    pub fn list(&self, member: usize, instance: usize) -> u64 {
        self.members[member][instance]
    }

    pub fn contains_label(&self, member: usize, instance: usize, label: Label) -> bool {
        self.members[member][instance] >> label & 1 == 1
    }

    /// Sign pattern of `member` against `pivot` on `coords`: bit `j` is set iff
    /// `pivot[j]` is in the member's list at `coords[j]`.
    pub fn sign_pattern(&self, member: usize, coords: &[usize], pivot: &[Label]) -> usize {
        coords
            .iter()
            .zip(pivot)
            .enumerate()
            .fold(0, |acc, (j, (&c, &p))| acc | (usize::from(self.contains_label(member, c, p)) << j))
    }

    pub fn verify_graph_witness(&self, res: &DimensionResult) -> bool {
        if res.kind != DimensionKind::Graph || res.witness.len() != res.value {
            return false;
        }
        match &res.structure {
            Witness::None => res.value == 0,
            Witness::Graph { pivot, members } => {
                pivot.len() == res.value
                    && members.len() == 1 << res.value
                    && members.iter().enumerate().all(|(b, &m)| {
                        m < self.len() && self.sign_pattern(m, res.witness.indices(), pivot) == b
                    })
            }
            _ => false,
        }
    }
}

/// Largest coordinate set admitting a pivot whose membership sign patterns
/// realize all of `{0,1}^d`. `cap` bounds `k^d · 2^d` for each size tried.
pub fn graph_dimension(c: &ListClass, cap: u128) -> Result<DimensionResult> {
    if c.is_empty() {
        return Err(Error::EmptyClass);
    }
    let upper = c.n().min(log_floor(c.len(), 2));
    for d in (1..=upper).rev() {
        let work = crate::class::cube_size(d, c.k()).saturating_mul(1u128 << d);
        check_cap("graph-dimension search", work, cap)?;
        for coords in (0..c.n()).combinations(d) {
            for pivot in crate::class::words(d, c.k()) {
                let mut seen: Vec<Option<usize>> = vec![None; 1 << d];
                let mut filled = 0;
                for m in 0..c.len() {
                    let b = c.sign_pattern(m, &coords, &pivot);
                    if seen[b].is_none() {
                        seen[b] = Some(m);
                        filled += 1;
                        if filled == seen.len() {
                            break;
                        }
                    }
                }
                if filled == seen.len() {
                    return Ok(DimensionResult {
                        kind: DimensionKind::Graph,
                        ell: c.ell(),
                        value: d,
                        witness: CoordinateSet::new(coords, c.n())?,
                        structure: Witness::Graph {
                            pivot: pivot.0,
                            members: seen.into_iter().map(|m| m.expect("filled")).collect(),
                        },
                        notes: Vec::new(),
                    });
                }
            }
        }
    }
    Ok(DimensionResult::zero(DimensionKind::Graph, c.ell()))
}
