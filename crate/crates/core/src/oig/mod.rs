//! One-inclusion hypergraphs: vertices are the patterns of a class, and each
//! hyperedge collects the patterns that agree off a single direction.

mod flow;
mod orient;

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::class::{check_cap, HypothesisClass, Label, Pattern};
use crate::error::{Error, Result};
use crate::lines::LineIndex;

pub use flow::MaxFlow;
pub use orient::{flow_value_at, orient_minmax, FlowNetwork, ListOrientation};

/// Default limit on `|H|` for routines that enumerate all subclasses.
pub const DEFAULT_SUBSET_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub direction: usize,
    /// The shared assignment; `None` at the edge's direction.
    pub fixed: Vec<Option<Label>>,
    /// Vertex indices into the class, ascending.
    pub members: Vec<usize>,
}

impl Edge {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `(|e| − ℓ)_+`.
    pub fn excess(&self, ell: usize) -> usize {
        self.len().saturating_sub(ell)
    }

    /// `(0,*,2)` style rendering of the fixed assignment.
    pub fn fixed_string(&self) -> String {
        let parts: Vec<String> = self
            .fixed
            .iter()
            .map(|l| l.map_or_else(|| "*".to_string(), |l| l.to_string()))
            .collect();
        format!("({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneInclusionGraph {
    class: HypothesisClass,
    edges: Vec<Edge>,
    /// `edge_of[v * n + i]` is the direction-`i` edge containing `v`.
    edge_of: Vec<usize>,
}

impl OneInclusionGraph {
    pub fn class(&self) -> &HypothesisClass {
        &self.class
    }

    pub fn vertices(&self) -> &[Pattern] {
        self.class.patterns()
    }

    pub fn vertex_count(&self) -> usize {
        self.class.len()
    }

    pub fn n(&self) -> usize {
        self.class.n()
    }

    /// Edges ordered by direction, then by fixed assignment.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_of(&self, vertex: usize, direction: usize) -> usize {
        self.edge_of[vertex * self.class.n() + direction]
    }

    /// Total of `(|e| − ℓ)_+` over all edges.
    pub fn total_excess(&self, ell: usize) -> usize {
        self.edges.iter().map(|e| e.excess(ell)).sum()
    }
}

pub fn build_oig(h: &HypothesisClass) -> Result<OneInclusionGraph> {
    h.require_nonempty()?;
    let lines = LineIndex::new(h.patterns(), h.n());
    let (edge_of, members, direction, keys) = lines.into_parts();
    let edges = members
        .into_iter()
        .zip(direction)
        .zip(keys)
        .map(|((members, direction), key)| Edge {
            direction,
            fixed: key
                .iter()
                .enumerate()
                .map(|(j, &l)| (j != direction).then_some(l))
                .collect(),
            members,
        })
        .collect();
    Ok(OneInclusionGraph { class: h.clone(), edges, edge_of })
}

impl fmt::Display for OneInclusionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.edges {
            let m: Vec<String> = e.members.iter().map(|v| v.to_string()).collect();
            writeln!(f, "dir={} fixed={} members={}", e.direction, e.fixed_string(), m.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub ell: usize,
    /// Number of incident edges with more than `ℓ` vertices, per vertex.
    pub ell_degrees: Vec<usize>,
    /// `(1/|V|) Σ_{|e| > ℓ} |e|`.
    #[serde(serialize_with = "ratio_string")]
    pub avd: Ratio<u64>,
    /// `(1/|V|) Σ_e (|e| − ℓ)_+`.
    #[serde(serialize_with = "ratio_string")]
    pub savd: Ratio<u64>,
}

pub(crate) fn ratio_string<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn degree_stats(g: &OneInclusionGraph, ell: usize) -> DegreeStats {
    let v = g.vertex_count() as u64;
    let mut ell_degrees = vec![0; g.vertex_count()];
    let mut heavy = 0u64;
    let mut excess = 0u64;
    for e in g.edges.iter().filter(|e| e.len() > ell) {
        heavy += e.len() as u64;
        excess += e.excess(ell) as u64;
        for &m in &e.members {
            ell_degrees[m] += 1;
        }
    }
    DegreeStats { ell, ell_degrees, avd: Ratio::new(heavy, v), savd: Ratio::new(excess, v) }
}

/// Shifting average ℓ-degree of the class itself.
pub fn savd(h: &HypothesisClass, ell: usize) -> Result<Ratio<u64>> {
    Ok(degree_stats(&build_oig(h)?, ell).savd)
}

/// Pushes every direction-`i` edge down onto the labels `0..|e|`.
pub fn shift(h: &HypothesisClass, i: usize) -> Result<HypothesisClass> {
    if i >= h.n() {
        return Err(Error::InvalidParameter(format!("direction {i} out of range for n = {}", h.n())));
    }
    let lines = LineIndex::new(h.patterns(), h.n());
    let mut patterns = Vec::with_capacity(h.len());
    let mut seen = vec![false; h.len()];
    for v in 0..h.len() {
        let line = lines.line(v, i);
        if seen[v] {
            continue;
        }
        let members = lines.members(line);
        for (rank, &m) in members.iter().enumerate() {
            seen[m] = true;
            let mut p = h.patterns()[v].0.clone();
            p[i] = rank as Label;
            patterns.push(Pattern(p));
        }
    }
    Ok(HypothesisClass::from_trusted(h.n(), h.k(), patterns))
}

/// Shifts round-robin over directions until a full sweep changes nothing.
/// Returns the fixed point and the number of sweeps performed.
pub fn shift_fixed_point(h: &HypothesisClass) -> (HypothesisClass, usize) {
    let mut current = h.clone();
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut changed = false;
        for i in 0..h.n() {
            let next = shift(&current, i).expect("direction in range");
            if next != current {
                changed = true;
                current = next;
            }
        }
        if !changed {
            return (current, sweeps);
        }
    }
}

/// Every single-coordinate decrement of a member is a member.
pub fn is_downward_closed(h: &HypothesisClass) -> bool {
    h.patterns().iter().all(|p| {
        (0..h.n()).all(|i| {
            p[i] == 0 || {
                let mut q = p.0.clone();
                q[i] -= 1;
                h.contains(&q)
            }
        })
    })
}

/// `max_{∅ ≠ H' ⊆ H} savd(H')`, by enumerating all subclasses.
pub fn max_density_bruteforce(h: &HypothesisClass, ell: usize, cap: usize) -> Result<Ratio<u64>> {
    h.require_nonempty()?;
    check_cap("subclass enumeration", h.len() as u128, cap.min(30) as u128)?;
    let lines = LineIndex::new(h.patterns(), h.n());
    let masks: Vec<u32> = (0..lines.line_count())
        .map(|l| lines.members(l).iter().fold(0u32, |acc, &v| acc | 1 << v))
        .filter(|m| m.count_ones() as usize > ell)
        .collect();
    let mut best = Ratio::new(0u64, 1);
    for sub in 1u32..(1u32 << h.len()) {
        let excess: u64 = masks
            .iter()
            .map(|&m| (m & sub).count_ones().saturating_sub(ell as u32) as u64)
            .sum();
        let density = Ratio::new(excess, sub.count_ones() as u64);
        if density > best {
            best = density;
        }
    }
    Ok(best)
}
