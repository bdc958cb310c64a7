//! List orientations of minimum maximum ℓ-outdegree, via integral flows.
//!
//! Network: source → edge `e` with capacity `(|e| − ℓ)_+`, edge → each of its
//! vertices with capacity 1, vertex → sink with capacity `c`. A unit of flow
//! on `e → v` means `e` does not list `v`, so `v`'s outdegree is its inflow.
//! An orientation with outdegrees at most `c` exists iff the flow saturates
//! every source arc.

use std::fmt;

use serde::Serialize;

use super::flow::MaxFlow;
use super::{degree_stats, OneInclusionGraph};

const SOURCE: usize = 0;
const SINK: usize = 1;

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    flow: MaxFlow,
    /// Per edge, the arc ids `e → v` paired with `v`.
    member_arcs: Vec<Vec<(usize, usize)>>,
    demand: u64,
}

impl FlowNetwork {
    pub fn new(g: &OneInclusionGraph, ell: usize, c: u64) -> Self {
        let edges = g.edges();
        let vertex_node = |v: usize| 2 + edges.len() + v;
        let mut flow = MaxFlow::new(2 + edges.len() + g.vertex_count());
        let mut member_arcs = Vec::with_capacity(edges.len());
        for (id, e) in edges.iter().enumerate() {
            flow.add_arc(SOURCE, 2 + id, e.excess(ell) as u64);
            // Higher-indexed vertices are evicted first, so lists favour the
            // lexicographically smaller patterns.
            member_arcs.push(
                e.members
                    .iter()
                    .rev()
                    .map(|&v| (flow.add_arc(2 + id, vertex_node(v), 1), v))
                    .collect(),
            );
        }
        for v in 0..g.vertex_count() {
            flow.add_arc(vertex_node(v), SINK, c);
        }
        FlowNetwork { flow, member_arcs, demand: g.total_excess(ell) as u64 }
    }

    /// `Σ_e (|e| − ℓ)_+`.
    pub fn demand(&self) -> u64 {
        self.demand
    }

    pub fn solve(&mut self) -> u64 {
        self.flow.run(SOURCE, SINK)
    }
}

/// Maximum flow value of the network with sink capacity `c`.
pub fn flow_value_at(g: &OneInclusionGraph, ell: usize, c: u64) -> u64 {
    FlowNetwork::new(g, ell, c).solve()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ListOrientation {
    pub ell: usize,
    /// Minimum over all list orientations of the maximum ℓ-outdegree.
    pub c_star: usize,
    /// `σ(e)` per edge, ascending vertex indices.
    pub lists: Vec<Vec<usize>>,
    pub outdegrees: Vec<usize>,
    #[serde(skip)]
    dump: String,
}

impl ListOrientation {
    pub fn max_outdegree(&self) -> usize {
        self.outdegrees.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for ListOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump)
    }
}

/// A list orientation whose maximum ℓ-outdegree is as small as possible.
pub fn orient_minmax(g: &OneInclusionGraph, ell: usize) -> ListOrientation {
    let max_degree = degree_stats(g, ell).ell_degrees.into_iter().max().unwrap_or(0) as u64;
    let (mut lo, mut hi) = (0u64, max_degree);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let mut net = FlowNetwork::new(g, ell, mid);
        if net.solve() == net.demand() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let mut net = FlowNetwork::new(g, ell, lo);
    let value = net.solve();
    assert_eq!(value, net.demand(), "outdegree budget equal to the maximum ℓ-degree is always feasible");

    let mut outdegrees = vec![0; g.vertex_count()];
    let mut lists = Vec::with_capacity(g.edges().len());
    for arcs in &net.member_arcs {
        let mut list: Vec<usize> = Vec::new();
        for &(arc, v) in arcs {
            if net.flow.flow(arc) == 0 {
                list.push(v);
            } else {
                outdegrees[v] += 1;
            }
        }
        list.sort_unstable();
        lists.push(list);
    }
    let mut dump = String::new();
    for (e, list) in g.edges().iter().zip(&lists) {
        let l: Vec<String> = list.iter().map(|v| v.to_string()).collect();
        dump.push_str(&format!("dir={} fixed={} list={}\n", e.direction, e.fixed_string(), l.join(",")));
    }
    ListOrientation { ell, c_star: lo as usize, lists, outdegrees, dump }
}
