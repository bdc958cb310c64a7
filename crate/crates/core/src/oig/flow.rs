//! Dinic's max-flow on integer capacities. Arcs are explored in insertion
//! order, so the resulting flow is a deterministic function of the network.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: u64,
    /// Index of the reverse arc in `arcs`.
    rev: usize,
}

#[derive(Debug, Clone)]
pub struct MaxFlow {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    original: Vec<u64>,
}

impl MaxFlow {
    pub fn new(nodes: usize) -> Self {
        MaxFlow { adj: vec![Vec::new(); nodes], arcs: Vec::new(), original: Vec::new() }
    }

    /// Adds an arc and returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, rev: id + 1 });
        self.arcs.push(Arc { to: from, cap: 0, rev: id });
        self.original.push(cap);
        self.original.push(0);
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow currently carried by the arc `id`.
    pub fn flow(&self, id: usize) -> u64 {
        self.original[id] - self.arcs[id].cap
    }

    /// Pushes a maximum flow from `source` to `sink` and returns its value.
    pub fn run(&mut self, source: usize, sink: usize) -> u64 {
        let mut total = 0;
        loop {
            let Some(level) = self.levels(source, sink) else {
                return total;
            };
            let mut next = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.augment(source, sink, u64::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn levels(&self, source: usize, sink: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && level[arc.to] == usize::MAX {
                    level[arc.to] = level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        (level[sink] != usize::MAX).then_some(level)
    }

    fn augment(&mut self, u: usize, sink: usize, limit: u64, level: &[usize], next: &mut [usize]) -> u64 {
        if u == sink {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let a = self.adj[u][next[u]];
            let Arc { to, cap, rev } = self.arcs[a];
            if cap > 0 && level[to] == level[u] + 1 {
                let pushed = self.augment(to, sink, limit.min(cap), level, next);
                if pushed > 0 {
                    self.arcs[a].cap -= pushed;
                    self.arcs[rev].cap += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }
}
