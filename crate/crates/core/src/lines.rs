//! Grouping of patterns into lines: for each direction `i`, patterns that agree
//! everywhere except possibly at coordinate `i` share a line.

use std::collections::BTreeMap;

use crate::class::{Label, Pattern};

const MASK: Label = Label::MAX;

#[derive(Debug, Clone)]
pub(crate) struct LineIndex {
    n: usize,
    /// `line_of[p * n + i]` is the line of pattern `p` in direction `i`.
    line_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    direction: Vec<usize>,
    /// Off-direction assignment of each line, with the free slot set to `Label::MAX`.
    keys: Vec<Vec<Label>>,
}

impl LineIndex {
    /// Lines are numbered by direction, then by the lexicographic order of
    /// their fixed assignment.
    pub(crate) fn new(patterns: &[Pattern], n: usize) -> Self {
        let mut line_of = vec![0; patterns.len() * n];
        let mut members = Vec::new();
        let mut direction = Vec::new();
        let mut keys = Vec::new();
        for i in 0..n {
            let mut groups: BTreeMap<Vec<Label>, Vec<usize>> = BTreeMap::new();
            for (p, pat) in patterns.iter().enumerate() {
                let mut key = pat.0.clone();
                key[i] = MASK;
                groups.entry(key).or_default().push(p);
            }
            for (key, group) in groups {
                let id = members.len();
                for &p in &group {
                    line_of[p * n + i] = id;
                }
                members.push(group);
                direction.push(i);
                keys.push(key);
            }
        }
        LineIndex { n, line_of, members, direction, keys }
    }

    pub(crate) fn line(&self, pattern: usize, dir: usize) -> usize {
        self.line_of[pattern * self.n + dir]
    }

    pub(crate) fn members(&self, line: usize) -> &[usize] {
        &self.members[line]
    }

    pub(crate) fn line_count(&self) -> usize {
        self.members.len()
    }

    pub(crate) fn into_parts(self) -> (Vec<usize>, Vec<Vec<usize>>, Vec<usize>, Vec<Vec<Label>>) {
        (self.line_of, self.members, self.direction, self.keys)
    }
}

/// Deletes patterns whose line in some direction holds fewer than `m` live
/// patterns, until none remain. Returns the survivor mask and the removal
/// trace as `(pattern index, deficient direction)`.
pub(crate) fn peel(patterns: &[Pattern], n: usize, m: usize) -> (Vec<bool>, Vec<(usize, usize)>) {
    let lines = LineIndex::new(patterns, n);
    let mut live: Vec<usize> = lines.members.iter().map(Vec::len).collect();
    let mut alive = vec![true; patterns.len()];
    let mut trace = Vec::new();
    let mut queue: std::collections::VecDeque<usize> = (0..patterns.len()).collect();
    while let Some(p) = queue.pop_front() {
        if !alive[p] {
            continue;
        }
        let Some(dir) = (0..n).find(|&i| live[lines.line(p, i)] < m) else {
            continue;
        };
        alive[p] = false;
        trace.push((p, dir));
        for i in 0..n {
            let l = lines.line(p, i);
            live[l] -= 1;
            queue.extend(lines.members(l).iter().copied().filter(|&q| alive[q]));
        }
    }
    (alive, trace)
}
