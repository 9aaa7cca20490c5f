//! Deterministic backtracking search for independent exact `r`-covers of a
//! finite torus, with certificates of non-existence.

use serde::{Deserialize, Serialize};

use super::{verify_cover_in_graph, CoverPredicate, CoverReport};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_points: usize,
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_points: 4096,
            max_nodes: 200_000_000,
        }
    }
}

/// Outcome of the size divisibility test `|S| = r k^m / (2m + r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum Prefilter {
    Passed { target: u64 },
    Failed { numerator: u64, denominator: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub m: usize,
    pub k: usize,
    pub r: usize,
    pub prefilter: Prefilter,
    pub nodes_explored: u64,
    /// True once the whole search tree was refuted (or the prefilter failed).
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Found {
        /// Torus coordinates of the members, lexicographic.
        members: Vec<Vec<usize>>,
        report: CoverReport,
        nodes_explored: u64,
    },
    NonExistent(Certificate),
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    /// The found set as an explicit predicate with period `k`.
    pub fn as_predicate(&self, k: usize) -> Option<CoverPredicate> {
        match self {
            SearchOutcome::Found { members, .. } => {
                let m = members.first().map_or(1, Vec::len);
                CoverPredicate::explicit(
                    vec![k as u64; m],
                    members
                        .iter()
                        .map(|x| x.iter().map(|&c| c as i64).collect()),
                )
                .ok()
            }
            SearchOutcome::NonExistent(_) => None,
        }
    }
}

const UNKNOWN: i8 = -1;
const OUT: i8 = 0;
const IN: i8 = 1;

struct Solver<'g> {
    g: &'g Graph,
    r: usize,
    target: usize,
    state: Vec<i8>,
    in_count: Vec<usize>,
    unknown_count: Vec<usize>,
    total_in: usize,
    total_unknown: usize,
    trail: Vec<usize>,
    queue: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
}

impl<'g> Solver<'g> {
    fn new(g: &'g Graph, r: usize, target: usize, max_nodes: u64) -> Self {
        let n = g.n();
        Self {
            g,
            r,
            target,
            state: vec![UNKNOWN; n],
            in_count: vec![0; n],
            unknown_count: vec![g.d(); n],
            total_in: 0,
            total_unknown: n,
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
            max_nodes,
        }
    }

    fn assign(&mut self, v: usize, val: i8) {
        debug_assert_eq!(self.state[v], UNKNOWN);
        self.state[v] = val;
        self.total_unknown -= 1;
        if val == IN {
            self.total_in += 1;
        }
        for &u in self.g.neighbours(v) {
            self.unknown_count[u] -= 1;
            if val == IN {
                self.in_count[u] += 1;
            }
            self.queue.push(u);
        }
        self.queue.push(v);
        self.trail.push(v);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail");
            let val = self.state[v];
            for &u in self.g.neighbours(v) {
                self.unknown_count[u] += 1;
                if val == IN {
                    self.in_count[u] -= 1;
                }
            }
            if val == IN {
                self.total_in -= 1;
            }
            self.total_unknown += 1;
            self.state[v] = UNKNOWN;
        }
    }

    fn set_unknown_neighbours(&mut self, v: usize, val: i8) {
        let g = self.g;
        for &u in g.neighbours(v) {
            if self.state[u] == UNKNOWN {
                self.assign(u, val);
            }
        }
    }

    /// Unit propagation; `false` on contradiction.
    fn propagate(&mut self) -> bool {
        while let Some(v) = self.queue.pop() {
            if self.total_in > self.target || self.total_in + self.total_unknown < self.target {
                self.queue.clear();
                return false;
            }
            let (ins, unk) = (self.in_count[v], self.unknown_count[v]);
            match self.state[v] {
                IN => {
                    if ins > 0 {
                        self.queue.clear();
                        return false;
                    }
                    if unk > 0 {
                        self.set_unknown_neighbours(v, OUT);
                    }
                }
                OUT => {
                    if ins > self.r || ins + unk < self.r {
                        self.queue.clear();
                        return false;
                    }
                    if unk > 0 && ins == self.r {
                        self.set_unknown_neighbours(v, OUT);
                    } else if unk > 0 && ins + unk == self.r {
                        self.set_unknown_neighbours(v, IN);
                    }
                }
                _ => {
                    if ins > 0 {
                        self.assign(v, OUT);
                    } else if unk < self.r {
                        self.assign(v, IN);
                    }
                }
            }
        }
        true
    }

    fn solve(&mut self) -> Result<bool> {
        if !self.propagate() {
            return Ok(false);
        }
        let Some(v) = self.state.iter().position(|&s| s == UNKNOWN) else {
            return Ok(self.total_in == self.target);
        };
        for val in [IN, OUT] {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(Error::ResourceLimit(format!(
                    "cover search exceeded {} nodes",
                    self.max_nodes
                )));
            }
            let mark = self.trail.len();
            self.assign(v, val);
            if self.solve()? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }
}

/// Searches `[k]^m` for an independent exact `r`-cover.
///
/// Branches on points in row-major (lexicographic) order, trying membership
/// first, with unit propagation of the independence and exact-count
/// constraints plus the global size bound. Returns either the first cover
/// found or a certificate that the tree was exhausted.
pub fn exhaustive_cover_search(
    m: usize,
    k: usize,
    r: usize,
    limits: SearchLimits,
) -> Result<SearchOutcome> {
    if r > 2 * m {
        return invalid(format!("r = {r} exceeds the degree 2m = {}", 2 * m));
    }
    let g = Graph::torus(m, k)?;
    let n = g.n();
    let numerator = (r * n) as u64;
    let denominator = (2 * m + r) as u64;
    if !numerator.is_multiple_of(denominator) {
        return Ok(SearchOutcome::NonExistent(Certificate {
            m,
            k,
            r,
            prefilter: Prefilter::Failed {
                numerator,
                denominator,
            },
            nodes_explored: 0,
            exhausted: true,
        }));
    }
    let target = (numerator / denominator) as usize;
    let prefilter = Prefilter::Passed {
        target: target as u64,
    };
    if n > limits.max_points {
        return Err(Error::ResourceLimit(format!(
            "torus [{k}]^{m} has {n} points, search bound is {}",
            limits.max_points
        )));
    }
    let mut solver = Solver::new(&g, r, target, limits.max_nodes);
    if solver.solve()? {
        let shape = g.torus_shape().expect("torus");
        let set: Vec<usize> = (0..n).filter(|&v| solver.state[v] == IN).collect();
        let report = verify_cover_in_graph(&g, &set, r)?;
        debug_assert!(report.passes());
        Ok(SearchOutcome::Found {
            members: set.iter().map(|&v| shape.decode(v)).collect(),
            report,
            nodes_explored: solver.nodes,
        })
    } else {
        Ok(SearchOutcome::NonExistent(Certificate {
            m,
            k,
            r,
            prefilter,
            nodes_explored: solver.nodes,
            exhausted: true,
        }))
    }
}
