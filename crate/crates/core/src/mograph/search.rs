//! Exact and heuristic search for the best conditioning set.
//!
//! For a conflict graph `G` the quality of a removed set `W` is
//! `|W| + (largest component of G - W)`, admissible only when `G - W` has at
//! least two components. Groups are the components themselves: merging
//! components never lowers the largest group, so the component split is
//! optimal for a given `W`.
//!
//! The exact search tries exponents `k = 1, 2, ...` and, for each split
//! `k = w + t`, asks whether at most `w` deletions leave every component of
//! size at most `t` with two or more components left. Any connected set of
//! `t + 1` surviving vertices must lose a vertex, which bounds the branching.

use rand::Rng;
use serde::Serialize;

use crate::exec::Execution;
use crate::rng::stream;

use super::ConflictGraph;

/// Largest vertex count handled by the exact search.
pub const EXACT_LIMIT: usize = 24;

/// Largest vertex count accepted by the exhaustive enumerator.
pub const EXHAUSTIVE_LIMIT: usize = 22;

/// Outcome of a search: the removed set and the exponent it achieves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub remainder: Vec<usize>,
    pub exponent: usize,
}

pub(crate) struct Masks {
    v: usize,
    all: u64,
    nbr: Vec<u64>,
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn mask_to_vec(m: u64) -> Vec<usize> {
    bits(m).collect()
}

impl Masks {
    pub(crate) fn new(graph: &ConflictGraph) -> Self {
        let v = graph.vertex_count();
        assert!(v <= 64, "bitmask search supports at most 64 vertices");
        let nbr = (0..v)
            .map(|a| (0..v).filter(|&b| graph.has_edge(a, b)).fold(0u64, |m, b| m | 1 << b))
            .collect();
        let all = if v == 64 { u64::MAX } else { (1u64 << v) - 1 };
        Masks { v, all, nbr }
    }

    /// Component containing the lowest vertex of `alive`, in BFS order.
    fn bfs(&self, alive: u64, limit: usize) -> (u64, Vec<usize>) {
        let start = alive.trailing_zeros() as usize;
        let mut seen = 1u64 << start;
        let mut order = vec![start];
        let mut head = 0;
        while head < order.len() && order.len() < limit {
            let u = order[head];
            head += 1;
            for w in bits(self.nbr[u] & alive & !seen) {
                seen |= 1 << w;
                order.push(w);
                if order.len() >= limit {
                    break;
                }
            }
        }
        if order.len() >= limit {
            order.truncate(limit);
        }
        (seen, order)
    }

    fn component_of(&self, alive: u64, start: usize) -> u64 {
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0u64;
            for u in bits(frontier) {
                next |= self.nbr[u];
            }
            next &= alive & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    pub(crate) fn components(&self, alive: u64) -> Vec<u64> {
        let mut rest = alive;
        let mut out = Vec::new();
        while rest != 0 {
            let comp = self.component_of(rest, rest.trailing_zeros() as usize);
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    /// Objective of removing `removed`, or `None` if fewer than two
    /// components survive.
    pub(crate) fn objective(&self, removed: u64) -> Option<usize> {
        let comps = self.components(self.all & !removed);
        if comps.len() < 2 {
            return None;
        }
        let largest = comps.iter().map(|c| c.count_ones() as usize).max().unwrap_or(0);
        Some(removed.count_ones() as usize + largest)
    }

    fn max_degree_in(&self, comp: u64) -> usize {
        bits(comp).map(|u| (self.nbr[u] & comp).count_ones() as usize).max().unwrap_or(0)
    }

    fn branch(&self, removed: u64, budget: usize, cap: usize, forbidden: u64) -> bool {
        let alive = self.all & !removed;
        let comps = self.components(alive);
        let largest = comps.iter().copied().max_by_key(|c| c.count_ones()).unwrap_or(0);
        let largest_size = largest.count_ones() as usize;
        if largest_size <= cap && comps.len() >= 2 {
            return true;
        }
        let used = removed.count_ones() as usize;
        if used >= budget || alive == 0 {
            return false;
        }
        let left = budget - used;
        // Deleting d vertices of max degree D from a connected component of
        // size s leaves at most d(D - 1) + 1 pieces, which must hold s - d
        // vertices in pieces of size <= cap.
        for &comp in &comps {
            let s = comp.count_ones() as usize;
            if s > cap {
                let d = left.min(s);
                let degree = self.max_degree_in(comp);
                let pieces = d * degree.saturating_sub(1) + 1;
                if pieces * cap < s - d {
                    return false;
                }
            }
        }
        let candidates = if largest_size > cap {
            let (_, order) = self.bfs(largest, cap + 1);
            order.iter().fold(0u64, |m, &u| m | 1 << u)
        } else {
            // One component small enough: some vertex of it must go to split it.
            alive
        };
        let mut forbid = forbidden;
        for u in bits(candidates & !forbidden) {
            if self.branch(removed | 1 << u, budget, cap, forbid) {
                return true;
            }
            forbid |= 1 << u;
        }
        false
    }

    /// Is there an admissible `W` with `forced ⊆ W`, `W ∩ forbidden = ∅` and
    /// objective at most `k`?
    fn feasible(&self, k: usize, forced: u64, forbidden: u64, exec: Execution) -> bool {
        let start = forced.count_ones() as usize;
        if start >= k {
            return false;
        }
        let splits = k - start;
        exec.any(splits, |offset| {
            let budget = start + offset;
            let cap = k - budget;
            self.branch(forced, budget, cap, forbidden)
        })
    }

    fn optimal_exponent(&self, exec: Execution) -> Option<usize> {
        if self.v < 2 {
            return None;
        }
        (1..self.v).find(|&k| self.feasible(k, 0, 0, exec))
    }

    /// Lexicographically smallest sorted `W` achieving exponent `k`.
    fn lex_smallest(&self, k: usize, exec: Execution) -> u64 {
        let mut prefix = 0u64;
        let mut next = 0usize;
        loop {
            if self.objective(prefix) == Some(k) {
                return prefix;
            }
            let u = (next..self.v)
                .find(|&u| {
                    let below = (1u64 << u) - 1;
                    self.feasible(k, prefix | 1 << u, below & !prefix, exec)
                })
                .unwrap_or_else(|| panic!("optimal exponent {k} has no witness set"));
            prefix |= 1 << u;
            next = u + 1;
        }
    }
}

/// Exact optimum by branch-and-bound. Returns `None` when no admissible
/// removed set exists. Panics above [`EXACT_LIMIT`] vertices.
pub fn branch_and_bound(graph: &ConflictGraph, exec: Execution) -> Option<SearchResult> {
    assert!(graph.vertex_count() <= EXACT_LIMIT, "exact search limited to {EXACT_LIMIT} vertices");
    let masks = Masks::new(graph);
    let exponent = masks.optimal_exponent(exec)?;
    let remainder = mask_to_vec(masks.lex_smallest(exponent, exec));
    Some(SearchResult { remainder, exponent })
}

/// Reference optimum by enumerating every subset `W`; ties go to the
/// lexicographically smallest sorted `W`.
pub fn exhaustive(graph: &ConflictGraph) -> Option<SearchResult> {
    let v = graph.vertex_count();
    assert!(v <= EXHAUSTIVE_LIMIT, "exhaustive search limited to {EXHAUSTIVE_LIMIT} vertices");
    let masks = Masks::new(graph);
    let mut best: Option<SearchResult> = None;
    for removed in 0..(1u64 << v) {
        let Some(exponent) = masks.objective(removed) else {
            continue;
        };
        let remainder = mask_to_vec(removed);
        let better = match &best {
            None => true,
            Some(b) => exponent < b.exponent || (exponent == b.exponent && remainder < b.remainder),
        };
        if better {
            best = Some(SearchResult { remainder, exponent });
        }
    }
    best
}

/// Seeded Erdős-Rényi graph: `2..=max_vertices` vertices, edge density
/// drawn uniformly from `[0.1, 0.9]`.
pub fn random_graph(seed: u64, index: u64, max_vertices: usize) -> ConflictGraph {
    let mut rng = stream(seed, index);
    let v = rng.random_range(2..=max_vertices.max(2));
    let density: f64 = rng.random_range(0.1..0.9);
    let mut graph = ConflictGraph::empty(v);
    for a in 0..v {
        for b in a + 1..v {
            if rng.random_bool(density) {
                graph.add_edge(a, b);
            }
        }
    }
    graph
}

/// Branch-and-bound against exhaustive enumeration on one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCase {
    pub index: usize,
    pub vertices: usize,
    pub edges: usize,
    pub branch_and_bound: Option<usize>,
    pub exhaustive: Option<usize>,
    pub agree: bool,
}

pub fn oracle_sweep(graphs: usize, max_vertices: usize, seed: u64, exec: Execution) -> Vec<OracleCase> {
    exec.map(graphs, |index| {
        let graph = random_graph(seed, index as u64, max_vertices);
        let fast = branch_and_bound(&graph, Execution::Sequential);
        let slow = exhaustive(&graph);
        OracleCase {
            index,
            vertices: graph.vertex_count(),
            edges: graph.edges().len(),
            branch_and_bound: fast.as_ref().map(|r| r.exponent),
            exhaustive: slow.as_ref().map(|r| r.exponent),
            agree: fast == slow,
        }
    })
}

/// Greedy upper bound: repeatedly delete the highest-degree vertex of the
/// largest component, keeping the best admissible state seen.
pub fn greedy(graph: &ConflictGraph) -> Option<SearchResult> {
    let v = graph.vertex_count();
    let mut alive = vec![true; v];
    let mut removed: Vec<usize> = Vec::new();
    let mut best: Option<SearchResult> = None;
    loop {
        let comps = graph.components_of(&alive);
        if comps.len() >= 2 {
            let largest = comps.iter().map(Vec::len).max().unwrap_or(0);
            let exponent = removed.len() + largest;
            if best.as_ref().is_none_or(|b| exponent < b.exponent) {
                let mut remainder = removed.clone();
                remainder.sort_unstable();
                best = Some(SearchResult { remainder, exponent });
            }
        }
        let Some(largest) = comps.iter().max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0]))) else {
            break;
        };
        if alive.iter().filter(|&&a| a).count() <= 2 {
            break;
        }
        let pick = largest
            .iter()
            .copied()
            .max_by(|&a, &b| {
                let da = largest.iter().filter(|&&x| graph.has_edge(a, x)).count();
                let db = largest.iter().filter(|&&x| graph.has_edge(b, x)).count();
                da.cmp(&db).then(b.cmp(&a))
            })
            .expect("nonempty component");
        alive[pick] = false;
        removed.push(pick);
    }
    best
}
