//! Mutual orthogonality, conflict graphs and optimal group partitions.
//!
//! Two basis matrices are mutually orthogonal when `A B* + B A* = 0`. The
//! conflict graph joins every pair that is not; a fast-decodable grouping is
//! a set of conditioned symbols whose removal disconnects the graph.

pub mod search;

use serde::{Deserialize, Serialize};

use crate::construct::nu2;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::matcore::{anticommutator, is_skew_hermitian, CMatrix, DEFAULT_TOL};
use crate::stbc::CodeBasis;

/// `||A B* + B A*||_F <= tol * max(1, ||A||_F ||B||_F)`.
pub fn mutually_orthogonal(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<bool> {
    a.ensure_square()?;
    b.ensure_square()?;
    if a.n_rows() != b.n_rows() {
        return Err(Error::DimensionMismatch(format!("{}x{} vs {}x{}", a.n_rows(), a.n_cols(), b.n_rows(), b.n_cols())));
    }
    let sum = &a.matmul(&b.adjoint())? + &b.matmul(&a.adjoint())?;
    let scale = (a.frobenius_norm() * b.frobenius_norm()).max(1.0);
    Ok(sum.frobenius_norm() <= tol * scale)
}

/// Undirected graph on basis indices; an edge marks a non-orthogonal pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    adjacency: Vec<Vec<bool>>,
}

impl ConflictGraph {
    pub fn empty(v: usize) -> Self {
        ConflictGraph { adjacency: vec![vec![false; v]; v] }
    }

    /// Edges are 0-based vertex pairs.
    pub fn from_edges(v: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(v);
        for &(a, b) in edges {
            if a >= v || b >= v || a == b {
                return Err(Error::InvalidParameter(format!("bad edge ({a}, {b}) for {v} vertices")));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert_ne!(a, b, "self-loops are not allowed");
        self.adjacency[a][b] = true;
        self.adjacency[b][a] = true;
    }

    /// 0-based edge list with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let v = self.vertex_count();
        (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).filter(|&(a, b)| self.has_edge(a, b)).collect()
    }

    /// Components of the subgraph on `alive` vertices, each sorted, ordered
    /// by smallest member.
    pub fn components_of(&self, alive: &[bool]) -> Vec<Vec<usize>> {
        let v = self.vertex_count();
        let mut seen = vec![false; v];
        let mut out = Vec::new();
        for start in 0..v {
            if !alive[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for w in 0..v {
                    if alive[w] && !seen[w] && self.adjacency[u][w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_of(&vec![true; self.vertex_count()])
    }
}

pub fn conflict_graph(basis: &CodeBasis, tol: f64) -> ConflictGraph {
    let mats = basis.matrices();
    let mut g = ConflictGraph::empty(mats.len());
    for a in 0..mats.len() {
        for b in a + 1..mats.len() {
            if !mutually_orthogonal(&mats[a], &mats[b], tol).expect("basis matrices share a size") {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Groups `Γ_1..Γ_g` plus the conditioned remainder `Γ_{g+1}`.
///
/// Indices are 0-based in memory and 1-based in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct GroupPartition {
    groups: Vec<Vec<usize>>,
    remainder: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    groups: Vec<Vec<usize>>,
    #[serde(default)]
    remainder: Vec<usize>,
    #[serde(default, skip_deserializing)]
    sizes: Vec<usize>,
}

impl TryFrom<PartitionRepr> for GroupPartition {
    type Error = Error;

    fn try_from(r: PartitionRepr) -> Result<Self> {
        let shift = |v: Vec<usize>| -> Result<Vec<usize>> {
            v.into_iter()
                .map(|i| i.checked_sub(1).ok_or_else(|| Error::InvalidPartition("indices are 1-based".into())))
                .collect()
        };
        let groups = r.groups.into_iter().map(shift).collect::<Result<Vec<_>>>()?;
        GroupPartition::new(groups, shift(r.remainder)?)
    }
}

impl From<GroupPartition> for PartitionRepr {
    fn from(p: GroupPartition) -> Self {
        let sizes = p.sizes();
        let bump = |v: &Vec<usize>| v.iter().map(|i| i + 1).collect::<Vec<_>>();
        PartitionRepr { groups: p.groups.iter().map(bump).collect(), remainder: bump(&p.remainder), sizes }
    }
}

impl GroupPartition {
    /// Groups must be nonempty and all sets pairwise disjoint.
    pub fn new(groups: Vec<Vec<usize>>, remainder: Vec<usize>) -> Result<Self> {
        if groups.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPartition("groups must be nonempty".into()));
        }
        let mut all: Vec<usize> = groups.iter().flatten().chain(&remainder).copied().collect();
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != total {
            return Err(Error::InvalidPartition("groups overlap".into()));
        }
        Ok(GroupPartition { groups, remainder })
    }

    /// Every vertex in its own group.
    pub fn singletons(v: usize) -> Self {
        GroupPartition { groups: (0..v).map(|i| vec![i]).collect(), remainder: Vec::new() }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn remainder(&self) -> &[usize] {
        &self.remainder
    }

    pub fn g(&self) -> usize {
        self.groups.len()
    }

    /// `n_1, ..., n_g, n_{g+1}`.
    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).chain([self.remainder.len()]).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum::<usize>() + self.remainder.len()
    }

    pub fn max_group_size(&self) -> usize {
        self.groups.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_group_size(&self) -> usize {
        self.groups.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// `n_{g+1} + max n_i`.
    pub fn exponent(&self) -> usize {
        self.remainder.len() + self.max_group_size()
    }

    /// Position-to-index map: slot `p` of the permuted order holds index
    /// `perm[p]`: groups in order, then the remainder.
    pub fn permutation(&self) -> Vec<usize> {
        self.groups.iter().flatten().chain(&self.remainder).copied().collect()
    }

    /// Group label per permuted position; the remainder gets label `g`.
    pub fn block_labels(&self) -> Vec<usize> {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(i, grp)| std::iter::repeat_n(i, grp.len()))
            .chain(std::iter::repeat_n(self.g(), self.remainder.len()))
            .collect()
    }

    pub fn check_covers(&self, v: usize) -> Result<()> {
        if self.vertex_count() != v || self.groups.iter().flatten().chain(&self.remainder).any(|&i| i >= v) {
            return Err(Error::InvalidPartition(format!("partition does not cover exactly {v} indices")));
        }
        Ok(())
    }

    /// Rejects any conflict edge joining two distinct groups.
    pub fn check_against(&self, graph: &ConflictGraph) -> Result<()> {
        self.check_covers(graph.vertex_count())?;
        for (i, gi) in self.groups.iter().enumerate() {
            for gj in &self.groups[i + 1..] {
                for &u in gi {
                    for &w in gj {
                        if graph.has_edge(u, w) {
                            return Err(Error::InvalidPartition(format!(
                                "indices {} and {} lie in different groups but are not mutually orthogonal",
                                u + 1,
                                w + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// One evaluated inequality from the decoding-complexity theory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: i64,
    pub relation: String,
    pub rhs: i64,
    pub pass: bool,
}

impl BoundCheck {
    fn le(name: &str, lhs: usize, rhs: usize) -> Self {
        BoundCheck { name: name.into(), lhs: lhs as i64, relation: "<=".into(), rhs: rhs as i64, pass: lhs <= rhs }
    }

    fn ge(name: &str, lhs: usize, rhs: usize) -> Self {
        BoundCheck { name: name.into(), lhs: lhs as i64, relation: ">=".into(), rhs: rhs as i64, pass: lhs >= rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub exponent: usize,
    pub fast_decodable: bool,
    pub partition: Option<GroupPartition>,
    pub g_group: Option<usize>,
    /// `k = min n_i` over the groups.
    pub min_group_size: Option<usize>,
    pub heuristic: bool,
    pub bound_checks: Vec<BoundCheck>,
}

impl ComplexityReport {
    pub fn all_checks_pass(&self) -> bool {
        self.bound_checks.iter().all(|c| c.pass)
    }
}

fn partition_from_remainder(graph: &ConflictGraph, remainder: Vec<usize>) -> GroupPartition {
    let mut alive = vec![true; graph.vertex_count()];
    for &r in &remainder {
        alive[r] = false;
    }
    GroupPartition { groups: graph.components_of(&alive), remainder }
}

/// Minimizes `|W| + largest component of G - W` over removed sets `W`
/// leaving at least two components. Exact up to [`search::EXACT_LIMIT`]
/// vertices, greedy (and flagged) beyond.
pub fn optimal_partition(graph: &ConflictGraph) -> ComplexityReport {
    optimal_partition_with(graph, Execution::default())
}

pub fn optimal_partition_with(graph: &ConflictGraph, exec: Execution) -> ComplexityReport {
    let v = graph.vertex_count();
    let heuristic = v > search::EXACT_LIMIT;
    let found = if heuristic { search::greedy(graph) } else { search::branch_and_bound(graph, exec) };
    let g_group = g_group(graph);
    match found {
        Some(res) => {
            let partition = partition_from_remainder(graph, res.remainder);
            debug_assert_eq!(partition.exponent(), res.exponent);
            partition.check_against(graph).expect("search produced a conflicting partition");
            ComplexityReport {
                exponent: res.exponent,
                fast_decodable: true,
                min_group_size: Some(partition.min_group_size()),
                partition: Some(partition),
                g_group,
                heuristic,
                bound_checks: Vec::new(),
            }
        }
        None => ComplexityReport {
            exponent: v,
            fast_decodable: false,
            partition: None,
            g_group,
            min_group_size: None,
            heuristic,
            bound_checks: Vec::new(),
        },
    }
}

/// Number of components when the graph already splits into two or more.
pub fn g_group(graph: &ConflictGraph) -> Option<usize> {
    let comps = graph.components().len();
    (comps >= 2).then_some(comps)
}

/// Maps a pairwise mutually orthogonal family `{A_1, ..., A_m}` to
/// `{A_1^{-1} A_2, ..., A_1^{-1} A_m}`, which must be skew-Hermitian and
/// pairwise anticommuting.
pub fn normalize_to_anticommuting(family: &[CMatrix], tol: f64) -> Result<Vec<CMatrix>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let inv = first.inverse().ok_or_else(|| Error::Verification("first matrix is not invertible".into()))?;
    let out: Vec<CMatrix> = family[1..].iter().map(|a| inv.matmul(a)).collect::<Result<_>>()?;
    for (i, m) in out.iter().enumerate() {
        if !is_skew_hermitian(m, tol) {
            return Err(Error::Verification(format!("normalized matrix {} is not skew-Hermitian", i + 2)));
        }
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let ac = anticommutator(&out[i], &out[j])?;
            let scale = (out[i].frobenius_norm() * out[j].frobenius_norm()).max(1.0);
            if ac.frobenius_norm() > tol * scale {
                return Err(Error::Verification(format!(
                    "normalized matrices {} and {} do not anticommute",
                    i + 2,
                    j + 2
                )));
            }
        }
    }
    Ok(out)
}

/// Evaluates every inequality that applies to a report for an `n x n` code
/// with `2l` real symbols. `division` marks bases drawn from a division
/// algebra. A failing check means the report is wrong.
pub fn verify_theorem_bounds(report: &ComplexityReport, n: usize, l: usize, division: bool) -> Vec<BoundCheck> {
    let n2 = n * n;
    let full_rate = l == n2;
    let mut checks = vec![
        BoundCheck::ge("exponent_at_least_one", report.exponent, 1),
        BoundCheck::le("exponent_at_most_2l", report.exponent, 2 * l),
    ];
    if let Some(p) = &report.partition {
        let g = p.g();
        let total: usize = p.groups().iter().map(Vec::len).sum();
        let k = p.min_group_size();
        checks.push(BoundCheck::le("max_groups_n_squared", g, n2));
        checks.push(BoundCheck::le("skew_hermitian_mo_count", g - 1, n2 - 1));
        checks.push(BoundCheck::le("group_total_n_squared_plus_k", total, n2 + k));
        if let Some(ni) = p.groups().iter().map(Vec::len).filter(|&s| s >= 2).min() {
            checks.push(BoundCheck::le("group_total_with_large_group", total, n2 + ni - 1));
        }
        let general = 2 * nu2(n as u64).expect("n >= 1") as usize + 4;
        checks.push(BoundCheck::le("groups_two_adic_bound", g, general));
        if division {
            checks.push(BoundCheck::le("groups_division_algebra", g, 4));
            checks.push(BoundCheck::ge("division_algebra_exponent", report.exponent, l.div_ceil(2)));
        }
    }
    if full_rate {
        checks.push(BoundCheck::ge("full_rate_exponent", report.exponent, n2 + 1));
        checks.push(BoundCheck::le("full_rate_no_g_group", report.g_group.unwrap_or(0), 0));
    }
    checks
}

/// Conflict graph, optimal partition and bound checks for a basis.
pub fn analyze(basis: &CodeBasis, tol: f64, division: bool) -> ComplexityReport {
    let graph = conflict_graph(basis, tol);
    let mut report = optimal_partition(&graph);
    report.bound_checks = verify_theorem_bounds(&report, basis.n(), basis.l(), division);
    report
}

pub fn analyze_default(basis: &CodeBasis) -> ComplexityReport {
    analyze(basis, DEFAULT_TOL, false)
}
