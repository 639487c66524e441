//! Projected-coloring graphs and their colorability.
//!
//! A PCG is colorable when some ±1 vertex coloring makes the product over
//! every edge equal that edge's weight. Writing `c_k = (−1)^{x_k}` and
//! `W = (−1)^w` turns each edge into the parity equation `Σ_{k∈E} x_k = w`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Solution, Gf2System};
use crate::hardy::ConditionSet;
use crate::qubits::{OutcomeVector, QubitSet, Sign};

/// Largest vertex count the exhaustive oracle accepts.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 20;

/// A hyperedge; weight −1 is drawn red, +1 green.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PcgEdge {
    pub vertices: QubitSet,
    pub weight: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pcg {
    n: usize,
    marks: Vec<Sign>,
    edges: Vec<PcgEdge>,
}

/// A ±1 value per vertex (red ↔ −1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring(pub Vec<Sign>);

impl Coloring {
    pub fn values(&self) -> Vec<i64> {
        self.0.iter().map(|s| s.value()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Edge indices whose parity equations sum to `0 = 1`.
    Combination(Vec<usize>),
    /// Every coloring was tried and none satisfied all edges.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColorabilityResult {
    Colorable(Coloring),
    Uncolorable(Certificate),
}

impl ColorabilityResult {
    pub fn is_colorable(&self) -> bool {
        matches!(self, ColorabilityResult::Colorable(_))
    }
}

impl Pcg {
    pub fn new(n: usize, marks: Vec<Sign>, edges: Vec<PcgEdge>) -> Result<Pcg> {
        if n > 64 {
            return Err(Error::InvalidPcg(format!("{n} vertices exceeds 64")));
        }
        if marks.len() != n {
            return Err(Error::InvalidPcg(format!("expected {n} marks, got {}", marks.len())));
        }
        let full = QubitSet::full(n);
        for (i, e) in edges.iter().enumerate() {
            if !e.vertices.is_subset(full) {
                return Err(Error::InvalidPcg(format!("edge {i} leaves the vertex range 1..={n}")));
            }
            if e.vertices.len() < 2 {
                return Err(Error::InvalidPcg(format!("edge {i} circulates fewer than two vertices")));
            }
        }
        Ok(Pcg { n, marks, edges })
    }

    /// A PCG with all marks +1.
    pub fn unmarked(n: usize, edges: Vec<PcgEdge>) -> Result<Pcg> {
        Pcg::new(n, vec![Sign::Plus; n], edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn marks(&self) -> &[Sign] {
        &self.marks
    }

    pub fn edges(&self) -> &[PcgEdge] {
        &self.edges
    }

    /// `∏_{k∈E} c_k = W(E)` for every edge, evaluated directly on signs.
    pub fn is_satisfied_by(&self, coloring: &Coloring) -> bool {
        coloring.0.len() == self.n
            && self.edges.iter().all(|e| {
                e.vertices.iter().fold(Sign::Plus, |acc, k| acc * coloring.0[k]) == e.weight
            })
    }

    /// An inconsistent combination covers every vertex an even number of
    /// times and has weight product −1.
    pub fn is_valid_certificate(&self, edge_indices: &[usize]) -> bool {
        if edge_indices.is_empty() || edge_indices.iter().any(|&i| i >= self.edges.len()) {
            return false;
        }
        let mut sorted = edge_indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != edge_indices.len() {
            return false;
        }
        let (cover, weight) = sorted.iter().fold((QubitSet::EMPTY, Sign::Plus), |(v, w), &i| {
            (v.symmetric_difference(self.edges[i].vertices), w * self.edges[i].weight)
        });
        cover.is_empty() && weight == Sign::Minus
    }

    /// Same edges, vertices relabeled (`perm[old] = new`, 0-based).
    pub fn permuted(&self, perm: &[usize]) -> Pcg {
        let mut marks = vec![Sign::Plus; self.n];
        for (old, &new) in perm.iter().enumerate() {
            marks[new] = self.marks[old];
        }
        Pcg {
            n: self.n,
            marks,
            edges: self
                .edges
                .iter()
                .map(|e| PcgEdge { vertices: e.vertices.permuted(perm), weight: e.weight })
                .collect(),
        }
    }
}

/// Decides colorability by GF(2) elimination (lowest-index pivots, free
/// vertices colored +1).
pub fn check_colorable(pcg: &Pcg) -> ColorabilityResult {
    let mut system = Gf2System::new(pcg.n);
    for e in &pcg.edges {
        system.push(e.vertices.mask(), e.weight.is_minus());
    }
    match system.solve() {
        Gf2Solution::Consistent(x) => {
            ColorabilityResult::Colorable(Coloring(x.into_iter().map(Sign::from_bit).collect()))
        }
        Gf2Solution::Inconsistent(rows) => {
            ColorabilityResult::Uncolorable(Certificate::Combination(rows))
        }
    }
}

/// Tries all `2^n` colorings in lexicographic order (vertex 1 most
/// significant, +1 before −1) and returns the first that works.
pub fn brute_force_colorable(pcg: &Pcg) -> Result<ColorabilityResult> {
    if pcg.n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooManyQubits { n: pcg.n, limit: BRUTE_FORCE_MAX_VERTICES });
    }
    for code in 0u64..1 << pcg.n {
        let coloring = Coloring(
            (0..pcg.n)
                .map(|k| Sign::from_bit(code >> (pcg.n - 1 - k) & 1 == 1))
                .collect(),
        );
        if pcg.is_satisfied_by(&coloring) {
            return Ok(ColorabilityResult::Colorable(coloring));
        }
    }
    Ok(ColorabilityResult::Uncolorable(Certificate::Exhaustive))
}

/// A cycle of pair-edges carrying an odd number of red edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddLoop {
    /// Edge indices in traversal order.
    pub edges: Vec<usize>,
}

/// Finds a cycle among size-2 edges with an odd number of red edges, a
/// sufficient condition for un-colorability.
///
/// Walks a BFS forest assigning each vertex the parity of red edges on its
/// tree path; a non-tree edge that disagrees with those parities closes an
/// odd cycle.
pub fn has_odd_red_loop(pcg: &Pcg) -> Option<OddLoop> {
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); pcg.n];
    for (i, e) in pcg.edges.iter().enumerate() {
        if e.vertices.len() == 2 {
            let mut it = e.vertices.iter();
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            adjacency[a].push((b, i));
            adjacency[b].push((a, i));
        }
    }

    let mut parity: Vec<Option<bool>> = vec![None; pcg.n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; pcg.n]; // (vertex, edge)
    let mut depth = vec![0usize; pcg.n];
    for root in 0..pcg.n {
        if parity[root].is_some() {
            continue;
        }
        parity[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, i) in &adjacency[u] {
                let red = pcg.edges[i].weight.is_minus();
                let expected = parity[u].unwrap() ^ red;
                match parity[v] {
                    None => {
                        parity[v] = Some(expected);
                        parent[v] = Some((u, i));
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                    Some(p) if p != expected => {
                        return Some(OddLoop { edges: close_cycle(u, v, i, &parent, &depth) });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    None
}

/// Tree path `u → lca → v` followed by the closing edge `(v, u)`.
fn close_cycle(
    u: usize,
    v: usize,
    closing: usize,
    parent: &[Option<(usize, usize)>],
    depth: &[usize],
) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut from_u = Vec::new();
    let mut from_v = Vec::new();
    while a != b {
        if depth[a] >= depth[b] {
            let (p, e) = parent[a].expect("vertices share a BFS tree");
            from_u.push(e);
            a = p;
        } else {
            let (p, e) = parent[b].expect("vertices share a BFS tree");
            from_v.push(e);
            b = p;
        }
    }
    from_v.reverse();
    from_u.extend(from_v);
    from_u.push(closing);
    from_u
}

/// Marks from the outcome, one edge per derived `(E, α)` with weight `α`.
pub fn build_pcg(outcome: &OutcomeVector, conditions: &ConditionSet) -> Pcg {
    let edges = conditions
        .conditions
        .iter()
        .map(|c| PcgEdge { vertices: c.edge, weight: c.alpha })
        .collect();
    let marks = (0..outcome.n()).map(|i| outcome.value(i)).collect();
    Pcg::new(outcome.n(), marks, edges).expect("derived edges have at least two vertices")
}
