//! Individualization-refinement in Tinhofer's style.
//!
//! [`tinhofer_iso_test`] runs the classical loop on the disjoint union of
//! two graphs: refine, compare color multisets, stop when discrete,
//! otherwise individualize one same-colored pair and repeat.
//! [`has_tinhofer_property`] explores every choice sequence of that loop
//! with the second graph set to a copy of the first, and
//! [`canonical_form_prime_circulant`] turns the loop into a canonical
//! labeling for circulants of prime order.

use std::sync::Arc;

use serde::Serialize;

use crate::cr::{cr_stabilize, individualize_all, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::{build_cayley, DiGraph};
use crate::group::{is_prime, GroupSpec};
use crate::par::{self, Execution};

/// Pairs `(vertex of G, vertex of H)` individualized so far, in order.
pub type History = Vec<(usize, usize)>;

/// Two graphs colored jointly through their disjoint union.
#[derive(Clone, Debug)]
pub struct IndividualizationState {
    union: Arc<DiGraph>,
    n_left: usize,
    coloring: VertexColoring,
    pub history: History,
}

impl IndividualizationState {
    pub fn new(g: &DiGraph, h: &DiGraph) -> Self {
        let union = Arc::new(g.disjoint_union(h));
        let coloring = VertexColoring::uniform(union.n());
        let mut state = IndividualizationState {
            union,
            n_left: g.n(),
            coloring,
            history: Vec::new(),
        };
        state.refine();
        state
    }

    fn refine(&mut self) {
        self.coloring = cr_stabilize(&self.union, &self.coloring).final_state;
    }

    pub fn coloring(&self) -> &VertexColoring {
        &self.coloring
    }

    /// Colors restricted to the left (`G`) copy.
    pub fn left_colors(&self) -> &[u32] {
        &self.coloring.colors()[..self.n_left]
    }

    pub fn right_colors(&self) -> &[u32] {
        &self.coloring.colors()[self.n_left..]
    }

    fn class_sizes(&self) -> (Vec<usize>, Vec<usize>) {
        let k = self.coloring.class_count();
        let (mut l, mut r) = (vec![0; k], vec![0; k]);
        for &c in self.left_colors() {
            l[c as usize] += 1;
        }
        for &c in self.right_colors() {
            r[c as usize] += 1;
        }
        (l, r)
    }

    pub fn multisets_match(&self) -> bool {
        let (l, r) = self.class_sizes();
        l == r
    }

    pub fn left_discrete(&self) -> bool {
        self.class_sizes().0.iter().all(|&s| s <= 1)
    }

    /// The bijection induced by a discrete coloring: left vertex to the
    /// right vertex of the same color.
    pub fn induced_map(&self) -> Vec<usize> {
        let mut right_of = vec![usize::MAX; self.coloring.class_count()];
        for (w, &c) in self.right_colors().iter().enumerate() {
            right_of[c as usize] = w;
        }
        self.left_colors().iter().map(|&c| right_of[c as usize]).collect()
    }

    /// Colors with at least two vertices in the left copy, ascending.
    pub fn candidate_classes(&self) -> Vec<u32> {
        let (l, r) = self.class_sizes();
        (0..l.len() as u32)
            .filter(|&c| l[c as usize] >= 2 && r[c as usize] >= 2)
            .collect()
    }

    pub fn members(&self, color: u32) -> (Vec<usize>, Vec<usize>) {
        let left = (0..self.n_left).filter(|&v| self.left_colors()[v] == color).collect();
        let right = (0..self.union.n() - self.n_left)
            .filter(|&w| self.right_colors()[w] == color)
            .collect();
        (left, right)
    }

    /// Gives `v` (left) and `w` (right) one shared fresh color and refines.
    pub fn individualize_pair(&self, v: usize, w: usize) -> Self {
        let coloring = individualize_all(&self.coloring, &[v, self.n_left + w]);
        let mut history = self.history.clone();
        history.push((v, w));
        let mut next = IndividualizationState {
            union: Arc::clone(&self.union),
            n_left: self.n_left,
            coloring,
            history,
        };
        next.refine();
        next
    }

    /// Whether every color-preserving bijection between the two copies is
    /// an isomorphism: arcs between any two color classes are all present
    /// or all absent, in both copies.
    pub fn is_cellular_complete(&self) -> bool {
        let k = self.coloring.class_count();
        let colors = self.coloring.colors();
        let ranges = [0..self.n_left, self.n_left..self.union.n()];
        ranges.into_iter().all(|range| {
            let mut size = vec![0usize; k];
            for v in range.clone() {
                size[colors[v] as usize] += 1;
            }
            let mut from = vec![0usize; k];
            range.clone().all(|v| {
                from.iter_mut().for_each(|x| *x = 0);
                for &u in self.union.in_neighbors(v) {
                    from[colors[u] as usize] += 1;
                }
                let own = colors[v] as usize;
                (0..k).all(|b| {
                    let full = size[b] - usize::from(b == own);
                    from[b] == 0 || from[b] == full
                })
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "decision", rename_all = "kebab-case")]
pub enum IsoDecision {
    Isomorphic { witness: Vec<usize>, history: History },
    NonIsomorphic { history: History },
    /// The discrete coloring did not induce an isomorphism.
    RefutedRun { history: History },
}

/// The five-step individualization-refinement test. Step 5 picks the least
/// candidate color and the least vertex of that color in each copy.
pub fn tinhofer_iso_test(g: &DiGraph, h: &DiGraph) -> IsoDecision {
    if g.n() != h.n() {
        return IsoDecision::NonIsomorphic { history: Vec::new() };
    }
    let mut state = IndividualizationState::new(g, h);
    loop {
        if !state.multisets_match() {
            return IsoDecision::NonIsomorphic {
                history: state.history,
            };
        }
        if state.left_discrete() {
            let witness = state.induced_map();
            return if g.is_isomorphism(h, &witness) {
                IsoDecision::Isomorphic {
                    witness,
                    history: state.history,
                }
            } else {
                IsoDecision::RefutedRun {
                    history: state.history,
                }
            };
        }
        let color = state.candidate_classes()[0];
        let (left, right) = state.members(color);
        state = state.individualize_pair(left[0], right[0]);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    /// Step 3 declared a graph non-isomorphic to itself.
    MultisetMismatch,
    /// A discrete coloring induced a map that is not an automorphism.
    NotAnAutomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TinhoferVerdict {
    Holds,
    Fails {
        certificate: History,
        reason: FailureReason,
    },
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TinhoferReport {
    pub verdict: TinhoferVerdict,
    /// Search-tree nodes visited.
    pub nodes: usize,
}

impl TinhoferReport {
    pub fn property(&self) -> Option<bool> {
        match self.verdict {
            TinhoferVerdict::Holds => Some(true),
            TinhoferVerdict::Fails { .. } => Some(false),
            TinhoferVerdict::BudgetExceeded => None,
        }
    }
}

/// Decides the Tinhofer property of `g` against a copy of itself by
/// exploring every choice of class and pair at every step.
///
/// Choice sequences are explored shortest first, and within a depth in
/// lexicographic order of (color, left vertex, right vertex), so a failing
/// certificate is the least one among the shortest. A node whose colored
/// copies are cellular complete is accepted without expansion: every
/// color-preserving bijection below it is an automorphism.
pub fn has_tinhofer_property(g: &DiGraph, budget: usize) -> TinhoferReport {
    has_tinhofer_property_with(g, &[], budget, Execution::default())
}

/// As [`has_tinhofer_property`], restricted to choice sequences that start
/// with `prefix`. Pairs of the prefix are individualized without checking
/// that they share a color.
pub fn has_tinhofer_property_from(g: &DiGraph, prefix: &[(usize, usize)], budget: usize) -> TinhoferReport {
    has_tinhofer_property_with(g, prefix, budget, Execution::default())
}

enum Visit {
    Failed(FailureReason),
    Leaf,
    Expand,
}

fn visit(g: &DiGraph, state: &IndividualizationState) -> Visit {
    if !state.multisets_match() {
        return Visit::Failed(FailureReason::MultisetMismatch);
    }
    if state.left_discrete() {
        return if g.is_isomorphism(g, &state.induced_map()) {
            Visit::Leaf
        } else {
            Visit::Failed(FailureReason::NotAnAutomorphism)
        };
    }
    if state.is_cellular_complete() {
        Visit::Leaf
    } else {
        Visit::Expand
    }
}

fn children(state: &IndividualizationState) -> Vec<IndividualizationState> {
    let mut out = Vec::new();
    for color in state.candidate_classes() {
        let (left, right) = state.members(color);
        for &v in &left {
            for &w in &right {
                out.push(state.individualize_pair(v, w));
            }
        }
    }
    out
}

/// The search behind [`has_tinhofer_property`]. Each level of the tree is
/// expanded with `exec`; the verdict, certificate and node count do not
/// depend on it. The budget is checked once per level.
pub fn has_tinhofer_property_with(
    g: &DiGraph,
    prefix: &[(usize, usize)],
    budget: usize,
    exec: Execution,
) -> TinhoferReport {
    let mut root = IndividualizationState::new(g, g);
    for &(v, w) in prefix {
        root = root.individualize_pair(v, w);
    }
    let mut nodes = 1usize;
    let mut frontier = vec![root];
    while !frontier.is_empty() {
        let visits = par::map(exec, &frontier, |s| visit(g, s));
        if let Some(k) = visits.iter().position(|v| matches!(v, Visit::Failed(_))) {
            let Visit::Failed(reason) = visits[k] else { unreachable!() };
            return TinhoferReport {
                verdict: TinhoferVerdict::Fails {
                    certificate: frontier.swap_remove(k).history,
                    reason,
                },
                nodes,
            };
        }
        let open: Vec<IndividualizationState> = frontier
            .into_iter()
            .zip(visits)
            .filter(|(_, v)| matches!(v, Visit::Expand))
            .map(|(s, _)| s)
            .collect();
        let next: Vec<IndividualizationState> = par::map(exec, &open, children).into_iter().flatten().collect();
        nodes += next.len();
        if nodes > budget {
            return TinhoferReport {
                verdict: TinhoferVerdict::BudgetExceeded,
                nodes,
            };
        }
        frontier = next;
    }
    TinhoferReport {
        verdict: TinhoferVerdict::Holds,
        nodes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    /// `order[i]` is the vertex placed at position `i`.
    pub order: Vec<usize>,
    /// Row-major adjacency bits of the reordered graph, packed MSB first
    /// and zero-padded to whole bytes.
    pub code: Vec<u8>,
    pub n: usize,
    pub individualizations: usize,
}

impl CanonicalForm {
    pub fn code_hex(&self) -> String {
        hex::encode(&self.code)
    }

    fn from_order(g: &DiGraph, order: Vec<usize>, individualizations: usize) -> Self {
        let n = g.n();
        let mut code = vec![0u8; (n * n).div_ceil(8)];
        for (i, &u) in order.iter().enumerate() {
            for (j, &v) in order.iter().enumerate() {
                if g.has_edge(u, v) {
                    let bit = i * n + j;
                    code[bit / 8] |= 0x80 >> (bit % 8);
                }
            }
        }
        CanonicalForm {
            order,
            code,
            n,
            individualizations,
        }
    }
}

/// Color refinement with label-independent color ids: each round ranks the
/// distinct (old color, sorted in-neighbor colors) signatures.
fn refine_invariant(g: &DiGraph, mut colors: Vec<u32>) -> Vec<u32> {
    let mut classes = distinct(&colors);
    loop {
        let sigs: Vec<Vec<u32>> = (0..g.n())
            .map(|v| {
                let mut s: Vec<u32> = g.in_neighbors(v).iter().map(|&u| colors[u]).collect();
                s.sort_unstable();
                s.insert(0, colors[v]);
                s
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == classes {
            return colors;
        }
        classes = sorted.len();
        colors = sigs
            .iter()
            .map(|s| sorted.binary_search(s).expect("present") as u32)
            .collect();
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Individualize-and-refine until discrete. The class is the least color
/// with two or more vertices; `exhaustive` tries every vertex of it and
/// checks that all of them lead to the same code.
fn canonize_from(g: &DiGraph, colors: Vec<u32>, depth: usize, exhaustive: bool) -> CanonicalForm {
    let colors = refine_invariant(g, colors);
    let k = distinct(&colors);
    if k == g.n() {
        let mut order = vec![0; g.n()];
        for (v, &c) in colors.iter().enumerate() {
            order[c as usize] = v;
        }
        return CanonicalForm::from_order(g, order, depth);
    }
    let mut size = vec![0usize; k];
    for &c in &colors {
        size[c as usize] += 1;
    }
    let target = (0..k).find(|&c| size[c] >= 2).expect("non-discrete") as u32;
    let members: Vec<usize> = (0..g.n()).filter(|&v| colors[v] == target).collect();
    let branch = |v: usize| {
        let mut next = colors.clone();
        next[v] = k as u32;
        canonize_from(g, next, depth + 1, exhaustive)
    };
    let first = branch(members[0]);
    if exhaustive {
        for &v in &members[1..] {
            let other = branch(v);
            assert_eq!(other.code, first.code, "representative {v} changes the code");
        }
    }
    first
}

/// Canonical labeling of `Cay(Z_p, con)`. Isomorphic circulants get equal
/// codes; the code is the reordered adjacency matrix, so equal codes imply
/// isomorphism. The empty and complete cases are not refinable and use the
/// identity order.
pub fn canonical_form_prime_circulant(p: usize, con: &[usize]) -> Result<CanonicalForm> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let spec = GroupSpec::cyclic(p)?;
    let g = build_cayley(&spec, con)?;
    let degree = g.out_neighbors(0).len();
    if degree == 0 || degree == p - 1 {
        return Ok(CanonicalForm::from_order(&g, (0..p).collect(), 0));
    }
    Ok(canonize_from(&g, vec![0; p], 0, cfg!(debug_assertions)))
}
