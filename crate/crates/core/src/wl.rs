//! Generic 2-dimensional Weisfeiler-Leman refinement on pair colorings,
//! and the bridge between Cayley pair partitions and S-modules.
//!
//! The generic step costs O(n^3 log n) and is the reference the algebraic
//! path in [`crate::ring`] is checked against.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::DiGraph;
use crate::group::GroupSpec;
use crate::par::{self, Execution};
use crate::partition::OrderedPartition;
use crate::ring::RefinementTrace;

/// Row-major color matrix over `V x V`. Ids are `0..k`, numbered by first
/// occurrence in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairColoring {
    n: usize,
    colors: Vec<u32>,
    classes: usize,
}

impl PairColoring {
    /// Renumbers arbitrary labels canonically.
    pub fn from_labels<L: std::hash::Hash + Eq>(n: usize, labels: &[L]) -> Self {
        assert_eq!(labels.len(), n * n);
        let mut ids: HashMap<&L, u32> = HashMap::new();
        let colors = labels
            .iter()
            .map(|l| {
                let next = ids.len() as u32;
                *ids.entry(l).or_insert(next)
            })
            .collect();
        PairColoring {
            n,
            colors,
            classes: ids.len(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn color(&self, u: usize, v: usize) -> u32 {
        self.colors[u * self.n + v]
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn as_partition(&self) -> OrderedPartition {
        OrderedPartition::from_labels(&self.colors)
    }
}

/// Colors pairs by (equal, forward arc, backward arc).
pub fn initial_pair_coloring(g: &DiGraph) -> PairColoring {
    let n = g.n();
    let labels: Vec<(bool, bool, bool)> = (0..n * n)
        .map(|k| {
            let (u, v) = (k / n, k % n);
            (u == v, g.has_edge(u, v), g.has_edge(v, u))
        })
        .collect();
    PairColoring::from_labels(n, &labels)
}

/// One 2-WL round: `(v1, v2)` is recolored by its old color and the sorted
/// multiset of `(c(v1, v), c(v, v2))` over all `v`.
pub fn wl2_step(c: &PairColoring) -> PairColoring {
    wl2_step_with(c, Execution::Sequential)
}

pub fn wl2_step_with(c: &PairColoring, exec: Execution) -> PairColoring {
    let n = c.n;
    let rows: Vec<Vec<Vec<u64>>> = par::map_range(exec, n, |v1| {
        (0..n)
            .map(|v2| {
                let mut sig: Vec<u64> = (0..n)
                    .map(|v| (c.color(v1, v) as u64) << 32 | c.color(v, v2) as u64)
                    .collect();
                sig.sort_unstable();
                sig.insert(0, c.color(v1, v2) as u64);
                sig
            })
            .collect()
    });
    let labels: Vec<Vec<u64>> = rows.into_iter().flatten().collect();
    PairColoring::from_labels(n, &labels)
}

pub fn wl2_stabilize(g: &DiGraph) -> RefinementTrace<PairColoring> {
    wl2_stabilize_from(initial_pair_coloring(g), Execution::Sequential)
}

pub fn wl2_stabilize_from(start: PairColoring, exec: Execution) -> RefinementTrace<PairColoring> {
    let mut cur = start;
    let mut class_counts = vec![cur.class_count()];
    loop {
        let next = wl2_step_with(&cur, exec);
        if next.class_count() == cur.class_count() {
            break;
        }
        class_counts.push(next.class_count());
        cur = next;
    }
    RefinementTrace {
        rounds: class_counts.len() - 1,
        class_counts,
        final_state: cur,
    }
}

/// Translation invariance, diagonal as a class, and closure under transpose.
pub fn is_cayley_partition(c: &PairColoring, spec: &GroupSpec) -> bool {
    let n = spec.order();
    if c.n != n {
        return false;
    }
    for g1 in 0..n {
        for g2 in 0..n {
            if c.color(g1, g2) != c.color(0, spec.sub(g2, g1)) {
                return false;
            }
        }
    }
    let diag = c.color(0, 0);
    if (1..n).any(|a| c.color(0, a) == diag) {
        return false;
    }
    let k = c.class_count();
    let mut transpose = vec![u32::MAX; k];
    for u in 0..n {
        for v in 0..n {
            let (x, y) = (c.color(u, v) as usize, c.color(v, u));
            if transpose[x] == u32::MAX {
                transpose[x] = y;
            } else if transpose[x] != y {
                return false;
            }
        }
    }
    let mut seen = vec![false; k];
    transpose.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
}

/// Reads the identity row: basic sets `T_i = {a : (e, a) in P_i}`.
pub fn induced_smodule(c: &PairColoring, spec: &GroupSpec) -> Result<OrderedPartition> {
    if !is_cayley_partition(c, spec) {
        return Err(Error::NotCayleyPartition);
    }
    let row: Vec<u32> = (0..spec.order()).map(|a| c.color(spec.identity(), a)).collect();
    Ok(OrderedPartition::from_labels(&row))
}

/// Color of `(g1, g2)` is the class of `g2 - g1`.
pub fn pair_coloring_from_smodule(spec: &GroupSpec, v: &OrderedPartition) -> PairColoring {
    let n = spec.order();
    let label = v.labels();
    let labels: Vec<usize> = (0..n * n)
        .map(|k| label[spec.sub(k % n, k / n)])
        .collect();
    PairColoring::from_labels(n, &labels)
}

/// S-module of the initial 2-WL coloring of `Cay(G, S)`: identity,
/// `S ∩ -S`, `S \ -S`, `-S \ S`, and the rest (empty parts dropped).
pub fn initial_smodule(spec: &GroupSpec, con: &[usize]) -> OrderedPartition {
    let n = spec.order();
    let mut member = vec![false; n];
    for &s in con {
        member[s] = true;
    }
    let labels: Vec<(bool, bool, bool)> = (0..n)
        .map(|a| (a == spec.identity(), member[a], member[spec.neg(a)]))
        .collect();
    OrderedPartition::from_labels(&labels)
}
