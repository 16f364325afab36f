//! Color refinement (1-WL) using in-neighbors only.
//!
//! [`cr_step`] recomputes every signature and is the reference.
//! [`cr_stabilize`] runs the same synchronous rounds but only revisits
//! out-neighbors of classes created in the previous round, keeping the
//! largest piece of every split class under its old id. Every vertex is
//! re-scanned only when its class at least halves, which bounds the total
//! work by O(Δ n log n).

use std::collections::HashMap;

use crate::graph::DiGraph;
use crate::partition::OrderedPartition;
use crate::ring::RefinementTrace;

/// Vertex colors `0..k`, numbered by first occurrence over vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexColoring {
    colors: Vec<u32>,
    classes: usize,
}

impl VertexColoring {
    pub fn from_labels<L: std::hash::Hash + Eq>(labels: &[L]) -> Self {
        let mut ids: HashMap<&L, u32> = HashMap::new();
        let colors = labels
            .iter()
            .map(|l| {
                let next = ids.len() as u32;
                *ids.entry(l).or_insert(next)
            })
            .collect();
        VertexColoring {
            colors,
            classes: ids.len(),
        }
    }

    pub fn uniform(n: usize) -> Self {
        VertexColoring {
            colors: vec![0; n],
            classes: usize::from(n > 0),
        }
    }

    pub fn from_partition(p: &OrderedPartition) -> Self {
        VertexColoring::from_labels(&p.labels())
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn is_discrete(&self) -> bool {
        self.classes == self.colors.len()
    }

    pub fn to_partition(&self) -> OrderedPartition {
        OrderedPartition::from_labels(&self.colors)
    }
}

/// Gives `v` a fresh singleton color.
pub fn individualize(c: &VertexColoring, v: usize) -> VertexColoring {
    individualize_all(c, &[v])
}

/// Gives all of `vs` one shared fresh color.
pub fn individualize_all(c: &VertexColoring, vs: &[usize]) -> VertexColoring {
    let fresh = c.classes as u32;
    let mut labels = c.colors.clone();
    for &v in vs {
        labels[v] = fresh;
    }
    VertexColoring::from_labels(&labels)
}

/// One round: `v` is recolored by its old color and the sorted multiset of
/// its in-neighbors' colors.
pub fn cr_step(g: &DiGraph, c: &VertexColoring) -> VertexColoring {
    let sigs: Vec<Vec<u32>> = (0..g.n())
        .map(|v| {
            let mut sig: Vec<u32> = g.in_neighbors(v).iter().map(|&u| c.colors[u]).collect();
            sig.sort_unstable();
            sig.insert(0, c.colors[v]);
            sig
        })
        .collect();
    VertexColoring::from_labels(&sigs)
}

/// Fixed point of [`cr_step`], one full recomputation per round.
pub fn cr_stabilize_naive(g: &DiGraph, c: &VertexColoring) -> RefinementTrace<VertexColoring> {
    let mut cur = c.clone();
    let mut class_counts = vec![cur.class_count()];
    loop {
        let next = cr_step(g, &cur);
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

/// Every intermediate partition, starting with the input.
pub fn cr_history(g: &DiGraph, c: &VertexColoring) -> Vec<OrderedPartition> {
    let mut cur = c.clone();
    let mut out = vec![cur.to_partition()];
    loop {
        let next = cr_step(g, &cur);
        if next.class_count() == cur.class_count() {
            return out;
        }
        out.push(next.to_partition());
        cur = next;
    }
}

/// Classes as contiguous ranges of a permutation of the vertices.
struct Cells {
    elems: Vec<u32>,
    pos: Vec<u32>,
    cell_of: Vec<u32>,
    start: Vec<u32>,
    end: Vec<u32>,
}

impl Cells {
    fn new(c: &VertexColoring) -> Self {
        let n = c.n();
        let k = c.class_count();
        let mut sizes = vec![0u32; k];
        for &x in &c.colors {
            sizes[x as usize] += 1;
        }
        let mut start = vec![0u32; k];
        for i in 1..k {
            start[i] = start[i - 1] + sizes[i - 1];
        }
        let end: Vec<u32> = (0..k).map(|i| start[i] + sizes[i]).collect();
        let mut fill = start.clone();
        let mut elems = vec![0u32; n];
        let mut pos = vec![0u32; n];
        for (v, p) in pos.iter_mut().enumerate() {
            let cell = c.colors[v] as usize;
            elems[fill[cell] as usize] = v as u32;
            *p = fill[cell];
            fill[cell] += 1;
        }
        Cells {
            elems,
            pos,
            cell_of: c.colors.clone(),
            start,
            end,
        }
    }

    fn count(&self) -> usize {
        self.start.len()
    }

    fn members(&self, cell: usize) -> &[u32] {
        &self.elems[self.start[cell] as usize..self.end[cell] as usize]
    }

    fn swap_to(&mut self, v: u32, slot: u32) {
        let p = self.pos[v as usize];
        let other = self.elems[slot as usize];
        self.elems.swap(p as usize, slot as usize);
        self.pos[other as usize] = p;
        self.pos[v as usize] = slot;
    }
}

/// Fixed point of [`cr_step`] with the same round structure and result,
/// computed incrementally.
pub fn cr_stabilize(g: &DiGraph, c: &VertexColoring) -> RefinementTrace<VertexColoring> {
    let n = g.n();
    let mut cells = Cells::new(c);
    let mut class_counts = vec![c.class_count()];
    let mut fresh: Vec<u32> = (0..cells.count() as u32).collect();

    let mut count = vec![0u32; n];
    let mut sig: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    let mut touched_round: Vec<u32> = Vec::new();
    let mut touched_now: Vec<u32> = Vec::new();
    let mut in_round = vec![false; n];

    while !fresh.is_empty() {
        // signatures with respect to the classes created last round
        for &x in &fresh {
            for &v in cells.members(x as usize) {
                for &w in g.out_neighbors(v as usize) {
                    if count[w] == 0 {
                        touched_now.push(w as u32);
                    }
                    count[w] += 1;
                }
            }
            for &w in &touched_now {
                sig[w as usize].push((x, count[w as usize]));
                count[w as usize] = 0;
                if !in_round[w as usize] {
                    in_round[w as usize] = true;
                    touched_round.push(w);
                }
            }
            touched_now.clear();
        }

        // group touched vertices by their current cell
        touched_round.sort_unstable_by_key(|&w| (cells.cell_of[w as usize], w));
        let mut next_fresh = Vec::new();
        let mut i = 0;
        while i < touched_round.len() {
            let cell = cells.cell_of[touched_round[i] as usize];
            let mut j = i;
            while j < touched_round.len() && cells.cell_of[touched_round[j] as usize] == cell {
                j += 1;
            }
            let group = &mut touched_round[i..j];
            group.sort_by(|&a, &b| sig[a as usize].cmp(&sig[b as usize]).then(a.cmp(&b)));
            split_cell(&mut cells, cell as usize, group, &sig, &mut next_fresh);
            i = j;
        }

        for &w in &touched_round {
            sig[w as usize].clear();
            in_round[w as usize] = false;
        }
        touched_round.clear();
        if next_fresh.is_empty() {
            break;
        }
        class_counts.push(cells.count());
        fresh = next_fresh;
    }

    let colors: Vec<u32> = cells.cell_of.clone();
    RefinementTrace {
        rounds: class_counts.len() - 1,
        class_counts,
        final_state: VertexColoring::from_labels(&colors),
    }
}

/// Splits `cell` by the signatures of its touched members (`group`, sorted
/// by signature). Untouched members form one more piece. The largest piece
/// keeps the old id; the others get new cells and are reported as fresh.
fn split_cell(
    cells: &mut Cells,
    cell: usize,
    group: &[u32],
    sig: &[Vec<(u32, u32)>],
    fresh: &mut Vec<u32>,
) {
    let size = (cells.end[cell] - cells.start[cell]) as usize;
    // pieces of the touched group as index ranges into `group`
    let mut pieces: Vec<(usize, usize)> = Vec::new();
    let mut a = 0;
    while a < group.len() {
        let mut b = a + 1;
        while b < group.len() && sig[group[b] as usize] == sig[group[a] as usize] {
            b += 1;
        }
        pieces.push((a, b));
        a = b;
    }
    let untouched = size - group.len();
    if pieces.len() == 1 && untouched == 0 {
        return;
    }

    // move touched members to the tail, in group order
    let tail_start = cells.end[cell] - group.len() as u32;
    for (k, &v) in group.iter().enumerate() {
        cells.swap_to(v, tail_start + k as u32);
    }

    // the kept piece: largest, preferring the untouched block, then the first
    let mut kept: Option<usize> = None;
    let mut best = untouched;
    for (idx, &(a, b)) in pieces.iter().enumerate() {
        if b - a > best {
            best = b - a;
            kept = Some(idx);
        }
    }

    let cell_start = cells.start[cell];
    let mut ranges: Vec<(u32, u32)> = Vec::with_capacity(pieces.len() + 1);
    if untouched > 0 {
        ranges.push((cell_start, tail_start));
    }
    for &(a, b) in &pieces {
        ranges.push((tail_start + a as u32, tail_start + b as u32));
    }
    let kept_range = match kept {
        None => 0,
        Some(idx) => idx + usize::from(untouched > 0),
    };

    for (r, &(s, e)) in ranges.iter().enumerate() {
        if r == kept_range {
            cells.start[cell] = s;
            cells.end[cell] = e;
            continue;
        }
        let id = cells.count() as u32;
        cells.start.push(s);
        cells.end.push(e);
        for slot in s..e {
            let v = cells.elems[slot as usize];
            cells.cell_of[v as usize] = id;
        }
        fresh.push(id);
    }
}
