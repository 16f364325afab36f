//! Validation oracles: exhaustive isomorphism search for small graphs,
//! affine-map search for prime circulants, and automorphism counting.

use crate::error::{Error, Result};
use crate::graph::DiGraph;
use crate::group::is_prime;

pub const BRUTE_FORCE_LIMIT: usize = 10;

/// Backtracking isomorphism search over all bijections; `n <= 10`.
pub fn brute_force_iso(g: &DiGraph, h: &DiGraph) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit {
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if h.n() != n || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let mut found = None;
    extend(g, h, &mut Vec::new(), &mut vec![false; n], &mut |m| {
        found = Some(m.to_vec());
        true
    });
    Ok(found)
}

/// Number of automorphisms, by backtracking with arc-consistency pruning.
pub fn count_automorphisms(g: &DiGraph) -> u64 {
    let mut count = 0u64;
    extend(g, g, &mut Vec::new(), &mut vec![false; g.n()], &mut |_| {
        count += 1;
        false
    });
    count
}

/// Extends `map` vertex by vertex; `visit` returns true to stop.
fn extend(
    g: &DiGraph,
    h: &DiGraph,
    map: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let u = map.len();
    if u == g.n() {
        return visit(map);
    }
    let (out_deg, in_deg) = (g.out_neighbors(u).len(), g.in_neighbors(u).len());
    for x in 0..h.n() {
        if used[x] || h.out_neighbors(x).len() != out_deg || h.in_neighbors(x).len() != in_deg {
            continue;
        }
        let consistent = (0..u).all(|w| {
            g.has_edge(u, w) == h.has_edge(x, map[w]) && g.has_edge(w, u) == h.has_edge(map[w], x)
        });
        if !consistent {
            continue;
        }
        used[x] = true;
        map.push(x);
        let stop = extend(g, h, map, used, visit);
        map.pop();
        used[x] = false;
        if stop {
            return true;
        }
    }
    false
}

/// Isomorphism `Cay(Z_p, a) -> Cay(Z_p, b)` of the form `g -> m g`, found by
/// searching multipliers with `m a = b`. Translations add nothing here
/// since every translation is an automorphism.
pub fn prime_circulant_iso(p: usize, a: &[usize], b: &[usize]) -> Result<Option<Vec<usize>>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let to_mask = |s: &[usize]| s.iter().fold(0u128, |m, &x| m | 1 << x);
    if p > 128 {
        return Err(Error::SizeLimit { size: p, limit: 128 });
    }
    let (ma, mb) = (to_mask(a), to_mask(b));
    for m in 1..p {
        let image = a.iter().fold(0u128, |acc, &x| acc | 1 << (x * m % p));
        if image == mb && ma.count_ones() == mb.count_ones() {
            return Ok(Some((0..p).map(|g| g * m % p).collect()));
        }
    }
    Ok(None)
}

/// Bitmask form of [`prime_circulant_iso`] for bulk comparisons: the image
/// of every connection set (bit `i` = element `i`) under every multiplier.
pub fn multiplier_images(p: usize, mask: u64) -> Vec<u64> {
    (1..p)
        .map(|m| {
            (1..p)
                .filter(|&x| mask >> x & 1 == 1)
                .fold(0u64, |acc, x| acc | 1 << (x * m % p))
        })
        .collect()
}
