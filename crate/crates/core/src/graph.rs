//! Loop-free directed graphs and Cayley graphs.
//!
//! Input formats:
//! * Cayley: `Z9:1,3,6,8` or `Z4xZ4:(1,0),(3,0),(0,1)`; `Z5:` has no edges.
//! * Adjacency list: first non-comment line holds `n`, then one `u v` edge
//!   per line. `#` starts a comment.

use crate::error::{Error, Result};
use crate::group::{parse_group_at, GroupSpec};

/// Sorted out- and in-neighbor lists. Undirected graphs carry both arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiGraph {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl DiGraph {
    pub fn empty(n: usize) -> Self {
        DiGraph {
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from arcs, dropping loops and duplicates.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = DiGraph::empty(n);
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range");
            if u != v {
                g.out[u].push(v);
                g.inn[v].push(u);
            }
        }
        for list in g.out.iter_mut().chain(g.inn.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        DiGraph::from_edges(n, (0..n).flat_map(|u| (0..n).map(move |v| (u, v))))
    }

    /// Undirected cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Self {
        DiGraph::from_edges(n, (0..n).flat_map(|u| [(u, (u + 1) % n), ((u + 1) % n, u)]))
    }

    /// Undirected path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        DiGraph::from_edges(n, (1..n).flat_map(|u| [(u - 1, u), (u, u - 1)]))
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|u| self.out[u].iter().all(|&v| self.has_edge(v, u)))
    }

    /// Vertex-disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &DiGraph) -> DiGraph {
        let k = self.n();
        let edges = self.edges().chain(other.edges().map(|(u, v)| (u + k, v + k)));
        DiGraph::from_edges(k + other.n(), edges.collect::<Vec<_>>())
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    /// Whether `map` (vertex of `self` to vertex of `other`) is an isomorphism.
    pub fn is_isomorphism(&self, other: &DiGraph, map: &[usize]) -> bool {
        let n = self.n();
        if other.n() != n || map.len() != n || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut hit = vec![false; n];
        for &x in map {
            if x >= n || hit[x] {
                return false;
            }
            hit[x] = true;
        }
        self.edges().all(|(u, v)| other.has_edge(map[u], map[v]))
    }

    /// Parses the adjacency-list format.
    pub fn parse_adjacency(text: &str) -> Result<DiGraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing vertex count header"))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::parse(1, format!("invalid vertex count {header:?}")))?;
        let mut edges = Vec::new();
        for (line_no, line) in lines {
            let mut it = line.split_whitespace();
            let mut field = |what: &str| -> Result<usize> {
                let tok = it
                    .next()
                    .ok_or_else(|| Error::parse(1, format!("line {line_no}: missing {what}")))?;
                let x: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(1, format!("line {line_no}: invalid vertex {tok:?}")))?;
                if x >= n {
                    return Err(Error::parse(1, format!("line {line_no}: vertex {x} >= {n}")));
                }
                Ok(x)
            };
            let u = field("source")?;
            let v = field("target")?;
            edges.push((u, v));
        }
        Ok(DiGraph::from_edges(n, edges))
    }
}

/// `Cay(G, S)`: an arc from `h` to `s + h` for every `h` and `s` in `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGraph {
    pub spec: GroupSpec,
    pub con: Vec<usize>,
}

impl CayleyGraph {
    pub fn new(spec: GroupSpec, mut con: Vec<usize>) -> Result<Self> {
        con.sort_unstable();
        con.dedup();
        if con.contains(&spec.identity()) {
            return Err(Error::IdentityInConnectionSet);
        }
        if let Some(&bad) = con.iter().find(|&&s| s >= spec.order()) {
            return Err(Error::SizeLimit {
                size: bad,
                limit: spec.order(),
            });
        }
        Ok(CayleyGraph { spec, con })
    }

    /// Connection set from a bitmask over element indices.
    pub fn from_mask(spec: GroupSpec, mask: u64) -> Result<Self> {
        let con = (0..spec.order().min(64)).filter(|&i| mask >> i & 1 == 1).collect();
        CayleyGraph::new(spec, con)
    }

    pub fn mask(&self) -> u64 {
        self.con.iter().fold(0, |m, &s| m | 1 << s)
    }

    pub fn to_digraph(&self) -> DiGraph {
        build_cayley(&self.spec, &self.con).expect("validated connection set")
    }

    /// Residue-list form, e.g. `Z4xZ4:(1,0),(0,1)`.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.con.iter().map(|&s| self.spec.format_element(s)).collect();
        format!("{}:{}", self.spec, parts.join(","))
    }
}

impl std::str::FromStr for CayleyGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (group_part, con_part) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(s.len() + 1, "expected ':' after the group"))?;
        let spec = parse_group_at(group_part, 0)?;
        let base = group_part.len() + 1;
        let con = parse_elements(&spec, con_part, base)?;
        if con.contains(&spec.identity()) {
            return Err(Error::IdentityInConnectionSet);
        }
        CayleyGraph::new(spec, con)
    }
}

fn parse_elements(spec: &GroupSpec, text: &str, base: usize) -> Result<Vec<usize>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let number = |i: &mut usize| -> Result<usize> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            return Err(Error::parse(base + start + 1, "expected a non-negative integer"));
        }
        text[start..*i]
            .parse()
            .map_err(|_| Error::parse(base + start + 1, "integer too large"))
    };
    skip_ws(&mut i);
    if i == bytes.len() {
        return Ok(out);
    }
    loop {
        skip_ws(&mut i);
        let start = i;
        let residues = if i < bytes.len() && bytes[i] == b'(' {
            i += 1;
            let mut rs = Vec::new();
            loop {
                skip_ws(&mut i);
                rs.push(number(&mut i)?);
                skip_ws(&mut i);
                match bytes.get(i) {
                    Some(b',') => i += 1,
                    Some(b')') => {
                        i += 1;
                        break;
                    }
                    _ => return Err(Error::parse(base + i + 1, "expected ',' or ')' in tuple")),
                }
            }
            rs
        } else {
            vec![number(&mut i)?]
        };
        let index = spec.checked_index(&residues).ok_or_else(|| {
            Error::parse(
                base + start + 1,
                format!("{:?} is not an element of {spec}", &text[start..i]),
            )
        })?;
        out.push(index);
        skip_ws(&mut i);
        match bytes.get(i) {
            None => break,
            Some(b',') => i += 1,
            Some(_) => return Err(Error::parse(base + i + 1, "expected ',' between elements")),
        }
    }
    Ok(out)
}

pub fn build_cayley(spec: &GroupSpec, con: &[usize]) -> Result<DiGraph> {
    if con.contains(&spec.identity()) {
        return Err(Error::IdentityInConnectionSet);
    }
    let n = spec.order();
    let g = DiGraph::from_edges(
        n,
        (0..n).flat_map(|h| con.iter().map(move |&s| (h, spec.add(s, h)))),
    );
    Ok(g)
}

/// The counterexample graph over `Z4 x Z4`.
pub fn z4xz4_counterexample() -> CayleyGraph {
    "Z4xZ4:(1,0),(3,0),(0,1),(0,3),(1,1),(3,3)"
        .parse()
        .expect("valid literal")
}
