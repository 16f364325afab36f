//! Finite abelian groups `Z_{n1} x ... x Z_{nk}`, written additively.
//!
//! Elements are addressed by a mixed-radix index in `0..order`, most
//! significant factor first: in `Z4xZ4` the element `(a, b)` has index
//! `4a + b`. Every partition, coloring and output format in the crate uses
//! these indices.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partition::OrderedPartition;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    moduli: Vec<usize>,
    order: usize,
}

/// A residue tuple, reduced modulo the factor orders of its group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub residues: Vec<usize>,
}

impl GroupSpec {
    pub fn new(moduli: Vec<usize>) -> Result<Self> {
        if moduli.is_empty() {
            return Ok(GroupSpec {
                moduli: vec![1],
                order: 1,
            });
        }
        if let Some(&bad) = moduli.iter().find(|&&m| m < 1) {
            return Err(Error::InvalidModulus(bad));
        }
        let order = moduli
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m))
            .ok_or(Error::Overflow)?;
        Ok(GroupSpec { moduli, order })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        GroupSpec::new(vec![n])
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.moduli.len() == 1
    }

    pub fn element(&self, index: usize) -> GroupElement {
        debug_assert!(index < self.order);
        let mut residues = vec![0; self.moduli.len()];
        let mut rest = index;
        for (slot, &m) in residues.iter_mut().zip(&self.moduli).rev() {
            *slot = rest % m;
            rest /= m;
        }
        GroupElement { residues }
    }

    pub fn index(&self, g: &GroupElement) -> usize {
        g.residues
            .iter()
            .zip(&self.moduli)
            .fold(0, |acc, (&r, &m)| acc * m + r % m)
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of `a + b`.
    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.is_cyclic() {
            let s = a + b;
            return if s >= self.order { s - self.order } else { s };
        }
        let (x, y) = (self.element(a), self.element(b));
        let residues = x
            .residues
            .iter()
            .zip(&y.residues)
            .zip(&self.moduli)
            .map(|((&u, &v), &m)| (u + v) % m)
            .collect();
        self.index(&GroupElement { residues })
    }

    /// Index of `-a`.
    pub fn neg(&self, a: usize) -> usize {
        if self.is_cyclic() {
            return (self.order - a) % self.order;
        }
        let x = self.element(a);
        let residues = x
            .residues
            .iter()
            .zip(&self.moduli)
            .map(|(&u, &m)| (m - u) % m)
            .collect();
        self.index(&GroupElement { residues })
    }

    /// Index of `a - b`.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Index of `m * a`.
    pub fn scale(&self, a: usize, m: i64) -> usize {
        if self.is_cyclic() {
            let n = self.order as i128;
            return ((a as i128 * m as i128).rem_euclid(n)) as usize;
        }
        self.index(&element_power(self, &self.element(a), m))
    }

    /// Index of a residue tuple, rejecting residues outside their factor.
    pub fn checked_index(&self, residues: &[usize]) -> Option<usize> {
        if residues.len() != self.moduli.len() {
            return None;
        }
        if residues.iter().zip(&self.moduli).any(|(&r, &m)| r >= m) {
            return None;
        }
        Some(self.index(&GroupElement {
            residues: residues.to_vec(),
        }))
    }

    /// Human-readable element: `3` in cyclic groups, `(1,3)` otherwise.
    pub fn format_element(&self, index: usize) -> String {
        let g = self.element(index);
        if self.is_cyclic() {
            g.residues[0].to_string()
        } else {
            let parts: Vec<String> = g.residues.iter().map(|r| r.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("Z{m}")).collect();
        f.write_str(&parts.join("x"))
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `Z9`, `Z4xZ4`, `z2xz2xz2` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        parse_group_at(s, 0)
    }
}

pub(crate) fn parse_group_at(s: &str, offset: usize) -> Result<GroupSpec> {
    let mut moduli = Vec::new();
    let mut column = offset;
    for (k, factor) in s.split(['x', 'X']).enumerate() {
        if k > 0 {
            column += 1;
        }
        let f = factor.trim();
        let Some(digits) = f.strip_prefix(['Z', 'z']) else {
            return Err(Error::parse(column + 1, format!("expected 'Z<n>', found {factor:?}")));
        };
        let n: usize = digits
            .parse()
            .map_err(|_| Error::parse(column + 2, format!("invalid factor order {digits:?}")))?;
        if n < 1 {
            return Err(Error::parse(column + 2, "factor order must be at least 1"));
        }
        moduli.push(n);
        column += factor.len();
    }
    GroupSpec::new(moduli)
}

/// `m * g`, componentwise modulo the factor orders.
pub fn element_power(spec: &GroupSpec, g: &GroupElement, m: i64) -> GroupElement {
    let residues = g
        .residues
        .iter()
        .zip(spec.moduli())
        .map(|(&r, &n)| ((r as i128 * m as i128).rem_euclid(n as i128)) as usize)
        .collect();
    GroupElement { residues }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn divisor_count(n: i64) -> Result<u64> {
    if n < 1 {
        return Err(Error::NonPositive(n));
    }
    let n = n as u64;
    let mut count = 0;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            count += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    Ok(count)
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Multipliers `m` in `[1, |G|)` coprime to `|G|`. The trivial group gets `[1]`.
pub fn unit_multipliers(spec: &GroupSpec) -> Vec<usize> {
    let n = spec.order();
    if n == 1 {
        return vec![1];
    }
    (1..n).filter(|&m| gcd(m as u64, n as u64) == 1).collect()
}

/// Classes of `g ~ m*g` over unit multipliers `m`.
pub fn power_equivalence_classes(spec: &GroupSpec) -> OrderedPartition {
    let n = spec.order();
    let units = unit_multipliers(spec);
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for g in 0..n {
        if label[g] != usize::MAX {
            continue;
        }
        for &m in &units {
            label[spec.scale(g, m as i64)] = next;
        }
        next += 1;
    }
    OrderedPartition::from_labels(&label)
}

/// `d(G)`: the number of power-equivalence classes.
pub fn power_class_count(spec: &GroupSpec) -> usize {
    power_equivalence_classes(spec).len()
}

/// Every abelian group of order at most `max_order`, once each, in
/// invariant-factor form (`Z2xZ6`, not `Z2xZ2xZ3`), by ascending order.
pub fn abelian_groups_up_to(max_order: usize) -> Vec<GroupSpec> {
    fn partitions(k: usize, max_part: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=k.min(max_part)).rev() {
            for mut rest in partitions(k - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut groups = Vec::new();
    for n in 1..=max_order {
        // factor n into prime powers and combine one exponent partition per prime
        let mut factors = Vec::new();
        let mut rest = n;
        let mut p = 2;
        while rest > 1 {
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += 1;
        }
        // invariant factors: the i-th factor multiplies the i-th largest part of every prime
        let mut combos: Vec<Vec<usize>> = vec![vec![]];
        for &(p, e) in &factors {
            let mut next = Vec::new();
            for combo in &combos {
                for part in partitions(e, e) {
                    let len = combo.len().max(part.len());
                    let c: Vec<usize> = (0..len)
                        .map(|i| {
                            combo.get(i).copied().unwrap_or(1)
                                * part.get(i).map_or(1, |&a| p.pow(a as u32))
                        })
                        .collect();
                    next.push(c);
                }
            }
            combos = next;
        }
        for mut moduli in combos {
            if moduli.is_empty() {
                moduli.push(1);
            }
            moduli.sort_unstable();
            groups.push(GroupSpec::new(moduli).expect("valid moduli"));
        }
    }
    groups
}
