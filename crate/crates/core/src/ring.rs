//! Exact group-ring arithmetic and the S-module refinement calculus.
//!
//! Every product the refinement operators form is a product of 0/1
//! simple quantities, so coefficients stay non-negative integers bounded by
//! `|G|`. They are stored as `i64` with checked arithmetic.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{ceil_log2, unit_multipliers, GroupSpec};
use crate::par::{self, Execution};
use crate::partition::OrderedPartition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    spec: GroupSpec,
    coeffs: Vec<i64>,
}

impl GroupRingElement {
    pub fn zero(spec: &GroupSpec) -> Self {
        GroupRingElement {
            spec: spec.clone(),
            coeffs: vec![0; spec.order()],
        }
    }

    pub fn unit(spec: &GroupSpec) -> Self {
        simple_quantity(spec, [spec.identity()])
    }

    pub fn from_coeffs(spec: &GroupSpec, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != spec.order() {
            return Err(Error::SpecMismatch {
                left: spec.to_string(),
                right: format!("{} coefficients", coeffs.len()),
            });
        }
        Ok(GroupRingElement {
            spec: spec.clone(),
            coeffs,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> i64 {
        self.coeffs[g]
    }

    pub fn add(&self, other: &GroupRingElement) -> Result<GroupRingElement> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(GroupRingElement {
            spec: self.spec.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, lambda: i64) -> Result<GroupRingElement> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.checked_mul(lambda).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(GroupRingElement {
            spec: self.spec.clone(),
            coeffs,
        })
    }

    fn check_same(&self, other: &GroupRingElement) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                left: self.spec.to_string(),
                right: other.spec.to_string(),
            });
        }
        Ok(())
    }

    fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(g, &c)| (g, c))
    }
}

/// The 0/1 element indicating `set`.
pub fn simple_quantity(spec: &GroupSpec, set: impl IntoIterator<Item = usize>) -> GroupRingElement {
    let mut e = GroupRingElement::zero(spec);
    for g in set {
        e.coeffs[g] = 1;
    }
    e
}

/// Convolution over the group.
pub fn multiply(u: &GroupRingElement, v: &GroupRingElement) -> Result<GroupRingElement> {
    u.check_same(v)?;
    let spec = &u.spec;
    let mut out = vec![0i64; spec.order()];
    let rhs: Vec<(usize, i64)> = v.support().collect();
    for (a, x) in u.support() {
        for &(b, y) in &rhs {
            let slot = &mut out[spec.add(a, b)];
            let term = x.checked_mul(y).ok_or(Error::Overflow)?;
            *slot = slot.checked_add(term).ok_or(Error::Overflow)?;
        }
    }
    Ok(GroupRingElement {
        spec: spec.clone(),
        coeffs: out,
    })
}

/// Pushes coefficients forward along `g -> m*g`; collisions add up.
pub fn power_map(v: &GroupRingElement, m: i64) -> Result<GroupRingElement> {
    let spec = &v.spec;
    let mut out = vec![0i64; spec.order()];
    for (g, c) in v.support() {
        let slot = &mut out[spec.scale(g, m)];
        *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
    }
    Ok(GroupRingElement {
        spec: spec.clone(),
        coeffs: out,
    })
}

/// Elements grouped by equal coefficient.
pub fn induced_partition(v: &GroupRingElement) -> OrderedPartition {
    OrderedPartition::from_labels(&v.coeffs)
}

pub fn extract_by_coefficient(v: &GroupRingElement, lambda: i64) -> Vec<usize> {
    v.support_all()
        .filter(|&(_, c)| c == lambda)
        .map(|(g, _)| g)
        .collect()
}

impl GroupRingElement {
    fn support_all(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().copied().enumerate()
    }
}

/// `set` as a subset of the group under `m*g`.
pub fn scale_set(spec: &GroupSpec, set: &[usize], m: i64) -> Vec<usize> {
    let mut out: Vec<usize> = set.iter().map(|&g| spec.scale(g, m)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Coefficients of `T_i * T_j` where both are 0/1, computed sparsely.
fn product_counts(spec: &GroupSpec, left: &[usize], right: &[usize]) -> Vec<u32> {
    let mut out = vec![0u32; spec.order()];
    for &a in left {
        for &b in right {
            out[spec.add(a, b)] += 1;
        }
    }
    out
}

/// Meet of `labels` with the coefficient partitions of each vector.
fn meet_with_counts(labels: &mut [u32], products: impl IntoIterator<Item = Vec<u32>>) {
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    for counts in products {
        ids.clear();
        for (label, &c) in labels.iter_mut().zip(&counts) {
            let next = ids.len() as u32;
            *label = *ids.entry((*label, c)).or_insert(next);
        }
    }
}

fn partition_labels(v: &OrderedPartition) -> Vec<u32> {
    v.labels().into_iter().map(|l| l as u32).collect()
}

fn check_ground(spec: &GroupSpec, v: &OrderedPartition) -> Result<()> {
    if v.ground_size() != spec.order() {
        return Err(Error::SpecMismatch {
            left: spec.to_string(),
            right: format!("partition of {}", v.ground_size()),
        });
    }
    Ok(())
}

/// One refinement step `R(V)`: the meet of `Basic(V)` with the coefficient
/// partitions of all products of two basic sets.
pub fn refine(spec: &GroupSpec, v: &OrderedPartition) -> Result<OrderedPartition> {
    refine_with(spec, v, Execution::Sequential)
}

/// [`refine`] with the pairwise products optionally computed in parallel.
/// The group is abelian, so only unordered pairs `i <= j` are formed.
pub fn refine_with(spec: &GroupSpec, v: &OrderedPartition, exec: Execution) -> Result<OrderedPartition> {
    check_ground(spec, v)?;
    if v.is_discrete() {
        return Ok(v.clone());
    }
    let classes = v.classes();
    let r = classes.len();
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
    let mut labels = partition_labels(v);
    if exec.is_parallel() {
        let products = par::map(exec, &pairs, |&(i, j)| product_counts(spec, &classes[i], &classes[j]));
        meet_with_counts(&mut labels, products);
    } else {
        meet_with_counts(
            &mut labels,
            pairs
                .iter()
                .map(|&(i, j)| product_counts(spec, &classes[i], &classes[j])),
        );
    }
    Ok(OrderedPartition::from_labels(&labels))
}

/// One Con-refinement step `R_Con(V)`: the meet of `Basic(V)` with the
/// coefficient partitions of `Con * T_i` for every basic set.
pub fn refine_con(spec: &GroupSpec, v: &OrderedPartition, con: &[usize]) -> Result<OrderedPartition> {
    check_ground(spec, v)?;
    let mut labels = partition_labels(v);
    meet_with_counts(
        &mut labels,
        v.classes().iter().map(|t| product_counts(spec, con, t)),
    );
    Ok(OrderedPartition::from_labels(&labels))
}

/// Applies `R` exactly `k` times.
pub fn refine_times(spec: &GroupSpec, v: &OrderedPartition, k: usize) -> Result<OrderedPartition> {
    let mut cur = v.clone();
    for _ in 0..k {
        let next = refine(spec, &cur)?;
        if next == cur {
            break;
        }
        cur = next;
    }
    Ok(cur)
}

/// Outcome of iterating a refinement operator to its fixed point.
///
/// `class_counts[0]` is the class count of the input; one entry follows
/// for every strictly refining round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementTrace<F> {
    pub rounds: usize,
    pub class_counts: Vec<usize>,
    pub final_state: F,
}

#[derive(Clone, Copy, Debug)]
pub enum RefinementOperator<'a> {
    Full,
    Con(&'a [usize]),
}

/// Iterates a refinement operator until nothing changes. Only strictly
/// refining applications count as rounds.
pub fn refine_to_stable(
    spec: &GroupSpec,
    v: &OrderedPartition,
    step: RefinementOperator<'_>,
) -> Result<RefinementTrace<OrderedPartition>> {
    check_ground(spec, v)?;
    let mut cur = v.clone();
    let mut class_counts = vec![cur.len()];
    loop {
        let next = match step {
            RefinementOperator::Full => refine(spec, &cur)?,
            RefinementOperator::Con(con) => refine_con(spec, &cur, con)?,
        };
        if next.len() == cur.len() {
            break;
        }
        class_counts.push(next.len());
        cur = next;
    }
    Ok(RefinementTrace {
        rounds: class_counts.len() - 1,
        class_counts,
        final_state: cur,
    })
}

/// Meet over all unit multipliers `m` of `{m*T : T in Basic(V)}`.
pub fn exponentiation_closure(spec: &GroupSpec, v: &OrderedPartition) -> Result<OrderedPartition> {
    check_ground(spec, v)?;
    let mut labels = partition_labels(v);
    let images = unit_multipliers(spec).into_iter().map(|m| {
        let mut image = vec![0u32; spec.order()];
        for (id, class) in v.classes().iter().enumerate() {
            for &t in class {
                image[spec.scale(t, m as i64)] = id as u32;
            }
        }
        image
    });
    meet_with_counts(&mut labels, images);
    Ok(OrderedPartition::from_labels(&labels))
}

/// Whether `m*T` is a union of classes for every class `T` and unit `m`.
pub fn is_exponentiation_stable(spec: &GroupSpec, v: &OrderedPartition) -> bool {
    unit_multipliers(spec).into_iter().all(|m| {
        v.classes()
            .iter()
            .all(|t| v.spans(&scale_set(spec, t, m as i64)))
    })
}

/// Number of `R` applications sufficient for `m*T` to become spannable:
/// `2 * ceil(log2 m)`.
pub fn multiplier_round_envelope(m: usize) -> usize {
    2 * ceil_log2(m) as usize
}
