//! Ordered set partitions of `0..n`.
//!
//! An [`OrderedPartition`] doubles as the basis of an S-module: its classes
//! are the basic sets. Classes are kept sorted internally and ordered by
//! their minimum element, so two equal partitions always compare equal.
//! Text form: `0|1,8|2,7|3,6|4,5`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartition {
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl OrderedPartition {
    /// Groups `0..labels.len()` by equal label. Class ids follow first
    /// occurrence, which is the same as ordering by minimum element.
    pub fn from_labels<L: Hash + Eq>(labels: &[L]) -> Self {
        let mut ids: HashMap<&L, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(l).or_insert(next);
            if id == classes.len() {
                classes.push(Vec::new());
            }
            classes[id].push(i);
        }
        OrderedPartition {
            n: labels.len(),
            classes,
        }
    }

    /// Builds a partition from explicit classes, validating coverage.
    pub fn from_classes(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut label = vec![usize::MAX; n];
        for (id, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::parse(0, "empty class"));
            }
            for &x in class {
                if x >= n {
                    return Err(Error::parse(0, format!("element {x} out of range 0..{n}")));
                }
                if label[x] != usize::MAX {
                    return Err(Error::parse(0, format!("element {x} appears twice")));
                }
                label[x] = id;
            }
        }
        if let Some(missing) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::parse(0, format!("element {missing} is not covered")));
        }
        Ok(OrderedPartition::from_labels(&label))
    }

    pub fn unit(n: usize) -> Self {
        OrderedPartition::from_labels(&vec![0u8; n])
    }

    pub fn discrete(n: usize) -> Self {
        OrderedPartition {
            n,
            classes: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.len() == self.n
    }

    /// Class id of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.n];
        for (id, class) in self.classes.iter().enumerate() {
            for &x in class {
                label[x] = id;
            }
        }
        label
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.binary_search(&x).is_ok())
            .expect("element in ground set")
    }

    /// Coarsest common subpartition.
    pub fn meet(&self, other: &OrderedPartition) -> Result<OrderedPartition> {
        if self.n != other.n {
            return Err(Error::SpecMismatch {
                left: format!("partition of {}", self.n),
                right: format!("partition of {}", other.n),
            });
        }
        let (a, b) = (self.labels(), other.labels());
        let pairs: Vec<(usize, usize)> = a.into_iter().zip(b).collect();
        Ok(OrderedPartition::from_labels(&pairs))
    }

    /// True when every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &OrderedPartition) -> bool {
        if self.n != coarser.n {
            return false;
        }
        let label = coarser.labels();
        self.classes
            .iter()
            .all(|c| c.iter().all(|&x| label[x] == label[c[0]]))
    }

    /// True iff `set` is a union of classes.
    pub fn spans(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &x in set {
            member[x] = true;
        }
        self.classes
            .iter()
            .all(|c| c.iter().all(|&x| member[x] == member[c[0]]))
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, class) in self.classes.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            for (j, x) in class.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for OrderedPartition {
    type Err = Error;

    /// Parses the text form. The ground set is `0..=max element`.
    fn from_str(s: &str) -> Result<Self> {
        let mut classes = Vec::new();
        let mut column = 1;
        for part in s.trim().split('|') {
            let mut class = Vec::new();
            for tok in part.split(',') {
                let t = tok.trim();
                let x: usize = t
                    .parse()
                    .map_err(|_| Error::parse(column, format!("invalid element {t:?}")))?;
                class.push(x);
                column += tok.len() + 1;
            }
            classes.push(class);
        }
        let n = classes.iter().flatten().max().map_or(0, |&m| m + 1);
        OrderedPartition::from_classes(n, classes)
    }
}
