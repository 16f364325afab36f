//! Prime-order circulants: the multiplicative stabilizer `H_Con` of a
//! connection set, the exact eigenvalue classes of the adjacency operator,
//! and the stable partition predicted after individualizing one vertex.
//!
//! Eigenvalue equality is decided by the coset criterion (`lambda_k =
//! lambda_k'` iff `k = l k'` with `l Con = Con`), never by comparing floats.
//! [`numeric_spectrum`] is for display and cross-checks only.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::is_prime;
use crate::partition::OrderedPartition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerData {
    pub p: usize,
    pub con: Vec<usize>,
    /// Sorted elements of `H_Con`.
    pub h_elements: Vec<usize>,
    /// Index `(p - 1) / |H_Con|`.
    pub d_con: usize,
}

/// `H_Con = { h in Z_p^x : h Con = Con }`.
pub fn stabilizer_subgroup(p: usize, con: &[usize]) -> Result<StabilizerData> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut con = con.to_vec();
    con.sort_unstable();
    con.dedup();
    if con.is_empty() || con.iter().any(|&c| c == 0 || c >= p) {
        return Err(Error::InvalidConnectionSet);
    }
    let mut member = vec![false; p];
    for &c in &con {
        member[c] = true;
    }
    let h_elements: Vec<usize> = (1..p)
        .filter(|&h| con.iter().all(|&c| member[c * h % p]))
        .collect();
    let d_con = (p - 1) / h_elements.len();
    Ok(StabilizerData {
        p,
        con,
        h_elements,
        d_con,
    })
}

/// `{0}` and the cosets `g H_Con`; `d_con + 1` classes.
pub fn eigenvalue_classes(sd: &StabilizerData) -> OrderedPartition {
    coset_partition(sd, 0)
}

/// `{g0}` and the translates `g0 + a H_Con`.
pub fn predicted_individualized_partition(sd: &StabilizerData, g0: usize) -> OrderedPartition {
    coset_partition(sd, g0 % sd.p)
}

fn coset_partition(sd: &StabilizerData, shift: usize) -> OrderedPartition {
    let p = sd.p;
    let mut label = vec![usize::MAX; p];
    label[shift] = 0;
    let mut next = 1;
    for a in 1..p {
        let x = (shift + a) % p;
        if label[x] != usize::MAX {
            continue;
        }
        for &h in &sd.h_elements {
            label[(shift + a * h % p) % p] = next;
        }
        next += 1;
    }
    OrderedPartition::from_labels(&label)
}

#[derive(Clone, Debug)]
pub struct NumericSpectrum {
    /// `lambda_k = sum_{c in Con} exp(2 pi i c k / p)` for `k = 0..p`.
    pub values: Vec<Complex64>,
    /// Indices whose eigenvalues agree within the tolerance (transitively).
    pub grouping: OrderedPartition,
}

pub fn numeric_spectrum(sd: &StabilizerData, tolerance: f64) -> NumericSpectrum {
    let p = sd.p;
    let values: Vec<Complex64> = (0..p)
        .map(|k| {
            sd.con
                .iter()
                .map(|&c| {
                    let angle = 2.0 * std::f64::consts::PI * ((c * k % p) as f64) / p as f64;
                    Complex64::from_polar(1.0, angle)
                })
                .sum()
        })
        .collect();
    // union-find over near pairs
    let mut parent: Vec<usize> = (0..p).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for a in 0..p {
        for b in a + 1..p {
            if (values[a] - values[b]).norm() <= tolerance {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let roots: Vec<usize> = (0..p).map(|x| find(&mut parent, x)).collect();
    NumericSpectrum {
        values,
        grouping: OrderedPartition::from_labels(&roots),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stabilizers() {
        let sd = stabilizer_subgroup(7, &[1, 6]).unwrap();
        assert_eq!(sd.h_elements, vec![1, 6]);
        assert_eq!(sd.d_con, 3);
        let sd = stabilizer_subgroup(7, &[1, 2, 4]).unwrap();
        assert_eq!(sd.h_elements, vec![1, 2, 4]);
        assert_eq!(sd.d_con, 2);
        let sd = stabilizer_subgroup(5, &[1, 2, 3, 4]).unwrap();
        assert_eq!(sd.h_elements, vec![1, 2, 3, 4]);
        assert_eq!(sd.d_con, 1);
    }

    #[test]
    fn stabilizer_errors() {
        assert_eq!(stabilizer_subgroup(9, &[1]), Err(Error::NotPrime(9)));
        assert_eq!(stabilizer_subgroup(7, &[]), Err(Error::InvalidConnectionSet));
        assert_eq!(stabilizer_subgroup(7, &[0, 1]), Err(Error::InvalidConnectionSet));
    }

    #[test]
    fn stabilizer_invariants() {
        for p in [2, 3, 5, 7, 11, 13] {
            for mask in 1u32..1 << (p - 1) {
                let con: Vec<usize> = (1..p).filter(|&c| mask >> (c - 1) & 1 == 1).collect();
                let sd = stabilizer_subgroup(p, &con).unwrap();
                assert!(sd.h_elements.contains(&1));
                assert_eq!(sd.d_con * sd.h_elements.len(), p - 1);
                for &a in &sd.h_elements {
                    for &b in &sd.h_elements {
                        assert!(sd.h_elements.contains(&(a * b % p)));
                    }
                }
            }
        }
    }

    #[test]
    fn coset_classes() {
        let sd = stabilizer_subgroup(7, &[1, 6]).unwrap();
        assert_eq!(eigenvalue_classes(&sd).to_string(), "0|1,6|2,5|3,4");
        assert_eq!(predicted_individualized_partition(&sd, 0).to_string(), "0|1,6|2,5|3,4");
        let sd = stabilizer_subgroup(7, &[1, 2, 4]).unwrap();
        assert_eq!(eigenvalue_classes(&sd).to_string(), "0|1,2,4|3,5,6");
        let shifted = predicted_individualized_partition(&sd, 3);
        assert_eq!(shifted.to_string(), "0,4,5|1,2,6|3");
        let sd = stabilizer_subgroup(5, &[1, 2, 3, 4]).unwrap();
        assert_eq!(eigenvalue_classes(&sd).to_string(), "0|1,2,3,4");
    }

    #[test]
    fn numeric_values() {
        let sd = stabilizer_subgroup(5, &[1, 4]).unwrap();
        let s = numeric_spectrum(&sd, 1e-9);
        assert!((s.values[0].re - 2.0).abs() < 1e-12);
        assert!((s.values[1].re - 0.618_034).abs() < 1e-6);
        assert!((s.values[1].re - 2.0 * (2.0 * std::f64::consts::PI / 5.0).cos()).abs() < 1e-12);
        let sd = stabilizer_subgroup(7, &[1, 6]).unwrap();
        let s = numeric_spectrum(&sd, 1e-9);
        assert!((s.values[1] - s.values[6]).norm() < 1e-9);
        assert_eq!(s.grouping, eigenvalue_classes(&sd));
    }
}
