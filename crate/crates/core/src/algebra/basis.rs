use std::sync::OnceLock;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ambient dimension accepted anywhere in the crate.
pub const MAX_DIM: usize = 8;

/// A basis monomial `dz_I ∧ dz̄_J` of Λ^{p,q}(ℂⁿ), with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndexPair {
    pub holo: Vec<usize>,
    pub anti: Vec<usize>,
}

impl MultiIndexPair {
    pub(crate) fn from_masks(holo: u32, anti: u32) -> Self {
        Self {
            holo: mask_to_indices(holo),
            anti: mask_to_indices(anti),
        }
    }

    pub(crate) fn masks(&self) -> (u32, u32) {
        (indices_to_mask(&self.holo), indices_to_mask(&self.anti))
    }
}

fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| b + 1)
        .collect()
}

fn indices_to_mask(indices: &[usize]) -> u32 {
    indices.iter().fold(0, |m, &i| m | (1 << (i - 1)))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// dim Λ^{p,q}(ℂⁿ) = C(n,p)·C(n,q).
pub fn dim_bidegree(n: usize, p: usize, q: usize) -> usize {
    binomial(n, p) * binomial(n, q)
}

/// Subsets of {0..n} of each size, in lexicographic order, with the inverse
/// rank lookup.
pub(crate) struct SubsetTable {
    by_size: Vec<Vec<u32>>,
    rank: Vec<usize>,
}

impl SubsetTable {
    fn build(n: usize) -> Self {
        let mut by_size = Vec::with_capacity(n + 1);
        let mut rank = vec![0; 1 << n];
        for k in 0..=n {
            let masks: Vec<u32> = (0..n)
                .combinations(k)
                .map(|c| c.iter().fold(0u32, |m, &b| m | (1 << b)))
                .collect();
            for (i, &m) in masks.iter().enumerate() {
                rank[m as usize] = i;
            }
            by_size.push(masks);
        }
        Self { by_size, rank }
    }

    pub(crate) fn subsets(&self, k: usize) -> &[u32] {
        &self.by_size[k]
    }

    pub(crate) fn rank(&self, mask: u32) -> usize {
        self.rank[mask as usize]
    }
}

pub(crate) fn subset_table(n: usize) -> &'static SubsetTable {
    static TABLES: OnceLock<Vec<SubsetTable>> = OnceLock::new();
    &TABLES.get_or_init(|| (0..=MAX_DIM).map(SubsetTable::build).collect())[n]
}

pub(crate) fn check_bidegree(n: usize, p: usize, q: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n, max: MAX_DIM });
    }
    if p > n || q > n {
        return Err(Error::BidegreeOutOfRange { n, p, q });
    }
    Ok(())
}

/// Canonical basis of Λ^{p,q}(ℂⁿ): lexicographic on `(holo, anti)`.
pub fn enumerate_basis(n: usize, p: usize, q: usize) -> Result<Vec<MultiIndexPair>> {
    check_bidegree(n, p, q)?;
    let table = subset_table(n);
    Ok(table
        .subsets(p)
        .iter()
        .flat_map(|&h| {
            table
                .subsets(q)
                .iter()
                .map(move |&a| MultiIndexPair::from_masks(h, a))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(h: &[usize], a: &[usize]) -> MultiIndexPair {
        MultiIndexPair {
            holo: h.to_vec(),
            anti: a.to_vec(),
        }
    }

    #[test]
    fn basis_n2_bidegree_11() {
        let b = enumerate_basis(2, 1, 1).unwrap();
        assert_eq!(
            b,
            vec![
                pair(&[1], &[1]),
                pair(&[1], &[2]),
                pair(&[2], &[1]),
                pair(&[2], &[2])
            ]
        );
    }

    #[test]
    fn basis_degree_zero() {
        assert_eq!(enumerate_basis(3, 0, 0).unwrap(), vec![pair(&[], &[])]);
    }

    #[test]
    fn basis_counts() {
        assert_eq!(enumerate_basis(4, 2, 1).unwrap().len(), 24);
        for n in 1..=6 {
            for p in 0..=n {
                for q in 0..=n {
                    assert_eq!(
                        enumerate_basis(n, p, q).unwrap().len(),
                        binomial(n, p) * binomial(n, q)
                    );
                }
            }
        }
    }

    #[test]
    fn basis_is_sorted_and_deterministic() {
        let a = enumerate_basis(4, 2, 2).unwrap();
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(a, sorted);
        assert_eq!(a, enumerate_basis(4, 2, 2).unwrap());
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            enumerate_basis(2, 3, 0),
            Err(Error::BidegreeOutOfRange { .. })
        ));
        assert!(matches!(
            enumerate_basis(9, 0, 0),
            Err(Error::DimensionOutOfRange { .. })
        ));
    }

    #[test]
    fn masks_round_trip() {
        let p = pair(&[1, 3], &[2]);
        let (h, a) = p.masks();
        assert_eq!(MultiIndexPair::from_masks(h, a), p);
    }
}
