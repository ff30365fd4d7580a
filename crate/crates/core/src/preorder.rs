//! Finite preordered index sets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreorderError {
    #[error("a preorder needs at least one index")]
    Empty,
    #[error("pair ({0}, {1}) out of range for {2} indices")]
    OutOfRange(usize, usize, usize),
}

/// A reflexive, transitive relation `≤` on `0..m`, stored as a dense
/// boolean matrix (`leq[p * m + q]` iff `p ≤ q`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePreorder {
    m: usize,
    leq: Vec<bool>,
}

/// Output of [`build_preorder`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreorderBuild {
    pub preorder: FinitePreorder,
    /// The input pairs were already reflexive and transitive.
    pub was_closed: bool,
}

/// Reflexive-transitive closure of `pairs` on `0..m`.
pub fn build_preorder(
    m: usize,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Result<PreorderBuild, PreorderError> {
    if m == 0 {
        return Err(PreorderError::Empty);
    }
    let mut leq = vec![false; m * m];
    for (p, q) in pairs {
        if p >= m || q >= m {
            return Err(PreorderError::OutOfRange(p, q, m));
        }
        leq[p * m + q] = true;
    }
    let input = leq.clone();
    for p in 0..m {
        leq[p * m + p] = true;
    }
    // Warshall
    for k in 0..m {
        for p in 0..m {
            if leq[p * m + k] {
                for q in 0..m {
                    if leq[k * m + q] {
                        leq[p * m + q] = true;
                    }
                }
            }
        }
    }
    Ok(PreorderBuild {
        was_closed: input == leq,
        preorder: FinitePreorder { m, leq },
    })
}

/// The total order `0 ≤ 1 ≤ … ≤ m-1`.
pub fn chain(m: usize) -> Result<FinitePreorder, PreorderError> {
    if m == 0 {
        return Err(PreorderError::Empty);
    }
    let leq = (0..m * m).map(|i| i / m <= i % m).collect();
    Ok(FinitePreorder { m, leq })
}

impl FinitePreorder {
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.leq[p * self.m + q]
    }

    /// `p ≤ q` and not `q ≤ p`.
    pub fn lt(&self, p: usize, q: usize) -> bool {
        self.leq(p, q) && !self.leq(q, p)
    }

    /// All `(p, q)` with `p ≤ q`, diagonal included, in lexicographic order.
    pub fn comparable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.m).flat_map(move |p| (0..self.m).filter(move |&q| self.leq(p, q)).map(move |q| (p, q)))
    }

    /// All `(p, q, r)` with `p ≤ q ≤ r`, in lexicographic order.
    pub fn comparable_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.comparable_pairs().flat_map(move |(p, q)| {
            (0..self.m).filter(move |&r| self.leq(q, r)).map(move |r| (p, q, r))
        })
    }

    /// Some `p < q < r` exists.
    pub fn has_strict_triple(&self) -> bool {
        (0..self.m).any(|q| {
            (0..self.m).any(|p| self.lt(p, q)) && (0..self.m).any(|r| self.lt(q, r))
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.comparable_pairs().all(|(p, q)| p == q || !self.leq(q, p))
    }

    /// Every pair has a common upper bound.
    pub fn is_directed(&self) -> bool {
        (0..self.m).all(|p| {
            (0..self.m).all(|q| (0..self.m).any(|r| self.leq(p, r) && self.leq(q, r)))
        })
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.m).all(|p| self.leq(p, p))
    }

    pub fn is_transitive(&self) -> bool {
        self.comparable_triples().all(|(p, _, r)| self.leq(p, r))
    }

    /// Number of indices comparable with `p` in either direction, `p` excluded.
    pub fn degree(&self, p: usize) -> usize {
        (0..self.m)
            .filter(|&q| q != p && (self.leq(p, q) || self.leq(q, p)))
            .count()
    }

    /// Generating pairs `p ≤ q` with `p ≠ q`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        self.comparable_pairs().filter(|&(p, q)| p != q).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct PreorderRepr {
    indices: usize,
    order: Vec<(usize, usize)>,
}

impl Serialize for FinitePreorder {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PreorderRepr {
            indices: self.m,
            order: self.strict_pairs(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinitePreorder {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PreorderRepr::deserialize(deserializer)?;
        build_preorder(repr.indices, repr.order)
            .map(|b| b.preorder)
            .map_err(serde::de::Error::custom)
    }
}
