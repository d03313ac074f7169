use std::fmt;

use serde::{Deserialize, Serialize};

/// A multi-index `K = (k1, k2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    pub k1: usize,
    pub k2: usize,
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex { k1: 0, k2: 0 };

    #[inline]
    pub const fn new(k1: usize, k2: usize) -> Self {
        Self { k1, k2 }
    }

    /// Total degree `k1 + k2`.
    #[inline]
    pub const fn order(&self) -> usize {
        self.k1 + self.k2
    }

    /// Componentwise partial order.
    #[inline]
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.k1 <= other.k1 && self.k2 <= other.k2
    }

    /// Position in the canonical order.
    #[inline]
    pub const fn position(&self) -> usize {
        let d = self.order();
        d * (d + 1) / 2 + self.k1
    }

    /// Inverse of [`MultiIndex::position`].
    pub fn from_position(pos: usize) -> Self {
        let mut d = 0;
        while (d + 1) * (d + 2) / 2 <= pos {
            d += 1;
        }
        let k1 = pos - d * (d + 1) / 2;
        Self { k1, k2: d - k1 }
    }

    pub fn factorial_pair(&self) -> (u128, u128) {
        (factorial(self.k1), factorial(self.k2))
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k1, self.k2)
    }
}

impl From<(usize, usize)> for MultiIndex {
    fn from((k1, k2): (usize, usize)) -> Self {
        Self { k1, k2 }
    }
}

/// Number of multi-indices with total degree at most `max_order`.
#[inline]
pub const fn simplex_len(max_order: usize) -> usize {
    (max_order + 1) * (max_order + 2) / 2
}

/// All `(k1, k2)` with `k1 + k2 <= max_order`, by total degree then `k1`
/// ascending. Every max-scan and serialized table uses this order.
pub fn degree_enumerate(max_order: usize) -> Vec<MultiIndex> {
    (0..=max_order).flat_map(|d| (0..=d).map(move |k1| MultiIndex::new(k1, d - k1))).collect()
}

/// Indices of total degree exactly `degree`, `k1` ascending.
pub fn degree_band(degree: usize) -> impl Iterator<Item = MultiIndex> {
    (0..=degree).map(move |k1| MultiIndex::new(k1, degree - k1))
}
