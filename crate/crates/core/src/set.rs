//! Ground sets and bitmask subsets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set supported by the bitmask representation.
pub const MAX_DIM: usize = 64;

/// The universe `V = {0, .., d-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundSet {
    d: usize,
}

impl GroundSet {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("ground set must be non-empty".into()));
        }
        if d > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: d,
                limit: MAX_DIM,
            });
        }
        Ok(GroundSet { d })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn empty(&self) -> Subset {
        Subset::empty(self.d)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.d)
    }

    /// Iterates over all `2^d` subsets in increasing mask order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        let d = self.d;
        assert!(d < 64, "cannot enumerate 2^64 subsets");
        (0..(1u64 << d)).map(move |mask| Subset { mask, d: d as u8 })
    }
}

/// A subset of a ground set of size `d <= 64`, stored as a bitmask.
///
/// Every subset remembers the `d` it was built against; bits at positions
/// `>= d` are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subset {
    mask: u64,
    d: u8,
}

#[inline]
fn full_mask(d: usize) -> u64 {
    if d == 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

impl Subset {
    pub fn empty(d: usize) -> Self {
        debug_assert!(d <= MAX_DIM);
        Subset { mask: 0, d: d as u8 }
    }

    pub fn full(d: usize) -> Self {
        debug_assert!(d <= MAX_DIM);
        Subset {
            mask: full_mask(d),
            d: d as u8,
        }
    }

    pub fn from_mask(d: usize, mask: u64) -> Result<Self> {
        if d > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: d,
                limit: MAX_DIM,
            });
        }
        if mask & !full_mask(d) != 0 {
            return Err(Error::Domain(format!(
                "mask {mask:#x} has bits outside a ground set of size {d}"
            )));
        }
        Ok(Subset { mask, d: d as u8 })
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(d: usize, indices: I) -> Result<Self> {
        let mut s = Subset::empty(d);
        for i in indices {
            if i >= d {
                return Err(Error::ElementOutOfRange { element: i, dim: d });
            }
            s.mask |= 1 << i;
        }
        Ok(s)
    }

    pub fn singleton(d: usize, i: usize) -> Self {
        assert!(i < d, "element {i} out of range for d = {d}");
        Subset {
            mask: 1 << i,
            d: d as u8,
        }
    }

    /// Indicator of the interval `lo..=hi`.
    pub fn interval(d: usize, lo: usize, hi: usize) -> Self {
        assert!(lo <= hi && hi < d);
        let width = hi - lo + 1;
        Subset {
            mask: full_mask(width) << lo,
            d: d as u8,
        }
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d as usize
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.dim() && self.mask & (1 << i) != 0
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        debug_assert!(i < self.dim());
        Subset {
            mask: self.mask | (1 << i),
            d: self.d,
        }
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        Subset {
            mask: self.mask & !(1 << i),
            d: self.d,
        }
    }

    pub fn insert(&mut self, i: usize) {
        *self = self.with(i);
    }

    pub fn remove(&mut self, i: usize) {
        *self = self.without(i);
    }

    pub fn union(self, other: Subset) -> Self {
        debug_assert_eq!(self.d, other.d);
        Subset {
            mask: self.mask | other.mask,
            d: self.d,
        }
    }

    pub fn intersection(self, other: Subset) -> Self {
        debug_assert_eq!(self.d, other.d);
        Subset {
            mask: self.mask & other.mask,
            d: self.d,
        }
    }

    pub fn difference(self, other: Subset) -> Self {
        debug_assert_eq!(self.d, other.d);
        Subset {
            mask: self.mask & !other.mask,
            d: self.d,
        }
    }

    pub fn complement(self) -> Self {
        Subset {
            mask: !self.mask & full_mask(self.dim()),
            d: self.d,
        }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.mask & !other.mask == 0
    }

    /// Size of the symmetric difference.
    pub fn hamming(&self, other: &Subset) -> usize {
        (self.mask ^ other.mask).count_ones() as usize
    }

    pub fn iter(&self) -> SubsetIter {
        SubsetIter { rest: self.mask }
    }

    pub fn min_element(&self) -> Option<usize> {
        (self.mask != 0).then(|| self.mask.trailing_zeros() as usize)
    }

    pub fn max_element(&self) -> Option<usize> {
        (self.mask != 0).then(|| 63 - self.mask.leading_zeros() as usize)
    }

    /// Indicator vector in `{0,1}^d`.
    pub fn indicator(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| if self.contains(i) { 1.0 } else { 0.0 })
            .collect()
    }

    /// Key used for deterministic tie-breaking: smaller cardinality first,
    /// then smaller mask.
    #[inline]
    pub fn tie_key(&self) -> (usize, u64) {
        (self.len(), self.mask)
    }
}

pub struct SubsetIter {
    rest: u64,
}

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.rest == 0 {
            return None;
        }
        let i = self.rest.trailing_zeros() as usize;
        self.rest &= self.rest - 1;
        Some(i)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset(d={}, {})", self.d, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn set_algebra() {
        let a = Subset::from_indices(5, [0, 2]).unwrap();
        let b = Subset::from_indices(5, [2, 3]).unwrap();
        assert_eq!(a.union(b), Subset::from_indices(5, [0, 2, 3]).unwrap());
        assert_eq!(a.intersection(b), Subset::singleton(5, 2));
        assert_eq!(a.complement(), Subset::from_indices(5, [1, 3, 4]).unwrap());
        assert_eq!(a.hamming(&b), 2);
        assert_eq!(a.to_string(), "{0,2}");
        assert_eq!(Subset::interval(6, 2, 4).iter().collect::<Vec<_>>(), vec![2, 3, 4]);
        assert_eq!(Subset::full(64).len(), 64);
        assert_eq!(Subset::full(64).complement(), Subset::empty(64));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Subset::from_indices(3, [3]).is_err());
        assert!(Subset::from_mask(3, 0b1000).is_err());
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(65).is_err());
    }

    #[test]
    fn enumeration_covers_all_subsets() {
        let v = GroundSet::new(4).unwrap();
        assert_eq!(v.subsets().count(), 16);
        assert_eq!(v.subsets().last().unwrap(), v.full());
    }

    proptest! {
        #[test]
        fn cardinality_is_popcount(d in 1usize..=64, raw in any::<u64>()) {
            let mask = if d == 64 { raw } else { raw & ((1u64 << d) - 1) };
            let s = Subset::from_mask(d, mask).unwrap();
            prop_assert_eq!(s.len(), mask.count_ones() as usize);
            prop_assert_eq!(s.iter().count(), s.len());
            prop_assert_eq!(s.complement().len(), d - s.len());
            prop_assert!(s.complement().mask() & s.mask() == 0);
        }
    }
}
