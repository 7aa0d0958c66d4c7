//! Finite ground sets and bitmask subsets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ground set. Tables over `2^24` masks already take 128 MiB.
pub const MAX_GROUND: usize = 24;

/// A subset of the ground set `{0, .., n-1}`, bit `x` set iff `x` is a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        SubsetMask(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(x: usize) -> Self {
        SubsetMask(1 << x)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        SubsetMask(elements.into_iter().fold(0, |acc, x| acc | (1 << x)))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn with(self, x: usize) -> Self {
        SubsetMask(self.0 | 1 << x)
    }

    #[inline]
    pub fn without(self, x: usize) -> Self {
        SubsetMask(self.0 & !(1 << x))
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    #[inline]
    pub fn symmetric_difference(self, other: Self) -> Self {
        SubsetMask(self.0 ^ other.0)
    }

    #[inline]
    pub fn complement(self, n: usize) -> Self {
        SubsetMask(!self.0 & SubsetMask::full(n).0)
    }

    #[inline]
    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Neither set contains the other.
    #[inline]
    pub fn crosses(self, other: Self) -> bool {
        !self.is_subset_of(other) && !other.is_subset_of(self)
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(x)
            }
        })
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// The finite ground set `J = {0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSize(n));
        }
        Ok(GroundSet { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut ground = GroundSet::new(labels.len())?;
        ground.labels = Some(labels);
        Ok(ground)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of subsets, `2^n`.
    #[inline]
    pub fn power_set_len(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn full(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }

    pub fn check(&self, mask: SubsetMask) -> Result<()> {
        if mask.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(Error::MaskOutOfRange { mask: mask.0, n: self.n })
        }
    }

    pub fn masks(&self) -> impl Iterator<Item = SubsetMask> {
        (0..self.power_set_len() as u32).map(SubsetMask)
    }

    /// Renders a mask, writing `J` for the full set and using labels when present.
    pub fn describe(&self, mask: SubsetMask) -> String {
        if mask == self.full() && self.n > 1 {
            return "J".to_string();
        }
        if mask.is_empty() {
            return "∅".to_string();
        }
        match &self.labels {
            None => mask.to_string(),
            Some(labels) => {
                let names: Vec<&str> = mask.elements().map(|x| labels[x].as_str()).collect();
                format!("{{{}}}", names.join(","))
            }
        }
    }
}
