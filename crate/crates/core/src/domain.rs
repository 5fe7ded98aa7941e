//! Finite integer domains backed by a 128-bit set.

use std::fmt;

/// Largest value a [`Domain`] can hold.
pub const MAX_VALUE: u32 = 127;

/// An ordered finite set of small non-negative integers.
///
/// Every benchmark in this crate stays below [`MAX_VALUE`] (the largest is a
/// 72-long Golomb ruler), so a single `u128` word is enough and keeps domain
/// copies on the search trail cheap.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Domain(u128);

impl Domain {
    pub const EMPTY: Domain = Domain(0);
    /// Every value `0..=MAX_VALUE`.
    pub const FULL: Domain = Domain(u128::MAX);

    pub fn from_bits(bits: u128) -> Self {
        Domain(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    /// `{lo..=hi}`; empty when `lo > hi`.
    pub fn range(lo: u32, hi: u32) -> Self {
        assert!(hi <= MAX_VALUE || lo > hi, "value {hi} exceeds domain capacity");
        if lo > hi {
            return Domain::EMPTY;
        }
        let width = hi - lo + 1;
        let mask = if width == 128 { u128::MAX } else { (1u128 << width) - 1 };
        Domain(mask << lo)
    }

    pub fn singleton(v: u32) -> Self {
        assert!(v <= MAX_VALUE, "value {v} exceeds domain capacity");
        Domain(1u128 << v)
    }

    pub fn from_values<I: IntoIterator<Item = u32>>(values: I) -> Self {
        let mut d = Domain::EMPTY;
        for v in values {
            d.insert(v);
        }
        d
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_singleton(self) -> bool {
        self.0 != 0 && self.0 & (self.0 - 1) == 0
    }

    pub fn contains(self, v: u32) -> bool {
        v <= MAX_VALUE && self.0 & (1u128 << v) != 0
    }

    pub fn insert(&mut self, v: u32) {
        assert!(v <= MAX_VALUE, "value {v} exceeds domain capacity");
        self.0 |= 1u128 << v;
    }

    pub fn remove(&mut self, v: u32) {
        if v <= MAX_VALUE {
            self.0 &= !(1u128 << v);
        }
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros())
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros())
    }

    /// The only value, if the domain is a singleton.
    pub fn value(self) -> Option<u32> {
        self.is_singleton().then(|| self.0.trailing_zeros())
    }

    pub fn intersect(self, other: Domain) -> Domain {
        Domain(self.0 & other.0)
    }

    pub fn union(self, other: Domain) -> Domain {
        Domain(self.0 | other.0)
    }

    pub fn minus(self, other: Domain) -> Domain {
        Domain(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Domain) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Domain) -> bool {
        self.0 & other.0 != 0
    }

    /// `{v + k : v in self}`, dropping values that fall outside `0..=127`.
    pub fn shift(self, k: i32) -> Domain {
        if k >= 128 || k <= -128 {
            Domain::EMPTY
        } else if k >= 0 {
            Domain(self.0 << k)
        } else {
            Domain(self.0 >> (-k))
        }
    }

    /// Values strictly greater than `v`.
    pub fn above(v: u32) -> Domain {
        if v >= MAX_VALUE {
            Domain::EMPTY
        } else {
            Domain(u128::MAX << (v + 1))
        }
    }

    /// Values strictly smaller than `v`.
    pub fn below(v: u32) -> Domain {
        if v == 0 {
            Domain::EMPTY
        } else if v > MAX_VALUE {
            Domain(u128::MAX)
        } else {
            Domain((1u128 << v) - 1)
        }
    }

    pub fn iter(self) -> DomainIter {
        DomainIter(self.0)
    }
}

pub struct DomainIter(u128);

impl Iterator for DomainIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for DomainIter {}

impl IntoIterator for Domain {
    type Item = u32;
    type IntoIter = DomainIter;

    fn into_iter(self) -> DomainIter {
        self.iter()
    }
}

impl FromIterator<u32> for Domain {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Domain::from_values(iter)
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}
