//! Intervals over a line network of `n` nodes, the dyadic grid, l-level
//! extensions of dyadic cells and the candidate set of long intervals.

mod candidates;
mod dyadic;
mod extensions;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use candidates::{candidate_count, candidate_intervals, CandidateIntervals};
pub use dyadic::{dyadic_grid, max_dyadic_within, DyadicCell, DyadicGrid};
pub use extensions::{extension_universe, extensions, ExtensionMember, ExtensionSet, ExtensionShapes};

/// Half-open index range `[start, start + length)` with `length >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    start: usize,
    length: usize,
}

impl Interval {
    /// Panics if `length == 0`; use [`Interval::try_new`] for unchecked input.
    pub fn new(start: usize, length: usize) -> Self {
        assert!(length >= 1, "interval length must be at least 1");
        Self { start, length }
    }

    pub fn try_new(start: usize, length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::invalid("interval length must be at least 1"));
        }
        start
            .checked_add(length)
            .ok_or_else(|| Error::invalid("interval end overflows"))?;
        Ok(Self { start, length })
    }

    /// Interval covering `start..end`.
    pub fn from_bounds(start: usize, end: usize) -> Result<Self> {
        if end <= start {
            return Err(Error::invalid(format!(
                "empty interval bounds [{start}, {end})"
            )));
        }
        Ok(Self {
            start,
            length: end - start,
        })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// One past the last index.
    pub fn end(&self) -> usize {
        self.start + self.length
    }

    pub fn contains_index(&self, i: usize) -> bool {
        i >= self.start && i < self.end()
    }

    pub fn contains(&self, other: &Interval) -> bool {
        other.start >= self.start && other.end() <= self.end()
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start < other.end() && other.start < self.end()
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }

    /// Fails with [`Error::OutOfBounds`] unless the interval lies in `[0, n)`.
    pub fn check_within(&self, n: usize) -> Result<()> {
        if self.end() > n {
            return Err(Error::OutOfBounds {
                start: self.start,
                end: self.end(),
                n,
            });
        }
        Ok(())
    }

    /// Ordering used for argmax reports: shorter first, then leftmost.
    pub(crate) fn report_key(&self) -> (usize, usize) {
        (self.length, self.start)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containment_and_overlap() {
        let a = Interval::new(2, 9);
        let b = Interval::new(4, 4);
        assert!(a.contains(&b));
        assert!(!b.contains(&a));
        assert!(a.overlaps(&b));
        assert!(!Interval::new(0, 2).overlaps(&Interval::new(2, 2)));
        assert_eq!(a.end(), 11);
        assert_eq!(a.to_string(), "[2, 11)");
    }

    #[test]
    fn bounds_checks() {
        assert!(Interval::try_new(0, 0).is_err());
        assert!(Interval::from_bounds(3, 3).is_err());
        assert!(matches!(
            Interval::new(10, 7).check_within(16),
            Err(Error::OutOfBounds { .. })
        ));
        assert!(Interval::new(9, 7).check_within(16).is_ok());
    }
}
