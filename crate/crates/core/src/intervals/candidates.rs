use super::Interval;
use crate::error::{Error, Result};

/// Number of intervals of length at least `i_min` in a network of `n` nodes.
///
/// Zero when `i_min > n`.
pub fn candidate_count(n: usize, i_min: usize) -> usize {
    let i_min = i_min.max(1);
    if i_min > n {
        return 0;
    }
    // sum_{L = i_min}^{n} (n - L + 1) = m (m + 1) / 2 with m = n - i_min + 1
    let m = n - i_min + 1;
    m * (m + 1) / 2
}

/// Lazily yields every interval with `length >= i_min`, ordered by
/// `(length, start)`.
pub fn candidate_intervals(n: usize, i_min: usize) -> Result<CandidateIntervals> {
    if i_min < 2 {
        return Err(Error::invalid(format!(
            "minimum interval length must be at least 2, got {i_min}"
        )));
    }
    if i_min > n {
        return Err(Error::invalid(format!(
            "minimum interval length {i_min} exceeds network size {n}"
        )));
    }
    Ok(CandidateIntervals {
        n,
        length: i_min,
        start: 0,
        remaining: candidate_count(n, i_min),
    })
}

#[derive(Debug, Clone)]
pub struct CandidateIntervals {
    n: usize,
    length: usize,
    start: usize,
    remaining: usize,
}

impl Iterator for CandidateIntervals {
    type Item = Interval;

    fn next(&mut self) -> Option<Interval> {
        if self.remaining == 0 {
            return None;
        }
        let item = Interval::new(self.start, self.length);
        self.remaining -= 1;
        if self.start + self.length == self.n {
            self.length += 1;
            self.start = 0;
        } else {
            self.start += 1;
        }
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for CandidateIntervals {}
