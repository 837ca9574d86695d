use serde::Serialize;

use super::Interval;
use crate::error::{Error, Result};

/// One cell `I_{j,k} = [k 2^j, (k + 1) 2^j)` of the dyadic grid, clipped to
/// the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DyadicCell {
    pub level: u32,
    pub index: usize,
    pub interval: Interval,
}

impl DyadicCell {
    /// Unclipped length `2^level`.
    pub fn nominal_len(&self) -> usize {
        1usize << self.level
    }

    pub fn is_clipped(&self) -> bool {
        self.interval.len() < self.nominal_len()
    }
}

/// All dyadic cells of a network of `n` nodes.
///
/// The grid is laid out on the padded size `2^J`, `J = ceil(log2 n)`, and
/// clipped to `[0, n)`. A clipped cell that coincides with a cell of a lower
/// level is listed only once, at the lower level. Cells are ordered by level,
/// then by offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicGrid {
    n: usize,
    depth: u32,
    cells: Vec<DyadicCell>,
}

pub fn dyadic_grid(n: usize) -> Result<DyadicGrid> {
    DyadicGrid::new(n)
}

impl DyadicGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!(
                "dyadic grid needs at least 2 nodes, got {n}"
            )));
        }
        let depth = usize::BITS - (n - 1).leading_zeros();
        let mut grid = Self {
            n,
            depth,
            cells: Vec::with_capacity(2 * n),
        };
        let mut cells = Vec::with_capacity(2 * n);
        for level in 0..=depth {
            let size = 1usize << level;
            for index in 0.. {
                let start = index * size;
                if start >= n {
                    break;
                }
                let end = (start + size).min(n);
                let interval = Interval::new(start, end - start);
                if end - start < size && grid.canonical_level(&interval) != Some(level) {
                    continue;
                }
                cells.push(DyadicCell {
                    level,
                    index,
                    interval,
                });
            }
        }
        grid.cells = cells;
        Ok(grid)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `J = ceil(log2 n)`; the padded grid has `2^J` leaves.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn is_power_of_two(&self) -> bool {
        self.n.is_power_of_two()
    }

    pub fn cells(&self) -> &[DyadicCell] {
        &self.cells
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        self.cells.iter().map(|c| c.interval)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Lowest level at which `interval` is a (possibly clipped) grid cell.
    fn canonical_level(&self, interval: &Interval) -> Option<u32> {
        if interval.end() > self.n {
            return None;
        }
        (0..=self.depth).find(|&level| {
            let size = 1usize << level;
            interval.start().is_multiple_of(size)
                && (interval.start() + size).min(self.n) == interval.end()
        })
    }

    /// The grid cell equal to `interval`, if any.
    pub fn cell_of(&self, interval: &Interval) -> Option<DyadicCell> {
        self.canonical_level(interval).map(|level| DyadicCell {
            level,
            index: interval.start() >> level,
            interval: *interval,
        })
    }

    pub fn is_dyadic(&self, interval: &Interval) -> bool {
        self.canonical_level(interval).is_some()
    }

    /// Largest grid cell contained in `interval`, ties broken by smallest
    /// start.
    pub fn max_dyadic_within(&self, interval: &Interval) -> Result<Interval> {
        interval.check_within(self.n)?;
        let mut best: Option<Interval> = None;
        for level in 0..=self.depth {
            let size = 1usize << level;
            // The leftmost cell of this level inside `interval` is also the
            // longest one: only the final cell of a level can be clipped.
            let index = interval.start().div_ceil(size);
            let start = index * size;
            if start >= self.n {
                continue;
            }
            let end = (start + size).min(self.n);
            if end > interval.end() {
                continue;
            }
            let candidate = Interval::new(start, end - start);
            best = match best {
                Some(b)
                    if b.len() > candidate.len()
                        || (b.len() == candidate.len() && b.start() <= candidate.start()) =>
                {
                    Some(b)
                }
                _ => Some(candidate),
            };
        }
        // Level 0 always fits, so `best` is set.
        Ok(best.expect("a unit cell always fits inside a non-empty interval"))
    }
}

/// Free-function form of [`DyadicGrid::max_dyadic_within`].
pub fn max_dyadic_within(interval: &Interval, grid: &DyadicGrid) -> Result<Interval> {
    grid.max_dyadic_within(interval)
}
