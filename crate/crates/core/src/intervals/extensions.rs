//! l-level extensions of dyadic cells.
//!
//! Starting from a cell `I_{j,k}` (and, when `k` is odd, from the union
//! `I_{j,k} ∪ I_{j,k+1}`), each round `q = 1..=l` may attach a block of
//! length `2^{j-q}` flush against the left end, the right end, both ends, or
//! neither. Attachment blocks are dyadic in length; they are not required to
//! be aligned to the grid. Rounds whose block length would fall below one node
//! leave every shape unchanged.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{DyadicCell, DyadicGrid, Interval};
use crate::error::{Error, Result};

/// One member of an extension family and the first round that produced it
/// (0 for the seeds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtensionMember {
    pub interval: Interval,
    pub round: u32,
}

/// The l-level extension family of one dyadic cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSet {
    pub base: Interval,
    pub level: u32,
    /// Deduplicated, sorted by `(start, length)`, clipped to the network.
    pub members: Vec<ExtensionMember>,
}

impl ExtensionSet {
    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        self.members.iter().map(|m| m.interval)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Offsets `(left, right, round)` of a member relative to the base cell.
type Shape = (usize, usize, u32);

/// Extension shapes memoized by `(cell level, seed kind)` for a fixed number
/// of rounds; translating a shape to a concrete cell only needs clipping.
#[derive(Debug, Clone)]
pub struct ExtensionShapes {
    rounds: u32,
    cache: HashMap<(u32, bool), Vec<Shape>>,
}

impl ExtensionShapes {
    pub fn new(rounds: u32) -> Self {
        Self {
            rounds,
            cache: HashMap::new(),
        }
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    fn shapes(&mut self, level: u32, paired_seed: bool) -> &[Shape] {
        let rounds = self.rounds;
        self.cache
            .entry((level, paired_seed))
            .or_insert_with(|| build_shapes(level, paired_seed, rounds))
    }

    /// Extension family of a grid cell.
    pub fn family(&mut self, cell: &DyadicCell, grid: &DyadicGrid) -> ExtensionSet {
        let n = grid.n();
        let start = cell.interval.start();
        let nominal_end = start + cell.nominal_len();
        let paired = cell.index % 2 == 1;
        let mut members: BTreeMap<Interval, u32> = BTreeMap::new();
        for &(left, right, round) in self.shapes(cell.level, paired) {
            let s = start.saturating_sub(left);
            let e = (nominal_end + right).min(n);
            let interval = Interval::new(s, e - s);
            members
                .entry(interval)
                .and_modify(|r| *r = (*r).min(round))
                .or_insert(round);
        }
        ExtensionSet {
            base: cell.interval,
            level: self.rounds,
            members: members
                .into_iter()
                .map(|(interval, round)| ExtensionMember { interval, round })
                .collect(),
        }
    }

    /// Extension family of `base`, which must be a grid cell.
    pub fn family_of(&mut self, base: &Interval, grid: &DyadicGrid) -> Result<ExtensionSet> {
        let cell = grid.cell_of(base).ok_or_else(|| {
            Error::invalid(format!("{base} is not a dyadic interval of the grid"))
        })?;
        Ok(self.family(&cell, grid))
    }
}

fn build_shapes(level: u32, paired_seed: bool, rounds: u32) -> Vec<Shape> {
    let size = 1usize << level;
    let mut first_round: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    first_round.insert((0, 0), 0);
    if paired_seed {
        first_round.insert((0, size), 0);
    }
    let mut frontier: Vec<(usize, usize)> = first_round.keys().copied().collect();
    for q in 1..=rounds {
        if q > level {
            break;
        }
        let block = size >> q;
        let mut next = Vec::with_capacity(frontier.len() * 4);
        for &(l, r) in &frontier {
            for shape in [(l, r), (l + block, r), (l, r + block), (l + block, r + block)] {
                first_round.entry(shape).or_insert(q);
                next.push(shape);
            }
        }
        next.sort_unstable();
        next.dedup();
        frontier = next;
    }
    first_round
        .into_iter()
        .map(|((l, r), round)| (l, r, round))
        .collect()
}

/// The l-level extension family of a dyadic `base`.
pub fn extensions(base: &Interval, level: u32, grid: &DyadicGrid) -> Result<ExtensionSet> {
    ExtensionShapes::new(level).family_of(base, grid)
}

/// Union of the extension families of every grid cell, sorted and
/// deduplicated.
pub fn extension_universe(grid: &DyadicGrid, level: u32) -> Vec<Interval> {
    let mut shapes = ExtensionShapes::new(level);
    let mut all: Vec<Interval> = grid
        .cells()
        .iter()
        .flat_map(|cell| shapes.family(cell, grid).intervals().collect::<Vec<_>>())
        .collect();
    all.sort_unstable();
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::dyadic_grid;

    #[test]
    fn zero_rounds_gives_seeds_only() {
        let g = dyadic_grid(16).unwrap();
        // I_{2,0}: k even, base only.
        let even = extensions(&Interval::new(0, 4), 0, &g).unwrap();
        assert_eq!(even.intervals().collect::<Vec<_>>(), vec![Interval::new(0, 4)]);
        // I_{2,1}: k odd, base and base ∪ I_{2,2}.
        let odd = extensions(&Interval::new(4, 4), 0, &g).unwrap();
        assert_eq!(
            odd.intervals().collect::<Vec<_>>(),
            vec![Interval::new(4, 4), Interval::new(4, 8)]
        );
    }

    #[test]
    fn one_round_attaches_half_blocks() {
        let g = dyadic_grid(16).unwrap();
        let fam = extensions(&Interval::new(8, 4), 1, &g).unwrap();
        let got: Vec<_> = fam.intervals().collect();
        assert_eq!(
            got,
            vec![
                Interval::new(6, 6),
                Interval::new(6, 8),
                Interval::new(8, 4),
                Interval::new(8, 6),
            ]
        );
        let rounds: Vec<u32> = fam.members.iter().map(|m| m.round).collect();
        assert_eq!(rounds, vec![1, 1, 0, 1]);
    }

    #[test]
    fn members_contain_base_and_stay_in_range() {
        for n in [16usize, 20, 64] {
            let g = dyadic_grid(n).unwrap();
            let mut shapes = ExtensionShapes::new(3);
            for cell in g.cells() {
                let fam = shapes.family(cell, &g);
                assert!(fam.intervals().any(|m| m == cell.interval));
                for m in fam.intervals() {
                    assert!(m.contains(&cell.interval));
                    assert!(m.end() <= n);
                    assert!(m.len() <= 4 * cell.nominal_len());
                }
            }
        }
    }

    #[test]
    fn unit_cells_cannot_be_extended() {
        let g = dyadic_grid(8).unwrap();
        let fam = extensions(&Interval::new(2, 1), 3, &g).unwrap();
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn rejects_non_dyadic_base() {
        let g = dyadic_grid(16).unwrap();
        assert!(matches!(
            extensions(&Interval::new(3, 4), 2, &g),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn memoized_shapes_match_fresh_build() {
        let g = dyadic_grid(64).unwrap();
        let mut shared = ExtensionShapes::new(2);
        for cell in g.cells() {
            let fresh = extensions(&cell.interval, 2, &g).unwrap();
            assert_eq!(shared.family(cell, &g), fresh);
        }
    }
}
