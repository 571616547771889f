//! Brute-force tiling counts by direct rhombus placement.
//!
//! Shares no code with the linear-algebra routes: the first uncovered
//! triangle in canonical order is paired with each free edge-neighbour in
//! turn, and counts are memoised on the covered set.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::lattice::{Region, TriTriple};

/// Largest number of triangles of one orientation the oracle accepts.
pub const ORACLE_LIMIT: usize = 60;

/// A placed rhombus: `(left-pointing, right-pointing)`.
pub type Rhombus = (TriTriple, TriTriple);

/// One tiling, rhombi listed in placement order.
pub type Tiling = Vec<Rhombus>;

struct Board {
    triangles: Vec<TriTriple>,
    neighbours: Vec<u128>,
    full: u128,
}

impl Board {
    fn new(region: &Region) -> Result<Self> {
        let triangles = region.triangles();
        let lefts = triangles.iter().filter(|t| t.is_left()).count();
        let per_color = lefts.max(triangles.len() - lefts);
        if per_color > ORACLE_LIMIT {
            return Err(Error::TooLarge {
                what: "oracle region (triangles per orientation)",
                size: per_color,
                limit: ORACLE_LIMIT,
            });
        }
        let index: HashMap<TriTriple, usize> =
            triangles.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let neighbours = triangles
            .iter()
            .map(|t| {
                t.partners()
                    .iter()
                    .filter_map(|p| index.get(p))
                    .fold(0u128, |m, &j| m | (1u128 << j))
            })
            .collect();
        let full = if triangles.len() == 128 {
            u128::MAX
        } else {
            (1u128 << triangles.len()) - 1
        };
        Ok(Board {
            triangles,
            neighbours,
            full,
        })
    }

    fn count(&self, covered: u128, memo: &mut HashMap<u128, u128>) -> u128 {
        if covered == self.full {
            return 1;
        }
        if let Some(&v) = memo.get(&covered) {
            return v;
        }
        let first = (!covered).trailing_zeros() as usize;
        let mut free = self.neighbours[first] & !covered;
        let mut total = 0u128;
        while free != 0 {
            let j = free.trailing_zeros() as usize;
            free &= free - 1;
            total += self.count(covered | (1 << first) | (1 << j), memo);
        }
        memo.insert(covered, total);
        total
    }

    fn enumerate(&self, covered: u128, current: &mut Tiling, out: &mut Vec<Tiling>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if covered == self.full {
            out.push(current.clone());
            return;
        }
        let first = (!covered).trailing_zeros() as usize;
        let mut free = self.neighbours[first] & !covered;
        while free != 0 {
            let j = free.trailing_zeros() as usize;
            free &= free - 1;
            let (t, u) = (self.triangles[first], self.triangles[j]);
            current.push(if t.is_left() { (t, u) } else { (u, t) });
            self.enumerate(covered | (1 << first) | (1 << j), current, out, limit);
            current.pop();
        }
    }
}

/// Exact number of rhombus tilings of `region`.
pub fn oracle_count(region: &Region) -> Result<BigUint> {
    let board = Board::new(region)?;
    Ok(BigUint::from(board.count(0, &mut HashMap::new())))
}

/// Up to `limit` tilings in deterministic order.
pub fn oracle_enumerate(region: &Region, limit: usize) -> Result<Vec<Tiling>> {
    let board = Board::new(region)?;
    let mut out = Vec::new();
    board.enumerate(0, &mut Vec::new(), &mut out, limit);
    Ok(out)
}
