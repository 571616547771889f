//! Tilings as families of non-intersecting north/east lattice paths.
//!
//! Horizontal rhombi become east steps and left-leaning rhombi north steps
//! under `psi(l, l', l'') = ((l+l'+l'')/2, (l-l'-l'')/2)`; right-leaning rhombi
//! collapse to a point. Coordinates are stored doubled.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact_linalg::{binom_doubled, IntMatrix};
use crate::lattice::{HexDims, Orientation, Region, RhombusKind, TriTriple};

/// A point of the shifted grid, both coordinates doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x2: i64,
    pub y2: i64,
}

impl LatticePoint {
    pub fn new(x2: i64, y2: i64) -> Self {
        LatticePoint { x2, y2 }
    }

    /// Checks that the point lies on the grid belonging to `dims`: the `x`
    /// coordinate is a half-integer exactly when `a + c` is even, and `y`
    /// exactly when `a + b` is even.
    pub fn check_grid(&self, dims: &HexDims) -> Result<()> {
        let want_x = (dims.a + dims.c - 1).rem_euclid(2);
        let want_y = (dims.a + dims.b - 1).rem_euclid(2);
        if self.x2.rem_euclid(2) != want_x || self.y2.rem_euclid(2) != want_y {
            return Err(Error::ParityViolation(format!(
                "point {self} is not on the lattice of {dims}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = |v: i64| {
            if v % 2 == 0 {
                format!("{}", v / 2)
            } else {
                format!("{v}/2")
            }
        };
        write!(f, "({}, {})", h(self.x2), h(self.y2))
    }
}

pub fn psi(t: &TriTriple) -> LatticePoint {
    let (l, lp, lpp) = t.doubled();
    // l + l' = l'' +- 1, so both sums below are even
    LatticePoint {
        x2: (l + lp + lpp) / 2,
        y2: (l - lp - lpp) / 2,
    }
}

/// [`psi`] followed by a grid check against `dims`.
pub fn psi_in(dims: &HexDims, t: &TriTriple) -> Result<LatticePoint> {
    let p = psi(t);
    p.check_grid(dims)?;
    Ok(p)
}

/// Number of north/east paths from `from` to `to`.
pub fn path_count(from: &LatticePoint, to: &LatticePoint) -> Result<BigInt> {
    let dx = to.x2 - from.x2;
    let dy = to.y2 - from.y2;
    binom_doubled(dx + dy, dx).map_err(|_| {
        Error::ParityViolation(format!("{from} and {to} are not joined by unit steps"))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathEndpoints {
    pub starts: Vec<LatticePoint>,
    pub ends: Vec<LatticePoint>,
}

/// The `a` start points on the south-west side and `a` end points on the
/// north-east side, in index order.
pub fn boundary_endpoints(dims: &HexDims) -> PathEndpoints {
    let (a, b, c) = (dims.a, dims.b, dims.c);
    let starts = (1..=a)
        .map(|i| LatticePoint::new(2 * i - (1 + a + c), (a - b + 1) - 2 * i))
        .collect();
    let ends = (1..=a)
        .map(|j| LatticePoint::new(2 * j - (1 + a - c), (a + b + 1) - 2 * j))
        .collect();
    PathEndpoints { starts, ends }
}

/// Start and end endpoints for a pair removal: boundary points, then
/// `psi(w)` as the last start and `psi(b)` as the last end.
pub fn pair_endpoints(dims: &HexDims, w: &TriTriple, b: &TriTriple) -> Result<PathEndpoints> {
    check_pair(dims, w, b)?;
    let mut ep = boundary_endpoints(dims);
    ep.starts.push(psi_in(dims, w)?);
    ep.ends.push(psi_in(dims, b)?);
    Ok(ep)
}

fn check_pair(dims: &HexDims, w: &TriTriple, b: &TriTriple) -> Result<()> {
    if w.orient() != Orientation::Right {
        return Err(Error::DomainError(format!("{w} must be right-pointing")));
    }
    if b.orient() != Orientation::Left {
        return Err(Error::DomainError(format!("{b} must be left-pointing")));
    }
    for t in [w, b] {
        if !dims.contains(t) {
            return Err(Error::OutOfBounds(*t));
        }
    }
    Ok(())
}

fn parity_binom(n2: i64, k2: i64) -> Result<BigInt> {
    binom_doubled(n2, k2).map_err(|e| Error::ParityViolation(format!("path-matrix entry: {e}")))
}

/// The `(a+1) x (a+1)` lattice-path matrix for the hexagon with the white
/// (right-pointing) triangle `w` and black (left-pointing) triangle `b` removed.
pub fn path_matrix(dims: &HexDims, w: &TriTriple, b: &TriTriple) -> Result<IntMatrix> {
    check_pair(dims, w, b)?;
    let (a, bb, c) = (dims.a, dims.b, dims.c);
    let r = psi_in(dims, w)?;
    let l = psi_in(dims, b)?;
    let n = a as usize + 1;
    let mut m = IntMatrix::zeros(n, n);
    for i in 1..=a {
        for j in 1..=a {
            m.set(i as usize - 1, j as usize - 1, parity_binom(2 * (bb + c), 2 * (c + j - i))?);
        }
    }
    for j in 1..=a {
        // binom((b+c)/2 - r_x - r_y, j - r_x - (a-c+1)/2)
        let v = parity_binom(bb + c - r.x2 - r.y2, 2 * j - r.x2 - (a - c + 1))?;
        m.set(n - 1, j as usize - 1, v);
    }
    for i in 1..=a {
        // binom(l_x + l_y + (b+c)/2, l_x - i + (a+c+1)/2)
        let v = parity_binom(l.x2 + l.y2 + bb + c, l.x2 - 2 * i + a + c + 1)?;
        m.set(i as usize - 1, n - 1, v);
    }
    m.set(
        n - 1,
        n - 1,
        parity_binom(l.x2 + l.y2 - r.x2 - r.y2, l.x2 - r.x2)?,
    );
    Ok(m)
}

/// Matrix of pairwise counts `count(s_i, e_j)`.
pub fn count_matrix<F>(starts: &[LatticePoint], ends: &[LatticePoint], count: F) -> Result<IntMatrix>
where
    F: Fn(&LatticePoint, &LatticePoint) -> Result<BigInt>,
{
    let mut m = IntMatrix::zeros(starts.len(), ends.len());
    for (i, s) in starts.iter().enumerate() {
        for (j, e) in ends.iter().enumerate() {
            m.set(i, j, count(s, e)?);
        }
    }
    Ok(m)
}

/// Signed count of non-intersecting path families, as the determinant of
/// the pairwise count matrix.
pub fn lgv_signed_count<F>(starts: &[LatticePoint], ends: &[LatticePoint], count: F) -> Result<BigInt>
where
    F: Fn(&LatticePoint, &LatticePoint) -> Result<BigInt>,
{
    if starts.len() != ends.len() {
        return Err(Error::NotSquare {
            rows: starts.len(),
            cols: ends.len(),
        });
    }
    count_matrix(starts, ends, count)?.det()
}

/// Left-pointing triangles whose south-west edge carries a path start:
/// the south-west boundary row, then every remaining left triangle whose
/// right-leaning partner is missing from the region, in canonical order.
pub fn start_triangles(region: &Region) -> Vec<TriTriple> {
    let dims = region.dims();
    let (a, b, c) = (dims.a, dims.b, dims.c);
    let boundary: Vec<TriTriple> = (1..=a)
        .filter_map(|i| TriTriple::left(-(b + c), b - a + 2 * i - 2, 2 * i - (a + c)).ok())
        .filter(|t| region.has_triangle(t))
        .collect();
    let mut out = boundary.clone();
    out.extend(region.triangles().into_iter().filter(|t| {
        t.is_left()
            && !boundary.contains(t)
            && !region.has_triangle(&t.partner(RhombusKind::RightLeaning))
    }));
    out
}

/// Right-pointing triangles whose north-east edge carries a path end:
/// the north-east boundary row, then remaining right triangles whose
/// right-leaning partner is missing from the region.
pub fn end_triangles(region: &Region) -> Vec<TriTriple> {
    let dims = region.dims();
    let (a, b, c) = (dims.a, dims.b, dims.c);
    let boundary: Vec<TriTriple> = (1..=a)
        .filter_map(|j| TriTriple::right(b + c, 2 * j - (a + b), c - a + 2 * j - 2).ok())
        .filter(|t| region.has_triangle(t))
        .collect();
    let mut out = boundary.clone();
    out.extend(region.triangles().into_iter().filter(|t| {
        !t.is_left()
            && !boundary.contains(t)
            && !region.has_triangle(&t.partner(RhombusKind::RightLeaning))
    }));
    out
}

/// Path endpoints of a general holey region.
pub fn region_endpoints(region: &Region) -> Result<PathEndpoints> {
    let dims = region.dims();
    let starts = start_triangles(region)
        .iter()
        .map(|t| psi_in(&dims, t))
        .collect::<Result<Vec<_>>>()?;
    let ends = end_triangles(region)
        .iter()
        .map(|t| psi_in(&dims, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(PathEndpoints { starts, ends })
}
