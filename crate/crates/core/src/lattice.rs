//! The triangular lattice, semi-regular hexagons and their holes.
//!
//! Every unit triangle is named by the three lattice lines that bound it:
//! `l` from the family of lines of slope -1/sqrt(3), `l'` from the family of
//! slope +1/sqrt(3) and `l''` from the vertical family. Labels are measured
//! along the horizontal line through the centre of the hexagon and may be
//! half-integers, so they are stored doubled.
//!
//! In the doubled-free picture a point with horizontal coordinate
//! `X = x / (sqrt(3)/2)` and height `y` lies on the lines
//! `Q = X/2 + y` (first family), `P = X/2 - y` (second family) and `X`
//! (vertical family); note `Q + P = X`. A right-pointing triangle `(q, p, m)`
//! satisfies `q + p = m + 1` and covers `Q in [q-1, q]`, `P in [p-1, p]`,
//! `X in [m, m+1]`; a left-pointing one satisfies `q + p = m - 1` and covers
//! `Q in [q, q+1]`, `P in [p, p+1]`, `X in [m-1, m]`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side lengths `a, b, c, a, b, c` of a hexagon, clockwise from the south-west side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HexDims {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl HexDims {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a < 1 || b < 1 || c < 1 {
            return Err(Error::InvalidDims(a, b, c));
        }
        Ok(HexDims { a, b, c })
    }

    /// Number of unit triangles of each orientation, `ab + bc + ca`.
    pub fn per_color(&self) -> usize {
        (self.a * self.b + self.b * self.c + self.c * self.a) as usize
    }

    pub fn scaled(&self, n: i64) -> Result<Self> {
        HexDims::new(self.a * n, self.b * n, self.c * n)
    }

    /// Doubled bounding labels for the three line families.
    fn bounds(&self) -> (i64, i64, i64) {
        (self.b + self.c, self.a + self.b, self.a + self.c)
    }

    /// True when the labels of `t` sit on this hexagon's half-integer grid.
    pub fn label_parity_ok(&self, t: &TriTriple) -> bool {
        let (bl, blp, blpp) = self.bounds();
        (t.l2 - bl).rem_euclid(2) == 0
            && (t.lp2 - blp).rem_euclid(2) == 0
            && (t.lpp2 - blpp).rem_euclid(2) == 0
    }

    pub fn contains(&self, t: &TriTriple) -> bool {
        if !self.label_parity_ok(t) {
            return false;
        }
        let (bl, blp, blpp) = self.bounds();
        let (q, p, m) = (t.l2, t.lp2, t.lpp2);
        match t.orient {
            Orientation::Right => {
                q - 2 >= -bl && q <= bl && p - 2 >= -blp && p <= blp && m >= -blpp && m + 2 <= blpp
            }
            Orientation::Left => {
                q >= -bl && q + 2 <= bl && p >= -blp && p + 2 <= blp && m - 2 >= -blpp && m <= blpp
            }
        }
    }

    /// Whether a lattice point (doubled `Q`, `P` coordinates) lies on the outer boundary.
    pub fn on_boundary(&self, corner: (i64, i64)) -> bool {
        let (bl, blp, blpp) = self.bounds();
        let (q, p) = corner;
        q.abs() == bl || p.abs() == blp || (q + p).abs() == blpp
    }

    /// All unit triangles of the hexagon of one orientation, in canonical order.
    pub fn triangles_of(&self, orient: Orientation) -> Vec<TriTriple> {
        let (bl, blp, blpp) = self.bounds();
        let mut out = Vec::with_capacity(self.per_color());
        let shift = match orient {
            Orientation::Left => -2,
            Orientation::Right => 2,
        };
        let mut m = -blpp;
        while m <= blpp {
            let mut q = -bl;
            while q <= bl {
                let t = TriTriple {
                    l2: q,
                    lp2: m + shift - q,
                    lpp2: m,
                    orient,
                };
                if (t.lp2).abs() <= blp && self.contains(&t) {
                    out.push(t);
                }
                q += 2;
            }
            m += 2;
        }
        out
    }

    /// All unit triangles of the hexagon, in canonical order.
    pub fn triangles(&self) -> Vec<TriTriple> {
        let mut all = self.triangles_of(Orientation::Left);
        all.extend(self.triangles_of(Orientation::Right));
        all.sort();
        all
    }
}

impl fmt::Display for HexDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({},{},{})", self.a, self.b, self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
        }
    }
}

/// The three rhombus shapes, named from the left-pointing triangle's side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RhombusKind {
    /// `(l, l', l'')` with `(l+1, l'+1, l'')`; shares a vertical edge.
    Horizontal,
    /// `(l, l', l'')` with `(l+1, l', l''-1)`.
    LeftLeaning,
    /// `(l, l', l'')` with `(l, l'+1, l''-1)`.
    RightLeaning,
}

impl RhombusKind {
    pub const ALL: [RhombusKind; 3] = [
        RhombusKind::Horizontal,
        RhombusKind::LeftLeaning,
        RhombusKind::RightLeaning,
    ];

    /// Label offsets (doubled) from the left triangle to its right partner.
    fn offset(self) -> (i64, i64, i64) {
        match self {
            RhombusKind::Horizontal => (2, 2, 0),
            RhombusKind::LeftLeaning => (2, 0, -2),
            RhombusKind::RightLeaning => (0, 2, -2),
        }
    }
}

/// A unit triangle given by its doubled line labels and orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TriTriple {
    l2: i64,
    lp2: i64,
    lpp2: i64,
    orient: Orientation,
}

impl TriTriple {
    /// Builds a triangle from doubled labels, checking that the three lines
    /// bound a unit triangle pointing the claimed way.
    pub fn new(l2: i64, lp2: i64, lpp2: i64, orient: Orientation) -> Result<Self> {
        let inconsistent = |reason| Error::InconsistentTriple {
            l2,
            lp2,
            lpp2,
            reason,
        };
        let s = l2 + lp2 - lpp2;
        match (s, orient) {
            (-2, Orientation::Left) | (2, Orientation::Right) => {}
            (-2, Orientation::Right) => return Err(inconsistent("lines bound a left-pointing triangle")),
            (2, Orientation::Left) => return Err(inconsistent("lines bound a right-pointing triangle")),
            _ => return Err(inconsistent("lines do not meet in a unit triangle")),
        }
        Ok(TriTriple {
            l2,
            lp2,
            lpp2,
            orient,
        })
    }

    pub fn left(l2: i64, lp2: i64, lpp2: i64) -> Result<Self> {
        Self::new(l2, lp2, lpp2, Orientation::Left)
    }

    pub fn right(l2: i64, lp2: i64, lpp2: i64) -> Result<Self> {
        Self::new(l2, lp2, lpp2, Orientation::Right)
    }

    /// Doubled labels `(2l, 2l', 2l'')`.
    pub fn doubled(&self) -> (i64, i64, i64) {
        (self.l2, self.lp2, self.lpp2)
    }

    pub fn orient(&self) -> Orientation {
        self.orient
    }

    pub fn is_left(&self) -> bool {
        self.orient == Orientation::Left
    }

    /// The partner forming a rhombus of the given kind. For a right triangle
    /// the kind names the rhombus from its left partner's side.
    pub fn partner(&self, kind: RhombusKind) -> TriTriple {
        let (dl, dlp, dlpp) = kind.offset();
        let sign = if self.is_left() { 1 } else { -1 };
        TriTriple {
            l2: self.l2 + sign * dl,
            lp2: self.lp2 + sign * dlp,
            lpp2: self.lpp2 + sign * dlpp,
            orient: self.orient.flip(),
        }
    }

    /// The three edge-neighbours, which may lie outside any given hexagon.
    pub fn partners(&self) -> [TriTriple; 3] {
        RhombusKind::ALL.map(|k| self.partner(k))
    }

    /// Corners as doubled `(Q, P)` lattice coordinates.
    pub fn corners(&self) -> [(i64, i64); 3] {
        let (q, p) = (self.l2, self.lp2);
        match self.orient {
            Orientation::Right => [(q, p), (q, p - 2), (q - 2, p)],
            Orientation::Left => [(q, p), (q + 2, p), (q, p + 2)],
        }
    }

    pub fn shares_edge(&self, other: &TriTriple) -> bool {
        self.partners().contains(other)
    }

    pub fn touches(&self, other: &TriTriple) -> bool {
        let theirs = other.corners();
        self.corners().iter().any(|c| theirs.contains(c))
    }

    /// Centroid in Euclidean coordinates, unit-triangle side 1, origin at the hexagon centre.
    pub fn centroid(&self) -> (f64, f64) {
        let (q, p) = (self.l2 as f64 / 2.0, self.lp2 as f64 / 2.0);
        let (cq, cp) = match self.orient {
            Orientation::Right => (q - 1.0 / 3.0, p - 1.0 / 3.0),
            Orientation::Left => (q + 1.0 / 3.0, p + 1.0 / 3.0),
        };
        ((cq + cp) * 3f64.sqrt() / 2.0, (cq - cp) / 2.0)
    }

    fn sort_key(&self) -> (i64, i64, Orientation, i64) {
        (self.lpp2, self.l2, self.orient, self.lp2)
    }
}

/// Canonical order: `l''` ascending, then `l` ascending, left before right.
impl Ord for TriTriple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for TriTriple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_half(v: i64) -> String {
    if v % 2 == 0 {
        format!("{}", v / 2)
    } else {
        format!("{}/2", v)
    }
}

impl fmt::Display for TriTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = if self.is_left() { 'L' } else { 'R' };
        write!(
            f,
            "({}, {}, {}; {})",
            fmt_half(self.l2),
            fmt_half(self.lp2),
            fmt_half(self.lpp2),
            o
        )
    }
}

/// A hole entry in the JSON region format: `[2l, 2l', 2l'', "L"|"R"]`.
pub type HoleSpec = (i64, i64, i64, Orientation);

/// JSON form of a region: `{"a":..,"b":..,"c":..,"holes":[[2l,2l',2l'',"L"],..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    #[serde(default)]
    pub holes: Vec<HoleSpec>,
}

/// A hexagon with a set of removed unit triangles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    dims: HexDims,
    holes: BTreeSet<TriTriple>,
}

/// A maximal set of holes connected through shared edges or corners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleComponent {
    pub triangles: BTreeSet<TriTriple>,
    /// Right-pointing minus left-pointing triangles.
    pub charge: i64,
    /// Whether some triangle has a corner on the outer boundary.
    pub touches_boundary: bool,
}

impl HoleComponent {
    pub fn lefts(&self) -> usize {
        self.triangles.iter().filter(|t| t.is_left()).count()
    }

    pub fn rights(&self) -> usize {
        self.triangles.len() - self.lefts()
    }

    pub fn centroid(&self) -> (f64, f64) {
        let n = self.triangles.len() as f64;
        let (sx, sy) = self
            .triangles
            .iter()
            .map(|t| t.centroid())
            .fold((0.0, 0.0), |(ax, ay), (x, y)| (ax + x, ay + y));
        (sx / n, sy / n)
    }
}

impl Region {
    pub fn new(dims: HexDims, holes: impl IntoIterator<Item = TriTriple>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for t in holes {
            if !dims.label_parity_ok(&t) {
                let (l2, lp2, lpp2) = t.doubled();
                return Err(Error::InconsistentTriple {
                    l2,
                    lp2,
                    lpp2,
                    reason: "label parity does not match the hexagon's line grid",
                });
            }
            if !dims.contains(&t) {
                return Err(Error::OutOfBounds(t));
            }
            if !set.insert(t) {
                return Err(Error::Duplicate(t));
            }
        }
        Ok(Region { dims, holes: set })
    }

    pub fn hexagon(dims: HexDims) -> Self {
        Region {
            dims,
            holes: BTreeSet::new(),
        }
    }

    pub fn from_spec(spec: &RegionSpec) -> Result<Self> {
        let dims = HexDims::new(spec.a, spec.b, spec.c)?;
        let holes = spec
            .holes
            .iter()
            .map(|&(l, lp, lpp, o)| TriTriple::new(l, lp, lpp, o))
            .collect::<Result<Vec<_>>>()?;
        Region::new(dims, holes)
    }

    pub fn to_spec(&self) -> RegionSpec {
        RegionSpec {
            a: self.dims.a,
            b: self.dims.b,
            c: self.dims.c,
            holes: self
                .holes
                .iter()
                .map(|t| {
                    let (l, lp, lpp) = t.doubled();
                    (l, lp, lpp, t.orient())
                })
                .collect(),
        }
    }

    pub fn dims(&self) -> HexDims {
        self.dims
    }

    pub fn holes(&self) -> &BTreeSet<TriTriple> {
        &self.holes
    }

    /// True if `t` is a unit triangle of the hexagon that has not been removed.
    pub fn has_triangle(&self, t: &TriTriple) -> bool {
        self.dims.contains(t) && !self.holes.contains(t)
    }

    /// Whether equally many left- and right-pointing triangles were removed.
    pub fn is_balanced(&self) -> bool {
        let lefts = self.holes.iter().filter(|t| t.is_left()).count();
        2 * lefts == self.holes.len()
    }

    /// Unit triangles of the region in canonical order.
    pub fn triangles(&self) -> Vec<TriTriple> {
        self.dims
            .triangles()
            .into_iter()
            .filter(|t| !self.holes.contains(t))
            .collect()
    }

    /// Partitions the holes into point/edge-connected components.
    pub fn hole_components(&self) -> Vec<HoleComponent> {
        let holes: Vec<TriTriple> = self.holes.iter().copied().collect();
        let mut by_corner: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, t) in holes.iter().enumerate() {
            for c in t.corners() {
                by_corner.entry(c).or_default().push(i);
            }
        }
        let mut comp = vec![usize::MAX; holes.len()];
        let mut out = Vec::new();
        for start in 0..holes.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            comp[start] = id;
            let mut members = BTreeSet::new();
            while let Some(i) = stack.pop() {
                members.insert(holes[i]);
                for c in holes[i].corners() {
                    for &j in &by_corner[&c] {
                        if comp[j] == usize::MAX {
                            comp[j] = id;
                            stack.push(j);
                        }
                    }
                }
            }
            let rights = members.iter().filter(|t| !t.is_left()).count() as i64;
            let charge = rights - (members.len() as i64 - rights);
            let touches_boundary = members
                .iter()
                .any(|t| t.corners().iter().any(|&c| self.dims.on_boundary(c)));
            out.push(HoleComponent {
                triangles: members,
                charge,
                touches_boundary,
            });
        }
        out
    }

    /// Removes every rhombus that is forced in all tilings, to a fixpoint.
    ///
    /// A remaining triangle with a single remaining edge-neighbour must be
    /// paired with it. Fails with [`Error::Untileable`] as soon as some
    /// triangle has no neighbour left.
    pub fn forced_closure(&self) -> Result<Region> {
        let mut live: HashSet<TriTriple> = self.triangles().into_iter().collect();
        let mut holes = self.holes.clone();
        loop {
            let mut order: Vec<TriTriple> = live.iter().copied().collect();
            order.sort();
            let mut changed = false;
            for t in order {
                if !live.contains(&t) {
                    continue;
                }
                let avail: Vec<TriTriple> = t
                    .partners()
                    .into_iter()
                    .filter(|p| live.contains(p))
                    .collect();
                match avail.len() {
                    0 => return Err(Error::Untileable(t)),
                    1 => {
                        live.remove(&t);
                        live.remove(&avail[0]);
                        holes.insert(t);
                        holes.insert(avail[0]);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        Ok(Region {
            dims: self.dims,
            holes,
        })
    }
}

/// Validates `(a, b, c)` and a list of holes into a [`Region`].
pub fn build_region(a: i64, b: i64, c: i64, holes: &[TriTriple]) -> Result<Region> {
    Region::new(HexDims::new(a, b, c)?, holes.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(a: i64, b: i64, c: i64) -> HexDims {
        HexDims::new(a, b, c).unwrap()
    }

    #[test]
    fn triangle_counts_match_side_products() {
        for a in 1..=4 {
            for b in 1..=4 {
                for c in 1..=4 {
                    let d = dims(a, b, c);
                    let n = (a * b + b * c + c * a) as usize;
                    assert_eq!(d.triangles_of(Orientation::Left).len(), n, "{d}");
                    assert_eq!(d.triangles_of(Orientation::Right).len(), n, "{d}");
                }
            }
        }
    }

    #[test]
    fn unit_hexagon_has_six_triangles() {
        let r = build_region(1, 1, 1, &[]).unwrap();
        let ts = r.triangles();
        assert_eq!(ts.len(), 6);
        assert_eq!(ts.iter().filter(|t| t.is_left()).count(), 3);
    }

    #[test]
    fn h223_has_sixteen_per_color() {
        let d = dims(2, 2, 3);
        assert_eq!(d.triangles().len(), 32);
    }

    #[test]
    fn figure_region_builds() {
        let holes = [
            TriTriple::new(3, -1, 0, Orientation::Right).unwrap(),
            TriTriple::new(3, -1, 4, Orientation::Left).unwrap(),
        ];
        let r = build_region(2, 3, 4, &holes).unwrap();
        assert_eq!(r.holes().len(), 2);
        assert_eq!(r.triangles().len(), 52 - 2);
        assert!(r.is_balanced());
    }

    #[test]
    fn triple_consistency() {
        assert!(TriTriple::new(0, 0, 2, Orientation::Left).is_ok());
        assert!(TriTriple::new(0, 0, 2, Orientation::Right).is_err());
        assert!(TriTriple::new(0, 0, 0, Orientation::Right).is_err());
        assert!(TriTriple::new(2, 0, 0, Orientation::Right).is_ok());
        assert!(TriTriple::new(0, 0, -2, Orientation::Left).is_err());
        assert!(TriTriple::new(-2, 0, 0, Orientation::Left).is_ok());
    }

    #[test]
    fn out_of_bounds_and_duplicates() {
        let far = TriTriple::right(6, 0, 4).unwrap();
        assert_eq!(build_region(1, 1, 1, &[far]), Err(Error::OutOfBounds(far)));
        let t = TriTriple::right(2, 0, 0).unwrap();
        assert_eq!(build_region(1, 1, 1, &[t, t]), Err(Error::Duplicate(t)));
        // wrong parity for H(1,1,1), whose labels are integers
        let half = TriTriple::right(1, 1, 0).unwrap();
        assert!(matches!(
            build_region(1, 1, 1, &[half]),
            Err(Error::InconsistentTriple { .. })
        ));
    }

    #[test]
    fn rhombus_kinds_share_an_edge() {
        let d = dims(3, 3, 3);
        for t in d.triangles_of(Orientation::Left) {
            for k in RhombusKind::ALL {
                let p = t.partner(k);
                assert!(!p.is_left());
                assert_eq!(p.partner(k), t);
                let shared = t.corners().iter().filter(|c| p.corners().contains(c)).count();
                assert_eq!(shared, 2);
            }
        }
    }

    #[test]
    fn components_and_charges() {
        let d = dims(3, 3, 3);
        let l = TriTriple::left(0, -2, 0).unwrap();
        let rh = Region::new(d, [l, l.partner(RhombusKind::Horizontal)]).unwrap();
        let comps = rh.hole_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].charge, 0);

        // apex-to-apex bow tie
        let r = TriTriple::right(0, -2, -4).unwrap();
        assert!(!l.shares_edge(&r) && l.touches(&r));
        let bow = Region::new(d, [l, r]).unwrap();
        assert_eq!(bow.hole_components().len(), 1);

        let far_r = TriTriple::right(4, 0, 2).unwrap();
        let sep = Region::new(d, [TriTriple::left(-4, 0, -2).unwrap(), far_r]).unwrap();
        let mut charges: Vec<i64> = sep.hole_components().iter().map(|c| c.charge).collect();
        charges.sort();
        assert_eq!(charges, vec![-1, 1]);
    }

    #[test]
    fn closure_of_hexagon_is_identity() {
        let r = Region::hexagon(dims(2, 2, 2));
        assert_eq!(r.forced_closure().unwrap(), r);
    }

    #[test]
    fn closure_forces_boundary_neighbours() {
        let d = dims(2, 2, 2);
        // Removing a corner triangle leaves its neighbours with fewer options.
        let corner = d.triangles()[0];
        let partner = corner
            .partners()
            .into_iter()
            .find(|p| d.contains(p))
            .unwrap();
        let r = Region::new(d, [corner, partner]).unwrap();
        let closed = r.forced_closure().unwrap();
        assert!(closed.holes().is_superset(r.holes()));
        assert_eq!(closed.forced_closure().unwrap(), closed);
    }

    #[test]
    fn closure_reports_untileable() {
        let d = dims(1, 1, 1);
        // Removing two left triangles isolates a right one.
        let lefts = d.triangles_of(Orientation::Left);
        let r = Region::new(d, [lefts[0], lefts[1]]).unwrap();
        assert!(matches!(r.forced_closure(), Err(Error::Untileable(_))));
    }

    #[test]
    fn json_round_trip() {
        let spec: RegionSpec =
            serde_json::from_str(r#"{"a":2,"b":3,"c":4,"holes":[[3,-1,0,"R"],[3,-1,4,"L"]]}"#).unwrap();
        let r = Region::from_spec(&spec).unwrap();
        assert_eq!(r.to_spec(), spec);
    }
}
