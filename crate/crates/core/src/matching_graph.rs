//! The bipartite dual graph of a region and its Kasteleyn matrix.
//!
//! Black vertices are left-pointing triangles, white vertices right-pointing
//! ones, both listed in canonical triangle order. Directing every edge from
//! black to white is already an admissible orientation for hexagonal
//! sub-graphs, so the Kasteleyn matrix is the plain 0/1 bi-adjacency matrix.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact_linalg::IntMatrix;
use crate::lattice::{HexDims, Orientation, Region, TriTriple};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    dims: HexDims,
    blacks: Vec<TriTriple>,
    whites: Vec<TriTriple>,
    /// `(black index, white index)`, sorted.
    edges: Vec<(usize, usize)>,
}

impl DualGraph {
    fn build(dims: HexDims, blacks: Vec<TriTriple>, whites: Vec<TriTriple>) -> Self {
        let white_at: HashMap<TriTriple, usize> =
            whites.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let mut edges = Vec::new();
        for (bi, b) in blacks.iter().enumerate() {
            let mut row: Vec<usize> = b
                .partners()
                .iter()
                .filter_map(|p| white_at.get(p).copied())
                .collect();
            row.sort_unstable();
            edges.extend(row.into_iter().map(|wi| (bi, wi)));
        }
        DualGraph {
            dims,
            blacks,
            whites,
            edges,
        }
    }

    pub fn dims(&self) -> HexDims {
        self.dims
    }

    pub fn blacks(&self) -> &[TriTriple] {
        &self.blacks
    }

    pub fn whites(&self) -> &[TriTriple] {
        &self.whites
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn black_index(&self, t: &TriTriple) -> Option<usize> {
        self.blacks.binary_search(t).ok()
    }

    pub fn white_index(&self, t: &TriTriple) -> Option<usize> {
        self.whites.binary_search(t).ok()
    }

    pub fn is_balanced(&self) -> bool {
        self.blacks.len() == self.whites.len()
    }

    /// Degree of each black vertex.
    pub fn black_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.blacks.len()];
        for &(b, _) in &self.edges {
            deg[b] += 1;
        }
        deg
    }

    /// Drops the listed triangles and their edges; surviving vertices keep
    /// their relative order, so indices above a removed one shift down by one.
    pub fn remove_vertices(&self, v: &[TriTriple]) -> Result<DualGraph> {
        let mut gone = BTreeSet::new();
        for t in v {
            let present = match t.orient() {
                Orientation::Left => self.black_index(t).is_some(),
                Orientation::Right => self.white_index(t).is_some(),
            };
            if !present {
                return Err(Error::VertexNotPresent(*t));
            }
            gone.insert(*t);
        }
        let keep = |list: &[TriTriple]| -> Vec<TriTriple> {
            list.iter().filter(|t| !gone.contains(t)).copied().collect()
        };
        Ok(DualGraph::build(self.dims, keep(&self.blacks), keep(&self.whites)))
    }

    /// Bi-adjacency matrix, rows indexed by blacks and columns by whites.
    pub fn kasteleyn_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.blacks.len(), self.whites.len());
        for &(b, w) in &self.edges {
            m.set(b, w, BigInt::one());
        }
        self.labelled(m)
    }

    /// Kasteleyn matrix with entry `(b, w)` multiplied by `sign(b) * sign(w)`.
    pub fn signed_kasteleyn_matrix(&self, sign: impl Fn(&TriTriple) -> i8) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.blacks.len(), self.whites.len());
        for &(b, w) in &self.edges {
            let s = sign(&self.blacks[b]) * sign(&self.whites[w]);
            m.set(b, w, BigInt::from(s));
        }
        self.labelled(m)
    }

    fn labelled(&self, m: IntMatrix) -> IntMatrix {
        m.with_labels(
            self.blacks.iter().map(|t| t.to_string()).collect(),
            self.whites.iter().map(|t| t.to_string()).collect(),
        )
    }
}

/// The dual graph of `region`, vertices in canonical order.
pub fn dual_graph(region: &Region) -> DualGraph {
    let (blacks, whites): (Vec<TriTriple>, Vec<TriTriple>) =
        region.triangles().into_iter().partition(|t| t.is_left());
    DualGraph::build(region.dims(), blacks, whites)
}

pub fn kasteleyn_matrix(g: &DualGraph) -> IntMatrix {
    g.kasteleyn_matrix()
}

pub fn remove_vertices(g: &DualGraph, v: &[TriTriple]) -> Result<DualGraph> {
    g.remove_vertices(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Admissibility {
    /// Removing the holes keeps the black-to-white orientation admissible.
    Preserving,
    /// Preserving once forced rhombi are removed as well.
    Inducing,
    Neither,
}

/// Whether the hole set itself keeps every bounded face admissible.
///
/// A component that does not reach the outer boundary merges the faces
/// around it into one bounded face, which stays admissible exactly when
/// the component removes black and white vertices of equal parity. A
/// component with a corner on the outer boundary merges into the unbounded
/// face and imposes no condition.
pub fn holes_preserve_admissibility(region: &Region) -> bool {
    region
        .hole_components()
        .iter()
        .filter(|c| !c.touches_boundary)
        .all(|c| c.lefts() % 2 == c.rights() % 2)
}

pub fn classify_admissibility(region: &Region) -> Admissibility {
    if holes_preserve_admissibility(region) {
        return Admissibility::Preserving;
    }
    match region.forced_closure() {
        Ok(closed) if holes_preserve_admissibility(&closed) => Admissibility::Inducing,
        _ => Admissibility::Neither,
    }
}
