//! Tiling counts by several independent routes.
//!
//! * `KasteleynDet`: `|det A|` for the dual graph of the region.
//! * `KenyonMinor`: MacMahon's product times `|det K_V|`, `V` the holes.
//! * `PathMatrix`: `|det P|` when the holes are one white and one black triangle.
//! * `Oracle`: brute-force placement, for small regions.
//!
//! Holes are first enlarged by their forced closure, which does not change
//! the number of tilings.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::closed_form::{kasteleyn_gauge, macmahon, InverseKasteleyn, KasteleynGauge};
use crate::error::{Error, Result};
use crate::exact_linalg::{signum, IntMatrix, RatMatrix};
use crate::lattice::{HexDims, Orientation, Region, TriTriple};
use crate::lgv_paths::path_matrix;
use crate::matching_graph::{classify_admissibility, dual_graph, Admissibility};
use crate::oracle::{oracle_count, ORACLE_LIMIT};
use crate::par;

/// Largest number of vertices per color for a direct Kasteleyn determinant.
pub const KASTELEYN_LIMIT: usize = 600;

/// Largest number of vertices per color for a full pair sweep.
pub const PAIR_SWEEP_LIMIT: usize = 75;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    KasteleynDet,
    KenyonMinor,
    PathMatrix,
    Oracle,
}

impl Route {
    pub const ALL: [Route; 4] = [
        Route::KasteleynDet,
        Route::KenyonMinor,
        Route::PathMatrix,
        Route::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::KasteleynDet => "kasteleyn_det",
            Route::KenyonMinor => "kenyon_minor",
            Route::PathMatrix => "path_matrix",
            Route::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "kasteleyn" | "kasteleyn_det" => Ok(Route::KasteleynDet),
            "kenyon" | "kenyon_minor" => Ok(Route::KenyonMinor),
            "path" | "path_matrix" => Ok(Route::PathMatrix),
            "oracle" => Ok(Route::Oracle),
            _ => Err(format!(
                "unknown route {s:?} (expected kasteleyn, kenyon, path or oracle)"
            )),
        }
    }
}

/// A count and the route that produced it.
///
/// `epsilon` is the sign relating the route's determinant to the count,
/// absent for the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub count: BigInt,
    pub route: Route,
    pub epsilon: Option<i8>,
}

impl CountResult {
    fn from_det(det: BigInt, route: Route) -> Self {
        let epsilon = Some(if det.is_zero() { 1 } else { signum(&det) });
        CountResult {
            count: det.abs(),
            route,
            epsilon,
        }
    }
}

impl Serialize for CountResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CountResult", 3)?;
        st.serialize_field("count", &self.count.to_string())?;
        st.serialize_field("route", &self.route)?;
        st.serialize_field("epsilon", &self.epsilon)?;
        st.end()
    }
}

#[derive(Clone, Debug, Default)]
pub struct CountOptions {
    /// Force a route instead of the default choice.
    pub route: Option<Route>,
    /// Run every applicable route and the oracle, and require agreement.
    pub verify: bool,
    /// Accept hole sets that are not admissibility inducing and report the
    /// signed determinant of the Kasteleyn matrix.
    pub signed: bool,
}

fn kasteleyn_det(region: &Region) -> Result<BigInt> {
    let g = dual_graph(region);
    if !g.is_balanced() {
        return Ok(BigInt::zero());
    }
    let n = g.blacks().len();
    if n > KASTELEYN_LIMIT {
        return Err(Error::TooLarge {
            what: "Kasteleyn matrix",
            size: n,
            limit: KASTELEYN_LIMIT,
        });
    }
    if n == 0 {
        return Ok(BigInt::from(1));
    }
    g.kasteleyn_matrix().det()
}

/// The hole set after forced closure, or `None` if the region has no tiling.
fn closed(region: &Region) -> Result<Option<Region>> {
    if !region.is_balanced() {
        return Ok(None);
    }
    match region.forced_closure() {
        Ok(r) => Ok(Some(r)),
        Err(Error::Untileable(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn require_admissible(region: &Region) -> Result<()> {
    match classify_admissibility(region) {
        Admissibility::Neither => Err(Error::NotAdmissible),
        _ => Ok(()),
    }
}

/// Number of tilings as `|det A|` of the (closed) region's dual graph.
pub fn count_kasteleyn(region: &Region) -> Result<CountResult> {
    require_admissible(region)?;
    match closed(region)? {
        None => Ok(CountResult {
            count: BigInt::zero(),
            route: Route::KasteleynDet,
            epsilon: None,
        }),
        Some(r) => Ok(CountResult::from_det(kasteleyn_det(&r)?, Route::KasteleynDet)),
    }
}

/// The signed determinant of the Kasteleyn matrix of `region`, canonical order.
///
/// Equals plus or minus the number of tilings only for admissibility
/// inducing hole sets.
pub fn signed_kasteleyn_det(region: &Region) -> Result<BigInt> {
    kasteleyn_det(region)
}

/// `M(H) * |det K_V|`: the number of tilings of the hexagon with `v` removed.
pub fn count_kenyon(dims: &HexDims, v: &[TriTriple]) -> Result<CountResult> {
    let det = kenyon_det(dims, v)?;
    let scaled = det * BigRational::from_integer(macmahon(dims.a, dims.b, dims.c));
    if !scaled.is_integer() {
        return Err(Error::DomainError(format!(
            "MacMahon times det K_V is not an integer: {scaled}"
        )));
    }
    Ok(CountResult::from_det(scaled.to_integer(), Route::KenyonMinor))
}

/// `det K_V`, rows the white and columns the black triangles of `v`, both
/// in canonical order.
pub fn kenyon_det(dims: &HexDims, v: &[TriTriple]) -> Result<BigRational> {
    let (blacks, whites) = split_colors(dims, v)?;
    if blacks.is_empty() {
        return Ok(BigRational::from_integer(1.into()));
    }
    let k = kenyon_minor(dims, &whites, &blacks)?;
    k.det()
}

/// The submatrix `K_V`.
pub fn kenyon_minor(dims: &HexDims, whites: &[TriTriple], blacks: &[TriTriple]) -> Result<RatMatrix> {
    InverseKasteleyn::new(*dims).submatrix(whites, blacks)
}

fn split_colors(dims: &HexDims, v: &[TriTriple]) -> Result<(Vec<TriTriple>, Vec<TriTriple>)> {
    let mut blacks = Vec::new();
    let mut whites = Vec::new();
    for t in v {
        if !dims.contains(t) {
            return Err(Error::OutOfBounds(*t));
        }
        match t.orient() {
            Orientation::Left => blacks.push(*t),
            Orientation::Right => whites.push(*t),
        }
    }
    if blacks.len() != whites.len() {
        return Err(Error::UnbalancedColors {
            blacks: blacks.len(),
            whites: whites.len(),
        });
    }
    blacks.sort();
    blacks.dedup();
    whites.sort();
    whites.dedup();
    if blacks.len() + whites.len() != v.len() {
        let dup = v
            .iter()
            .enumerate()
            .find(|(i, t)| v[..*i].contains(t))
            .map(|(_, t)| *t)
            .expect("a duplicate exists");
        return Err(Error::Duplicate(dup));
    }
    Ok((blacks, whites))
}

/// `|det P|` for the hexagon with the white triangle `w` and black triangle `b` removed.
pub fn count_pathmatrix(dims: &HexDims, w: &TriTriple, b: &TriTriple) -> Result<CountResult> {
    Ok(CountResult::from_det(path_matrix(dims, w, b)?.det()?, Route::PathMatrix))
}

pub fn count_oracle(region: &Region) -> Result<CountResult> {
    Ok(CountResult {
        count: oracle_count(region)?.into(),
        route: Route::Oracle,
        epsilon: None,
    })
}

fn oracle_applies(region: &Region) -> bool {
    let t = region.triangles();
    let lefts = t.iter().filter(|x| x.is_left()).count();
    lefts.max(t.len() - lefts) <= ORACLE_LIMIT
}

/// The single removed pair, if the holes are exactly one white and one black triangle.
fn single_pair(region: &Region) -> Option<(TriTriple, TriTriple)> {
    let h: Vec<&TriTriple> = region.holes().iter().collect();
    match h.as_slice() {
        [x, y] if x.is_left() != y.is_left() => {
            if x.is_left() {
                Some((**y, **x))
            } else {
                Some((**x, **y))
            }
        }
        _ => None,
    }
}

fn run_route(route: Route, region: &Region) -> Result<CountResult> {
    let dims = region.dims();
    match route {
        Route::KasteleynDet => Ok(CountResult::from_det(kasteleyn_det(region)?, route)),
        Route::KenyonMinor => {
            let v: Vec<TriTriple> = region.holes().iter().copied().collect();
            count_kenyon(&dims, &v)
        }
        Route::PathMatrix => match single_pair(region) {
            Some((w, b)) => count_pathmatrix(&dims, &w, &b),
            None => Err(Error::DomainError(
                "the path matrix route needs exactly one white and one black hole".into(),
            )),
        },
        Route::Oracle => count_oracle(region),
    }
}

fn default_route(region: &Region) -> Route {
    if region.holes().len() < region.dims().per_color() {
        Route::KenyonMinor
    } else {
        Route::KasteleynDet
    }
}

/// Counts the tilings of `region`.
///
/// Without `signed`, hole sets that are not admissibility inducing are
/// rejected with [`Error::NotAdmissible`]. With it, such regions report the
/// signed Kasteleyn determinant instead (route `KasteleynDet`, no epsilon).
pub fn count(region: &Region, opts: &CountOptions) -> Result<CountResult> {
    if classify_admissibility(region) == Admissibility::Neither {
        if !opts.signed {
            return Err(Error::NotAdmissible);
        }
        return Ok(CountResult {
            count: signed_kasteleyn_det(region)?,
            route: Route::KasteleynDet,
            epsilon: None,
        });
    }
    let Some(closure) = closed(region)? else {
        let route = opts.route.unwrap_or(Route::KasteleynDet);
        if opts.verify && oracle_applies(region) {
            let o = count_oracle(region)?;
            if !o.count.is_zero() {
                return Err(disagreement(region, &[(Route::KasteleynDet, BigInt::zero()), (Route::Oracle, o.count)]));
            }
        }
        return Ok(CountResult {
            count: BigInt::zero(),
            route,
            epsilon: None,
        });
    };
    let route = opts.route.unwrap_or_else(|| default_route(&closure));
    let run = |r: Route| match r {
        Route::Oracle => count_oracle(region),
        Route::PathMatrix if single_pair(region).is_some() => run_route(r, region),
        _ => run_route(r, &closure),
    };
    let primary = run(route)?;
    if opts.verify {
        let mut seen = vec![(primary.route, primary.count.clone())];
        for r in Route::ALL {
            if r == primary.route {
                continue;
            }
            let applies = match r {
                Route::PathMatrix => single_pair(region).is_some() || single_pair(&closure).is_some(),
                Route::Oracle => oracle_applies(region),
                Route::KasteleynDet => closure.dims().per_color() <= KASTELEYN_LIMIT,
                Route::KenyonMinor => true,
            };
            if !applies {
                continue;
            }
            seen.push((r, run(r)?.count));
        }
        if seen.iter().any(|(_, c)| *c != primary.count) {
            return Err(disagreement(region, &seen));
        }
    }
    Ok(primary)
}

fn disagreement(region: &Region, seen: &[(Route, BigInt)]) -> Error {
    let routes: Vec<serde_json::Value> = seen
        .iter()
        .map(|(r, c)| serde_json::json!({"route": r, "count": c.to_string()}))
        .collect();
    Error::RouteDisagreement(
        serde_json::json!({"region": region.to_spec(), "routes": routes}).to_string(),
    )
}

/// Kasteleyn matrix of the full hexagon with the column gauge applied.
pub fn gauged_kasteleyn_matrix(dims: &HexDims) -> Result<(IntMatrix, KasteleynGauge)> {
    let gauge = cached_gauge(dims)?;
    let g = dual_graph(&Region::hexagon(*dims));
    Ok((g.signed_kasteleyn_matrix(|t| gauge.sign(t)), gauge))
}

fn cached_gauge(dims: &HexDims) -> Result<KasteleynGauge> {
    static CACHE: OnceLock<Mutex<HashMap<HexDims, KasteleynGauge>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().unwrap().get(dims) {
        return Ok(g.clone());
    }
    let g = kasteleyn_gauge(dims)?;
    cache.lock().unwrap().insert(*dims, g.clone());
    Ok(g)
}

/// Both determinants for one removed pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDeterminant {
    pub white: TriTriple,
    pub black: TriTriple,
    /// `det A'` of the hexagon minus the pair, `A'` the gauged Kasteleyn matrix.
    pub kasteleyn: BigInt,
    /// `det P` for the pair.
    pub path: BigInt,
}

/// `det A'_{G \ {b, w}}` and `det P(w, b)` for every pair.
pub fn pair_determinants(dims: &HexDims) -> Result<Vec<PairDeterminant>> {
    if dims.per_color() > PAIR_SWEEP_LIMIT {
        return Err(Error::TooLarge {
            what: "pair sweep (triangles per orientation)",
            size: dims.per_color(),
            limit: PAIR_SWEEP_LIMIT,
        });
    }
    let (a, _) = gauged_kasteleyn_matrix(dims)?;
    let blacks = dims.triangles_of(Orientation::Left);
    let whites = dims.triangles_of(Orientation::Right);
    let cells: Vec<(usize, usize)> = (0..blacks.len())
        .flat_map(|bi| (0..whites.len()).map(move |wi| (bi, wi)))
        .collect();
    par::map(&cells, |&(bi, wi)| {
        let minor = a.minor_matrix(bi, wi);
        let kasteleyn = if minor.rows() == 0 {
            BigInt::from(1)
        } else {
            minor.det()?
        };
        let path = path_matrix(dims, &whites[wi], &blacks[bi])?.det()?;
        Ok(PairDeterminant {
            white: whites[wi],
            black: blacks[bi],
            kasteleyn,
            path,
        })
    })
    .into_iter()
    .collect()
}

/// The single sign with `det P(w, b) = epsilon * det A'_{G \ {b, w}}` for all pairs.
pub fn sign_from_pairs(pairs: &[PairDeterminant]) -> Result<i8> {
    let mut first: Option<(i8, &PairDeterminant)> = None;
    for p in pairs {
        if p.kasteleyn.abs() != p.path.abs() {
            return Err(Error::RouteDisagreement(format!(
                "pair ({}, {}): |det A'| = {} but |det P| = {}",
                p.white,
                p.black,
                p.kasteleyn.abs(),
                p.path.abs()
            )));
        }
        if p.path.is_zero() {
            continue;
        }
        let eps = signum(&p.path) * signum(&p.kasteleyn);
        match first {
            None => first = Some((eps, p)),
            Some((e, q)) if e != eps => {
                return Err(Error::SignInconsistency {
                    first: format!("({}, {}) gives {e}", q.white, q.black),
                    second: format!("({}, {}) gives {eps}", p.white, p.black),
                })
            }
            _ => {}
        }
    }
    Ok(first.map_or(1, |(e, _)| e))
}

/// Calibrated sign relating pair path matrices to Kasteleyn minors, cached per hexagon.
pub fn calibrate_sign(dims: &HexDims) -> Result<i8> {
    static CACHE: OnceLock<Mutex<HashMap<HexDims, i8>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&e) = cache.lock().unwrap().get(dims) {
        return Ok(e);
    }
    let eps = sign_from_pairs(&pair_determinants(dims)?)?;
    cache.lock().unwrap().insert(*dims, eps);
    Ok(eps)
}

/// The sign with `A' K = epsilon I`, checked on every entry.
pub fn inverse_sign(dims: &HexDims) -> Result<i8> {
    let (a, _) = gauged_kasteleyn_matrix(dims)?;
    let k = crate::closed_form::k_matrix(dims)?;
    let prod = a.to_rational().mul(&k);
    let n = prod.rows();
    let eps = prod.get(0, 0).clone();
    let unit = BigRational::from_integer(1.into());
    if eps != unit && eps != -unit.clone() {
        return Err(Error::SignInconsistency {
            first: "diagonal entry 1".into(),
            second: format!("value {eps}"),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { eps.clone() } else { Zero::zero() };
            if *prod.get(i, j) != want {
                return Err(Error::SignInconsistency {
                    first: format!("expected {want} at ({}, {})", i + 1, j + 1),
                    second: format!("found {}", prod.get(i, j)),
                });
            }
        }
    }
    Ok(if eps == unit { 1 } else { -1 })
}
