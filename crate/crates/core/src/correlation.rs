//! Ratios `M(H_n \ V) / M(H_n)` for a fixed hole set in growing hexagons,
//! and power-law fits of how they depend on hole separation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::counting::kenyon_det;
use crate::error::{Error, Result};
use crate::lattice::{HexDims, Region, TriTriple};
use crate::matching_graph::{classify_admissibility, Admissibility};
use crate::par;

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationPoint {
    pub n: i64,
    /// Largest distance between centroids of two hole components, in unit
    /// triangle side lengths; zero for a single component.
    pub separation: f64,
    /// `M(H_n \ V) / M(H_n)`, which equals `|det K_V|`.
    pub ratio: BigRational,
    /// `ratio` divided by the product of the ratios of each component alone.
    pub normalized: Option<BigRational>,
}

impl CorrelationPoint {
    pub fn csv_header() -> &'static str {
        "n,separation,ratio_numerator,ratio_denominator"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.6},{},{}",
            self.n,
            self.separation,
            self.ratio.numer(),
            self.ratio.denom()
        )
    }
}

fn separation(region: &Region) -> f64 {
    let cents: Vec<(f64, f64)> = region.hole_components().iter().map(|c| c.centroid()).collect();
    let mut best = 0.0f64;
    for (i, p) in cents.iter().enumerate() {
        for q in &cents[i + 1..] {
            best = best.max(((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt());
        }
    }
    best
}

/// The hole set to feed into `K_V`: the holes themselves when they keep the
/// orientation admissible, their forced closure when that does.
fn kenyon_holes(region: &Region) -> Result<Option<Vec<TriTriple>>> {
    match classify_admissibility(region) {
        Admissibility::Preserving => Ok(Some(region.holes().iter().copied().collect())),
        Admissibility::Inducing => match region.forced_closure() {
            Ok(c) => Ok(Some(c.holes().iter().copied().collect())),
            Err(Error::Untileable(_)) => Ok(None),
            Err(e) => Err(e),
        },
        Admissibility::Neither => Err(Error::NotAdmissible),
    }
}

fn abs_ratio(dims: &HexDims, v: &[TriTriple]) -> Result<BigRational> {
    Ok(kenyon_det(dims, v)?.abs())
}

/// The correlation point for `region`, labelled with scale `n`.
pub fn correlation_point(region: &Region, n: i64) -> Result<CorrelationPoint> {
    if !region.is_balanced() {
        return Err(Error::UnbalancedColors {
            blacks: region.holes().iter().filter(|t| t.is_left()).count(),
            whites: region.holes().iter().filter(|t| !t.is_left()).count(),
        });
    }
    let dims = region.dims();
    let ratio = match kenyon_holes(region)? {
        Some(v) => abs_ratio(&dims, &v)?,
        None => BigRational::zero(),
    };
    let comps = region.hole_components();
    let normalized = if comps.len() >= 2 && !ratio.is_zero() {
        let mut denom = BigRational::one();
        for c in &comps {
            if c.lefts() != c.rights() {
                denom = BigRational::zero();
                break;
            }
            let single = Region::new(dims, c.triangles.iter().copied())?;
            denom *= match kenyon_holes(&single)? {
                Some(v) => abs_ratio(&dims, &v)?,
                None => BigRational::zero(),
            };
        }
        (!denom.is_zero()).then(|| &ratio / denom)
    } else {
        None
    };
    Ok(CorrelationPoint {
        n,
        separation: separation(region),
        ratio,
        normalized,
    })
}

/// Correlation points of `holes` in `H_{n a, n b, n c}` for each `n` in `ns`.
///
/// Scales at which a hole has the wrong label parity or lies outside the
/// hexagon are skipped; if every scale is skipped the result is
/// [`Error::ParityViolation`].
pub fn correlation_sequence(
    base: &HexDims,
    holes: &[TriTriple],
    ns: impl IntoIterator<Item = i64>,
) -> Result<Vec<CorrelationPoint>> {
    let ns: Vec<i64> = ns.into_iter().collect();
    let regions: Vec<(i64, Region)> = ns
        .iter()
        .copied()
        .filter_map(|n| {
            let dims = base.scaled(n).ok()?;
            match Region::new(dims, holes.iter().copied()) {
                Ok(r) => Some(Ok((n, r))),
                Err(Error::InconsistentTriple { .. }) | Err(Error::OutOfBounds(_)) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<_>>()?;
    if regions.is_empty() && !ns.is_empty() {
        return Err(Error::ParityViolation(format!(
            "the holes fit none of the scales {:?} of {base}",
            ns
        )));
    }
    par::map(&regions, |(n, r)| correlation_point(r, *n))
        .into_iter()
        .collect()
}

/// Correlation points for several hole sets in one hexagon.
pub fn correlation_at(dims: &HexDims, n: i64, hole_sets: &[Vec<TriTriple>]) -> Result<Vec<CorrelationPoint>> {
    par::map(hole_sets, |v| {
        let r = Region::new(*dims, v.iter().copied())?;
        correlation_point(&r, n)
    })
    .into_iter()
    .collect()
}

/// Least-squares line through `(ln separation, ln ratio)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    pub points: usize,
}

/// Fits `ratio ~ exp(intercept) * separation^slope`, using the normalized
/// ratio where one is available.
pub fn fit_exponent(points: &[CorrelationPoint]) -> Result<PowerFit> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.separation > 0.0)
        .filter_map(|p| {
            let r = p.normalized.as_ref().unwrap_or(&p.ratio);
            let v = r.to_f64()?;
            (v > 0.0).then(|| (p.separation.ln(), v.ln()))
        })
        .collect();
    if xy.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "{} usable points, need at least 3",
            xy.len()
        )));
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx < 1e-12 {
        return Err(Error::DegenerateFit("fewer than two distinct separations".into()));
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xy
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(PowerFit {
        slope,
        intercept,
        residual,
        points: xy.len(),
    })
}

/// Two horizontal rhombi on the vertical axis of a hexagon whose labels are
/// integers, `distance` rows apart. `distance` must be even.
pub fn axis_rhombus_pair(distance: i64) -> Result<Vec<TriTriple>> {
    if distance % 2 != 0 || distance <= 0 {
        return Err(Error::DomainError(format!(
            "rhombus distance {distance} must be a positive even number"
        )));
    }
    let mut v = Vec::new();
    for k in [-distance / 2, distance / 2] {
        v.extend(axis_rhombus(k)?);
    }
    Ok(v)
}

/// The horizontal rhombus whose left half is `(k, -1-k, 0)`.
pub fn axis_rhombus(k: i64) -> Result<[TriTriple; 2]> {
    Ok([
        TriTriple::left(2 * k, 2 * (-1 - k), 0)?,
        TriTriple::right(2 * k + 2, -2 * k, 0)?,
    ])
}

/// `BigInt` counterpart of a ratio, for callers that want `M(H \ V)`.
pub fn ratio_to_count(ratio: &BigRational, dims: &HexDims) -> Option<BigInt> {
    let c = ratio * BigRational::from_integer(crate::closed_form::macmahon(dims.a, dims.b, dims.c));
    c.is_integer().then(|| c.to_integer())
}
