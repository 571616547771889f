//! Closed forms: MacMahon's product, the LU factors of the pair path
//! matrix, and the entries of the inverse Kasteleyn matrix.
//!
//! Every quantity is exact. Factorials of negative integers only ever
//! appear in denominators, where they are read as `1/(-n)! = 0`; this is
//! what makes `L` lower- and `U` upper-triangular.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{binom, binom_doubled, factorial, RatMatrix};
use crate::lattice::{HexDims, Orientation, RhombusKind, TriTriple};
use crate::lgv_paths::{psi_in, LatticePoint};
use crate::par;

/// Largest `ab + bc + ca` for which [`k_matrix`] materialises `K`.
pub const K_MATRIX_LIMIT: usize = 400;

/// Number of tilings of the hole-free hexagon.
pub fn macmahon(a: i64, b: i64, c: i64) -> BigInt {
    if a <= 0 || b <= 0 || c <= 0 {
        return BigInt::one();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=a {
        for j in 1..=b {
            for k in 1..=c {
                num *= i + j + k - 1;
                den *= i + j + k - 2;
            }
        }
    }
    let q = BigRational::new(num, den);
    assert!(q.is_integer(), "MacMahon product is not integral");
    q.to_integer()
}

/// `prod(num!) / prod(den!)`, zero when a denominator argument is negative.
fn fact_ratio(num: &[i64], den: &[i64]) -> Result<BigRational> {
    if let Some(n) = num.iter().find(|&&n| n < 0) {
        return Err(Error::DomainError(format!("factorial of {n} in a numerator")));
    }
    if den.iter().any(|&d| d < 0) {
        return Ok(BigRational::zero());
    }
    let top = num.iter().fold(BigInt::one(), |acc, &n| acc * factorial(n as u64));
    let bottom = den.iter().fold(BigInt::one(), |acc, &d| acc * factorial(d as u64));
    Ok(BigRational::new(top, bottom))
}

fn alternating(exp: i64) -> BigRational {
    if exp.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn binom_q(n2: i64, k2: i64) -> Result<BigRational> {
    binom_doubled(n2, k2)
        .map(BigRational::from_integer)
        .map_err(|e| Error::ParityViolation(e.to_string()))
}

fn check_index(i: i64, what: &str) -> Result<()> {
    if i < 1 {
        return Err(Error::DomainError(format!("{what} index {i} must be at least 1")));
    }
    Ok(())
}

/// Entry `(i, j)` of the `a x a` block of `L`.
pub fn lu_a(b: i64, c: i64, i: i64, j: i64) -> Result<BigRational> {
    check_index(i, "row")?;
    check_index(j, "column")?;
    fact_ratio(
        &[c, i - 1, b + j - 1],
        &[j - 1, b + i - 1, i - j, c - i + j],
    )
}

/// Entry `j` of the last row of `L`; `r` is the image of the removed white triangle.
pub fn lu_b(dims: &HexDims, r: &LatticePoint, j: i64) -> Result<BigRational> {
    check_index(j, "column")?;
    let (a, b, c) = (dims.a, dims.b, dims.c);
    let mut acc = BigRational::zero();
    for v in 1..=j {
        let coeff = fact_ratio(
            &[b + j - 1, c + v - 1, b + j - v - 1],
            &[b - 1, v - 1, j - v, b + c + j - 1],
        )?;
        // binom(b/2 + c/2 - r_x - r_y, v - (a-c+1)/2 - r_x)
        let bin = binom_q(b + c - r.x2 - r.y2, 2 * v - (a - c + 1) - r.x2)?;
        acc += alternating(j - v) * coeff * bin;
    }
    Ok(acc)
}

/// Entry `(i, j)` of the `a x a` block of `U`.
pub fn lu_c(b: i64, c: i64, i: i64, j: i64) -> Result<BigRational> {
    check_index(i, "row")?;
    check_index(j, "column")?;
    fact_ratio(
        &[b, j - 1, b + c + i - 1],
        &[b + i - 1, c + j - 1, j - i, b + i - j],
    )
}

/// Entry `i` of the last column of `U`; `l` is the image of the removed black triangle.
pub fn lu_d(dims: &HexDims, l: &LatticePoint, i: i64) -> Result<BigRational> {
    check_index(i, "row")?;
    let (a, b, c) = (dims.a, dims.b, dims.c);
    let mut acc = BigRational::zero();
    for v in 1..=i {
        let coeff = fact_ratio(
            &[i - 1, b + v - 1, c + i - v - 1],
            &[c - 1, v - 1, b + i - 1, i - v],
        )?;
        // binom(b/2 + c/2 + l_x + l_y, (a+c+1)/2 + l_x - v)
        let bin = binom_q(b + c + l.x2 + l.y2, a + c + 1 + l.x2 - 2 * v)?;
        acc += alternating(i - v) * coeff * bin;
    }
    Ok(acc)
}

fn pair_points(dims: &HexDims, w: &TriTriple, b: &TriTriple) -> Result<(LatticePoint, LatticePoint)> {
    if w.orient() != Orientation::Right || b.orient() != Orientation::Left {
        return Err(Error::DomainError(format!(
            "expected a right-pointing and a left-pointing triangle, got {w} and {b}"
        )));
    }
    for t in [w, b] {
        if !dims.contains(t) {
            return Err(Error::OutOfBounds(*t));
        }
    }
    Ok((psi_in(dims, w)?, psi_in(dims, b)?))
}

/// The bottom-right entry of `U`:
/// `binom(l_x+l_y-r_x-r_y, l_x-r_x) - sum_v B(v) D(v)`.
pub fn u_corner(dims: &HexDims, r: &LatticePoint, l: &LatticePoint) -> Result<BigRational> {
    let mut acc = binom_q(l.x2 + l.y2 - r.x2 - r.y2, l.x2 - r.x2)?;
    for v in 1..=dims.a {
        acc -= lu_b(dims, r, v)? * lu_d(dims, l, v)?;
    }
    Ok(acc)
}

/// The factors `L` (unit lower-triangular) and `U` of the pair path matrix.
pub fn lu_factors(dims: &HexDims, w: &TriTriple, b: &TriTriple) -> Result<(RatMatrix, RatMatrix)> {
    let (r, l) = pair_points(dims, w, b)?;
    let a = dims.a;
    let n = a as usize + 1;
    let mut lower = RatMatrix::zeros(n, n);
    let mut upper = RatMatrix::zeros(n, n);
    for i in 1..=a {
        for j in 1..=a {
            lower.set(i as usize - 1, j as usize - 1, lu_a(dims.b, dims.c, i, j)?);
            upper.set(i as usize - 1, j as usize - 1, lu_c(dims.b, dims.c, i, j)?);
        }
    }
    for j in 1..=a {
        lower.set(n - 1, j as usize - 1, lu_b(dims, &r, j)?);
    }
    for i in 1..=a {
        upper.set(i as usize - 1, n - 1, lu_d(dims, &l, i)?);
    }
    lower.set(n - 1, n - 1, BigRational::one());
    upper.set(n - 1, n - 1, u_corner(dims, &r, &l)?);
    Ok((lower, upper))
}

/// `sum_{s=1}^{z} (-1)^{z-s} binom(v+s-1, s-1) binom(w+z-s-1, w-1)
///  binom(v/2 + w/2 + x + y, x - s + u/2 + w/2 + 1/2)`, with `x`, `y` doubled.
pub fn g_fn(u: i64, v: i64, w: i64, x2: i64, y2: i64, z: i64) -> Result<BigInt> {
    check_index(z, "summation")?;
    let mut acc = BigInt::zero();
    for s in 1..=z {
        let third = binom_doubled(v + w + x2 + y2, x2 - 2 * s + u + w + 1)
            .map_err(|e| Error::ParityViolation(e.to_string()))?;
        if third.is_zero() {
            continue;
        }
        let term = binom(v + s - 1, s - 1) * binom(w + z - s - 1, w - 1) * third;
        if (z - s) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// An entry of `K` together with the 1-based positions used in its sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KEntry {
    pub value: BigRational,
    /// `(i, j)`: position of the white triangle among all whites and of the
    /// black triangle among all blacks, in canonical order.
    pub sign_indices: (usize, usize),
}

/// The unsigned part of `K_{w,b}`:
/// `binom(j_x+j_y-i_x-i_y, j_x-i_x) - sum_t g(a,b,c,j_x,j_y,t) g(a,c,b,-i_y,-i_x,t)
///  / (binom(b+c+t-1, b+t-1) binom(b+t-1, t-1))`.
pub fn k_magnitude(dims: &HexDims, w: &TriTriple, b: &TriTriple) -> Result<BigRational> {
    let (i_pt, j_pt) = pair_points(dims, w, b)?;
    let (a, bb, c) = (dims.a, dims.b, dims.c);
    let mut acc = binom_q(
        j_pt.x2 + j_pt.y2 - i_pt.x2 - i_pt.y2,
        j_pt.x2 - i_pt.x2,
    )?;
    for t in 1..=a {
        let g1 = g_fn(a, bb, c, j_pt.x2, j_pt.y2, t)?;
        if g1.is_zero() {
            continue;
        }
        let g2 = g_fn(a, c, bb, -i_pt.y2, -i_pt.x2, t)?;
        let den = binom(bb + c + t - 1, bb + t - 1) * binom(bb + t - 1, t - 1);
        acc -= BigRational::new(g1 * g2, den);
    }
    Ok(acc)
}

fn position(list: &[TriTriple], t: &TriTriple) -> Result<usize> {
    list.binary_search(t)
        .map(|i| i + 1)
        .map_err(|_| Error::OutOfBounds(*t))
}

/// Vertex lists of a hexagon, for repeated `K` lookups.
#[derive(Clone, Debug)]
pub struct InverseKasteleyn {
    dims: HexDims,
    whites: Vec<TriTriple>,
    blacks: Vec<TriTriple>,
}

impl InverseKasteleyn {
    pub fn new(dims: HexDims) -> Self {
        InverseKasteleyn {
            dims,
            whites: dims.triangles_of(Orientation::Right),
            blacks: dims.triangles_of(Orientation::Left),
        }
    }

    pub fn dims(&self) -> HexDims {
        self.dims
    }

    pub fn whites(&self) -> &[TriTriple] {
        &self.whites
    }

    pub fn blacks(&self) -> &[TriTriple] {
        &self.blacks
    }

    pub fn entry(&self, w: &TriTriple, b: &TriTriple) -> Result<KEntry> {
        let i = position(&self.whites, w)?;
        let j = position(&self.blacks, b)?;
        let mag = k_magnitude(&self.dims, w, b)?;
        let value = if (i + j) % 2 == 0 { mag } else { -mag };
        Ok(KEntry {
            value,
            sign_indices: (i, j),
        })
    }

    /// `K` restricted to the given white rows and black columns.
    pub fn submatrix(&self, whites: &[TriTriple], blacks: &[TriTriple]) -> Result<RatMatrix> {
        let cells: Vec<(usize, usize)> = (0..whites.len())
            .flat_map(|i| (0..blacks.len()).map(move |j| (i, j)))
            .collect();
        let values = par::map(&cells, |&(i, j)| self.entry(&whites[i], &blacks[j]).map(|e| e.value))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let mut it = values.into_iter();
        Ok(RatMatrix::from_fn(whites.len(), blacks.len(), |_, _| it.next().unwrap())
            .with_labels(
                whites.iter().map(|t| t.to_string()).collect(),
                blacks.iter().map(|t| t.to_string()).collect(),
            ))
    }

    /// The full matrix, rows by whites and columns by blacks.
    pub fn matrix(&self) -> Result<RatMatrix> {
        let n = self.dims.per_color();
        if n > K_MATRIX_LIMIT {
            return Err(Error::TooLarge {
                what: "inverse Kasteleyn matrix",
                size: n,
                limit: K_MATRIX_LIMIT,
            });
        }
        self.submatrix(&self.whites, &self.blacks)
    }
}

/// A single entry of `K`.
pub fn k_entry(dims: &HexDims, w: &TriTriple, b: &TriTriple) -> Result<KEntry> {
    InverseKasteleyn::new(*dims).entry(w, b)
}

pub fn k_matrix(dims: &HexDims) -> Result<RatMatrix> {
    InverseKasteleyn::new(*dims).matrix()
}

/// Least common multiple of the summand denominators of `K` entries.
pub fn k_denominator_bound(dims: &HexDims) -> BigInt {
    use num_integer::Integer;
    (1..=dims.a).fold(BigInt::one(), |acc, t| {
        let d = binom(dims.b + dims.c + t - 1, dims.b + t - 1) * binom(dims.b + t - 1, t - 1);
        acc.lcm(&d.abs())
    })
}

/// Column signs that turn the 0/1 Kasteleyn matrix `A` into a gauge-equivalent
/// `A'` with `A' K = I`.
///
/// Multiplying a row or column of `A` by -1 keeps it a Kasteleyn matrix. The
/// sign needed for `K` is constant along each vertical column of triangles,
/// so it is stored per `l''`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KasteleynGauge {
    white: BTreeMap<i64, i8>,
    black: BTreeMap<i64, i8>,
}

impl KasteleynGauge {
    pub fn sign(&self, t: &TriTriple) -> i8 {
        let cols = if t.is_left() { &self.black } else { &self.white };
        cols.get(&t.doubled().2).copied().unwrap_or(1)
    }

    /// `(l'' doubled, sign)` for the white columns, left to right.
    pub fn white_columns(&self) -> impl Iterator<Item = (i64, i8)> + '_ {
        self.white.iter().map(|(k, v)| (*k, *v))
    }

    pub fn black_columns(&self) -> impl Iterator<Item = (i64, i8)> + '_ {
        self.black.iter().map(|(k, v)| (*k, *v))
    }
}

fn unit_sign(q: &BigRational) -> Option<i8> {
    if q.is_one() {
        Some(1)
    } else if (-q).is_one() {
        Some(-1)
    } else {
        None
    }
}

/// Derives the column gauge from a handful of `K` entries.
///
/// A black triangle in column `M` has its two leaning partners in white
/// column `M-2` and its horizontal partner in white column `M`. One
/// off-diagonal entry of `A' K` ties the signs of those two white columns,
/// and one diagonal entry fixes the sign of the black column.
pub fn kasteleyn_gauge(dims: &HexDims) -> Result<KasteleynGauge> {
    let ik = InverseKasteleyn::new(*dims);
    let white_cols: BTreeSet<i64> = ik.whites().iter().map(|t| t.doubled().2).collect();
    let mut black_cols: BTreeMap<i64, Vec<TriTriple>> = BTreeMap::new();
    for b in ik.blacks() {
        black_cols.entry(b.doubled().2).or_default().push(*b);
    }
    // (leaning partners, horizontal partner) contributions to (A K)_{b, target}
    let terms = |b: &TriTriple, target: &TriTriple| -> Result<(BigRational, BigRational)> {
        let mut lean = BigRational::zero();
        for kind in [RhombusKind::LeftLeaning, RhombusKind::RightLeaning] {
            let w = b.partner(kind);
            if dims.contains(&w) {
                lean += ik.entry(&w, target)?.value;
            }
        }
        let w = b.partner(RhombusKind::Horizontal);
        let horiz = if dims.contains(&w) {
            ik.entry(&w, target)?.value
        } else {
            BigRational::zero()
        };
        Ok((lean, horiz))
    };

    let mut white = BTreeMap::new();
    let mut black = BTreeMap::new();
    if let Some(&first) = white_cols.iter().next() {
        white.insert(first, 1i8);
    }
    for (&m, column) in &black_cols {
        let (left, right) = (m - 2, m);
        if white_cols.contains(&right) && white_cols.contains(&left) && !white.contains_key(&right) {
            let mut ratio = None;
            'search: for b in column {
                for t in ik.blacks() {
                    if t == b {
                        continue;
                    }
                    let (lean, horiz) = terms(b, t)?;
                    if !lean.is_zero() && !horiz.is_zero() {
                        ratio = Some((b, -lean / horiz));
                        break 'search;
                    }
                }
            }
            let (b, ratio) = ratio.ok_or_else(|| {
                Error::DomainError(format!("no entry of K fixes the sign of column {right}"))
            })?;
            let s = unit_sign(&ratio).ok_or_else(|| Error::SignInconsistency {
                first: format!("column {left}"),
                second: format!("column {right} via {b}: ratio {ratio}"),
            })?;
            white.insert(right, white[&left] * s);
        }
        let b = &column[0];
        let (lean, horiz) = terms(b, b)?;
        let sigma = |c: i64| BigRational::from_integer(white.get(&c).copied().unwrap_or(0).into());
        let diag = sigma(left) * lean + sigma(right) * horiz;
        let s = unit_sign(&diag).ok_or_else(|| Error::SignInconsistency {
            first: format!("diagonal at {b}"),
            second: format!("value {diag}"),
        })?;
        black.insert(m, s);
    }
    Ok(KasteleynGauge { white, black })
}
