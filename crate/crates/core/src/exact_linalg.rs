//! Exact integer and rational matrix kernels.

use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest matrix accepted by [`permanent_small`].
pub const PERMANENT_LIMIT: usize = 14;

static FACTORIALS: RwLock<Vec<BigInt>> = RwLock::new(Vec::new());

/// `n!` for `n >= 0`, memoised process-wide.
pub fn factorial(n: u64) -> BigInt {
    let n = n as usize;
    {
        let table = FACTORIALS.read().expect("factorial cache poisoned");
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = FACTORIALS.write().expect("factorial cache poisoned");
    if table.is_empty() {
        table.push(BigInt::one());
    }
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigInt::from(k);
        table.push(next);
    }
    table[n].clone()
}

/// Binomial coefficient with the lattice-path convention: `n!/(k!(n-k)!)`
/// when `0 <= k <= n`, otherwise zero (including every negative `n`).
pub fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    // multiplicative form keeps small cases cheap
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// [`binom`] on doubled arguments. Both must be even.
pub fn binom_doubled(n2: i64, k2: i64) -> Result<BigInt> {
    if n2.rem_euclid(2) != 0 {
        return Err(Error::HalfIntegerArgument(n2));
    }
    if k2.rem_euclid(2) != 0 {
        return Err(Error::HalfIntegerArgument(k2));
    }
    Ok(binom(n2 / 2, k2 / 2))
}

/// Dense row-major matrix with optional row and column labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

pub type IntMatrix = BigMatrix<BigInt>;
pub type RatMatrix = BigMatrix<BigRational>;

impl<T: Clone + Zero> BigMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BigMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        BigMatrix {
            rows,
            cols,
            data,
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        BigMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Self {
        assert_eq!(rows.len(), self.rows);
        assert_eq!(cols.len(), self.cols);
        self.row_labels = Some(rows);
        self.col_labels = Some(cols);
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = BigMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone());
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    /// Sub-matrix keeping the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = BigMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        });
        if let Some(rl) = &self.row_labels {
            m.row_labels = Some(rows.iter().map(|&i| rl[i].clone()).collect());
        }
        if let Some(cl) = &self.col_labels {
            m.col_labels = Some(cols.iter().map(|&j| cl[j].clone()).collect());
        }
        m
    }

    /// Deletes one row and one column (0-based), keeping the relative order of the rest.
    pub fn minor_matrix(&self, row: usize, col: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != col).collect();
        self.select(&rows, &cols)
    }
}

impl<T> BigMatrix<T>
where
    T: Clone + Zero + One + std::ops::Mul<Output = T> + std::ops::Add<Output = T>,
{
    pub fn identity(n: usize) -> Self {
        BigMatrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        BigMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self.get(i, k).clone() * rhs.get(k, j).clone()
            })
        })
    }
}

impl IntMatrix {
    pub fn to_rational(&self) -> RatMatrix {
        BigMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| BigRational::from_integer(v.clone())).collect(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination; every division is exact.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(bareiss(self.rows, self.data.clone()))
    }
}

impl RatMatrix {
    /// Exact determinant: rows are scaled to integers, then eliminated fraction-free.
    pub fn det(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            let row = self.row(i);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            for v in row {
                data.push(v.numer() * (&lcm / v.denom()));
            }
            scale *= lcm;
        }
        Ok(BigRational::new(bareiss(n, data), scale))
    }

    /// Integer matrix if every entry has denominator one.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let data = self
            .data
            .iter()
            .map(|v| v.is_integer().then(|| v.to_integer()))
            .collect::<Option<Vec<_>>>()?;
        Some(BigMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        })
    }
}

fn bareiss(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                Some(r) => {
                    for j in 0..n {
                        a.swap(k * n + j, r * n + j);
                    }
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let lead = a[i * n + k].clone();
            for j in k + 1..n {
                let v = (&a[i * n + j] * &pivot - &lead * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Exact determinant of a rational matrix.
pub fn det_exact(m: &RatMatrix) -> Result<BigRational> {
    m.det()
}

/// Entry `(i, j)` (1-based) of `m^{-1}`, as `(-1)^{i+j} det(m without row j, column i) / det(m)`.
pub fn cramer_entry(m: &RatMatrix, i: usize, j: usize) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::IndexOutOfRange {
            row: i,
            col: j,
            size: n,
        });
    }
    let det = m.det()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let minor = m.minor_matrix(j - 1, i - 1).det()?;
    let signed = if (i + j).is_multiple_of(2) { minor } else { -minor };
    Ok(signed / det)
}

/// Permanent by Ryser's inclusion-exclusion formula, for oracle use on small matrices.
pub fn permanent_small(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n > PERMANENT_LIMIT {
        return Err(Error::TooLarge {
            what: "permanent",
            size: n,
            limit: PERMANENT_LIMIT,
        });
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    // Gray-code walk over column subsets; row_sums tracks sum over chosen columns.
    let mut row_sums = vec![BigInt::zero(); n];
    let mut total = BigInt::zero();
    let mut gray: u32 = 0;
    for step in 1u32..(1 << n) {
        let next = step ^ (step >> 1);
        let flipped = (gray ^ next).trailing_zeros() as usize;
        let adding = next & (1 << flipped) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if adding {
                *s += m.get(i, flipped);
            } else {
                *s -= m.get(i, flipped);
            }
        }
        gray = next;
        let prod = row_sums.iter().fold(BigInt::one(), |acc, s| acc * s);
        if (n - next.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// Sign of a nonzero integer as `+1` / `-1`, `0` for zero.
pub fn signum(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

impl<T: fmt::Display> fmt::Display for BigMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if let Some(rl) = &self.row_labels {
                write!(f, "{}: ", rl[i])?;
            }
            let cells: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Leibniz expansion, independent of elimination.
    fn det_leibniz(m: &IntMatrix) -> BigInt {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.rows();
        perms(n)
            .into_iter()
            .map(|p| {
                let inv = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let prod = (0..n).fold(BigInt::one(), |acc, i| acc * m.get(i, p[i]));
                if inv % 2 == 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    fn perm_brute(m: &IntMatrix) -> BigInt {
        fn rec(m: &IntMatrix, row: usize, used: &mut Vec<bool>) -> BigInt {
            if row == m.rows() {
                return BigInt::one();
            }
            let mut acc = BigInt::zero();
            for j in 0..m.cols() {
                if !used[j] && !m.get(row, j).is_zero() {
                    used[j] = true;
                    acc += m.get(row, j) * rec(m, row + 1, used);
                    used[j] = false;
                }
            }
            acc
        }
        rec(m, 0, &mut vec![false; m.cols()])
    }

    #[test]
    fn binom_convention() {
        assert_eq!(binom_doubled(8, 4).unwrap(), BigInt::from(6));
        assert_eq!(binom(3, 5), BigInt::zero());
        assert_eq!(binom(-1, 0), BigInt::zero());
        assert_eq!(binom(0, 0), BigInt::one());
        assert_eq!(binom(5, -1), BigInt::zero());
        assert_eq!(binom_doubled(3, 2), Err(Error::HalfIntegerArgument(3)));
        assert_eq!(binom(60, 30).to_string(), "118264581564861424");
    }

    #[test]
    fn factorial_cache() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(20).to_string(), "2432902008176640000");
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(IntMatrix::identity(3).det().unwrap(), BigInt::one());
        assert_eq!(int(vec![vec![1, 1], vec![1, 1]]).det().unwrap(), BigInt::zero());
        assert_eq!(int(vec![vec![0, 1], vec![1, 0]]).det().unwrap(), BigInt::from(-1));
        assert_eq!(IntMatrix::zeros(0, 0).det().unwrap(), BigInt::one());
        assert!(matches!(
            IntMatrix::zeros(2, 3).det(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        let r = RatMatrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]]);
        assert_eq!(r.det().unwrap(), q(1, 10) - q(1, 12));
    }

    #[test]
    fn cramer_small_cases() {
        let id = RatMatrix::identity(3);
        assert_eq!(cramer_entry(&id, 1, 1).unwrap(), q(1, 1));
        let d = RatMatrix::from_rows(vec![vec![q(2, 1), q(0, 1)], vec![q(0, 1), q(4, 1)]]);
        assert_eq!(cramer_entry(&d, 2, 2).unwrap(), q(1, 4));
        let sing = RatMatrix::from_rows(vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]]);
        assert_eq!(cramer_entry(&sing, 1, 1), Err(Error::Singular));
        assert!(matches!(cramer_entry(&id, 0, 1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn permanent_small_cases() {
        assert_eq!(permanent_small(&IntMatrix::identity(5)).unwrap(), BigInt::one());
        let ones = IntMatrix::from_fn(3, 3, |_, _| BigInt::one());
        assert_eq!(permanent_small(&ones).unwrap(), BigInt::from(6));
        assert!(matches!(
            permanent_small(&IntMatrix::identity(15)),
            Err(Error::TooLarge { .. })
        ));
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-4i64..=4, n * n).prop_map(move |v| {
            IntMatrix::from_fn(n, n, |i, j| BigInt::from(v[i * n + j]))
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(m in (1usize..=5).prop_flat_map(small_matrix)) {
            prop_assert_eq!(m.det().unwrap(), det_leibniz(&m));
        }

        #[test]
        fn ryser_matches_brute_force(m in (1usize..=5).prop_flat_map(small_matrix)) {
            prop_assert_eq!(permanent_small(&m).unwrap(), perm_brute(&m));
        }

        #[test]
        fn cramer_times_det_is_signed_minor(m in (2usize..=4).prop_flat_map(small_matrix),
                                            i in 1usize..=4, j in 1usize..=4) {
            let n = m.rows();
            let (i, j) = ((i - 1) % n + 1, (j - 1) % n + 1);
            let det = m.det().unwrap();
            prop_assume!(!det.is_zero());
            let entry = cramer_entry(&m.to_rational(), i, j).unwrap();
            let minor = det_leibniz(&m.minor_matrix(j - 1, i - 1));
            let expected = if (i + j).is_multiple_of(2) { minor } else { -minor };
            prop_assert_eq!(entry * BigRational::from_integer(det), BigRational::from_integer(expected));
        }

        #[test]
        fn binom_symmetry_and_pascal(n in 0i64..40, k in 0i64..40) {
            if k <= n {
                prop_assert_eq!(binom(n, k), binom(n, n - k));
            }
            if n >= 1 {
                prop_assert_eq!(binom(n, k), binom(n - 1, k - 1) + binom(n - 1, k));
            }
        }
    }
}
