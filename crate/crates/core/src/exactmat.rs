//! Exact integer and rational linear algebra.
//!
//! Ranks are taken over the rationals and computed by fraction-free
//! (Bareiss) elimination, so every intermediate value stays an integer
//! and every division is exact. Pivoting always takes the leftmost
//! column that still has a nonzero entry and, within it, the topmost row.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// A vector of exact rationals, always in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalVector(Vec<BigRational>);

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            }))
            .finish()
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix has an empty side"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flatten().cloned().map(Into::into).collect();
        Self::new(rows.len(), cols, data)
    }

    /// Panics on an empty side.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        IntMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols)
                .filter(|&k| !self.get(i, k).is_zero())
                .map(|k| self.get(i, k) * rhs.get(k, j))
                .sum()
        }))
    }

    /// Appends a column on the right.
    pub fn with_column(&self, column: &[BigInt]) -> Result<IntMatrix> {
        if column.len() != self.rows {
            return Err(Error::Dimension(
                "column length differs from row count".into(),
            ));
        }
        Ok(Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                column[i].clone()
            }
        }))
    }

    /// Appends a row at the bottom.
    pub fn with_row(&self, row: &[BigInt]) -> Result<IntMatrix> {
        if row.len() != self.cols {
            return Err(Error::Dimension(
                "row length differs from column count".into(),
            ));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(row);
        Self::new(self.rows + 1, self.cols, data)
    }

    /// `v^T * self` for a row vector `v`.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "vector length");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += vi * a;
            }
        }
        out
    }
}

impl RationalVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        RationalVector(entries)
    }

    pub fn from_integers<T: Into<BigInt>>(entries: impl IntoIterator<Item = T>) -> Self {
        RationalVector(
            entries
                .into_iter()
                .map(|x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The smallest positive multiple of the vector with integer entries,
    /// together with the scale factor used.
    pub fn clear_denominators(&self) -> (Vec<BigInt>, BigInt) {
        let scale = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints = self
            .0
            .iter()
            .map(|x| x.numer() * (&scale / x.denom()))
            .collect();
        (ints, scale)
    }
}

/// Exact `k`-th power by repeated squaring; `a^0` is the identity.
pub fn mat_pow(a: &IntMatrix, k: u32) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "power of non-square {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let mut result = IntMatrix::identity(a.rows);
    let mut base = a.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = result.checked_mul(&base)?;
        }
        k >>= 1;
        if k > 0 {
            base = base.checked_mul(&base)?;
        }
    }
    Ok(result)
}

/// Fraction-free row echelon form in place. Returns the pivot positions
/// `(row, column)` in order.
fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> Vec<(usize, usize)> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let updated = pivot * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&updated % &prev).is_zero(), "inexact Bareiss step");
                row[j] = updated / &prev;
            }
        }
        prev = pivot.clone();
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

/// Rank over the rationals.
pub fn rank_q(m: &IntMatrix) -> usize {
    let mut rows = m.to_rows();
    bareiss_echelon(&mut rows).len()
}

/// Finds `lambda` with `lambda^T * m = target` if `target` lies in the
/// rational row span of `m`. Free unknowns are set to zero, so the answer
/// is a fixed function of the input.
pub fn solve_in_rowspan(m: &IntMatrix, target: &RationalVector) -> Result<Option<RationalVector>> {
    if target.len() != m.cols {
        return Err(Error::Dimension(format!(
            "target has length {} but the matrix has {} columns",
            target.len(),
            m.cols
        )));
    }
    let (target_ints, scale) = target.clear_denominators();
    // Unknowns are the row coefficients: solve m^T x = target.
    let n = m.rows;
    let mut system: Vec<Vec<BigInt>> = (0..m.cols)
        .map(|j| {
            let mut eq: Vec<BigInt> = (0..n).map(|i| m.get(i, j).clone()).collect();
            eq.push(target_ints[j].clone());
            eq
        })
        .collect();
    let pivots = bareiss_echelon(&mut system);
    if pivots.iter().any(|&(_, c)| c == n) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); n];
    for &(r, c) in pivots.iter().rev() {
        let eq = &system[r];
        let mut rhs = BigRational::from_integer(eq[n].clone());
        for (j, xj) in x.iter().enumerate().skip(c + 1) {
            if !xj.is_zero() && !eq[j].is_zero() {
                rhs -= xj * BigRational::from_integer(eq[j].clone());
            }
        }
        x[c] = rhs / BigRational::from_integer(eq[c].clone());
    }
    let unscale = BigRational::from_integer(scale);
    Ok(Some(RationalVector(
        x.into_iter().map(|v| v / &unscale).collect(),
    )))
}

/// Greatest common divisor of the absolute values; zero for an all-zero
/// slice.
pub fn gcd_all(values: &[BigInt]) -> BigInt {
    values
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(&v.abs()))
}
