//! Dense matrices over exact rationals, with rank by Gauss-Jordan
//! elimination and determinants by fraction-free Bareiss elimination.
//! The two routines share no code on purpose: one checks the other.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar; always reduced, denominator always positive.
pub type Rational = num_rational::BigRational;

/// Row-major dense matrix over [`Rational`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::EmptyMatrix);
        };
        let cols = first.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedMatrix {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
        }
        let nrows = rows.len();
        Ok(RationalMatrix {
            rows: nrows,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(Rational::is_zero)
    }

    /// New matrix from the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> RationalMatrix {
        let mut entries = Vec::with_capacity(indices.len() * self.cols);
        for &r in indices {
            entries.extend_from_slice(self.row(r));
        }
        RationalMatrix {
            rows: indices.len(),
            cols: self.cols,
            entries,
        }
    }

    /// New matrix from `width` consecutive columns starting at `start`.
    pub fn column_block(&self, start: usize, width: usize) -> RationalMatrix {
        let mut entries = Vec::with_capacity(self.rows * width);
        for r in 0..self.rows {
            let row = self.row(r);
            entries.extend_from_slice(&row[start..start + width]);
        }
        RationalMatrix {
            rows: self.rows,
            cols: width,
            entries,
        }
    }

    /// Exact rank by Gauss-Jordan elimination over the rationals.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rational>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let pivot_row = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == rank || row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] / &pivot_row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= p * &factor;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Exact determinant by Bareiss fraction-free elimination on the
    /// denominator-cleared integer matrix.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        // Clear denominators row by row, tracking the total scale factor.
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let l = self
                .row(r)
                .iter()
                .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
            scale *= &l;
            m.push(
                self.row(r)
                    .iter()
                    .map(|e| e.numer() * (&l / e.denom()))
                    .collect(),
            );
        }
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Ok(Rational::zero());
                };
                m.swap(k, swap);
                negate = !negate;
            }
            let pivot_row = m[k].clone();
            for row in m.iter_mut().skip(k + 1) {
                for j in k + 1..n {
                    let num = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                    row[j] = num / &prev;
                }
                row[k] = BigInt::zero();
            }
            prev = pivot_row[k].clone();
        }
        let mut det = m[n - 1][n - 1].clone();
        if negate {
            det = -det;
        }
        Ok(Rational::new(det, scale))
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form with zero rows dropped: the canonical basis of
/// the row space. Equal row spaces give byte-equal results.
pub(crate) fn rref(mut m: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].clone();
        for x in &mut m[rank] {
            *x /= &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= p * &factor;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    m.truncate(rank);
    m
}

/// Remainder of `v` after subtracting its projection onto the rref basis.
/// Zero exactly when `v` lies in the row space.
pub(crate) fn reduce_against(basis: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    let mut rem = v.to_vec();
    for row in basis {
        let pivot = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("rref rows are nonzero");
        if rem[pivot].is_zero() {
            continue;
        }
        let factor = rem[pivot].clone();
        for (x, p) in rem.iter_mut().zip(row) {
            *x -= p * &factor;
        }
    }
    rem
}

pub(crate) fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn vandermonde(nodes: &[i64], cols: usize) -> RationalMatrix {
        let rows: Vec<Vec<Rational>> = nodes
            .iter()
            .map(|&x| (0..cols).map(|p| q(x.pow(p as u32))).collect())
            .collect();
        RationalMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::identity(2).rank(), 2);
        assert_eq!(RationalMatrix::zero(1, 5).rank(), 0);
        assert_eq!(vandermonde(&[1, 2, 3, 4], 2).rank(), 2);
        assert_eq!(mat(&[&[1, 2], &[2, 4], &[3, 6]]).rank(), 1);
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(RationalMatrix::identity(3).determinant().unwrap(), q(1));
        assert_eq!(
            mat(&[&[1, 2], &[1, 2]]).determinant().unwrap(),
            Rational::zero()
        );
        assert_eq!(mat(&[&[1, 2], &[3, 4]]).determinant().unwrap(), q(-2));
        assert!(mat(&[&[1, 2, 3], &[4, 5, 6]]).determinant().is_err());
    }

    #[test]
    fn determinant_with_fractions() {
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let third = Rational::new(BigInt::from(1), BigInt::from(3));
        let m =
            RationalMatrix::from_rows(vec![vec![half.clone(), q(2)], vec![q(3), third.clone()]])
                .unwrap();
        // 1/2 * 1/3 - 2 * 3 = 1/6 - 6 = -35/6
        assert_eq!(
            m.determinant().unwrap(),
            Rational::new(BigInt::from(-35), BigInt::from(6))
        );
    }

    #[test]
    fn determinant_needing_pivot_swap() {
        let m = mat(&[&[0, 1, 2], &[1, 0, 3], &[4, 5, 0]]);
        // cofactor expansion: -1*(0-12) + 2*(5-0) = 22; via first row:
        // 0*A - 1*(0*0-3*4) + 2*(1*5-0*4) = 12 + 10 = 22
        assert_eq!(m.determinant().unwrap(), q(22));
    }

    #[test]
    fn rank_agrees_with_determinant_on_square_matrices() {
        let cases = [
            mat(&[&[1, 2], &[3, 4]]),
            mat(&[&[1, 2], &[2, 4]]),
            mat(&[&[0, 0], &[0, 0]]),
            mat(&[&[2, 0, 1], &[1, 1, 1], &[3, 1, 2]]),
        ];
        for m in cases {
            let full = m.determinant().unwrap() != Rational::zero();
            assert_eq!(full, m.rank() == m.rows());
        }
    }

    #[test]
    fn rref_canonical_for_equal_row_spaces() {
        let a = rref(vec![vec![q(2), q(4)], vec![q(1), q(2)]]);
        let b = rref(vec![vec![q(-3), q(-6)]]);
        assert_eq!(a, b);
        let rem = reduce_against(&a, &[q(5), q(10)]);
        assert!(is_zero_vector(&rem));
        let rem = reduce_against(&a, &[q(5), q(11)]);
        assert!(!is_zero_vector(&rem));
    }

    #[test]
    fn select_rows_and_column_block() {
        let m = mat(&[&[1, 2, 3, 4], &[5, 6, 7, 8]]);
        let s = m.select_rows(&[1]);
        assert_eq!(s.row(0), &[q(5), q(6), q(7), q(8)][..]);
        let b = m.column_block(2, 2);
        assert_eq!(b.row(0), &[q(3), q(4)][..]);
        assert_eq!(b.row(1), &[q(7), q(8)][..]);
    }
}
