//! Square matrices over truncated series. Matrices act on column vectors, so
//! column `j` holds the image of the `j`-th basis vector.

use std::ops::{Add, Mul, Sub};

use super::numbers::Rational;
use super::series::Series;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    order: u32,
    rows: Vec<Vec<Series>>,
}

impl SeriesMatrix {
    pub fn zero(n: usize, order: u32) -> Self {
        Self { order, rows: vec![vec![Series::zero(order); n]; n] }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        Self::from_fn(n, order, |i, j| if i == j { Series::one(order) } else { Series::zero(order) })
    }

    pub fn from_fn(n: usize, order: u32, mut f: impl FnMut(usize, usize) -> Series) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j).with_order(order)).collect()).collect();
        Self { order, rows }
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(order: u32, cols: Vec<Vec<Series>>) -> Self {
        let n = cols.len();
        Self::from_fn(n, order, |i, j| cols[j][i].clone())
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Series) {
        self.rows[i][j] = s.with_order(self.order);
    }

    pub fn column(&self, j: usize) -> Vec<Series> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Series::is_zero)
    }

    /// `(i, j)` positions of nonzero entries.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| !self.rows[i][j].is_zero()).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.n(), self.order, |i, j| self.rows[i][j].scale(c))
    }

    pub fn apply(&self, v: &[Series]) -> Vec<Series> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(Series::zero(self.order), |acc, (a, x)| acc + a * x))
            .collect()
    }

    /// Cofactor expansion along the first row.
    pub fn det(&self) -> Series {
        fn go(m: &[Vec<Series>], order: u32) -> Series {
            match m.len() {
                0 => Series::one(order),
                1 => m[0][0].clone(),
                n => {
                    let mut acc = Series::zero(order);
                    for j in 0..n {
                        if m[0][j].is_zero() {
                            continue;
                        }
                        let minor: Vec<Vec<Series>> = m[1..]
                            .iter()
                            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, s)| s.clone()).collect())
                            .collect();
                        let term = &m[0][j] * go(&minor, order);
                        acc = if j % 2 == 0 { acc + term } else { acc - term };
                    }
                    acc
                }
            }
        }
        go(&self.rows, self.order)
    }
}

impl Mul for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn mul(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        let n = self.n();
        SeriesMatrix::from_fn(n, self.order, |i, j| {
            (0..n).fold(Series::zero(self.order), |acc, k| acc + &self.rows[i][k] * &rhs.rows[k][j])
        })
    }
}

impl Add for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn add(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.n(), self.order, |i, j| &self.rows[i][j] + &rhs.rows[i][j])
    }
}

impl Sub for &SeriesMatrix {
    type Output = SeriesMatrix;
    fn sub(self, rhs: &SeriesMatrix) -> SeriesMatrix {
        SeriesMatrix::from_fn(self.n(), self.order, |i, j| &self.rows[i][j] - &rhs.rows[i][j])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    #[test]
    fn det_of_triangular_is_diagonal_product() {
        let n = 5;
        let q = Series::q4(n);
        let m = SeriesMatrix::from_fn(3, n, |i, j| {
            if i == j {
                Series::one(n) + q.scale(&int(i as i64 + 1))
            } else if i < j {
                Series::q2(n)
            } else {
                Series::zero(n)
            }
        });
        let want = (0..3).fold(Series::one(n), |acc, i| acc * (Series::one(n) + q.scale(&int(i + 1))));
        assert_eq!(m.det(), want);
    }

    #[test]
    fn identity_is_neutral() {
        let m = SeriesMatrix::from_fn(4, 3, |i, j| Series::monomial(3, i as u32, j as u32, int(1)));
        let id = SeriesMatrix::identity(4, 3);
        assert_eq!(&m * &id, m);
        assert_eq!(&id * &m, m);
        assert!((&m - &m).is_zero());
        assert_eq!(m.apply(&id.column(2)), m.column(2));
    }
}
