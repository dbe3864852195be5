//! Dense exact linear algebra over ℚ: the small amount needed for rank
//! computations, flag chains, and nilpotent Jordan bases.

use num_traits::{One, Zero};

use crate::error::CoreError;
use crate::rational::Rat;

/// Dense rational matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, CoreError> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(CoreError::InvalidInput("ragged matrix rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> QMatrix {
        assert!(self.is_square());
        let mut acc = QMatrix::identity(self.rows);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn commutator(&self, other: &QMatrix) -> QMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_echelon()
    }

    /// In-place row echelon; returns the rank.
    fn row_echelon(&mut self) -> usize {
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(p) = (pivot_row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(pivot_row, p);
            let inv = Rat::one() / self[(pivot_row, col)].clone();
            for j in col..self.cols {
                let v = self[(pivot_row, j)].clone() * &inv;
                self[(pivot_row, j)] = v;
            }
            for r in 0..self.rows {
                if r != pivot_row && !self[(r, col)].is_zero() {
                    let f = self[(r, col)].clone();
                    for j in col..self.cols {
                        let v = self[(r, j)].clone() - &f * &self[(pivot_row, j)];
                        self[(r, j)] = v;
                    }
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<QMatrix, CoreError> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        aug.row_echelon();
        // Invertible iff the left block reduced to the identity.
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { Rat::one() } else { Rat::zero() };
                if aug[(i, j)] != expected {
                    return Err(CoreError::SingularMatrix);
                }
            }
        }
        let mut out = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Ok(out)
    }

    pub fn det2(&self) -> Rat {
        assert_eq!((self.rows, self.cols), (2, 2));
        &self[(0, 0)] * &self[(1, 1)] - &self[(0, 1)] * &self[(1, 0)]
    }

    /// Determinant by fraction-preserving Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Rat::zero();
            };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            det *= m[(col, col)].clone();
            let inv = Rat::one() / m[(col, col)].clone();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone() * &inv;
                for j in col..n {
                    let v = m[(r, j)].clone() - &f * &m[(col, j)];
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    /// Basis of the kernel as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        m.row_echelon();
        // Identify pivot columns.
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row < self.rows && m[(row, col)].is_one() {
                // Confirm this is a pivot (all other entries in column zero).
                let is_pivot = (0..self.rows).all(|r| r == row || m[(r, col)].is_zero());
                if is_pivot {
                    pivots.push(col);
                    row += 1;
                    continue;
                }
            }
        }
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().cloned().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(r, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        self.pow(self.rows as u32).is_zero()
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-reduced basis of the span of the given vectors.
pub fn span_basis(vectors: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = QMatrix::from_rows(vectors.to_vec()).expect("uniform vector lengths");
    assert_eq!(m.cols, dim);
    let rank = m.row_echelon();
    (0..rank).map(|r| (0..dim).map(|c| m[(r, c)].clone()).collect()).collect()
}

/// Does `v` lie in the span of `basis` (given in any form)?
pub fn in_span(v: &[Rat], basis: &[Vec<Rat>]) -> bool {
    let dim = v.len();
    let base_rank = span_basis(basis, dim).len();
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    span_basis(&all, dim).len() == base_rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rati};

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rati(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Rat::is_zero));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[5, 3]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        assert_eq!(a.det(), rati(1));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn nilpotency() {
        let shift = m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert!(shift.is_nilpotent());
        assert!(!m(&[&[1, 0], &[0, 0]]).is_nilpotent());
        assert_eq!(shift.pow(2), m(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]));
    }

    #[test]
    fn span_membership() {
        let b = vec![vec![rati(1), rati(0), rati(1)], vec![rati(0), rati(1), rati(1)]];
        assert!(in_span(&[rati(2), rati(3), rati(5)], &b));
        assert!(!in_span(&[rati(0), rati(0), rati(1)], &b));
        assert_eq!(span_basis(&b, 3).len(), 2);
    }

    #[test]
    fn det_with_fractions() {
        let a = QMatrix::from_rows(vec![
            vec![rat(1, 2), rati(1)],
            vec![rati(1), rat(1, 3)],
        ])
        .unwrap();
        assert_eq!(a.det(), rat(1, 6) - rati(1));
    }
}
