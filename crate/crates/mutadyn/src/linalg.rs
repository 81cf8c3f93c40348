//! Dense matrices and Gaussian elimination over an abstract scalar.
//!
//! The kernels here are generic over [`Scalar`] so the same code serves the
//! exact-rational path (`Mat<Rat>`, where elimination is exact) and the
//! floating path (`Mat<f64>`, conversions for the numerical spectrum scan).
//! Pivoting picks the entry of largest absolute value, which is harmless for
//! rationals and sensible for floats.

use num_traits::{Num, Signed};

/// Scalar types the dense kernels operate on: a signed field with total
/// in-field arithmetic. Satisfied by `f64` and by arbitrary-precision
/// rationals.
pub trait Scalar: Num + Signed + Clone + PartialOrd + std::fmt::Debug {}

impl<T> Scalar for T where T: Num + Signed + Clone + PartialOrd + std::fmt::Debug {}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
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

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix-vector product `self * v`.
    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
            })
            .collect()
    }

    pub fn column_sum(&self, j: usize) -> T {
        (0..self.rows).fold(T::zero(), |acc, i| acc + self.at(i, j).clone())
    }

    pub fn column_sums(&self) -> Vec<T> {
        (0..self.cols).map(|j| self.column_sum(j)).collect()
    }

    pub fn transpose(&self) -> Mat<T> {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    /// Submatrix restricted to the given row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat<T> {
        let mut out = Mat::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                *out.at_mut(i, j) = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

/// Solves `a * x = b` for square `a`. Returns `None` when `a` is singular.
pub fn solve<T: Scalar>(a: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    assert!(a.is_square(), "solve needs a square matrix");
    let n = a.rows();
    assert_eq!(b.len(), n, "dimension mismatch");
    let mut m = a.clone();
    let mut rhs = b.to_vec();

    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            m.at(i, col)
                .abs()
                .partial_cmp(&m.at(j, col).abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m.at(pivot, col).is_zero() {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m.at(pivot, j).clone();
                *m.at_mut(pivot, j) = m.at(col, j).clone();
                *m.at_mut(col, j) = tmp;
            }
            rhs.swap(pivot, col);
        }
        let inv = T::one() / m.at(col, col).clone();
        for row in col + 1..n {
            if m.at(row, col).is_zero() {
                continue;
            }
            let factor = m.at(row, col).clone() * inv.clone();
            for j in col..n {
                let delta = factor.clone() * m.at(col, j).clone();
                *m.at_mut(row, j) = m.at(row, j).clone() - delta;
            }
            let delta = factor * rhs[col].clone();
            rhs[row] = rhs[row].clone() - delta;
        }
    }

    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for j in row + 1..n {
            acc = acc - m.at(row, j).clone() * x[j].clone();
        }
        x[row] = acc / m.at(row, row).clone();
    }
    Some(x)
}

/// Basis of the null space of `a` (not necessarily square), via reduced row
/// echelon form. Exact when `T` is a rational type.
pub fn nullspace<T: Scalar>(a: &Mat<T>) -> Vec<Vec<T>> {
    let rows = a.rows();
    let cols = a.cols();
    let mut m = a.clone();
    let mut pivot_cols = Vec::new();
    let mut r = 0;

    for c in 0..cols {
        let Some(pivot) = (r..rows)
            .filter(|&i| !m.at(i, c).is_zero())
            .max_by(|&i, &j| {
                m.at(i, c)
                    .abs()
                    .partial_cmp(&m.at(j, c).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
        else {
            continue;
        };
        if pivot != r {
            for j in 0..cols {
                let tmp = m.at(pivot, j).clone();
                *m.at_mut(pivot, j) = m.at(r, j).clone();
                *m.at_mut(r, j) = tmp;
            }
        }
        let inv = T::one() / m.at(r, c).clone();
        for j in c..cols {
            *m.at_mut(r, j) = m.at(r, j).clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || m.at(i, c).is_zero() {
                continue;
            }
            let factor = m.at(i, c).clone();
            for j in c..cols {
                let delta = factor.clone() * m.at(r, j).clone();
                *m.at_mut(i, j) = m.at(i, j).clone() - delta;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }

    let mut basis = Vec::new();
    let pivot_set: std::collections::HashSet<usize> = pivot_cols.iter().copied().collect();
    for free in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![T::zero(); cols];
        v[free] = T::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = T::zero() - m.at(row, free).clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_traits::One;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p.into(), q.into())
    }

    #[test]
    fn solve_exact_2x2() {
        let a = Mat::from_rows(vec![vec![r(2, 1), r(1, 1)], vec![r(1, 1), r(3, 1)]]);
        let x = solve(&a, &[r(5, 1), r(10, 1)]).unwrap();
        assert_eq!(x, vec![r(1, 1), r(3, 1)]);
    }

    #[test]
    fn solve_singular_is_none() {
        let a = Mat::from_rows(vec![vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(4, 1)]]);
        assert!(solve(&a, &[r(1, 1), r(2, 1)]).is_none());
    }

    #[test]
    fn nullspace_of_rank_one_2x2() {
        // (B - 2I) for B = [[5/3,1/2],[1/3,3/2]]: kernel spanned by (3/2, 1).
        let a = Mat::from_rows(vec![vec![r(-1, 3), r(1, 2)], vec![r(1, 3), r(-1, 2)]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        let ratio = v[0].clone() / v[1].clone();
        assert_eq!(ratio, r(3, 2));
    }

    #[test]
    fn nullspace_of_invertible_is_empty() {
        let a: Mat<Rat> = Mat::identity(3);
        assert!(nullspace(&a).is_empty());
    }

    #[test]
    fn matvec_and_column_sums() {
        let a = Mat::from_rows(vec![vec![r(5, 3), r(1, 2)], vec![r(1, 3), r(3, 2)]]);
        let y = a.matvec(&[r(2, 1), r(3, 1)]);
        assert_eq!(y, vec![r(29, 6), r(31, 6)]);
        assert_eq!(a.column_sums(), vec![Rat::one() + Rat::one(), Rat::one() + Rat::one()]);
    }
}
