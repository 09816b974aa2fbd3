//! Dense matrices over a [`Field`]: reduced row-echelon form, kernels,
//! determinants and adjugates.
//!
//! Pivoting is deterministic: the pivot of a column is its first row (in
//! order) whose entry is not negligible. For exact scalars this makes every
//! normal form reproducible. The rational instantiation has a faster
//! fraction-free route in [`crate::exact`] that returns the same results.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Result of a row reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<S> {
    pub reduced: Matrix<S>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<S> Matrix<S> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<S: Clone> Matrix<S> {
    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n_rows: usize, columns: &[Vec<S>]) -> Result<Self>
    where
        S: num_traits::Zero,
    {
        let mut m = Matrix {
            rows: n_rows,
            cols: columns.len(),
            data: vec![S::zero(); n_rows * columns.len()],
        };
        for (c, col) in columns.iter().enumerate() {
            if col.len() != n_rows {
                return Err(Error::Dimension("column length".into()));
            }
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.data[r * self.cols + c].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Delete one row and one column.
    pub fn minor(&self, skip_r: usize, skip_c: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in (0..self.rows).filter(|&r| r != skip_r) {
            for c in (0..self.cols).filter(|&c| c != skip_c) {
                data.push(self.data[r * self.cols + c].clone());
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl<S: Field> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|v| v.clone() * k.clone())
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector product".into()));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced row-echelon form with leftmost, first-row pivoting.
    pub fn rref(&self) -> Rref<S> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(p) = (prow..m.rows).find(|&r| !m[(r, col)].is_negligible()) else {
                continue;
            };
            m.swap_rows(p, prow);
            let inv = S::one() / m[(prow, col)].clone();
            for c in col..m.cols {
                m[(prow, c)] = m[(prow, c)].clone() * inv.clone();
            }
            m[(prow, col)] = S::one();
            for r in 0..m.rows {
                if r == prow || m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone();
                for c in col..m.cols {
                    let v = m[(prow, c)].clone();
                    if !v.is_zero() {
                        m[(r, c)] = m[(r, c)].clone() - f.clone() * v;
                    }
                }
                m[(r, col)] = S::zero();
            }
            pivots.push(col);
            prow += 1;
        }
        let rank = pivots.len();
        Rref {
            reduced: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Right null space, one vector per free column: the free variable set
    /// to one, the other free variables zero, pivots read off the rref.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        kernel_from_rref(&self.rref(), self.cols)
    }

    pub fn det(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = S::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_negligible()) else {
                return Ok(S::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pv = m[(col, col)].clone();
            det = det * pv.clone();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone() / pv.clone();
                for c in col..n {
                    let v = m[(col, c)].clone();
                    m[(r, c)] = m[(r, c)].clone() - f.clone() * v;
                }
            }
        }
        Ok(det)
    }

    /// Transposed cofactor matrix, so that `M * adj(M) = det(M) * I`.
    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("adjugate of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Self::zeros(0, 0));
        }
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let mut adj = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let cof = self.minor(r, c).det()?;
                adj[(c, r)] = if (r + c) % 2 == 0 { cof } else { -cof };
            }
        }
        Ok(adj)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

pub(crate) fn kernel_from_rref<S: Field>(rref: &Rref<S>, cols: usize) -> Vec<Vec<S>> {
    let mut is_pivot = vec![false; cols];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![S::zero(); cols];
            v[free] = S::one();
            for (row, &p) in rref.pivots.iter().enumerate() {
                v[p] = -rref.reduced[(row, free)].clone();
            }
            v
        })
        .collect()
}

impl<S: Field> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.try_mul(rhs).expect("matrix shapes must agree")
    }
}

#[cfg(test)]
mod tests {
    use crate::scalar::{rat, rat2};
    use crate::{FMatrix, QMatrix};

    fn q(rows: &[&[i64]]) -> QMatrix {
        let v: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        QMatrix::from_rows(&v).unwrap()
    }

    #[test]
    fn identity_rref_is_itself() {
        let i3 = QMatrix::identity(3);
        let r = i3.rref();
        assert_eq!(r.rank, 3);
        assert_eq!(r.reduced, i3);
        assert!(i3.kernel_basis().is_empty());
    }

    #[test]
    fn single_row_of_ones() {
        let m = q(&[&[1, 1, 1]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![rat(-1), rat(1), rat(0)]);
        assert_eq!(k[1], vec![rat(-1), rat(0), rat(1)]);
    }

    #[test]
    fn adjugate_of_diagonal() {
        let d = QMatrix::diagonal(&[rat(1), rat(2), rat(3)]);
        assert_eq!(d.adjugate().unwrap(), QMatrix::diagonal(&[rat(6), rat(3), rat(2)]));
        assert_eq!(QMatrix::identity(5).det().unwrap(), rat(1));
    }

    #[test]
    fn non_square_rejected() {
        let m = q(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(m.det().is_err());
        assert!(m.adjugate().is_err());
    }

    #[test]
    fn rational_rref_with_fractions() {
        let m = QMatrix::from_rows(&[
            vec![rat2(1, 2), rat(1), rat(0)],
            vec![rat(1), rat(2), rat2(1, 3)],
        ])
        .unwrap();
        let r = m.rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 2]);
        assert_eq!(r.reduced.row(0), &[rat(1), rat(2), rat(0)]);
    }

    #[test]
    fn float_instantiation_agrees_on_small_system() {
        let m = FMatrix::from_rows(&[vec![2.0, 1.0], vec![4.0, 3.0]]).unwrap();
        assert!((m.det().unwrap() - 2.0).abs() < 1e-12);
        let adj = m.adjugate().unwrap();
        let prod = &m * &adj;
        assert!((prod[(0, 0)] - 2.0).abs() < 1e-12 && prod[(0, 1)].abs() < 1e-12);
        assert_eq!(m.rank(), 2);
    }
}
