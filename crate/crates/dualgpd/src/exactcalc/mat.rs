use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use serde::{Deserialize, Serialize};

use super::{check_dim, scalar, vector, ExactError, Rat};

#[derive(Serialize, Deserialize)]
struct MatRecord {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl From<Mat> for MatRecord {
    fn from(m: Mat) -> Self {
        MatRecord { rows: m.rows, cols: m.cols, entries: m.to_strings() }
    }
}

impl TryFrom<MatRecord> for Mat {
    type Error = ExactError;
    fn try_from(r: MatRecord) -> Result<Self, ExactError> {
        check_dim(r.rows, r.entries.len())?;
        let m = Mat::from_strings(&r.entries, r.cols)?;
        check_dim(r.rows, m.rows)?;
        Ok(m)
    }
}

/// Dense rational matrix, row-major. Serializes as `{rows, cols, entries}` with "p/q" strings.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "MatRecord", try_from = "MatRecord")]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Output of [`Mat::solve`]: one solution of `A x = b` plus a basis of `ker A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Rat>,
    pub kernel: Vec<Vec<Rat>>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let data = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    /// Builds a `dim x cols.len()` matrix whose columns are the given vectors.
    pub fn from_cols(dim: usize, cols: &[Vec<Rat>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == dim), "column length mismatch");
        Mat::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&x| scalar::int(x)).collect()).collect();
        Mat::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rat>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rat) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| vector::dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    pub fn try_mul(&self, rhs: &Mat) -> Result<Mat, ExactError> {
        check_dim(self.cols, rhs.rows)?;
        Ok(Mat::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * rhs.get(k, j)).sum()
        }))
    }

    pub fn hstack(parts: &[&Mat]) -> Mat {
        let rows = parts.first().map_or(0, |m| m.rows);
        assert!(parts.iter().all(|m| m.rows == rows), "hstack row mismatch");
        let cols: Vec<Vec<Rat>> = parts.iter().flat_map(|m| m.columns()).collect();
        Mat::from_cols(rows, &cols)
    }

    pub fn vstack(parts: &[&Mat]) -> Mat {
        let cols = parts.first().map_or(0, |m| m.cols);
        assert!(parts.iter().all(|m| m.cols == cols), "vstack column mismatch");
        let rows: Vec<Vec<Rat>> = parts.iter().flat_map(|m| (0..m.rows).map(|i| m.row(i))).collect();
        if rows.is_empty() {
            return Mat::zeros(0, cols);
        }
        Mat::from_rows(&rows)
    }

    pub fn block_diag(parts: &[&Mat]) -> Mat {
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            for i in 0..m.rows {
                for j in 0..m.cols {
                    out.set(r0 + i, c0 + j, m.get(i, j).clone());
                }
            }
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis as columns; one vector per free column of the echelon form.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<Rat>> = free
            .iter()
            .map(|&f| {
                let mut v = vector::unit(self.cols, f);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect();
        Mat::from_cols(self.cols, &basis)
    }

    pub fn solve(&self, b: &[Rat]) -> Result<Solution, ExactError> {
        check_dim(self.rows, b.len())?;
        let aug = Mat::hstack(&[self, &Mat::from_cols(self.rows, &[b.to_vec()])]);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(ExactError::Inconsistent);
        }
        let mut particular = vector::zeros(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            particular[p] = r.get(row, self.cols).clone();
        }
        Ok(Solution { particular, kernel: self.kernel().columns() })
    }

    /// Coordinates of `v` in the column basis `self`; errors when `v` is outside the span.
    pub fn coords(&self, v: &[Rat]) -> Result<Vec<Rat>, ExactError> {
        check_dim(self.rows, v.len())?;
        let aug = Mat::hstack(&[self, &Mat::from_cols(self.rows, &[v.to_vec()])]);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(ExactError::Inconsistent);
        }
        if pivots.len() < self.cols {
            return Err(ExactError::Singular);
        }
        Ok((0..self.cols).map(|i| r.get(i, self.cols).clone()).collect())
    }

    pub fn inverse(&self) -> Result<Mat, ExactError> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        if n == 0 {
            return Ok(Mat::zeros(0, 0));
        }
        let (r, pivots) = Mat::hstack(&[self, &Mat::identity(n)]).rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(ExactError::Singular);
        }
        Ok(Mat::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn det(&self) -> Result<Rat, ExactError> {
        check_dim(self.rows, self.cols)?;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else { return Ok(Rat::zero()) };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..m.rows {
                let f = m.get(i, c) / &piv;
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Left inverse of a matrix with independent columns.
    pub fn left_inverse(&self) -> Result<Mat, ExactError> {
        let t = self.transpose();
        Ok(&(&t * self).inverse()? * &t)
    }

    /// Right inverse of a matrix with independent rows.
    pub fn right_inverse(&self) -> Result<Mat, ExactError> {
        Ok(self.transpose().left_inverse()?.transpose())
    }

    /// Canonical basis of the column space: the transposed nonzero rows of `rref(self^T)`.
    /// Two matrices with the same column space yield the same basis.
    pub fn canonical_basis(&self) -> Mat {
        let (r, pivots) = self.transpose().rref();
        let rows: Vec<Vec<Rat>> = (0..pivots.len()).map(|i| r.row(i)).collect();
        Mat::from_cols(self.rows, &rows)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| scalar::vec_to_strings(&self.row(i))).collect()
    }

    pub fn from_strings(rows: &[Vec<String>], cols: usize) -> Result<Mat, ExactError> {
        let parsed: Result<Vec<Vec<Rat>>, _> =
            rows.iter().map(|r| r.iter().map(|s| scalar::parse(s)).collect()).collect();
        let parsed = parsed?;
        if parsed.is_empty() {
            return Ok(Mat::zeros(0, cols));
        }
        if let Some(bad) = parsed.iter().find(|r| r.len() != cols) {
            return Err(ExactError::DimensionMismatch { expected: cols, got: bad.len() });
        }
        Ok(Mat::from_rows(&parsed))
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum dimension mismatch");
        Mat { rows: self.rows, cols: self.cols, data: vector::add(&self.data, &rhs.data) }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference dimension mismatch");
        Mat { rows: self.rows, cols: self.cols, data: vector::sub(&self.data, &rhs.data) }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: vector::neg(&self.data) }
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(scalar::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcalc::{int, rat};

    #[test]
    fn identity_solve_has_empty_kernel() {
        let b = vec![int(3), rat(-1, 2)];
        let s = Mat::identity(2).solve(&b).unwrap();
        assert_eq!(s.particular, b);
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let s = Mat::zeros(2, 3).solve(&[int(0), int(0)]).unwrap();
        assert_eq!(s.particular, vector::zeros(3));
        assert_eq!(s.kernel.len(), 3);
        assert_eq!(Mat::zeros(2, 3).solve(&[int(1), int(0)]), Err(ExactError::Inconsistent));
    }

    #[test]
    fn single_row_solve() {
        let s = Mat::from_ints(&[&[1, 1]]).solve(&[int(2)]).unwrap();
        assert_eq!(s.particular, vec![int(2), int(0)]);
        assert_eq!(s.kernel, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn solve_rejects_wrong_length() {
        assert!(matches!(Mat::identity(2).solve(&[int(1)]), Err(ExactError::DimensionMismatch { .. })));
    }

    #[test]
    fn inverse_and_determinant() {
        let a = Mat::from_ints(&[&[2, 1], &[5, 3]]);
        assert_eq!(a.det().unwrap(), int(1));
        assert_eq!(&a * &a.inverse().unwrap(), Mat::identity(2));
        assert_eq!(Mat::from_ints(&[&[1, 2], &[2, 4]]).inverse(), Err(ExactError::Singular));
    }

    #[test]
    fn canonical_basis_ignores_spanning_set() {
        let a = Mat::from_ints(&[&[1, 2], &[0, 1], &[1, 3]]);
        let b = Mat::from_ints(&[&[3, 1], &[1, 0], &[4, 1]]);
        assert_eq!(a.canonical_basis(), b.canonical_basis());
    }
}
