//! Dense exact matrices over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rat::{common_denominator, Rat};

pub type QVec = Vec<Rat>;

pub fn zero_vec(dim: usize) -> QVec {
    vec![Rat::zero(); dim]
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(a: &[Rat], s: &Rat) -> QVec {
    a.iter().map(|x| x * s).collect()
}

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMat {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(super::rat::format_rat).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[QVec], cols: usize) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().cloned());
        }
        Self {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_cols(cols: &[QVec], rows: usize) -> Self {
        Self::from_rows(cols, rows).transpose()
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<QVec> = rows
            .iter()
            .map(|r| r.iter().map(|&x| super::rat::rat(x)).collect())
            .collect();
        Self::from_rows(&rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> QVec {
        self.row(r).to_vec()
    }

    pub fn col(&self, c: usize) -> QVec {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<QVec> {
        (0..self.rows).map(|r| self.row_vec(r)).collect()
    }

    pub fn col_vecs(&self) -> Vec<QVec> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = QMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> QVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Columns `idx` of `self`, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> QMat {
        let cols: Vec<QVec> = idx.iter().map(|&c| self.col(c)).collect();
        QMat::from_cols(&cols, self.rows)
    }

    pub fn select_rows(&self, idx: &[usize]) -> QMat {
        let rows: Vec<QVec> = idx.iter().map(|&r| self.row_vec(r)).collect();
        QMat::from_rows(&rows, self.cols)
    }

    /// Integer rows obtained by clearing each row's denominators (positive scaling).
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let den = common_denominator(row);
                row.iter()
                    .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect()
    }

    /// Rank over the rationals (fraction-free elimination).
    pub fn rank(&self) -> usize {
        let mut a = self.integer_rows();
        bareiss(&mut a, self.cols).0
    }

    /// Determinant of a square matrix (fraction-free elimination).
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        if self.rows == 0 {
            return Rat::one();
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            let den = common_denominator(row);
            a.push(
                row.iter()
                    .map(|x| (x * Rat::from_integer(den.clone())).to_integer())
                    .collect(),
            );
            scale *= den;
        }
        let (rank, det) = bareiss(&mut a, self.cols);
        if rank < self.rows {
            return Rat::zero();
        }
        Rat::new(det, scale)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let v = &f * &m[(row, c)];
                    m[(r, c)] -= v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Rat]) -> Option<QVec> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMat::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vec(self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = red[(r, self.cols)].clone();
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.entries[r * self.cols + c]
    }
}

/// Fraction-free Gaussian elimination in place. Returns the rank and, for a
/// square full-rank input, the determinant.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut sign_flip = false;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign_flip = !sign_flip;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    let det = if sign_flip { -prev } else { prev };
    (rank, det)
}

pub fn rank(m: &QMat) -> usize {
    m.rank()
}

/// Basis of the right kernel, as columns, read off the reduced row echelon form
/// (one basis vector per free column, with a 1 in that column).
pub fn null_basis(m: &QMat) -> QMat {
    let (red, pivots) = m.rref();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut out = QMat::zeros(m.cols(), free.len());
    for (k, &f) in free.iter().enumerate() {
        out[(f, k)] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            out[(p, k)] = -red[(r, f)].clone();
        }
    }
    out
}

/// Basis of the orthogonal complement of the column space of `m`.
pub fn orth_complement(m: &QMat) -> QMat {
    null_basis(&m.transpose())
}

/// Rank of a family of vectors of common dimension `dim`.
pub fn vectors_rank(vs: &[QVec], dim: usize) -> usize {
    QMat::from_rows(vs, dim).rank()
}

/// Rank of the affine hull of `points` (its dimension), or `None` for no points.
pub fn affine_rank(points: &[QVec]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<QVec> = rest.iter().map(|p| sub_vec(p, first)).collect();
    Some(vectors_rank(&diffs, first.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::rat;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(QMat::identity(3).rank(), 3);
        assert_eq!(QMat::zeros(2, 3).rank(), 0);
        assert_eq!(QMat::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn det_examples() {
        let m = QMat::from_i64(&[&[2, 1], &[1, 3]]);
        assert_eq!(m.det(), rat(5));
        let m = QMat::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(m.det(), rat(-1));
        let half = QMat::from_rows(
            &[
                vec![super::super::rat::ratio(1, 2), rat(0)],
                vec![rat(0), super::super::rat::ratio(1, 3)],
            ],
            2,
        );
        assert_eq!(half.det(), super::super::rat::ratio(1, 6));
        assert_eq!(QMat::from_i64(&[&[1, 2], &[2, 4]]).det(), rat(0));
    }

    #[test]
    fn null_basis_single_constraint() {
        let b = null_basis(&QMat::from_i64(&[&[1, 1, 1]]));
        assert_eq!((b.rows(), b.cols()), (3, 2));
        for c in 0..2 {
            let s: Rat = b.col(c).iter().sum();
            assert_eq!(s, rat(0));
        }
    }

    #[test]
    fn null_basis_invertible_is_empty() {
        let b = null_basis(&QMat::from_i64(&[&[1, 2], &[3, 4]]));
        assert_eq!((b.rows(), b.cols()), (2, 0));
    }

    #[test]
    fn null_basis_of_square_lift() {
        // rows (x, y, 1) of the points (1,1), (1,-1), (-1,1), (-1,-1), transposed to 3x4
        let lift = QMat::from_i64(&[&[1, 1, -1, -1], &[1, -1, 1, -1], &[1, 1, 1, 1]]);
        let b = null_basis(&lift);
        assert_eq!(b.cols(), 1);
        let v = b.col(0);
        let k = v[0].clone();
        // x0+x1-x2-x3 = 0, x0-x1+x2-x3 = 0, x0+x1+x2+x3 = 0 solved by hand
        let expected = [1, -1, -1, 1];
        for (x, e) in v.iter().zip(expected) {
            assert_eq!(x, &(&k * rat(e)));
        }
        assert!(lift.mul(&b).is_zero());
    }

    #[test]
    fn orth_complement_examples() {
        let m = QMat::from_cols(&[vec![rat(1), rat(0), rat(0)]], 3);
        let c = orth_complement(&m);
        assert_eq!(c.cols(), 2);
        for v in c.col_vecs() {
            assert_eq!(v[0], rat(0));
        }
        assert_eq!(orth_complement(&QMat::identity(3)).cols(), 0);
        let c = orth_complement(&QMat::from_cols(&[vec![rat(1), rat(1)]], 2));
        assert_eq!(c.cols(), 1);
        assert_eq!(c[(0, 0)], -c[(1, 0)].clone());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = QMat::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(m.solve(&[rat(2), rat(0)]).unwrap(), vec![rat(1), rat(1)]);
        let m = QMat::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(m.solve(&[rat(1), rat(3)]).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = QMat> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                let rows: Vec<QVec> = v.chunks(c).map(|ch| ch.iter().map(|&x| rat(x)).collect()).collect();
                QMat::from_rows(&rows, c)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let b = null_basis(&m);
            prop_assert_eq!(m.rank() + b.cols(), m.cols());
            prop_assert!(m.mul(&b).is_zero());
        }

        #[test]
        fn complement_is_orthogonal(m in small_matrix()) {
            let c = orth_complement(&m);
            prop_assert!(m.transpose().mul(&c).is_zero());
            prop_assert_eq!(c.cols() + m.rank(), m.rows());
        }

        #[test]
        fn det_matches_rank(m in small_matrix()) {
            if m.rows() == m.cols() {
                prop_assert_eq!(m.det() == rat(0), m.rank() < m.rows());
            }
        }
    }
}
