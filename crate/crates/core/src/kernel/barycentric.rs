//! Origin tests for small point sets through barycentric coordinates.
//!
//! For `k` points in `Q^d` with `k <= d + 1` the system `sum l_i p_i = 0`,
//! `sum l_i = 1` has at most one solution when the points are affinely
//! independent. Its sign pattern decides whether the origin lies in the hull.
//! The outcome is unchanged when each point is scaled by its own positive
//! factor, so integer-scaled points can be used through an `i128` fast path.

use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::{QMat, QVec};
use super::rat::{common_denominator, rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginTest {
    /// Points are affinely dependent; nothing is decided.
    Dependent,
    Outside,
    /// In the hull with some barycentric coordinate zero.
    Boundary,
    /// All barycentric coordinates strictly positive.
    Relint,
}

impl OriginTest {
    pub fn contains(self) -> bool {
        matches!(self, OriginTest::Boundary | OriginTest::Relint)
    }
}

/// Exact test over the rationals.
pub fn origin_test(points: &[&QVec]) -> OriginTest {
    let k = points.len();
    if k == 0 {
        return OriginTest::Outside;
    }
    let d = points[0].len();
    let cols: Vec<QVec> = points
        .iter()
        .map(|p| {
            let mut c = (*p).clone();
            c.push(rat(1));
            c
        })
        .collect();
    let m = QMat::from_cols(&cols, d + 1);
    if m.rank() < k {
        return OriginTest::Dependent;
    }
    let mut rhs = vec![Rat::zero(); d + 1];
    rhs[d] = rat(1);
    match m.solve(&rhs) {
        None => OriginTest::Outside,
        Some(l) => classify(l.iter().map(|x| sign_of(x.is_positive(), x.is_negative()))),
    }
}

fn sign_of(pos: bool, neg: bool) -> i8 {
    if pos {
        1
    } else if neg {
        -1
    } else {
        0
    }
}

fn classify(signs: impl Iterator<Item = i8>) -> OriginTest {
    let mut zero = false;
    for s in signs {
        match s {
            -1 => return OriginTest::Outside,
            0 => zero = true,
            _ => {}
        }
    }
    if zero {
        OriginTest::Boundary
    } else {
        OriginTest::Relint
    }
}

/// Scales `p` by the lcm of its denominators; `None` if a coordinate leaves `i64`.
pub fn integer_scaled(p: &[Rat]) -> Option<Vec<i64>> {
    let den = common_denominator(p);
    p.iter()
        .map(|x| (x * Rat::from_integer(den.clone())).to_integer().to_i64())
        .collect()
}

/// Scales every point; `None` if any coordinate does not fit.
pub fn integer_points(points: &[QVec]) -> Option<Vec<Vec<i64>>> {
    points.iter().map(|p| integer_scaled(p)).collect()
}

/// Fraction-free determinant in `i128`; `None` on overflow.
pub fn det_i128(a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    let mut a = a;
    let mut prev: i128 = 1;
    let mut neg = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return Some(0);
        };
        if p != k {
            a.swap(p, k);
            neg = !neg;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let v = a[k][k]
                    .checked_mul(a[r][c])?
                    .checked_sub(a[r][k].checked_mul(a[k][c])?)?;
                a[r][c] = v / prev;
            }
            a[r][k] = 0;
        }
        prev = a[k][k];
    }
    Some(if neg { -prev } else { prev })
}

/// Rank of an integer matrix and the indices of a maximal independent set of rows.
fn row_basis(rows: &[Vec<i128>]) -> Option<Vec<usize>> {
    // Eliminate on the transpose so pivot columns name independent rows.
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = (0..n).map(|c| (0..m).map(|r| rows[r][c]).collect()).collect();
    let mut prev: i128 = 1;
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..m {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(p, rank);
        for r in rank + 1..n {
            for c in col + 1..m {
                let v = a[rank][col]
                    .checked_mul(a[r][c])?
                    .checked_sub(a[r][col].checked_mul(a[rank][c])?)?;
                a[r][c] = v / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        pivots.push(col);
        rank += 1;
    }
    Some(pivots)
}

/// Integer fast path of [`origin_test`]; `None` on overflow.
pub fn origin_test_int(points: &[&[i64]]) -> Option<OriginTest> {
    let k = points.len();
    if k == 0 {
        return Some(OriginTest::Outside);
    }
    let d = points[0].len();
    // Rows of the (d+1) x k lifted matrix, the last row all ones.
    let mut rows: Vec<Vec<i128>> = (0..d).map(|i| points.iter().map(|p| p[i] as i128).collect()).collect();
    rows.push(vec![1; k]);
    let basis = row_basis(&rows)?;
    if basis.len() < k {
        return Some(OriginTest::Dependent);
    }
    // Consistency: the right-hand side e_d must lie in the column span, i.e.
    // the augmented matrix keeps rank k.
    let mut aug = rows.clone();
    for (i, r) in aug.iter_mut().enumerate() {
        r.push(if i == d { 1 } else { 0 });
    }
    if row_basis(&aug)?.len() > k {
        return Some(OriginTest::Outside);
    }
    let sub: Vec<Vec<i128>> = basis.iter().map(|&r| rows[r].clone()).collect();
    let rhs: Vec<i128> = basis.iter().map(|&r| if r == d { 1 } else { 0 }).collect();
    let det = det_i128(sub.clone())?;
    debug_assert!(det != 0);
    let mut signs = Vec::with_capacity(k);
    for j in 0..k {
        let mut mj = sub.clone();
        for (r, row) in mj.iter_mut().enumerate() {
            row[j] = rhs[r];
        }
        let dj = det_i128(mj)?;
        signs.push((dj.signum() * det.signum()) as i8);
    }
    Some(classify(signs.into_iter()))
}

/// Origin test over points that may have an integer-scaled copy.
pub fn origin_test_cached(points: &[&QVec], scaled: Option<&[&[i64]]>) -> OriginTest {
    if let Some(s) = scaled {
        if let Some(r) = origin_test_int(s) {
            return r;
        }
    }
    origin_test(points)
}

/// Determinant sign of a square rational matrix given by rows.
pub fn det_sign(rows: &[QVec]) -> i8 {
    let n = rows.len();
    let m = QMat::from_rows(rows, n);
    let d = m.det();
    sign_of(d.is_positive(), d.is_negative())
}
