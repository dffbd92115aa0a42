//! Brute-force facet enumeration over `d`-subsets of a point set.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::barycentric::det_i128;
use crate::kernel::rat::common_denominator;
use crate::kernel::{affine_rank, null_basis, rat, QMat, QVec, Rat};

pub const FACET_ORACLE_CAP: usize = 60;

pub fn facet_oracle(points: &[QVec]) -> Result<Vec<Vec<usize>>> {
    facet_oracle_capped(points, FACET_ORACLE_CAP)
}

/// Supports of all facets, each sorted, the list sorted.
///
/// Every affinely independent `d`-subset spans a hyperplane; it supports a
/// facet when no two points lie strictly on opposite sides. Subsets inside an
/// already found support span that same hyperplane and are skipped.
pub fn facet_oracle_capped(points: &[QVec], cap: usize) -> Result<Vec<Vec<usize>>> {
    if points.len() > cap {
        return Err(Error::CapExceeded(points.len(), cap));
    }
    let d = points.first().map_or(0, Vec::len);
    if points.is_empty() || affine_rank(points) != Some(d) {
        return Err(Error::InvalidInput("points are not full-dimensional".into()));
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut found: Vec<Vec<usize>> = match integer_copy(points) {
        Some(ints) => enumerate(points.len(), d, |s| int_sides(&ints, s)),
        None => None,
    }
    .unwrap_or_else(|| enumerate(points.len(), d, |s| Some(rat_sides(points, s))).expect("exact path"));
    found.sort();
    Ok(found)
}

fn enumerate(
    n: usize,
    d: usize,
    mut sides: impl FnMut(&[usize]) -> Option<Option<Vec<i8>>>,
) -> Option<Vec<Vec<usize>>> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    let in_found =
        |s: &[usize], found: &[Vec<usize>]| found.iter().any(|f| s.iter().all(|x| f.binary_search(x).is_ok()));
    let mut subset: Vec<usize> = (0..d).collect();
    loop {
        if !in_found(&subset, &found) {
            if let Some(signs) = sides(&subset)? {
                let pos = signs.iter().any(|&s| s > 0);
                let neg = signs.iter().any(|&s| s < 0);
                if !(pos && neg) {
                    found.push((0..n).filter(|&i| signs[i] == 0).collect());
                }
            }
        }
        // next d-subset in lexicographic order
        let Some(i) = (0..d).rev().find(|&i| subset[i] < n - d + i) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..d {
            subset[j] = subset[j - 1] + 1;
        }
    }
    Some(found)
}

fn integer_copy(points: &[QVec]) -> Option<Vec<Vec<i64>>> {
    let den = Rat::from_integer(common_denominator(points.iter().flatten()));
    points
        .iter()
        .map(|p| p.iter().map(|x| (x * &den).to_integer().to_i64()).collect())
        .collect()
}

/// Signs of all points against the hyperplane through `subset`; `Some(None)`
/// if the subset is affinely dependent, `None` on overflow.
fn int_sides(points: &[Vec<i64>], subset: &[usize]) -> Option<Option<Vec<i8>>> {
    let d = points[0].len();
    // Normal (a, c) with a.x + c = 0 via signed maximal minors of rows (p, 1).
    let rows: Vec<Vec<i128>> = subset
        .iter()
        .map(|&i| points[i].iter().map(|&x| x as i128).chain([1]).collect())
        .collect();
    let mut h = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != k).map(|(_, &x)| x).collect())
            .collect();
        let m = det_i128(minor)?;
        h.push(if k % 2 == 0 { m } else { -m });
    }
    if h.iter().all(|&x| x == 0) {
        return Some(None);
    }
    let mut signs = Vec::with_capacity(points.len());
    for p in points {
        let mut v = h[d];
        for (a, &x) in h.iter().zip(p) {
            v = v.checked_add(a.checked_mul(x as i128)?)?;
        }
        signs.push(v.signum() as i8);
    }
    Some(Some(signs))
}

fn rat_sides(points: &[QVec], subset: &[usize]) -> Option<Vec<i8>> {
    let d = points[0].len();
    let rows: Vec<QVec> = subset
        .iter()
        .map(|&i| points[i].iter().cloned().chain([rat(1)]).collect())
        .collect();
    let kernel = null_basis(&QMat::from_rows(&rows, d + 1));
    if kernel.cols() != 1 {
        return None;
    }
    let h = kernel.col(0);
    Some(
        points
            .iter()
            .map(|p| {
                let v: Rat = h[d].clone() + p.iter().zip(&h).map(|(x, a)| x * a).sum::<Rat>();
                if v.is_zero() {
                    0
                } else if v.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .collect(),
    )
}
