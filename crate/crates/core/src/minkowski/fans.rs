//! Codimension-one normal fans of triangles and their common refinement.

use num_traits::{Signed, Zero};

use super::{totally_mixed_facets, SimplexV};
use crate::colorful::origin_containment;
use crate::error::{Error, Result};
use crate::kernel::matrix::{dot, sub_vec, vectors_rank, zero_vec};
use crate::kernel::{null_basis, rat, LinearProgram, QMat, QVec, Relation};

/// The halfplane `{l : l.equality = 0, l.inequality >= 0}`, the common part of
/// the normal cones of vertices `pair.0` and `pair.1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf {
    pub pair: (usize, usize),
    pub equality: QVec,
    pub inequality: QVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan3 {
    pub dim: usize,
    pub leaves: [Leaf; 3],
    /// Basis of the subspace on which all three vertices are tied.
    pub axis: Vec<QVec>,
    triangle: SimplexV,
}

impl Fan3 {
    pub fn triangle(&self) -> &SimplexV {
        &self.triangle
    }

    /// The leaves, projected to the plane modulo the axis, positively span it.
    pub fn is_balanced(&self) -> bool {
        let u = self.triangle.vertices();
        let f = [sub_vec(&u[0], &u[1]), sub_vec(&u[0], &u[2])];
        let rays: Option<Vec<QVec>> = self
            .leaves
            .iter()
            .map(|leaf| {
                let m = QMat::from_rows(&[leaf.equality.clone(), leaf.inequality.clone()], self.dim);
                m.solve(&[rat(0), rat(1)])
                    .map(|l| f.iter().map(|fi| dot(fi, &l)).collect())
            })
            .collect();
        rays.is_some_and(|r| origin_containment(&r).in_interior)
    }
}

pub fn fan_from_triangle(t: &SimplexV) -> Result<Fan3> {
    if t.dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "expected a triangle, got dimension {}",
            t.dim()
        )));
    }
    let d = t.ambient_dim();
    let u = t.vertices();
    let diffs = [sub_vec(&u[0], &u[1]), sub_vec(&u[0], &u[2])];
    if d < 2 || vectors_rank(&diffs, d) < 2 {
        return Err(Error::DegenerateTriangle);
    }
    let leaf = |i: usize, j: usize| {
        let k = 3 - i - j;
        Leaf {
            pair: (i, j),
            equality: sub_vec(&u[i], &u[j]),
            inequality: sub_vec(&u[i], &u[k]),
        }
    };
    let axis = null_basis(&QMat::from_rows(&diffs, d)).col_vecs();
    let fan = Fan3 {
        dim: d,
        leaves: [leaf(0, 1), leaf(0, 2), leaf(1, 2)],
        axis,
        triangle: t.clone(),
    };
    debug_assert!(fan.is_balanced());
    Ok(fan)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FanIntersection {
    pub maximal_cones: usize,
    /// Leaf choice per fan for each maximal cone.
    pub cones: Vec<Vec<usize>>,
    pub bound: u64,
    pub bound_ok: bool,
    /// Totally mixed facets of the sum of the generating triangles, when the
    /// ambient dimension admits them.
    pub tmf_count: Option<usize>,
}

/// A cone `{l : E l = 0, F l >= 0}`.
struct Cone {
    eqs: Vec<QVec>,
    ineqs: Vec<QVec>,
}

impl Cone {
    /// Maximum of `obj` over the cone intersected with the unit box.
    fn max_in_box(&self, obj: &QVec) -> crate::kernel::Rat {
        let d = obj.len();
        let mut lp = LinearProgram::new(d);
        lp.set_all_free();
        for e in &self.eqs {
            lp.constraint(e.clone(), Relation::Eq, rat(0));
        }
        for f in &self.ineqs {
            lp.constraint(f.clone(), Relation::Ge, rat(0));
        }
        for k in 0..d {
            let mut e = zero_vec(d);
            e[k] = rat(1);
            lp.constraint(e.clone(), Relation::Le, rat(1));
            lp.constraint(e, Relation::Ge, rat(-1));
        }
        lp.maximize(obj.clone());
        lp.solve().optimum.expect("bounded feasible program")
    }

    fn dim(&self, d: usize) -> usize {
        let mut tight = self.eqs.clone();
        tight.extend(self.ineqs.iter().filter(|f| self.max_in_box(f).is_zero()).cloned());
        d - vectors_rank(&tight, d)
    }

    fn contained_in(&self, other: &Cone) -> bool {
        let neg = |v: &QVec| v.iter().map(|x| -x).collect::<QVec>();
        other
            .eqs
            .iter()
            .all(|e| self.max_in_box(e).is_zero() && self.max_in_box(&neg(e)).is_zero())
            && other.ineqs.iter().all(|f| !self.max_in_box(&neg(f)).is_positive())
    }
}

/// Counts inclusion-maximal nonzero cones among all intersections of one
/// leaf per fan.
pub fn intersect_fans(fans: &[Fan3]) -> Result<FanIntersection> {
    let Some(first) = fans.first() else {
        return Err(Error::InvalidInput("no fans".into()));
    };
    let d = first.dim;
    if fans.iter().any(|f| f.dim != d) {
        return Err(Error::InvalidInput("fans live in different dimensions".into()));
    }
    let k = fans.len();
    let expected = d.checked_sub(k).ok_or(Error::FansNotGeneric)?;
    let mut nonzero: Vec<(Vec<usize>, Cone)> = Vec::new();
    let mut choice = vec![0usize; k];
    loop {
        let cone = Cone {
            eqs: choice
                .iter()
                .zip(fans)
                .map(|(&c, f)| f.leaves[c].equality.clone())
                .collect(),
            ineqs: choice
                .iter()
                .zip(fans)
                .map(|(&c, f)| f.leaves[c].inequality.clone())
                .collect(),
        };
        if vectors_rank(&cone.eqs, d) < k {
            return Err(Error::FansNotGeneric);
        }
        match cone.dim(d) {
            0 => {}
            x if x == expected => nonzero.push((choice.clone(), cone)),
            _ => return Err(Error::FansNotGeneric),
        }
        let Some(i) = (0..k).rev().find(|&i| choice[i] < 2) else {
            break;
        };
        choice[i] += 1;
        choice[i + 1..].iter_mut().for_each(|c| *c = 0);
    }
    let mut cones = Vec::new();
    for (i, (ci, a)) in nonzero.iter().enumerate() {
        // Maximal unless strictly inside another; equal cones count once.
        let dominated = nonzero
            .iter()
            .enumerate()
            .any(|(j, (_, b))| j != i && a.contained_in(b) && (!b.contained_in(a) || j < i));
        if !dominated {
            cones.push(ci.clone());
        }
    }
    let bound = 1 + (1u64 << k);
    let triangles: Vec<SimplexV> = fans.iter().map(|f| f.triangle.clone()).collect();
    let tmf_count = if d == k + 1 {
        Some(totally_mixed_facets(&triangles)?.len())
    } else {
        None
    };
    Ok(FanIntersection {
        maximal_cones: cones.len(),
        bound_ok: cones.len() as u64 <= bound,
        cones,
        bound,
        tmf_count,
    })
}

#[cfg(test)]
mod tests {
    use super::super::extremal_minkowski;
    use super::*;

    fn tri(v: &[&[i64]]) -> SimplexV {
        SimplexV::new(v.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn plane_triangle() {
        let f = fan_from_triangle(&tri(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert!(f.axis.is_empty());
        assert!(f.is_balanced());
        let r = intersect_fans(&[f]).unwrap();
        assert_eq!(r.maximal_cones, 3);
        assert!(r.bound_ok);
        assert_eq!(r.tmf_count, Some(3));
    }

    #[test]
    fn space_triangle() {
        let f = fan_from_triangle(&tri(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]])).unwrap();
        assert_eq!(f.axis.len(), 1);
        assert!(f.is_balanced());
        for leaf in &f.leaves {
            assert!(dot(&leaf.equality, &f.axis[0]).is_zero());
            assert!(dot(&leaf.inequality, &f.axis[0]).is_zero());
        }
        assert_eq!(intersect_fans(&[f]).unwrap().maximal_cones, 3);
        let seg = SimplexV::new(vec![vec![rat(0), rat(0)], vec![rat(1), rat(0)]]).unwrap();
        assert!(fan_from_triangle(&seg).is_err());
    }

    #[test]
    fn extremal_pair_has_five_cones() {
        let t = extremal_minkowski(&[2, 2]).unwrap();
        let fans: Vec<Fan3> = t.iter().map(|x| fan_from_triangle(x).unwrap()).collect();
        let r = intersect_fans(&fans).unwrap();
        assert_eq!(r.maximal_cones, 5);
        assert_eq!(r.tmf_count, Some(5));
        assert!(r.bound_ok);
    }

    #[test]
    fn same_fan_twice_is_not_generic() {
        let f = fan_from_triangle(&tri(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]])).unwrap();
        assert_eq!(intersect_fans(&[f.clone(), f]), Err(Error::FansNotGeneric));
    }
}
