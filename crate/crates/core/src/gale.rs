//! Gale transforms, Cayley embeddings, colorful Gale transforms and their
//! inverses, and positive equivalence through circuit signs.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::colorful::{origin_containment, ColorfulConfiguration};
use crate::error::{Error, Result};
use crate::kernel::matrix::vectors_rank;
use crate::kernel::{affine_rank, lp_min_coeff, null_basis, orth_complement, rat, QMat, QVec};

/// Circuit enumeration is exponential; inputs are capped at this many vectors.
pub const MAX_CIRCUIT_VECTORS: usize = 12;

/// Indexed points in `Q^dim`, optionally partitioned into classes `I_0, ..., I_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    dim: usize,
    points: Vec<QVec>,
    partition: Option<Vec<Vec<usize>>>,
}

fn check_partition(n: usize, partition: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in partition.iter().flatten() {
        if i >= n || seen[i] {
            return Err(Error::InvalidInput(format!("bad partition index {i}")));
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidInput("partition does not cover all points".into()));
    }
    if partition.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInput("empty class in partition".into()));
    }
    Ok(())
}

impl PointConfiguration {
    pub fn new(dim: usize, points: Vec<QVec>, partition: Option<Vec<Vec<usize>>>) -> Result<Self> {
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidInput(format!("point dimension differs from {dim}")));
        }
        if let Some(p) = &partition {
            check_partition(points.len(), p)?;
        }
        Ok(Self { dim, points, partition })
    }

    /// Concatenates classes, numbering points class by class.
    pub fn from_classes(dim: usize, classes: Vec<Vec<QVec>>) -> Result<Self> {
        let mut partition = Vec::with_capacity(classes.len());
        let mut points = Vec::new();
        for cl in classes {
            partition.push((points.len()..points.len() + cl.len()).collect());
            points.extend(cl);
        }
        Self::new(dim, points, Some(partition))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[QVec] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn partition(&self) -> Option<&[Vec<usize>]> {
        self.partition.as_deref()
    }

    /// Points of class `i`, in partition order.
    pub fn class_points(&self, i: usize) -> Vec<QVec> {
        self.partition.as_ref().expect("partitioned configuration")[i]
            .iter()
            .map(|&v| self.points[v].clone())
            .collect()
    }

    /// The `(dim + 1) x N` matrix with columns `(A(v), 1)`.
    pub fn lift_matrix(&self) -> QMat {
        let cols: Vec<QVec> = self
            .points
            .iter()
            .map(|p| {
                let mut c = p.clone();
                c.push(rat(1));
                c
            })
            .collect();
        QMat::from_cols(&cols, self.dim + 1)
    }
}

/// Vectors `G(v)` indexed like the source configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaleTransform {
    pub source_size: usize,
    pub dim: usize,
    pub vectors: Vec<QVec>,
    pub partition: Option<Vec<Vec<usize>>>,
}

impl GaleTransform {
    pub fn new(dim: usize, vectors: Vec<QVec>, partition: Option<Vec<Vec<usize>>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidInput(format!("vector dimension differs from {dim}")));
        }
        if let Some(p) = &partition {
            check_partition(vectors.len(), p)?;
        }
        Ok(Self {
            source_size: vectors.len(),
            dim,
            vectors,
            partition,
        })
    }

    pub fn class_vectors(&self, i: usize) -> Vec<QVec> {
        self.partition.as_ref().expect("partitioned transform")[i]
            .iter()
            .map(|&v| self.vectors[v].clone())
            .collect()
    }

    /// The classes as a colorful configuration in `Q^dim`.
    pub fn to_colorful(&self) -> Result<ColorfulConfiguration> {
        let p = self
            .partition
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("transform has no partition".into()))?;
        ColorfulConfiguration::new(self.dim, (0..p.len()).map(|i| self.class_vectors(i)).collect())
    }

    /// Each class contains the origin in the relative interior of its hull.
    pub fn is_centered(&self) -> bool {
        match &self.partition {
            Some(p) => (0..p.len()).all(|i| origin_containment(&self.class_vectors(i)).in_relint),
            None => origin_containment(&self.vectors).in_relint,
        }
    }
}

/// Rows of a kernel basis of the lift matrix.
pub fn gale_transform(a: &PointConfiguration) -> Result<GaleTransform> {
    if a.is_empty() || affine_rank(a.points()) != Some(a.dim()) {
        return Err(Error::AffineSpanDeficient);
    }
    let lift = a.lift_matrix();
    let kernel = null_basis(&lift);
    debug_assert!(lift.mul(&kernel).is_zero());
    GaleTransform::new(kernel.cols(), kernel.row_vecs(), a.partition.clone())
}

/// Whether the points indexed by `u` form a face: the complementary Gale
/// vectors contain the origin in the relative interior of their hull. The
/// whole index set is the improper face and tests true.
pub fn face_test(g: &GaleTransform, u: &[usize]) -> bool {
    let comp: Vec<QVec> = (0..g.vectors.len())
        .filter(|i| !u.contains(i))
        .map(|i| g.vectors[i].clone())
        .collect();
    comp.is_empty() || origin_containment(&comp).in_relint
}

/// Places class `i` on the slab `(e_i, A(v))` with `e_0 = 0`.
pub fn cayley_embedding(a: &PointConfiguration) -> Result<PointConfiguration> {
    let part = a
        .partition()
        .ok_or_else(|| Error::InvalidInput("Cayley embedding needs a partition".into()))?;
    let s = part.len() - 1;
    let mut points = vec![Vec::new(); a.len()];
    for (i, class) in part.iter().enumerate() {
        for &v in class {
            let mut p: QVec = (1..=s).map(|k| rat((k == i) as i64)).collect();
            p.extend(a.points()[v].iter().cloned());
            points[v] = p;
        }
    }
    PointConfiguration::new(s + a.dim(), points, Some(part.to_vec()))
}

/// The Gale transform of the Cayley embedding, with the partition carried over.
pub fn colorful_gale(a: &PointConfiguration) -> Result<GaleTransform> {
    let g = gale_transform(&cayley_embedding(a)?)?;
    if !g.is_centered() {
        return Err(Error::NotCentered);
    }
    Ok(g)
}

/// A partitioned point configuration whose colorful Gale transform is
/// positively equivalent to `g`.
///
/// Each class is rescaled by a strictly positive dependence so that it sums to
/// zero; the orthogonal complement of the rescaled vectors then contains the
/// class indicators, and the coordinates completing them to a basis of that
/// complement are the points.
pub fn inverse_colorful_gale(g: &GaleTransform) -> Result<PointConfiguration> {
    let part = g
        .partition
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("inverse needs a partition".into()))?;
    let n = g.vectors.len();
    let mut scaled = g.vectors.clone();
    for class in part {
        let pts: Vec<QVec> = class.iter().map(|&v| g.vectors[v].clone()).collect();
        let res = lp_min_coeff(&pts);
        if !res.optimum.as_ref().is_some_and(Signed::is_positive) {
            return Err(Error::NotCentered);
        }
        for (&v, lam) in class.iter().zip(&res.witness) {
            scaled[v] = g.vectors[v].iter().map(|x| x * lam).collect();
        }
    }
    let h = QMat::from_rows(&scaled, g.dim);
    if h.rank() < g.dim {
        return Err(Error::DeficientTransform);
    }
    let complement = orth_complement(&h);
    let indicators: Vec<QVec> = part
        .iter()
        .map(|class| (0..n).map(|v| rat(class.contains(&v) as i64)).collect())
        .collect();
    let mut basis = indicators.clone();
    let mut extra = Vec::new();
    for w in complement.col_vecs() {
        let mut trial = basis.clone();
        trial.push(w.clone());
        if vectors_rank(&trial, n) == trial.len() {
            basis = trial;
            extra.push(w);
        }
    }
    let dim = extra.len();
    let points: Vec<QVec> = (0..n).map(|v| extra.iter().map(|w| w[v].clone()).collect()).collect();
    let a = PointConfiguration::new(dim, points, Some(part.clone()))?;
    // The lift of the Cayley embedding must annihilate the rescaled vectors.
    let lift = cayley_embedding(&a)?.lift_matrix();
    if !lift.mul(&h).is_zero() || lift.rank() + g.dim != n {
        return Err(Error::RoundTrip("rescaled vectors are not a Gale transform".into()));
    }
    Ok(a)
}

/// Signed minimal dependencies, each as (positive support, negative support)
/// with the smallest support element positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CircuitSignature {
    pub circuits: BTreeSet<(Vec<usize>, Vec<usize>)>,
}

pub fn circuit_signature(v: &[QVec]) -> Result<CircuitSignature> {
    let n = v.len();
    if n > MAX_CIRCUIT_VECTORS {
        return Err(Error::TooManyVectors(n));
    }
    let dim = v.first().map_or(0, Vec::len);
    let mut circuits = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size > dim + 1 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let cols: Vec<QVec> = idx.iter().map(|&i| v[i].clone()).collect();
        let kernel = null_basis(&QMat::from_cols(&cols, dim));
        if kernel.cols() != 1 {
            continue;
        }
        let dep = kernel.col(0);
        if dep.iter().any(Zero::is_zero) {
            continue;
        }
        let flip = dep[0].is_negative();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (&i, c) in idx.iter().zip(&dep) {
            if c.is_positive() != flip {
                pos.push(i);
            } else {
                neg.push(i);
            }
        }
        circuits.insert((pos, neg));
    }
    Ok(CircuitSignature { circuits })
}

/// Equal circuit signatures. Circuit signs are unchanged by positive
/// rescaling of single vectors and by any linear isomorphism.
pub fn positively_equivalent(v1: &[QVec], v2: &[QVec]) -> Result<bool> {
    if v1.len() != v2.len() {
        return Ok(false);
    }
    Ok(circuit_signature(v1)? == circuit_signature(v2)?)
}

/// Class-`i` vectors in coordinates of the quotient by the span of all other classes.
pub fn summand_gale(g: &GaleTransform, i: usize) -> Result<Vec<QVec>> {
    let part = g
        .partition
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("summand needs a partition".into()))?;
    if i >= part.len() {
        return Err(Error::InvalidInput(format!("no class {i}")));
    }
    let others: Vec<QVec> = part
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .flat_map(|(_, c)| c.iter().map(|&v| g.vectors[v].clone()))
        .collect();
    let quotient = orth_complement(&QMat::from_cols(&others, g.dim)).transpose();
    Ok(g.class_vectors(i).iter().map(|x| quotient.mul_vec(x)).collect())
}

/// Whether the vectors of other classes span the ambient space of `g`.
pub fn others_span(g: &GaleTransform, i: usize) -> bool {
    let part = g.partition.as_ref().expect("partitioned transform");
    let others: Vec<QVec> = part
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .flat_map(|(_, c)| c.iter().map(|&v| g.vectors[v].clone()))
        .collect();
    vectors_rank(&others, g.dim) == g.dim
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Spanning {
    pub positively_spanning: bool,
    pub positively_2_spanning: bool,
}

fn positively_spans(v: &[QVec]) -> bool {
    !v.is_empty() && origin_containment(v).in_interior
}

pub fn spanning_predicates(v: &[QVec]) -> Spanning {
    let positively_spanning = positively_spans(v);
    let positively_2_spanning = positively_spanning
        && (0..v.len()).all(|j| {
            let rest: Vec<QVec> = v
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, x)| x.clone())
                .collect();
            positively_spans(&rest)
        });
    Spanning {
        positively_spanning,
        positively_2_spanning,
    }
}
