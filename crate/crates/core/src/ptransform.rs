//! P-transforms of linear projections, Minkowski transforms, and their
//! coincidence with colorful Gale transforms for simplices.

use num_traits::One;

use crate::colorful::origin_containment;
use crate::error::{Error, Result};
use crate::gale::{colorful_gale, positively_equivalent};
use crate::kernel::matrix::{sub_vec, zero_vec};
use crate::kernel::{null_basis, rat, LinearProgram, LpStatus, QMat, QVec, Rat, Relation};
use crate::minkowski::{vertex_configuration, SimplexV};

/// `{x : l_i(x) <= 1 for all i}`, bounded, with every form facet-defining.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    forms: Vec<QVec>,
}

fn feasibility_lp(dim: usize, forms: &[QVec], tight: &[usize]) -> LinearProgram {
    let mut lp = LinearProgram::new(dim);
    lp.set_all_free();
    for (i, f) in forms.iter().enumerate() {
        let rel = if tight.contains(&i) { Relation::Eq } else { Relation::Le };
        lp.constraint(f.clone(), rel, rat(1));
    }
    lp
}

/// Whether form `i` is implied by the others.
fn redundant(dim: usize, forms: &[QVec], i: usize) -> bool {
    let others: Vec<QVec> = forms
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, f)| f.clone())
        .collect();
    let mut lp = feasibility_lp(dim, &others, &[]);
    lp.maximize(forms[i].clone());
    let res = lp.solve();
    match res.status {
        LpStatus::Optimal => res.optimum.is_some_and(|m| m <= Rat::one()),
        _ => false,
    }
}

impl HPolytope {
    pub fn new(dim: usize, forms: Vec<QVec>) -> Result<Self> {
        if forms.iter().any(|f| f.len() != dim) {
            return Err(Error::InvalidInput(format!("form dimension differs from {dim}")));
        }
        if dim > 0 && !origin_containment(&forms).in_interior {
            return Err(Error::InvalidInput("forms do not bound a polytope".into()));
        }
        if let Some(i) = (0..forms.len()).find(|&i| redundant(dim, &forms, i)) {
            return Err(Error::InvalidInput(format!("form {i} is redundant")));
        }
        Ok(Self { dim, forms })
    }

    /// Drops redundant forms one at a time, keeping the order of the rest.
    pub fn pruned(dim: usize, mut forms: Vec<QVec>) -> Result<Self> {
        while let Some(i) = (0..forms.len()).find(|&i| redundant(dim, &forms, i)) {
            forms.remove(i);
        }
        Self::new(dim, forms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forms(&self) -> &[QVec] {
        &self.forms
    }

    /// Whether the forms indexed by `idx` are tight together on a non-empty
    /// face, and no other form is tight on all of it.
    pub fn is_face_index_set(&self, idx: &[usize]) -> bool {
        if idx.iter().any(|&i| i >= self.forms.len()) {
            return false;
        }
        let base = feasibility_lp(self.dim, &self.forms, idx);
        if !base.solve().is_optimal() {
            return false;
        }
        (0..self.forms.len()).filter(|j| !idx.contains(j)).all(|j| {
            let mut lp = base.clone();
            lp.minimize(self.forms[j].clone());
            // reported optimum is the negated minimum
            lp.solve().optimum.is_some_and(|m| -m < Rat::one())
        })
    }
}

/// A surjective linear map given by an `e x d` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProjection {
    matrix: QMat,
}

impl LinearProjection {
    pub fn new(matrix: QMat) -> Result<Self> {
        if matrix.rank() < matrix.rows() {
            return Err(Error::RankDeficient(format!(
                "projection has rank {} < {}",
                matrix.rank(),
                matrix.rows()
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: QMat::identity(d),
        }
    }

    pub fn matrix(&self) -> &QMat {
        &self.matrix
    }
}

/// Images of the facet forms in the quotient of the dual space by the row
/// space of the projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PTransform {
    pub dim: usize,
    pub vectors: Vec<QVec>,
    pub partition: Option<Vec<Vec<usize>>>,
}

/// Re-centered vertex coordinates of a simplex in a basis of its linear span,
/// with the basis as the columns of an `ambient x dim` matrix. A
/// full-dimensional simplex keeps the standard basis.
pub fn simplex_chart(s: &SimplexV) -> (QVec, QMat, Vec<QVec>) {
    let b = s.barycenter();
    let u: Vec<QVec> = s.vertices().iter().map(|v| sub_vec(v, &b)).collect();
    let (k, d) = (s.dim(), s.ambient_dim());
    if k == d {
        return (b, QMat::identity(d), u);
    }
    let basis = QMat::from_cols(&u[1..], d);
    let local = u
        .iter()
        .map(|x| basis.solve(x).expect("vertex lies in the span"))
        .collect();
    (b, basis, local)
}

/// Facet forms of a simplex in its chart; facet `i` is opposite vertex `i`.
pub fn h_rep_from_simplex(s: &SimplexV) -> Result<HPolytope> {
    let (_, _, local) = simplex_chart(s);
    let k = s.dim();
    if k == 0 {
        return Err(Error::InvalidInput("a point has no facets".into()));
    }
    let forms = (0..=k)
        .map(|i| {
            let rows: Vec<QVec> = (0..=k).filter(|&j| j != i).map(|j| local[j].clone()).collect();
            QMat::from_rows(&rows, k)
                .solve(&vec![rat(1); k])
                .ok_or_else(|| Error::InvalidInput("degenerate simplex".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    HPolytope::new(k, forms)
}

/// `l` in coordinates of the quotient `(R^d)* / rowspace(A)`, via `N^T l`
/// for the echelon kernel basis `N` of `A`.
pub fn p_transform(p: &HPolytope, proj: &LinearProjection) -> Result<PTransform> {
    if proj.matrix.cols() != p.dim {
        return Err(Error::InvalidInput("projection and polytope dimensions differ".into()));
    }
    let proj = LinearProjection::new(proj.matrix.clone())?;
    let n = null_basis(&proj.matrix);
    let q = n.transpose();
    Ok(PTransform {
        dim: n.cols(),
        vectors: p.forms.iter().map(|l| q.mul_vec(l)).collect(),
        partition: None,
    })
}

/// Whether `pi(F)` is a proper face of `pi(P)` whose preimage in `P` is `F`,
/// for the face `F` with facet index set `idx`.
pub fn projection_face_test(p: &HPolytope, proj: &LinearProjection, idx: &[usize]) -> Result<bool> {
    if !p.is_face_index_set(idx) {
        return Err(Error::NotAFace);
    }
    let g = p_transform(p, proj)?;
    let pts: Vec<QVec> = idx.iter().map(|&i| g.vectors[i].clone()).collect();
    Ok(!pts.is_empty() && origin_containment(&pts).in_relint)
}

/// The P-transform of `P_0 x ... x P_s` under `(x_0, ..., x_s) -> sum E_i x_i`,
/// each block embedded by `embeddings[i]` (`d x dim(P_i)`), partitioned by block.
pub fn minkowski_transform_embedded(polys: &[HPolytope], embeddings: &[QMat]) -> Result<PTransform> {
    let Some(first) = embeddings.first() else {
        return Err(Error::InvalidInput("no summands".into()));
    };
    let d = first.rows();
    if embeddings.len() != polys.len()
        || polys
            .iter()
            .zip(embeddings)
            .any(|(p, e)| e.rows() != d || e.cols() != p.dim)
    {
        return Err(Error::InvalidInput("embedding shapes do not match the summands".into()));
    }
    let total: usize = polys.iter().map(HPolytope::dim).sum();
    let mut forms = Vec::new();
    let mut partition = Vec::new();
    let mut offset = 0;
    for p in polys {
        let mut class = Vec::new();
        for f in &p.forms {
            let mut g = zero_vec(total);
            g[offset..offset + p.dim].clone_from_slice(f);
            class.push(forms.len());
            forms.push(g);
        }
        partition.push(class);
        offset += p.dim;
    }
    let mut mu = QMat::zeros(d, total);
    let mut col = 0;
    for e in embeddings {
        for c in 0..e.cols() {
            for r in 0..d {
                mu[(r, col)] = e[(r, c)].clone();
            }
            col += 1;
        }
    }
    // The product polytope is valid by construction; only the projection is checked.
    let product = HPolytope { dim: total, forms };
    let mut t = p_transform(&product, &LinearProjection::new(mu)?)?;
    t.partition = Some(partition);
    let centered = t.partition.as_ref().expect("set above").iter().all(|class| {
        let pts: Vec<QVec> = class.iter().map(|&i| t.vectors[i].clone()).collect();
        origin_containment(&pts).in_relint
    });
    if !centered {
        return Err(Error::NotCentered);
    }
    Ok(t)
}

/// Minkowski transform of full-dimensional polytopes in a common space.
pub fn minkowski_transform(polys: &[HPolytope]) -> Result<PTransform> {
    let d = polys.first().map_or(0, HPolytope::dim);
    if polys.iter().any(|p| p.dim != d) {
        return Err(Error::InvalidInput("summands live in different dimensions".into()));
    }
    minkowski_transform_embedded(polys, &vec![QMat::identity(d); polys.len()])
}

/// Minkowski transform of simplices, each taken in its own chart.
pub fn simplex_minkowski_transform(simplices: &[SimplexV]) -> Result<PTransform> {
    let mut polys = Vec::new();
    let mut embeddings = Vec::new();
    for s in simplices {
        polys.push(h_rep_from_simplex(s)?);
        embeddings.push(simplex_chart(s).1);
    }
    minkowski_transform_embedded(&polys, &embeddings)
}

/// The Minkowski transform (facet `i` of summand `j`) and the colorful Gale
/// transform (vertex `i` of summand `j`) are positively equivalent.
pub fn verify_coincidence(simplices: &[SimplexV]) -> Result<bool> {
    let mt = simplex_minkowski_transform(simplices)?;
    let cg = colorful_gale(&vertex_configuration(simplices)?)?;
    if mt.dim != cg.dim || mt.vectors.len() != cg.vectors.len() {
        return Ok(false);
    }
    positively_equivalent(&mt.vectors, &cg.vectors)
}

/// The P-transform of the simplex `Delta` in `Q^(m-1)` under the projection
/// sending its vertices onto the re-centered points of `q`.
pub fn delta_transform(q: &[QVec]) -> Result<PTransform> {
    let m = q.len();
    let e = q.first().map_or(0, Vec::len);
    if m < 2 {
        return Err(Error::InvalidInput("need at least two points".into()));
    }
    let k = rat(m as i64);
    let center: QVec = (0..e)
        .map(|c| q.iter().map(|p| p[c].clone()).sum::<Rat>() / &k)
        .collect();
    let centered: Vec<QVec> = q.iter().map(|p| sub_vec(p, &center)).collect();
    let mut delta: Vec<QVec> = (0..m - 1)
        .map(|j| (0..m - 1).map(|i| rat((i == j) as i64)).collect())
        .collect();
    delta.push(vec![rat(-1); m - 1]);
    let simplex = SimplexV::new(delta)?;
    let hp = h_rep_from_simplex(&simplex)?;
    let proj = LinearProjection::new(QMat::from_cols(&centered[..m - 1], e)).map_err(|_| Error::AffineSpanDeficient)?;
    p_transform(&hp, &proj)
}
