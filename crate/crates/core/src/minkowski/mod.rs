//! Minkowski sums of simplices: face tests and totally mixed facets through the
//! colorful Gale dictionary, extremal instances, and a brute-force facet oracle.

mod fans;
mod oracle;

pub use fans::{fan_from_triangle, intersect_fans, Fan3, FanIntersection, Leaf};
pub use oracle::{facet_oracle, facet_oracle_capped, FACET_ORACLE_CAP};

use crate::colorful::{class_offsets, extremal_config, origin_containment, product_members, Scaled};
use crate::error::{Error, Result};
use crate::gale::{colorful_gale, inverse_colorful_gale, GaleTransform, PointConfiguration};
use crate::kernel::barycentric::OriginTest;
use crate::kernel::matrix::{add_vec, sub_vec, vectors_rank, zero_vec};
use crate::kernel::{affine_rank, rat, QVec, Rat};

/// An affinely independent vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexV {
    vertices: Vec<QVec>,
}

impl SimplexV {
    pub fn new(vertices: Vec<QVec>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidInput("simplex without vertices".into()));
        };
        if vertices.iter().any(|v| v.len() != first.len()) {
            return Err(Error::InvalidInput("vertex dimensions differ".into()));
        }
        if affine_rank(&vertices) != Some(vertices.len() - 1) {
            return Err(Error::InvalidInput("simplex vertices are affinely dependent".into()));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn barycenter(&self) -> QVec {
        let k = rat(self.vertices.len() as i64);
        (0..self.ambient_dim())
            .map(|c| self.vertices.iter().map(|v| v[c].clone()).sum::<Rat>() / &k)
            .collect()
    }
}

/// Per-summand vertex index sets `U_i`; the face is `sum_i conv(U_i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct MinkowskiFace {
    pub selection: Vec<Vec<usize>>,
}

fn ambient(simplices: &[SimplexV]) -> Result<usize> {
    let Some(first) = simplices.first() else {
        return Err(Error::InvalidInput("no summands".into()));
    };
    let d = first.ambient_dim();
    if simplices.iter().any(|s| s.ambient_dim() != d) {
        return Err(Error::InvalidInput("summands live in different dimensions".into()));
    }
    Ok(d)
}

/// Checks that the edge vectors of all summands span the ambient space.
fn require_full_dimensional(simplices: &[SimplexV]) -> Result<usize> {
    let d = ambient(simplices)?;
    let edges: Vec<QVec> = simplices
        .iter()
        .flat_map(|s| s.vertices[1..].iter().map(|v| sub_vec(v, &s.vertices[0])))
        .collect();
    let r = vectors_rank(&edges, d);
    if r < d {
        return Err(Error::DegenerateSum(format!("edge vectors span {r} of {d} dimensions")));
    }
    Ok(d)
}

/// The vertices of all summands as one configuration partitioned by summand.
pub fn vertex_configuration(simplices: &[SimplexV]) -> Result<PointConfiguration> {
    let d = ambient(simplices)?;
    PointConfiguration::from_classes(d, simplices.iter().map(|s| s.vertices.clone()).collect())
}

fn offsets(simplices: &[SimplexV]) -> Vec<usize> {
    class_offsets(&simplices.iter().map(|s| s.vertices.len()).collect::<Vec<_>>())
}

/// Whether `sum_i conv(U_i)` is a face of the sum with exactly these vertex sets.
pub fn mink_face_test(simplices: &[SimplexV], u: &MinkowskiFace) -> Result<bool> {
    require_full_dimensional(simplices)?;
    if u.selection.len() != simplices.len() {
        return Err(Error::InvalidInput("one vertex subset per summand required".into()));
    }
    for (sel, s) in u.selection.iter().zip(simplices) {
        let mut seen = vec![false; s.vertices.len()];
        if sel.is_empty() {
            return Err(Error::InvalidInput("empty vertex subset".into()));
        }
        for &v in sel {
            if v >= seen.len() || seen[v] {
                return Err(Error::InvalidInput(format!("bad vertex index {v}")));
            }
            seen[v] = true;
        }
    }
    let g = colorful_gale(&vertex_configuration(simplices)?)?;
    let off = offsets(simplices);
    let selected: Vec<usize> = u
        .selection
        .iter()
        .enumerate()
        .flat_map(|(i, sel)| {
            let o = off[i];
            sel.iter().map(move |&v| o + v)
        })
        .collect();
    let comp: Vec<QVec> = (0..g.vectors.len())
        .filter(|i| !selected.contains(i))
        .map(|i| g.vectors[i].clone())
        .collect();
    Ok(comp.is_empty() || origin_containment(&comp).in_relint)
}

/// Totally mixed facets, one per colorful `sigma` with the origin in the
/// interior of `conv G(sigma)`; the facet keeps all vertices but `sigma`.
pub fn totally_mixed_facets(simplices: &[SimplexV]) -> Result<Vec<MinkowskiFace>> {
    let d = ambient(simplices)?;
    let n: usize = simplices.iter().map(SimplexV::dim).sum();
    let s = simplices.len() - 1;
    if n < s || d != n - s {
        return Err(Error::DimensionMismatch);
    }
    require_full_dimensional(simplices)?;
    let g = colorful_gale(&vertex_configuration(simplices)?)?;
    debug_assert_eq!(g.dim, s);
    let cfg = g.to_colorful()?;
    let scaled = Scaled::new(&cfg);
    let all: Vec<usize> = (0..=s).collect();
    let mut facets: Vec<MinkowskiFace> = product_members(&cfg.shape(), &all)
        .into_iter()
        .filter(|m| scaled.test(m) == OriginTest::Relint)
        .map(|m| MinkowskiFace {
            selection: m
                .iter()
                .map(|&(c, v)| (0..simplices[c].vertices.len()).filter(|&x| x != v).collect())
                .collect(),
        })
        .collect();
    facets.sort();
    Ok(facets)
}

/// `1 + prod dims`.
pub fn tmf_bound(dims: &[usize]) -> u64 {
    1 + dims.iter().map(|&n| n as u64).product::<u64>()
}

/// Simplices of dimensions `dims` in `Q^(n - s)` whose colorful Gale transform
/// is the extremal configuration with class sizes `dims[i] + 1`.
pub fn extremal_minkowski(dims: &[usize]) -> Result<Vec<SimplexV>> {
    if dims.contains(&0) {
        return Err(Error::InvalidInput("summand dimensions must be positive".into()));
    }
    let sizes: Vec<usize> = dims.iter().map(|n| n + 1).collect();
    let cfg = extremal_config(&sizes)?;
    let off = class_offsets(&sizes);
    let partition = sizes.iter().zip(&off).map(|(&k, &o)| (o..o + k).collect()).collect();
    let g = GaleTransform::new(cfg.dim(), cfg.classes().concat(), Some(partition))?;
    let a = inverse_colorful_gale(&g)?;
    (0..dims.len()).map(|i| SimplexV::new(a.class_points(i))).collect()
}

/// Every selection of one facet per summand has linearly independent edge
/// vectors, so each candidate totally mixed face has the expected dimension.
pub fn is_generic_sum(simplices: &[SimplexV]) -> bool {
    let Ok(d) = ambient(simplices) else {
        return false;
    };
    let shape: Vec<usize> = simplices.iter().map(|s| s.vertices.len()).collect();
    let all: Vec<usize> = (0..shape.len()).collect();
    product_members(&shape, &all).into_iter().all(|m| {
        let edges: Vec<QVec> = m
            .iter()
            .flat_map(|&(c, skip)| {
                let kept: Vec<&QVec> = simplices[c]
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(v, _)| v != skip)
                    .map(|(_, p)| p)
                    .collect();
                kept[1..].iter().map(|v| sub_vec(v, kept[0])).collect::<Vec<_>>()
            })
            .collect();
        vectors_rank(&edges, d) == edges.len()
    })
}

/// Seeded random simplices with integer vertices in `[-coord_bound, coord_bound]`
/// whose sum is full-dimensional in `Q^ambient`. When `ambient` equals
/// `sum dims - (summands - 1)` the collection is also generic in the sense of
/// [`is_generic_sum`].
pub fn random_simplices(dims: &[usize], ambient: usize, seed: u64, coord_bound: u64) -> Result<Vec<SimplexV>> {
    use rand::{Rng, SeedableRng};
    if dims.is_empty() || dims.contains(&0) || dims.iter().any(|&k| k > ambient) {
        return Err(Error::InvalidInput("summand dimensions must lie in 1..=ambient".into()));
    }
    if dims.iter().sum::<usize>() < ambient {
        return Err(Error::DegenerateSum("dimensions too small to span".into()));
    }
    if coord_bound < 1 {
        return Err(Error::CoordinateRange);
    }
    let b = coord_bound.min(1 << 20) as i64;
    let tight = dims.iter().sum::<usize>() + 1 == ambient + dims.len();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let simplices: Vec<SimplexV> = dims
            .iter()
            .map(|&k| loop {
                let v: Vec<QVec> = (0..=k)
                    .map(|_| (0..ambient).map(|_| rat(rng.gen_range(-b..=b))).collect())
                    .collect();
                if let Ok(s) = SimplexV::new(v) {
                    break s;
                }
            })
            .collect();
        if require_full_dimensional(&simplices).is_ok() && (!tight || is_generic_sum(&simplices)) {
            return Ok(simplices);
        }
    }
}

/// All sums of one vertex per summand, with the vertex choice of each.
pub fn minkowski_points(simplices: &[SimplexV]) -> (Vec<QVec>, Vec<Vec<usize>>) {
    let shape: Vec<usize> = simplices.iter().map(|s| s.vertices.len()).collect();
    let all: Vec<usize> = (0..shape.len()).collect();
    let d = simplices.first().map_or(0, SimplexV::ambient_dim);
    let mut points = Vec::new();
    let mut choices = Vec::new();
    for m in product_members(&shape, &all) {
        let mut p = zero_vec(d);
        for &(c, v) in &m {
            p = add_vec(&p, &simplices[c].vertices[v]);
        }
        points.push(p);
        choices.push(m.iter().map(|&(_, v)| v).collect());
    }
    (points, choices)
}

/// Totally mixed facets read off the facets of the summed point set: a facet
/// whose supporting vertices project to a facet of every summand.
pub fn totally_mixed_from_oracle(simplices: &[SimplexV]) -> Result<Vec<MinkowskiFace>> {
    require_full_dimensional(simplices)?;
    let (points, choices) = minkowski_points(simplices);
    let mut out = Vec::new();
    for support in facet_oracle(&points)? {
        let selection: Vec<Vec<usize>> = (0..simplices.len())
            .map(|i| {
                let mut u: Vec<usize> = support.iter().map(|&p| choices[p][i]).collect();
                u.sort_unstable();
                u.dedup();
                u
            })
            .collect();
        if selection.iter().zip(simplices).all(|(u, s)| u.len() == s.dim()) {
            out.push(MinkowskiFace { selection });
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn simplex(v: &[&[i64]]) -> SimplexV {
        SimplexV::new(v.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect()).unwrap()
    }

    fn face(sel: &[&[usize]]) -> MinkowskiFace {
        MinkowskiFace {
            selection: sel.iter().map(|s| s.to_vec()).collect(),
        }
    }

    #[test]
    fn segment_faces() {
        let segs = [simplex(&[&[0], &[1]]), simplex(&[&[0], &[2]])];
        assert!(mink_face_test(&segs, &face(&[&[1], &[1]])).unwrap());
        assert!(mink_face_test(&segs, &face(&[&[0], &[0]])).unwrap());
        assert!(!mink_face_test(&segs, &face(&[&[0], &[1]])).unwrap());
        assert!(mink_face_test(&segs, &face(&[&[0, 1], &[0, 1]])).unwrap());
        let mut tmf = totally_mixed_facets(&segs).unwrap();
        tmf.sort();
        assert_eq!(tmf, vec![face(&[&[0], &[0]]), face(&[&[1], &[1]])]);
    }

    #[test]
    fn dimension_mismatch() {
        let segs = [simplex(&[&[0, 0], &[1, 0]]), simplex(&[&[0, 0], &[0, 1]])];
        assert_eq!(totally_mixed_facets(&segs), Err(Error::DimensionMismatch));
        let flat = [simplex(&[&[0, 0], &[1, 0]]), simplex(&[&[0, 0], &[2, 0]])];
        assert!(matches!(
            mink_face_test(&flat, &face(&[&[0], &[0]])),
            Err(Error::DegenerateSum(_))
        ));
    }

    #[test]
    fn extremal_pairs() {
        for (dims, expected) in [(vec![1, 1], 2), (vec![2, 2], 5), (vec![1, 2], 3)] {
            let a = extremal_minkowski(&dims).unwrap();
            assert_eq!(a[0].ambient_dim(), dims.iter().sum::<usize>() - (dims.len() - 1));
            let tmf = totally_mixed_facets(&a).unwrap();
            assert_eq!(tmf.len(), expected, "{dims:?}");
            let mut sorted = tmf.clone();
            sorted.sort();
            assert_eq!(sorted, totally_mixed_from_oracle(&a).unwrap());
        }
    }

    #[test]
    fn triangles_in_space() {
        let t = [
            simplex(&[&[0, 0, 0], &[3, 1, 0], &[1, 4, 1]]),
            simplex(&[&[1, 0, 2], &[0, 2, -1], &[2, -1, 3]]),
        ];
        let tmf = totally_mixed_facets(&t).unwrap();
        assert!(tmf.len() <= 5);
        let mut sorted = tmf.clone();
        sorted.sort();
        assert_eq!(sorted, totally_mixed_from_oracle(&t).unwrap());
        for f in &tmf {
            assert!(mink_face_test(&t, f).unwrap());
        }
    }

    #[test]
    fn random_collections_are_seeded_and_generic() {
        let a = random_simplices(&[2, 2], 3, 7, 6).unwrap();
        assert_eq!(a, random_simplices(&[2, 2], 3, 7, 6).unwrap());
        assert!(is_generic_sum(&a));
        assert_eq!(
            totally_mixed_facets(&a).unwrap(),
            totally_mixed_from_oracle(&a).unwrap()
        );
        assert!(random_simplices(&[3], 2, 0, 5).is_err());
        assert!(random_simplices(&[1], 2, 0, 5).is_err());
    }
}
