use chromadepth::colorful::{class_offsets, random_centered_rgp};
use chromadepth::gale::{
    colorful_gale, face_test, gale_transform, inverse_colorful_gale, positively_equivalent, GaleTransform,
    PointConfiguration,
};
use chromadepth::kernel::matrix::sub_vec;
use chromadepth::kernel::{affine_rank, rat, LinearProgram, QMat, QVec, Relation};
use chromadepth::minkowski::{
    facet_oracle, mink_face_test, random_simplices, totally_mixed_facets, totally_mixed_from_oracle, MinkowskiFace,
    SimplexV,
};
use chromadepth::ptransform::{delta_transform, projection_face_test, verify_coincidence, HPolytope, LinearProjection};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn qv(v: &[i64]) -> QVec {
    v.iter().map(|&x| rat(x)).collect()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// Faces as intersections of facet supports; the empty family gives all points.
fn face_by_facets(facets: &[Vec<usize>], n: usize, u: &[usize]) -> bool {
    let mut closure: Vec<usize> = (0..n).collect();
    for f in facets.iter().filter(|f| u.iter().all(|i| f.contains(i))) {
        closure.retain(|i| f.contains(i));
    }
    closure == u
}

fn random_full_dim_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<QVec> {
    loop {
        let pts: Vec<QVec> = (0..n)
            .map(|_| (0..d).map(|_| rat(rng.gen_range(-3..=3))).collect())
            .collect();
        let distinct = (0..n).all(|i| (0..i).all(|j| pts[i] != pts[j]));
        if distinct && affine_rank(&pts) == Some(d) {
            return pts;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn face_test_matches_facet_lattice(seed in any::<u64>(), d in 1usize..=3, extra in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = (d + 1 + extra).min(7);
        let pts = random_full_dim_points(&mut rng, n, d);
        let g = gale_transform(&PointConfiguration::new(d, pts.clone(), None).unwrap()).unwrap();
        let facets = facet_oracle(&pts).unwrap();
        for u in subsets(n) {
            prop_assert_eq!(face_test(&g, &u), face_by_facets(&facets, n, &u), "{:?}", u);
        }
    }

    #[test]
    fn inverse_gale_round_trips(seed in any::<u64>(), shape in prop::collection::vec(2usize..=4, 2..=3)) {
        let c = random_centered_rgp(&shape, seed, 8).unwrap();
        let offsets = class_offsets(&shape);
        let partition = shape.iter().zip(&offsets).map(|(&k, &o)| (o..o + k).collect()).collect();
        let g = GaleTransform::new(c.dim(), c.classes().concat(), Some(partition)).unwrap();
        let back = inverse_colorful_gale(&g).unwrap();
        prop_assert!(positively_equivalent(&colorful_gale(&back).unwrap().vectors, &g.vectors).unwrap());
    }
}

/// Whether some functional is constant on each `U_i` and strictly larger on
/// the other vertices of that summand.
fn mink_face_lp(simplices: &[SimplexV], u: &MinkowskiFace) -> bool {
    let d = simplices[0].ambient_dim();
    let mut lp = LinearProgram::new(d);
    lp.set_all_free();
    for (s, sel) in simplices.iter().zip(&u.selection) {
        let base = &s.vertices()[sel[0]];
        for (v, p) in s.vertices().iter().enumerate() {
            let diff = sub_vec(p, base);
            if sel.contains(&v) {
                lp.constraint(diff, Relation::Eq, rat(0));
            } else {
                lp.constraint(diff, Relation::Ge, rat(1));
            }
        }
    }
    lp.maximize(vec![rat(0); d]);
    lp.solve().is_optimal()
}

fn all_selections(simplices: &[SimplexV]) -> Vec<MinkowskiFace> {
    let mut out = vec![Vec::new()];
    for s in simplices {
        let n = s.vertices().len();
        let opts: Vec<Vec<usize>> = subsets(n).filter(|x| !x.is_empty()).collect();
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<usize>>| {
                opts.iter().map(move |o| {
                    let mut p = prefix.clone();
                    p.push(o.clone());
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(|selection| MinkowskiFace { selection }).collect()
}

#[test]
fn mink_face_test_matches_supporting_functionals() {
    let cases: [(&[usize], usize); 4] = [(&[1, 1], 2), (&[2, 1], 2), (&[2, 2], 3), (&[1, 1, 1], 2)];
    for (dims, ambient) in cases {
        for seed in 0..6 {
            let s = random_simplices(dims, ambient, seed, 5).unwrap();
            for u in all_selections(&s) {
                assert_eq!(
                    mink_face_test(&s, &u).unwrap(),
                    mink_face_lp(&s, &u),
                    "{dims:?} seed {seed} {u:?}"
                );
            }
        }
    }
}

#[test]
fn dictionary_matches_facet_oracle() {
    for (dims, ambient) in [
        (&[1usize, 1][..], 1usize),
        (&[2, 1], 2),
        (&[2, 2], 3),
        (&[1, 1, 1], 1),
        (&[3, 1], 3),
    ] {
        for seed in 0..8 {
            let s = random_simplices(dims, ambient, seed, 6).unwrap();
            assert_eq!(
                totally_mixed_facets(&s).unwrap(),
                totally_mixed_from_oracle(&s).unwrap(),
                "{dims:?} {seed}"
            );
        }
    }
}

/// Whether some strictly positive combination of the forms in `idx` factors
/// through the projection.
fn projection_face_lp(p: &HPolytope, proj: &QMat, idx: &[usize]) -> bool {
    let e = proj.rows();
    let d = p.dim();
    let k = idx.len();
    let mut lp = LinearProgram::new(k + e);
    for j in 0..e {
        lp.set_free(k + j);
    }
    for c in 0..d {
        let mut row: QVec = idx.iter().map(|&i| p.forms()[i][c].clone()).collect();
        row.extend((0..e).map(|j| -proj[(j, c)].clone()));
        lp.constraint(row, Relation::Eq, rat(0));
    }
    for t in 0..k {
        let mut row = vec![rat(0); k + e];
        row[t] = rat(1);
        lp.constraint(row, Relation::Ge, rat(1));
    }
    lp.maximize(vec![rat(0); k + e]);
    lp.solve().is_optimal()
}

fn random_polytope(rng: &mut ChaCha8Rng, d: usize, m: usize) -> HPolytope {
    loop {
        let forms: Vec<QVec> = (0..m)
            .map(|_| (0..d).map(|_| rat(rng.gen_range(-3..=3))).collect())
            .collect();
        if forms.iter().any(|f| f.iter().all(|x| *x == rat(0))) {
            continue;
        }
        if let Ok(p) = HPolytope::pruned(d, forms) {
            return p;
        }
    }
}

#[test]
fn projection_face_test_matches_supporting_functionals() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for trial in 0..30 {
        let d = 2 + trial % 2;
        let p = random_polytope(&mut rng, d, d + 3);
        let e = 1 + trial % d;
        let proj = loop {
            let rows: Vec<QVec> = (0..e)
                .map(|_| (0..d).map(|_| rat(rng.gen_range(-2..=2))).collect())
                .collect();
            if let Ok(l) = LinearProjection::new(QMat::from_rows(&rows, d)) {
                break l;
            }
        };
        for idx in subsets(p.forms().len()).filter(|x| !x.is_empty()) {
            if !p.is_face_index_set(&idx) {
                continue;
            }
            checked += 1;
            assert_eq!(
                projection_face_test(&p, &proj, &idx).unwrap(),
                projection_face_lp(&p, proj.matrix(), &idx),
                "trial {trial} {idx:?}"
            );
        }
    }
    assert!(checked > 100);
}

#[test]
fn face_index_sets_are_tight_sets_of_faces() {
    // Square: the four vertices, four edges and nothing else.
    let sq = HPolytope::new(2, vec![qv(&[1, 0]), qv(&[-1, 0]), qv(&[0, 1]), qv(&[0, -1])]).unwrap();
    let faces: Vec<Vec<usize>> = subsets(4)
        .filter(|x| !x.is_empty() && sq.is_face_index_set(x))
        .collect();
    assert_eq!(faces.len(), 8);
    assert!(!sq.is_face_index_set(&[0, 1]));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn minkowski_and_gale_transforms_coincide(seed in any::<u64>(), dims in prop::collection::vec(1usize..=2, 2..=4), ambient in 1usize..=3) {
        let s = random_simplices(&dims, ambient, seed, 5);
        prop_assume!(s.is_ok());
        prop_assert!(verify_coincidence(&s.unwrap()).unwrap());
    }

    #[test]
    fn delta_transform_is_a_gale_transform(seed in any::<u64>(), d in 1usize..=3, extra in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_full_dim_points(&mut rng, d + 1 + extra, d);
        let t = delta_transform(&pts).unwrap();
        let g: GaleTransform = gale_transform(&PointConfiguration::new(d, pts, None).unwrap()).unwrap();
        prop_assert_eq!(t.dim, g.dim);
        prop_assert!(positively_equivalent(&t.vectors, &g.vectors).unwrap());
    }
}
