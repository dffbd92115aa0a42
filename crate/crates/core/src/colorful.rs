//! Colorful configurations, containment predicates and colorful simplicial depth.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::barycentric::{integer_scaled, origin_test, origin_test_int, OriginTest};
use crate::kernel::{affine_rank, lp_min_coeff, rat, QVec};

/// Point classes `C_0, ..., C_s` in `Q^dim`. Class and point order are significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorfulConfiguration {
    dim: usize,
    classes: Vec<Vec<QVec>>,
}

impl ColorfulConfiguration {
    pub fn new(dim: usize, classes: Vec<Vec<QVec>>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidInput("configuration has no classes".into()));
        }
        if classes.iter().any(Vec::is_empty) {
            return Err(Error::InvalidInput("empty color class".into()));
        }
        if classes.iter().flatten().any(|p| p.len() != dim) {
            return Err(Error::InvalidInput(format!("point dimension differs from {dim}")));
        }
        Ok(Self { dim, classes })
    }

    /// Builds from integer coordinates; panics on inconsistent input.
    pub fn from_i64(dim: usize, classes: &[&[&[i64]]]) -> Self {
        let classes = classes
            .iter()
            .map(|c| c.iter().map(|p| p.iter().map(|&x| rat(x)).collect()).collect())
            .collect();
        Self::new(dim, classes).expect("valid configuration")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn classes(&self) -> &[Vec<QVec>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[QVec] {
        &self.classes[i]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Class sizes `(n_0, ..., n_s)`.
    pub fn shape(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn point(&self, class: usize, index: usize) -> &QVec {
        &self.classes[class][index]
    }

    pub fn points_of(&self, s: &ColorfulSimplex) -> Vec<&QVec> {
        s.members().iter().map(|&(c, i)| self.point(c, i)).collect()
    }

    /// Applies `f` to every point.
    pub fn map_points(&self, dim: usize, mut f: impl FnMut(usize, usize, &QVec) -> QVec) -> Result<Self> {
        let classes = self
            .classes
            .iter()
            .enumerate()
            .map(|(c, pts)| pts.iter().enumerate().map(|(i, p)| f(c, i, p)).collect())
            .collect();
        Self::new(dim, classes)
    }
}

/// A set of `(class, index)` pairs with at most one member per class, sorted by class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorfulSimplex {
    members: Vec<(usize, usize)>,
}

impl ColorfulSimplex {
    pub fn new(mut members: Vec<(usize, usize)>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput("two members share a class".into()));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(usize, usize)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn classes(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|m| m.0)
    }

    pub fn is_subset_of(&self, other: &ColorfulSimplex) -> bool {
        self.members.iter().all(|m| other.members.contains(m))
    }

    /// Vertex ids under the global numbering `offsets[class] + index`.
    pub fn vertex_ids(&self, offsets: &[usize]) -> Vec<usize> {
        self.members.iter().map(|&(c, i)| offsets[c] + i).collect()
    }
}

/// Start index of each class in the global vertex numbering.
pub fn class_offsets(shape: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    shape
        .iter()
        .map(|&n| {
            let o = acc;
            acc += n;
            o
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Containment {
    pub in_conv: bool,
    pub in_relint: bool,
    pub in_interior: bool,
}

/// Where the origin sits relative to `conv(points)`.
pub fn origin_containment(points: &[QVec]) -> Containment {
    let res = lp_min_coeff(points);
    let in_conv = res.is_optimal();
    let in_relint = in_conv && res.optimum.as_ref().is_some_and(Signed::is_positive);
    let dim = points.first().map_or(0, Vec::len);
    let full = affine_rank(points) == Some(dim);
    Containment {
        in_conv,
        in_relint,
        in_interior: in_relint && full,
    }
}

pub fn is_centered(c: &ColorfulConfiguration) -> bool {
    c.classes().iter().all(|cl| origin_containment(cl).in_relint)
}

/// Thm-1.2-style bound `1 + prod (n_i - 1)`.
pub fn depth_bound(shape: &[usize]) -> u64 {
    1 + shape.iter().map(|&n| n as u64 - 1).product::<u64>()
}

/// Integer-scaled copies of the points, used by the fast origin test.
pub(crate) struct Scaled<'a> {
    cfg: &'a ColorfulConfiguration,
    ints: Option<Vec<Vec<Vec<i64>>>>,
}

impl<'a> Scaled<'a> {
    pub(crate) fn new(cfg: &'a ColorfulConfiguration) -> Self {
        let ints = cfg
            .classes()
            .iter()
            .map(|cl| cl.iter().map(|p| integer_scaled(p)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>();
        Self { cfg, ints }
    }

    pub(crate) fn test(&self, members: &[(usize, usize)]) -> OriginTest {
        if let Some(ints) = &self.ints {
            let pts: Vec<&[i64]> = members.iter().map(|&(c, i)| ints[c][i].as_slice()).collect();
            if let Some(r) = origin_test_int(&pts) {
                return r;
            }
        }
        let pts: Vec<&QVec> = members.iter().map(|&(c, i)| self.cfg.point(c, i)).collect();
        origin_test(&pts)
    }
}

/// All colorful simplices over the class subset `classes`, in lexicographic order.
pub(crate) fn product_members(shape: &[usize], classes: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new()];
    for &c in classes {
        let mut next = Vec::with_capacity(out.len() * shape[c]);
        for m in &out {
            for i in 0..shape[c] {
                let mut m2: Vec<(usize, usize)> = m.clone();
                m2.push((c, i));
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

/// Calls `f` on every colorful simplex whose size lies in `sizes`, in
/// lexicographic order within each class subset.
pub(crate) fn for_each_colorful(
    shape: &[usize],
    sizes: std::ops::RangeInclusive<usize>,
    mut f: impl FnMut(&[(usize, usize)]),
) {
    let k = shape.len();
    for mask in 1u32..(1 << k) {
        let classes: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        if !sizes.contains(&classes.len()) {
            continue;
        }
        for m in product_members(shape, &classes) {
            f(&m);
        }
    }
}

/// First colorful simplex of at most `dim` points whose hull contains the origin.
pub fn rgp_violation(c: &ColorfulConfiguration) -> Option<ColorfulSimplex> {
    let scaled = Scaled::new(c);
    let mut found = None;
    // An origin in the hull of a set is in the hull of an affinely independent
    // subset, and every subset is enumerated too, so dependent sets are skipped.
    for_each_colorful(&c.shape(), 1..=c.dim(), |m| {
        if found.is_none() && scaled.test(m).contains() {
            found = Some(ColorfulSimplex { members: m.to_vec() });
        }
    });
    found
}

/// No colorful simplex with at most `dim` points contains the origin.
pub fn is_relative_general_position(c: &ColorfulConfiguration) -> bool {
    rgp_violation(c).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthReport {
    pub csd: usize,
    pub hitting: Vec<ColorfulSimplex>,
    pub bound: u64,
    pub satisfies_bound: bool,
}

fn require_full_classes(c: &ColorfulConfiguration) -> Result<()> {
    if c.num_classes() != c.dim() + 1 {
        return Err(Error::ClassCount);
    }
    Ok(())
}

/// Enumerates hitting simplices: `d + 1` affinely independent colorful points
/// with the origin in their hull.
pub fn hitting_simplices(c: &ColorfulConfiguration) -> Result<DepthReport> {
    require_full_classes(c)?;
    let scaled = Scaled::new(c);
    let all: Vec<usize> = (0..c.num_classes()).collect();
    let hitting: Vec<ColorfulSimplex> = product_members(&c.shape(), &all)
        .into_iter()
        .filter(|m| scaled.test(m).contains())
        .map(|members| ColorfulSimplex { members })
        .collect();
    let bound = depth_bound(&c.shape());
    let csd = hitting.len();
    Ok(DepthReport {
        csd,
        hitting,
        bound,
        satisfies_bound: csd as u64 <= bound,
    })
}

/// Inclusion-minimal colorful simplices whose hull contains the origin.
///
/// A minimal such set is affinely independent with the origin in its relative
/// interior; conversely such a set has a unique barycentric representation, so
/// no proper subset contains the origin.
pub fn minimal_hitting_set(c: &ColorfulConfiguration) -> Result<Vec<ColorfulSimplex>> {
    require_full_classes(c)?;
    let scaled = Scaled::new(c);
    let mut out = Vec::new();
    for_each_colorful(&c.shape(), 1..=c.num_classes(), |m| {
        if scaled.test(m) == OriginTest::Relint {
            out.push(ColorfulSimplex { members: m.to_vec() });
        }
    });
    out.sort();
    Ok(out)
}

/// The extremal configuration `C_i = {v_i, -v_i, ..., -(n_i - 1) v_i}` with
/// `v_i = e_i` for `i >= 1` and `v_0 = -(e_1 + ... + e_d)`. Index 0 of each
/// class is the special point `v_i`.
pub fn extremal_config(n: &[usize]) -> Result<ColorfulConfiguration> {
    if n.len() < 2 {
        return Err(Error::InvalidInput("need at least two classes".into()));
    }
    if let Some(bad) = n.iter().find(|&&x| x < 2) {
        return Err(Error::InvalidInput(format!("class size {bad} < 2")));
    }
    let d = n.len() - 1;
    let v = |i: usize| -> QVec {
        (0..d)
            .map(|k| match i {
                0 => rat(-1),
                _ if k + 1 == i => rat(1),
                _ => rat(0),
            })
            .collect()
    };
    let classes = n
        .iter()
        .enumerate()
        .map(|(i, &ni)| {
            let vi = v(i);
            (0..ni)
                .map(|j| {
                    let f = if j == 0 { rat(1) } else { rat(-(j as i64)) };
                    vi.iter().map(|x| x * &f).collect()
                })
                .collect()
        })
        .collect();
    ColorfulConfiguration::new(d, classes)
}

/// Class-level resamples of one class before the whole configuration is redrawn.
const CLASS_RETRIES: usize = 16;

fn random_nonzero_point(rng: &mut ChaCha8Rng, d: usize, bound: i64) -> Vec<i64> {
    loop {
        let p: Vec<i64> = (0..d).map(|_| rng.gen_range(-bound..=bound)).collect();
        if p.iter().any(|&x| x != 0) {
            return p;
        }
    }
}

/// A class of `n` integer points with the origin in the relative interior of
/// its hull: `n - 1` random points and a last point on the ray opposite to a
/// random strictly positive combination of them.
fn random_centered_class(rng: &mut ChaCha8Rng, n: usize, d: usize, bound: i64) -> Vec<QVec> {
    loop {
        let mut pts: Vec<Vec<i64>> = (0..n - 1).map(|_| random_nonzero_point(rng, d, bound)).collect();
        let mu: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(1..=4)).collect();
        let s: Vec<i64> = (0..d)
            .map(|k| pts.iter().zip(&mu).map(|(p, m)| p[k] * m).sum())
            .collect();
        let g = s.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g == 0 {
            continue;
        }
        let u: Vec<i64> = s.iter().map(|&x| -x / g).collect();
        let m = u.iter().map(|x| x.abs()).max().unwrap_or(1);
        if m > bound {
            continue;
        }
        let k = rng.gen_range(1..=bound / m);
        pts.push(u.iter().map(|x| x * k).collect());
        pts.shuffle(rng);
        return pts.into_iter().map(|p| p.into_iter().map(rat).collect()).collect();
    }
}

/// A seeded random centered configuration in relative general position with
/// integer coordinates in `[-coord_bound, coord_bound]`.
pub fn random_centered_rgp(n: &[usize], seed: u64, coord_bound: u64) -> Result<ColorfulConfiguration> {
    if coord_bound < 2 {
        return Err(Error::CoordinateRange);
    }
    if n.len() < 2 {
        return Err(Error::InvalidInput("need at least two classes".into()));
    }
    if let Some(bad) = n.iter().find(|&&x| x < 2) {
        return Err(Error::InvalidInput(format!("class size {bad} < 2")));
    }
    let d = n.len() - 1;
    let bound = coord_bound.min(1 << 20) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut classes: Vec<Vec<QVec>> = n
            .iter()
            .map(|&ni| random_centered_class(&mut rng, ni, d, bound))
            .collect();
        for _ in 0..CLASS_RETRIES * n.len() {
            let cfg = ColorfulConfiguration::new(d, classes.clone())?;
            let Some(bad) = rgp_violation(&cfg) else {
                return Ok(cfg);
            };
            let cls: Vec<usize> = bad.classes().collect();
            let i = cls[rng.gen_range(0..cls.len())];
            classes[i] = random_centered_class(&mut rng, n[i], d, bound);
        }
    }
}

/// Members of all colorful simplices of one size, as a set, for comparisons.
pub fn simplex_set(v: &[ColorfulSimplex]) -> BTreeSet<ColorfulSimplex> {
    v.iter().cloned().collect()
}

/// True if every class has `d + 1` points containing the origin in the interior
/// of its hull and no colorful `d`-subset is linearly dependent.
pub fn strong_general_position_core(c: &ColorfulConfiguration) -> bool {
    let d = c.dim();
    if c.classes()
        .iter()
        .any(|cl| cl.len() != d + 1 || !origin_containment(cl).in_interior)
    {
        return false;
    }
    let mut ok = true;
    for_each_colorful(&c.shape(), d..=d, |m| {
        if !ok {
            return;
        }
        let rows: Vec<QVec> = m.iter().map(|&(cl, i)| c.point(cl, i).clone()).collect();
        if crate::kernel::matrix::vectors_rank(&rows, d) < d {
            ok = false;
        }
    });
    ok
}
