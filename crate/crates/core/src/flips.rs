//! Flips between centered configurations: barycentric translations, event
//! detection along straight-line homotopies, and seeded flip walks.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::colorful::{
    for_each_colorful, hitting_simplices, is_centered, is_relative_general_position, ColorfulConfiguration,
    ColorfulSimplex,
};
use crate::error::{Error, Result};
use crate::kernel::matrix::{scale_vec, sub_vec, vectors_rank};
use crate::kernel::{isolate_roots, lp_min_coeff, rat, ratio, Interval, QPoly, QVec, Rat, RealRoot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FlipMode {
    /// Only the endpoints are checked.
    Certificate,
    /// The straight segment between the endpoints is also scanned.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipPath {
    pub start: ColorfulConfiguration,
    pub end: ColorfulConfiguration,
    pub ridge: ColorfulSimplex,
    pub mode: FlipMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipCertificate {
    pub valid: bool,
    pub symmetric_difference: BTreeSet<ColorfulSimplex>,
    pub expected: BTreeSet<ColorfulSimplex>,
    pub endpoints_ok: bool,
    /// Strict mode only: the segment has the ridge as its single event and
    /// stays centered.
    pub path_ok: Option<bool>,
}

/// The origin crosses `conv(ridge)` at the algebraic time isolated by `root`.
#[derive(Debug, Clone)]
pub struct HomotopyEvent {
    root: RealRoot,
    pub ridge: ColorfulSimplex,
    /// All barycentric coordinates of the origin at the crossing are positive.
    pub relint: bool,
}

impl HomotopyEvent {
    pub fn t_interval(&self) -> Interval {
        self.root.interval()
    }

    /// The exact time when it is rational.
    pub fn time(&self) -> Option<&Rat> {
        self.root.exact()
    }
}

fn require_ridge(c: &ColorfulConfiguration, rho: &ColorfulSimplex) -> Result<()> {
    let d = c.dim();
    if rho.len() != d {
        return Err(Error::InvalidInput(format!("ridge must have {d} members")));
    }
    let shape = c.shape();
    if rho.members().iter().any(|&(cl, i)| cl >= shape.len() || i >= shape[cl]) {
        return Err(Error::InvalidInput("ridge member out of range".into()));
    }
    Ok(())
}

/// Translates the configuration by `-2b`, `b` the barycenter of the ridge, so
/// that the origin passes through the relative interior of the ridge halfway.
pub fn translate_flip(c: &ColorfulConfiguration, rho: &ColorfulSimplex) -> Result<FlipPath> {
    require_ridge(c, rho)?;
    if !is_centered(c) || !is_relative_general_position(c) {
        return Err(Error::Precondition(
            "start must be centered and in relative general position".into(),
        ));
    }
    let pts: Vec<QVec> = c.points_of(rho).into_iter().cloned().collect();
    let diffs: Vec<QVec> = pts[1..].iter().map(|p| sub_vec(p, &pts[0])).collect();
    if vectors_rank(&diffs, c.dim()) < pts.len() - 1 {
        return Err(Error::InvalidInput("ridge points are affinely dependent".into()));
    }
    let k = rat(pts.len() as i64);
    let b: QVec = (0..c.dim())
        .map(|i| pts.iter().map(|p| p[i].clone()).sum::<Rat>() / &k)
        .collect();
    let shift = scale_vec(&b, &rat(2));
    let end = c.map_points(c.dim(), |_, _, p| sub_vec(p, &shift))?;
    if !is_centered(&end) {
        return Err(Error::FlipBreaksCenteredness);
    }
    if !is_relative_general_position(&end) {
        return Err(Error::DegenerateEndpoint);
    }
    Ok(FlipPath {
        start: c.clone(),
        end,
        ridge: rho.clone(),
        mode: FlipMode::Certificate,
    })
}

fn endpoints_ok(p: &FlipPath) -> bool {
    let d = p.start.dim();
    p.start.shape() == p.end.shape()
        && p.end.dim() == d
        && p.start.num_classes() == d + 1
        && require_ridge(&p.start, &p.ridge).is_ok()
        && [&p.start, &p.end]
            .iter()
            .all(|c| is_centered(c) && is_relative_general_position(c))
}

/// Colorful `d`-simplices containing the ridge.
pub fn simplices_over(c: &ColorfulConfiguration, rho: &ColorfulSimplex) -> BTreeSet<ColorfulSimplex> {
    let used: Vec<usize> = rho.classes().collect();
    let shape = c.shape();
    let mut out = BTreeSet::new();
    for cl in (0..shape.len()).filter(|cl| !used.contains(cl)) {
        for i in 0..shape[cl] {
            let mut m = rho.members().to_vec();
            m.push((cl, i));
            out.insert(ColorfulSimplex::new(m).expect("distinct classes"));
        }
    }
    out
}

/// Compares the change in hitting simplices with the simplices over the ridge.
pub fn verify_flip(p: &FlipPath) -> Result<FlipCertificate> {
    if !endpoints_ok(p) {
        return Ok(FlipCertificate {
            valid: false,
            symmetric_difference: BTreeSet::new(),
            expected: BTreeSet::new(),
            endpoints_ok: false,
            path_ok: None,
        });
    }
    let before: BTreeSet<_> = hitting_simplices(&p.start)?.hitting.into_iter().collect();
    let after: BTreeSet<_> = hitting_simplices(&p.end)?.hitting.into_iter().collect();
    let symmetric_difference: BTreeSet<_> = before.symmetric_difference(&after).cloned().collect();
    let expected = simplices_over(&p.start, &p.ridge);
    let path_ok = match p.mode {
        FlipMode::Certificate => None,
        FlipMode::Strict => Some(match scan_segment(&p.start, &p.end) {
            Ok(scan) => {
                scan.centered && scan.events.len() == 1 && scan.events[0].relint && scan.events[0].ridge == p.ridge
            }
            Err(Error::DegenerateHomotopy) => false,
            Err(e) => return Err(e),
        }),
    };
    Ok(FlipCertificate {
        valid: symmetric_difference == expected && path_ok != Some(false),
        symmetric_difference,
        expected,
        endpoints_ok: true,
        path_ok,
    })
}

/// Point `v` of `c_t = ((1 - t) c1 + (1 + t) c2) / 2` as linear polynomials.
fn linear_point(a: &QVec, b: &QVec) -> Vec<QPoly> {
    let half = ratio(1, 2);
    a.iter()
        .zip(b)
        .map(|(x, y)| QPoly::linear((x + y) * &half, (y - x) * &half))
        .collect()
}

/// Configuration at rational time `t` on the segment from `c1` (t = -1) to `c2` (t = 1).
pub fn interpolate(c1: &ColorfulConfiguration, c2: &ColorfulConfiguration, t: &Rat) -> ColorfulConfiguration {
    let (l, r) = ((rat(1) - t) / rat(2), (rat(1) + t) / rat(2));
    c1.map_points(c1.dim(), |cl, i, p| {
        p.iter().zip(c2.point(cl, i)).map(|(x, y)| x * &l + y * &r).collect()
    })
    .expect("same shape")
}

fn poly_det(m: &[Vec<QPoly>]) -> QPoly {
    match m.len() {
        0 => QPoly::constant(rat(1)),
        1 => m[0][0].clone(),
        n => {
            let mut acc = QPoly::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<QPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][c].mul(&poly_det(&minor));
                acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Removes the factors `t - 1` and `t + 1`; the segment endpoints are handled
/// by the endpoint checks.
fn strip_endpoints(mut p: QPoly) -> QPoly {
    for root in [rat(1), rat(-1)] {
        let factor = QPoly::linear(-&root, rat(1));
        while !p.is_zero() && p.sign_at(&root) == 0 {
            p = p.div_rem(&factor).0;
        }
    }
    p
}

fn interior_roots(p: QPoly) -> Result<Vec<RealRoot>> {
    let p = strip_endpoints(p);
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    isolate_roots(&p, &rat(-1), &rat(1))
}

/// Rows are coordinates, columns the moving points.
fn point_matrix(pts: &[Vec<QPoly>]) -> Vec<Vec<QPoly>> {
    let d = pts.first().map_or(0, Vec::len);
    (0..d).map(|r| pts.iter().map(|p| p[r].clone()).collect()).collect()
}

fn minor(m: &[Vec<QPoly>], row: usize, col: usize) -> Vec<Vec<QPoly>> {
    m.iter()
        .enumerate()
        .filter(|&(r, _)| r != row)
        .map(|(_, rw)| {
            rw.iter()
                .enumerate()
                .filter(|&(c, _)| c != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Whether the origin lies in `conv` of the points at the root of their
/// determinant, and whether in the relative interior. `None` if the point
/// matrix drops rank by two or more there.
fn crossing_at(root: &mut RealRoot, m: &[Vec<QPoly>]) -> Option<(bool, bool)> {
    let d = m.len();
    for j in 0..d {
        // Column j of the adjugate spans the kernel of the point matrix.
        let signs: Vec<i8> = (0..d)
            .map(|v| {
                let s = root.sign_of(&poly_det(&minor(m, j, v)));
                if (v + j) % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .collect();
        if signs.iter().all(|&s| s == 0) {
            continue;
        }
        let weak = signs.iter().all(|&s| s >= 0) || signs.iter().all(|&s| s <= 0);
        let strict = signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0);
        return Some((weak, strict));
    }
    None
}

fn same_shape(c1: &ColorfulConfiguration, c2: &ColorfulConfiguration) -> Result<()> {
    if c1.shape() != c2.shape() || c1.dim() != c2.dim() {
        return Err(Error::InvalidInput("configurations differ in shape".into()));
    }
    Ok(())
}

/// Times in `(-1, 1)` at which the origin enters or leaves the hull of a
/// colorful ridge, sorted by time.
pub fn homotopy_events(c1: &ColorfulConfiguration, c2: &ColorfulConfiguration) -> Result<Vec<HomotopyEvent>> {
    same_shape(c1, c2)?;
    if !is_relative_general_position(c1) || !is_relative_general_position(c2) {
        return Err(Error::Precondition(
            "endpoints must be in relative general position".into(),
        ));
    }
    let d = c1.dim();
    let mut ridges = Vec::new();
    for_each_colorful(&c1.shape(), d..=d, |m| ridges.push(m.to_vec()));
    let mut events = Vec::new();
    for members in ridges {
        let pts: Vec<Vec<QPoly>> = members
            .iter()
            .map(|&(cl, i)| linear_point(c1.point(cl, i), c2.point(cl, i)))
            .collect();
        let m = point_matrix(&pts);
        let det = poly_det(&m);
        if det.is_zero() {
            return Err(Error::DegenerateHomotopy);
        }
        for mut root in interior_roots(det)? {
            let (inside, relint) = crossing_at(&mut root, &m).ok_or(Error::DegenerateHomotopy)?;
            if inside {
                events.push(HomotopyEvent {
                    root,
                    ridge: ColorfulSimplex::new(members.clone())?,
                    relint,
                });
            }
        }
    }
    sort_roots(&mut events, |e| &mut e.root);
    Ok(events)
}

fn sort_roots<T>(items: &mut [T], mut key: impl FnMut(&mut T) -> &mut RealRoot) {
    // Insertion sort: comparisons refine intervals and need mutable access.
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 {
            let (left, right) = items.split_at_mut(j);
            if key(&mut left[j - 1]).compare(key(&mut right[0])) != Ordering::Greater {
                break;
            }
            items.swap(j - 1, j);
            j -= 1;
        }
    }
}

/// Roots of the determinants of all monochromatic `d`-subsets. Between
/// consecutive roots no class can gain or lose the origin on its boundary.
fn class_boundary_roots(c1: &ColorfulConfiguration, c2: &ColorfulConfiguration) -> Result<Vec<RealRoot>> {
    let d = c1.dim();
    let mut roots = Vec::new();
    for cl in 0..c1.num_classes() {
        let n = c1.class(cl).len();
        if n < d {
            continue;
        }
        let mut subset: Vec<usize> = (0..d).collect();
        loop {
            let pts: Vec<Vec<QPoly>> = subset
                .iter()
                .map(|&i| linear_point(c1.point(cl, i), c2.point(cl, i)))
                .collect();
            let det = poly_det(&point_matrix(&pts));
            if !det.is_zero() {
                roots.extend(interior_roots(det)?);
            }
            let Some(i) = (0..d).rev().find(|&i| subset[i] < n - d + i) else {
                break;
            };
            subset[i] += 1;
            for j in i + 1..d {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }
    sort_roots(&mut roots, |r| r);
    Ok(roots)
}

/// Rational times strictly between consecutive distinct roots.
fn gap_probes(roots: &mut [RealRoot]) -> Vec<Rat> {
    let mut probes = Vec::new();
    for i in 1..roots.len() {
        let (l, r) = roots.split_at_mut(i);
        if l[i - 1].compare(&mut r[0]) == Ordering::Less {
            probes.push(l[i - 1].separator(&mut r[0]));
        }
    }
    probes
}

struct Scan {
    events: Vec<HomotopyEvent>,
    /// Centered at every probe separating class-boundary events.
    centered: bool,
}

fn scan_segment(c1: &ColorfulConfiguration, c2: &ColorfulConfiguration) -> Result<Scan> {
    let events = homotopy_events(c1, c2)?;
    let mut roots = class_boundary_roots(c1, c2)?;
    let mut probes = gap_probes(&mut roots);
    if let (Some(first), Some(last)) = (roots.first(), roots.last()) {
        probes.push((rat(-1) + &first.interval().lo) / rat(2));
        probes.push((rat(1) + &last.interval().hi) / rat(2));
    }
    let centered = probes.iter().all(|t| is_centered(&interpolate(c1, c2, t)));
    Ok(Scan { events, centered })
}

#[derive(Debug, Clone)]
pub enum WalkOutcome {
    Success(Vec<FlipPath>),
    Failure(WalkFailure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkFailure {
    pub retries_used: usize,
    pub reason: String,
}

struct Walker {
    rng: ChaCha8Rng,
    retries: usize,
    max_retries: usize,
    last_reason: String,
}

/// Maximum absolute coordinate over both configurations, at least 1.
fn coordinate_scale(c1: &ColorfulConfiguration, c2: &ColorfulConfiguration) -> Rat {
    c1.classes()
        .iter()
        .chain(c2.classes())
        .flatten()
        .flatten()
        .map(|x| if x < &rat(0) { -x } else { x.clone() })
        .fold(rat(1), |a, b| a.max(b))
}

impl Walker {
    fn walk(&mut self, c1: &ColorfulConfiguration, c2: &ColorfulConfiguration) -> Option<Vec<FlipPath>> {
        match self.try_segment(c1, c2) {
            Ok(paths) => Some(paths),
            Err(reason) => {
                self.last_reason = reason;
                let w = self.waypoint(c1, c2)?;
                let mut left = self.walk(c1, &w)?;
                left.extend(self.walk(&w, c2)?);
                Some(left)
            }
        }
    }

    /// A seeded perturbation of a random point of the segment, re-centered so
    /// that every class sums to zero, in relative general position.
    fn waypoint(&mut self, c1: &ColorfulConfiguration, c2: &ColorfulConfiguration) -> Option<ColorfulConfiguration> {
        let scale = coordinate_scale(c1, c2) / rat(8);
        loop {
            if self.retries >= self.max_retries {
                return None;
            }
            self.retries += 1;
            let t = ratio(self.rng.gen_range(-7..=7), 8);
            let base = interpolate(c1, c2, &t);
            let noisy = base
                .map_points(base.dim(), |_, _, p| {
                    p.iter()
                        .map(|x| x + &scale * ratio(self.rng.gen_range(-16..=16), 16))
                        .collect()
                })
                .expect("same shape");
            let w = recenter(&noisy);
            if is_centered(&w) && is_relative_general_position(&w) {
                return Some(w);
            }
            self.last_reason = "waypoint not in general position".into();
        }
    }

    /// Splits a segment with simple, separated events into certified flips.
    fn try_segment(&mut self, c1: &ColorfulConfiguration, c2: &ColorfulConfiguration) -> Result<Vec<FlipPath>, String> {
        let mut scan = match scan_segment(c1, c2) {
            Ok(s) => s,
            Err(Error::DegenerateHomotopy) => return Err("degenerate homotopy".into()),
            Err(e) => return Err(e.to_string()),
        };
        if !scan.centered {
            return Err("segment leaves the centered configurations".into());
        }
        if scan.events.iter().any(|e| !e.relint) {
            return Err("origin crosses the boundary of a ridge".into());
        }
        let mut cuts = vec![rat(-1)];
        for i in 1..scan.events.len() {
            let (l, r) = scan.events.split_at_mut(i);
            if l[i - 1].root.compare(&mut r[0].root) != Ordering::Less {
                return Err("simultaneous events".into());
            }
            cuts.push(l[i - 1].root.separator(&mut r[0].root));
        }
        cuts.push(rat(1));
        if scan.events.is_empty() {
            return Ok(Vec::new());
        }
        let mut paths = Vec::new();
        for (k, ev) in scan.events.iter().enumerate() {
            let start = interpolate(c1, c2, &cuts[k]);
            let end = interpolate(c1, c2, &cuts[k + 1]);
            if !is_centered(&start) || !is_centered(&end) {
                return Err("cut point not centered".into());
            }
            let path = FlipPath {
                start,
                end,
                ridge: ev.ridge.clone(),
                mode: FlipMode::Certificate,
            };
            match verify_flip(&path) {
                Ok(cert) if cert.valid => paths.push(path),
                _ => return Err("sub-segment certificate invalid".into()),
            }
        }
        Ok(paths)
    }
}

/// Translates each class so that it sums to zero.
fn recenter(c: &ColorfulConfiguration) -> ColorfulConfiguration {
    let means: Vec<QVec> = c
        .classes()
        .iter()
        .map(|cl| {
            let k = rat(cl.len() as i64);
            (0..c.dim())
                .map(|i| cl.iter().map(|p| p[i].clone()).sum::<Rat>() / &k)
                .collect()
        })
        .collect();
    c.map_points(c.dim(), |cl, _, p| sub_vec(p, &means[cl]))
        .expect("same shape")
}

/// Rescales each point by a positive factor so that every class sums to zero.
///
/// Positive rescaling of single points changes no containment predicate, and
/// along a segment between two such configurations each class keeps its
/// barycenter, hence the origin in its relative interior.
pub fn radial_normalize(c: &ColorfulConfiguration) -> Result<ColorfulConfiguration> {
    let weights: Vec<QVec> = c
        .classes()
        .iter()
        .map(|cl| {
            let res = lp_min_coeff(cl);
            if res.optimum.as_ref().is_some_and(|e| e > &rat(0)) {
                Ok(res.witness)
            } else {
                Err(Error::NotCentered)
            }
        })
        .collect::<Result<_>>()?;
    c.map_points(c.dim(), |cl, i, p| scale_vec(p, &weights[cl][i]))
}

/// Connects two centered configurations in relative general position by a
/// sequence of certified flips along a piecewise linear path.
///
/// The straight segment is tried first. Otherwise both ends are radially
/// normalized and the walk splits the segment at seeded, perturbed waypoints
/// until every piece has simple, separated events.
pub fn flip_walk(
    c1: &ColorfulConfiguration,
    c2: &ColorfulConfiguration,
    max_retries: usize,
    seed: u64,
) -> Result<WalkOutcome> {
    same_shape(c1, c2)?;
    for c in [c1, c2] {
        if c.num_classes() != c.dim() + 1 {
            return Err(Error::ClassCount);
        }
        if !is_centered(c) || !is_relative_general_position(c) {
            return Err(Error::Precondition(
                "endpoints must be centered and in relative general position".into(),
            ));
        }
    }
    let mut walker = Walker {
        rng: ChaCha8Rng::seed_from_u64(seed),
        retries: 0,
        max_retries,
        last_reason: String::new(),
    };
    if let Ok(paths) = walker.try_segment(c1, c2) {
        return Ok(WalkOutcome::Success(paths));
    }
    let (n1, n2) = (radial_normalize(c1)?, radial_normalize(c2)?);
    Ok(match walker.walk(&n1, &n2) {
        Some(paths) => WalkOutcome::Success(paths),
        None => WalkOutcome::Failure(WalkFailure {
            retries_used: walker.retries,
            reason: walker.last_reason,
        }),
    })
}
