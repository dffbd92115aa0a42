//! Simplicial complexes over GF(2): the Rain and avoiding complexes, reduced
//! Betti numbers, homology tests and collapses.

use std::collections::{BTreeMap, BTreeSet};

use crate::colorful::{
    class_offsets, extremal_config, hitting_simplices, is_centered, is_relative_general_position, minimal_hitting_set,
    ColorfulConfiguration,
};
use crate::error::{Error, Result};

pub type Face = Vec<usize>;

/// Faces stored per dimension, from the empty face (dimension -1) upwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplexGF2 {
    vertex_count: usize,
    faces_by_dim: Vec<BTreeSet<Face>>,
}

impl SimplicialComplexGF2 {
    /// The void complex on `vertex_count` vertices (no faces, not even the empty one).
    pub fn void(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            faces_by_dim: Vec::new(),
        }
    }

    /// Downward closure of `facets`.
    pub fn from_facets(vertex_count: usize, facets: &[Face]) -> Result<Self> {
        let mut k = Self {
            vertex_count,
            faces_by_dim: vec![BTreeSet::from([Vec::new()])],
        };
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.iter().any(|&v| v >= vertex_count) {
                return Err(Error::InvalidInput(format!("vertex out of range in {f:?}")));
            }
            if k.contains(&f) {
                continue;
            }
            let n = f.len();
            for mask in 1u64..(1u64 << n) {
                let sub: Face = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| f[i]).collect();
                k.insert_raw(sub);
            }
        }
        Ok(k)
    }

    /// Builds from an explicit face list, which must be closed under subsets.
    pub fn from_faces(vertex_count: usize, faces: impl IntoIterator<Item = Face>) -> Result<Self> {
        let mut k = Self::void(vertex_count);
        for mut f in faces {
            f.sort_unstable();
            f.dedup();
            if f.iter().any(|&v| v >= vertex_count) {
                return Err(Error::InvalidInput(format!("vertex out of range in {f:?}")));
            }
            k.insert_raw(f);
        }
        k.check_closed()?;
        Ok(k)
    }

    fn insert_raw(&mut self, f: Face) {
        let slot = f.len();
        while self.faces_by_dim.len() <= slot {
            self.faces_by_dim.push(BTreeSet::new());
        }
        self.faces_by_dim[slot].insert(f);
    }

    fn check_closed(&self) -> Result<()> {
        for f in self.faces_by_dim.iter().flatten() {
            for i in 0..f.len() {
                let mut g = f.clone();
                g.remove(i);
                if !self.contains(&g) {
                    return Err(Error::NotClosed);
                }
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Top dimension, `-1` for `{∅}` and `-2` for the void complex.
    pub fn dim(&self) -> isize {
        self.faces_by_dim
            .iter()
            .rposition(|s| !s.is_empty())
            .map_or(-2, |i| i as isize - 1)
    }

    /// Faces of dimension `k` in lexicographic order.
    pub fn faces(&self, k: isize) -> impl Iterator<Item = &Face> {
        let slot = k + 1;
        let set = if slot >= 0 {
            self.faces_by_dim.get(slot as usize)
        } else {
            None
        };
        set.into_iter().flatten()
    }

    pub fn count(&self, k: isize) -> usize {
        self.faces(k).count()
    }

    pub fn num_faces(&self) -> usize {
        self.faces_by_dim.iter().map(BTreeSet::len).sum()
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces_by_dim.iter().flatten()
    }

    pub fn contains(&self, f: &[usize]) -> bool {
        self.faces_by_dim.get(f.len()).is_some_and(|s| s.contains(f))
    }

    /// Inclusion-maximal faces.
    pub fn maximal_faces(&self) -> Vec<Face> {
        let mut out = Vec::new();
        for (slot, set) in self.faces_by_dim.iter().enumerate() {
            let up = self.faces_by_dim.get(slot + 1);
            for f in set {
                let covered = up.is_some_and(|u| u.iter().any(|g| is_subset(f, g)));
                if !covered {
                    out.push(f.clone());
                }
            }
        }
        out
    }

    /// Removes all faces `F` with `lo ⊆ F ⊆ hi`.
    fn remove_interval(&mut self, lo: &[usize], hi: &[usize]) {
        let extra: Vec<usize> = hi.iter().copied().filter(|v| !lo.contains(v)).collect();
        for mask in 0u64..(1u64 << extra.len()) {
            let mut f: Face = lo.to_vec();
            f.extend((0..extra.len()).filter(|i| mask & (1 << i) != 0).map(|i| extra[i]));
            f.sort_unstable();
            if let Some(s) = self.faces_by_dim.get_mut(f.len()) {
                s.remove(&f);
            }
        }
        while self.faces_by_dim.last().is_some_and(BTreeSet::is_empty) {
            self.faces_by_dim.pop();
        }
    }

    /// Applies one collapse after checking that `top` is maximal and `free`
    /// lies in no other maximal face.
    pub fn collapse(&mut self, step: &CollapseStep) -> std::result::Result<(), String> {
        let (free, top) = (&step.free_face, &step.top_face);
        if !is_subset(free, top) || free == top {
            return Err(format!("{free:?} is not a proper face of {top:?}"));
        }
        if !self.contains(top) {
            return Err(format!("{top:?} is not a face"));
        }
        let has_proper_coface = |f: &Face| {
            self.faces_by_dim
                .iter()
                .skip(f.len() + 1)
                .flatten()
                .any(|g| is_subset(f, g))
        };
        if has_proper_coface(top) {
            return Err(format!("{top:?} is not maximal"));
        }
        let other = self
            .faces_by_dim
            .iter()
            .skip(free.len() + 1)
            .flatten()
            .any(|g| is_subset(free, g) && !is_subset(g, top));
        if other {
            return Err(format!("{free:?} is not free in {top:?}"));
        }
        self.remove_interval(free, top);
        Ok(())
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Reduced Betti numbers `β̃_0, ..., β̃_D`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct BettiVector {
    pub values: Vec<usize>,
}

impl BettiVector {
    /// `β̃_k`, zero outside the stored range.
    pub fn get(&self, k: isize) -> usize {
        if k < 0 {
            return 0;
        }
        self.values.get(k as usize).copied().unwrap_or(0)
    }
}

/// Bit-packed GF(2) vectors with incremental elimination.
#[derive(Debug, Clone, Default)]
struct Gf2Basis {
    /// Pivot bit -> (reduced vector, combination of inserted vectors).
    pivots: BTreeMap<usize, (Vec<u64>, Vec<u64>)>,
    inserted: usize,
}

fn xor_into(a: &mut Vec<u64>, b: &[u64]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn top_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .rev()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
}

fn bitset(indices: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut v = Vec::new();
    for i in indices {
        if v.len() <= i / 64 {
            v.resize(i / 64 + 1, 0);
        }
        v[i / 64] ^= 1 << (i % 64);
    }
    v
}

fn bits(v: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, w) in v.iter().enumerate() {
        let mut w = *w;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            out.push(i * 64 + b);
            w &= w - 1;
        }
    }
    out
}

impl Gf2Basis {
    /// Reduces `v`; returns the residual and the combination of basis inputs used.
    fn reduce(&self, mut v: Vec<u64>) -> (Vec<u64>, Vec<u64>) {
        let mut combo = Vec::new();
        while let Some(b) = top_bit(&v) {
            match self.pivots.get(&b) {
                Some((p, c)) => {
                    xor_into(&mut v, p);
                    xor_into(&mut combo, c);
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Inserts `v`; returns whether it increased the rank.
    fn insert(&mut self, v: Vec<u64>) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (r, mut combo) = self.reduce(v);
        match top_bit(&r) {
            None => false,
            Some(b) => {
                xor_into(&mut combo, &bitset([id]));
                self.pivots.insert(b, (r, combo));
                true
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Columns of the boundary map from `k`-faces to `(k-1)`-faces, as bitsets over
/// the lexicographic index of the `(k-1)`-faces.
fn boundary_columns(c: &SimplicialComplexGF2, k: isize) -> Vec<Vec<u64>> {
    let index: BTreeMap<&Face, usize> = c.faces(k - 1).enumerate().map(|(i, f)| (f, i)).collect();
    c.faces(k)
        .map(|f| {
            bitset((0..f.len()).map(|i| {
                let mut g = f.clone();
                g.remove(i);
                index[&g]
            }))
        })
        .collect()
}

fn boundary_rank(c: &SimplicialComplexGF2, k: isize) -> usize {
    let mut b = Gf2Basis::default();
    for col in boundary_columns(c, k) {
        b.insert(col);
    }
    b.rank()
}

/// Reduced Betti numbers over GF(2), including the augmentation map.
pub fn betti_gf2(c: &SimplicialComplexGF2) -> Result<BettiVector> {
    c.check_closed()?;
    let top = c.dim();
    if top < 0 {
        return Ok(BettiVector { values: Vec::new() });
    }
    let ranks: Vec<usize> = (0..=top + 1).map(|k| boundary_rank(c, k)).collect();
    let values = (0..=top)
        .map(|k| {
            let nullity = c.count(k) - ranks[k as usize];
            nullity - ranks[k as usize + 1]
        })
        .collect();
    Ok(BettiVector { values })
}

/// The join of discrete sets of sizes `n`: all subsets with at most one vertex per class.
pub fn rain_complex(n: &[usize]) -> SimplicialComplexGF2 {
    let offsets = class_offsets(n);
    let total: usize = n.iter().sum();
    let mut faces: Vec<Face> = vec![Vec::new()];
    for (c, &nc) in n.iter().enumerate() {
        let mut next = faces.clone();
        for f in &faces {
            for i in 0..nc {
                let mut g = f.clone();
                g.push(offsets[c] + i);
                next.push(g);
            }
        }
        faces = next;
    }
    let mut k = SimplicialComplexGF2::void(total);
    for f in faces {
        k.insert_raw(f);
    }
    k
}

/// Colorful simplices whose hull misses the origin, with vertices numbered
/// class by class.
pub fn avoiding_complex(c: &ColorfulConfiguration) -> Result<SimplicialComplexGF2> {
    let minimal = minimal_hitting_set(c)?;
    let offsets = class_offsets(&c.shape());
    let minimal: Vec<Face> = minimal.iter().map(|s| s.vertex_ids(&offsets)).collect();
    let rain = rain_complex(&c.shape());
    let faces = rain
        .all_faces()
        .filter(|f| !minimal.iter().any(|m| is_subset(m, f)))
        .cloned();
    let mut k = SimplicialComplexGF2::void(rain.vertex_count());
    for f in faces {
        k.insert_raw(f);
    }
    Ok(k)
}

fn require_centered_rgp(c: &ColorfulConfiguration) -> Result<()> {
    if !is_centered(c) {
        return Err(Error::Precondition("configuration is not centered".into()));
    }
    if !is_relative_general_position(c) {
        return Err(Error::Precondition(
            "configuration is not in relative general position".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct EulerCheck {
    pub csd: usize,
    pub betti_dminus1: usize,
    pub betti_d: usize,
    pub identity_holds: bool,
}

/// Compares `csd` with `prod (n_i - 1) + β̃_{d-1}(Av) - β̃_d(Av)`.
pub fn verify_euler_identity(c: &ColorfulConfiguration) -> Result<EulerCheck> {
    require_centered_rgp(c)?;
    let csd = hitting_simplices(c)?.csd;
    let b = betti_gf2(&avoiding_complex(c)?)?;
    let d = c.dim() as isize;
    let (b1, b0) = (b.get(d - 1), b.get(d));
    let prod: usize = c.shape().iter().map(|n| n - 1).product();
    Ok(EulerCheck {
        csd,
        betti_dminus1: b1,
        betti_d: b0,
        identity_holds: (csd + b0) == prod + b1,
    })
}

fn boundary_of(eta: &[usize], index: &BTreeMap<&Face, usize>) -> Option<Vec<u64>> {
    let mut ids = Vec::with_capacity(eta.len());
    for i in 0..eta.len() {
        let mut g = eta.to_vec();
        g.remove(i);
        ids.push(*index.get(&g)?);
    }
    Some(bitset(ids))
}

/// A `d`-chain `B` of `av` with `∂B = ∂η₁ + ∂η₂`, if one exists.
pub fn homologous(av: &SimplicialComplexGF2, eta1: &[usize], eta2: &[usize]) -> Option<Vec<Face>> {
    let (mut e1, mut e2) = (eta1.to_vec(), eta2.to_vec());
    e1.sort_unstable();
    e2.sort_unstable();
    if e1 == e2 {
        return Some(Vec::new());
    }
    if e1.len() != e2.len() || e1.is_empty() {
        return None;
    }
    let k = e1.len() as isize - 1;
    let index: BTreeMap<&Face, usize> = av.faces(k - 1).enumerate().map(|(i, f)| (f, i)).collect();
    let mut target = boundary_of(&e1, &index)?;
    xor_into(&mut target, &boundary_of(&e2, &index)?);
    let mut basis = Gf2Basis::default();
    let faces: Vec<&Face> = av.faces(k).collect();
    for col in boundary_columns(av, k) {
        basis.insert(col);
    }
    let (residual, combo) = basis.reduce(target);
    if top_bit(&residual).is_some() {
        return None;
    }
    Some(bits(&combo).into_iter().map(|i| faces[i].clone()).collect())
}

/// Whether the boundaries of `etas` (d-sets absent from `av`) together with the
/// boundaries in `av` span every `(d-1)`-cycle of `av`.
pub fn boundaries_generate_cycles(av: &SimplicialComplexGF2, etas: &[Face]) -> bool {
    let Some(first) = etas.first() else {
        return false;
    };
    let k = first.len() as isize - 1;
    let index: BTreeMap<&Face, usize> = av.faces(k - 1).enumerate().map(|(i, f)| (f, i)).collect();
    let mut basis = Gf2Basis::default();
    for col in boundary_columns(av, k) {
        basis.insert(col);
    }
    for eta in etas {
        match boundary_of(eta, &index) {
            Some(b) => {
                basis.insert(b);
            }
            None => return false,
        }
    }
    let cycles = av.count(k - 1) - boundary_rank(av, k - 1);
    basis.rank() == cycles
}

/// One collapse: remove every face between `free_face` and `top_face`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CollapseStep {
    pub free_face: Face,
    pub top_face: Face,
}

/// Runs the collapse schedule on the avoiding complex of the extremal
/// configuration and returns the executed steps.
///
/// Round `k` (for `k = 1..=d`) takes every `d`-face `σ` with exactly `k`
/// special vertices and removes the interval from its non-special part `N` up
/// to `σ` by elementary collapses `(F, F + a)`, `a` the first special vertex of
/// `σ`, larger `F` first. The first step of each interval collapses a ridge with
/// `k - 1` special vertices; round `d` removes the last non-special vertices.
pub fn verify_extremal_collapse(n: &[usize]) -> Result<Vec<CollapseStep>> {
    let c = extremal_config(n)?;
    let d = c.dim();
    let offsets = class_offsets(n);
    let special: Vec<usize> = offsets.clone();
    let is_special = |v: usize| special.contains(&v);
    let mut av = avoiding_complex(&c)?;
    let expected_betti = betti_gf2(&av)?;
    let mut steps = Vec::new();
    for k in 1..=d {
        let sigmas: Vec<Face> = av
            .faces(d as isize)
            .filter(|f| f.iter().filter(|&&v| is_special(v)).count() == k)
            .cloned()
            .collect();
        for sigma in sigmas {
            let nonspecial: Face = sigma.iter().copied().filter(|&v| !is_special(v)).collect();
            let specials: Vec<usize> = sigma.iter().copied().filter(|&v| is_special(v)).collect();
            let a = specials[0];
            let rest = &specials[1..];
            // subsets of `rest`, largest first
            let mut masks: Vec<u64> = (0..(1u64 << rest.len())).collect();
            masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
            for mask in masks {
                let mut free: Face = nonspecial.clone();
                free.extend((0..rest.len()).filter(|i| mask & (1 << i) != 0).map(|i| rest[i]));
                free.sort_unstable();
                let mut top = free.clone();
                top.push(a);
                top.sort_unstable();
                let step = CollapseStep {
                    free_face: free,
                    top_face: top,
                };
                av.collapse(&step).map_err(|reason| Error::Collapse {
                    step: steps.len(),
                    reason,
                })?;
                steps.push(step);
            }
        }
        let now = betti_gf2(&av)?;
        if (0..=d as isize).any(|i| now.get(i) != expected_betti.get(i)) {
            return Err(Error::Collapse {
                step: steps.len(),
                reason: format!("Betti numbers changed in round {k}"),
            });
        }
    }
    let boundary = SimplicialComplexGF2::from_facets(
        av.vertex_count(),
        &(0..=d)
            .map(|skip| {
                special
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect::<Vec<Face>>(),
    )?;
    if av != boundary {
        return Err(Error::Collapse {
            step: steps.len(),
            reason: "residual complex is not the boundary of the special simplex".into(),
        });
    }
    Ok(steps)
}

/// Repeatedly collapses the lexicographically smallest non-empty free face of
/// dimension below `max_face_dim` together with everything above it in its
/// unique maximal coface.
pub fn greedy_collapse(k: &SimplicialComplexGF2, max_face_dim: usize) -> SimplicialComplexGF2 {
    let mut cur = k.clone();
    loop {
        let maximal = cur.maximal_faces();
        let mut faces: Vec<&Face> = cur
            .all_faces()
            .filter(|f| !f.is_empty() && f.len() - 1 < max_face_dim)
            .collect();
        faces.sort();
        let step = faces.into_iter().find_map(|f| {
            let mut cofaces = maximal.iter().filter(|m| is_subset(f, m));
            let top = cofaces.next()?;
            (cofaces.next().is_none() && top != f).then(|| CollapseStep {
                free_face: f.clone(),
                top_face: top.clone(),
            })
        });
        match step {
            Some(s) => cur.collapse(&s).expect("free face checked"),
            None => return cur,
        }
    }
}
