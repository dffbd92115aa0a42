//! Acceptance run: one pass/fail line per criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use chromadepth::colorful::{
    class_offsets, depth_bound, extremal_config, hitting_simplices, is_centered, random_centered_rgp,
    strong_general_position_core, ColorfulConfiguration, ColorfulSimplex,
};
use chromadepth::complexes::{
    avoiding_complex, betti_gf2, rain_complex, verify_euler_identity, verify_extremal_collapse, SimplicialComplexGF2,
};
use chromadepth::flips::{flip_walk, translate_flip, verify_flip, FlipMode, FlipPath, WalkOutcome};
use chromadepth::gale::{
    colorful_gale, face_test, gale_transform, inverse_colorful_gale, positively_equivalent, GaleTransform,
    PointConfiguration,
};
use chromadepth::kernel::{affine_rank, rat, QVec};
use chromadepth::minkowski::{
    extremal_minkowski, facet_oracle, fan_from_triangle, intersect_fans, random_simplices, tmf_bound,
    totally_mixed_facets, totally_mixed_from_oracle, Fan3, SimplexV,
};
use chromadepth::ptransform::{delta_transform, verify_coincidence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEEDS: u64 = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Shapes with `d + 1` classes of sizes in {2, 3, 4}, for d = 1, 2, 3.
fn shape_grid() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for d in 1..=3usize {
        let mut shape = vec![2usize; d + 1];
        loop {
            out.push(shape.clone());
            let Some(i) = shape.iter().position(|&n| n < 4) else {
                break;
            };
            shape[i] += 1;
            shape[..i].iter_mut().for_each(|n| *n = 2);
        }
    }
    out
}

struct Instance {
    shape: Vec<usize>,
    seed: u64,
    config: ColorfulConfiguration,
    csd: usize,
}

fn criterion_1(grid: &[Vec<usize>]) -> Outcome {
    let t = Instant::now();
    let bad: Vec<String> = grid
        .iter()
        .filter_map(|n| {
            let csd = hitting_simplices(&extremal_config(n).ok()?).ok()?.csd as u64;
            (csd != depth_bound(n)).then(|| format!("{n:?}: {csd}"))
        })
        .collect();
    let el = t.elapsed();
    outcome(
        bad.is_empty() && el < Duration::from_secs(60),
        format!(
            "{} shapes, mismatches {bad:?}, {:.2}s (limit 60s)",
            grid.len(),
            el.as_secs_f64()
        ),
    )
}

fn criterion_2(grid: &[Vec<usize>], instances: &mut Vec<Instance>) -> Outcome {
    let t = Instant::now();
    let mut violations = Vec::new();
    for n in grid {
        for seed in 0..SEEDS {
            let config = random_centered_rgp(n, seed, 10).expect("generator");
            let r = hitting_simplices(&config).expect("full class count");
            if !r.satisfies_bound {
                violations.push(format!("{n:?} seed {seed}: {} > {}", r.csd, r.bound));
            }
            instances.push(Instance {
                shape: n.clone(),
                seed,
                config,
                csd: r.csd,
            });
        }
    }
    let el = t.elapsed();
    outcome(
        violations.is_empty() && el < Duration::from_secs(300),
        format!(
            "{} instances, violations {violations:?}, {:.2}s (limit 300s)",
            instances.len(),
            el.as_secs_f64()
        ),
    )
}

fn criteria_3_4(grid: &[Vec<usize>], instances: &[Instance]) -> (Outcome, Outcome) {
    let mut rain_bad = Vec::new();
    for n in grid {
        let d = n.len() as isize - 1;
        let b = betti_gf2(&rain_complex(n)).expect("betti");
        let prod: usize = n.iter().map(|x| x - 1).product();
        if (0..d).any(|k| b.get(k) != 0) || b.get(d) != prod {
            rain_bad.push(format!("{n:?}: {:?}", b.values));
        }
    }
    let mut av_bad = Vec::new();
    let mut euler_bad = Vec::new();
    for inst in instances {
        let d = inst.config.dim() as isize;
        let av = avoiding_complex(&inst.config).expect("avoiding complex");
        let b = betti_gf2(&av).expect("betti");
        if b.get(d - 1) != 1 {
            av_bad.push(format!("{:?} seed {}", inst.shape, inst.seed));
        }
        let e = verify_euler_identity(&inst.config).expect("euler");
        let prod: usize = inst.shape.iter().map(|x| x - 1).product();
        let independent = prod as i64 + b.get(d - 1) as i64 - b.get(d) as i64;
        if !e.identity_holds || e.csd != inst.csd || inst.csd as i64 != independent {
            euler_bad.push(format!("{:?} seed {}", inst.shape, inst.seed));
        }
    }
    (
        outcome(
            rain_bad.is_empty() && av_bad.is_empty(),
            format!(
                "Rain on {} shapes, Av on {} instances; Rain mismatches {rain_bad:?}, Av mismatches {av_bad:?}",
                grid.len(),
                instances.len()
            ),
        ),
        outcome(
            euler_bad.is_empty(),
            format!("{} instances, mismatches {euler_bad:?}", instances.len()),
        ),
    )
}

/// Replays the schedule, checking each free face has its top face as unique
/// proper coface.
fn replay_collapse(n: &[usize]) -> Result<usize, String> {
    let steps = verify_extremal_collapse(n).map_err(|e| e.to_string())?;
    let mut k: SimplicialComplexGF2 = avoiding_complex(&extremal_config(n).unwrap()).unwrap();
    for (i, s) in steps.iter().enumerate() {
        let cofaces: Vec<&Vec<usize>> = k
            .all_faces()
            .filter(|f| f.len() > s.free_face.len() && s.free_face.iter().all(|v| f.contains(v)))
            .collect();
        if cofaces.len() != 1 || cofaces[0] != &s.top_face {
            return Err(format!("step {i}: {} cofaces", cofaces.len()));
        }
        k.collapse(s).map_err(|e| format!("step {i}: {e}"))?;
    }
    let special = class_offsets(n);
    let boundary: BTreeSet<Vec<usize>> = k.all_faces().filter(|f| !f.is_empty()).cloned().collect();
    let expected: BTreeSet<Vec<usize>> = (1u32..(1 << special.len()) - 1)
        .map(|m| {
            (0..special.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| special[i])
                .collect()
        })
        .collect();
    if boundary != expected {
        return Err("residual is not the boundary of the special simplex".into());
    }
    Ok(steps.len())
}

fn criterion_5(grid: &[Vec<usize>]) -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for n in grid {
        match replay_collapse(n) {
            Ok(s) => total += s,
            Err(e) => bad.push(format!("{n:?}: {e}")),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} shapes, {total} collapse steps replayed, failures {bad:?}",
            grid.len()
        ),
    )
}

fn ridges(c: &ColorfulConfiguration) -> Vec<ColorfulSimplex> {
    let shape = c.shape();
    let mut out = Vec::new();
    for skip in 0..shape.len() {
        let classes: Vec<usize> = (0..shape.len()).filter(|&i| i != skip).collect();
        let mut idx = vec![0usize; classes.len()];
        loop {
            out.push(ColorfulSimplex::new(classes.iter().zip(&idx).map(|(&c, &i)| (c, i)).collect()).unwrap());
            let Some(k) = (0..idx.len()).rev().find(|&k| idx[k] + 1 < shape[classes[k]]) else {
                break;
            };
            idx[k] += 1;
            idx[k + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    out
}

fn check_flip(p: &FlipPath, bad: &mut Vec<String>, label: &str) {
    let cert = verify_flip(p).expect("verify");
    let d = p.start.dim() as isize;
    let betti: Vec<usize> = [&p.start, &p.end]
        .iter()
        .map(|c| betti_gf2(&avoiding_complex(c).unwrap()).unwrap().get(d - 1))
        .collect();
    if !cert.valid || cert.symmetric_difference != cert.expected || betti != [1, 1] {
        bad.push(format!("{label}: valid {} betti {betti:?}", cert.valid));
    }
}

fn criterion_6() -> Outcome {
    let mut certified = 0;
    let mut bad = Vec::new();
    let mut translations = 0;
    for shape in [vec![3usize, 3], vec![4, 4], vec![3, 3, 3], vec![4, 4, 4]] {
        for seed in 0..20 {
            let c = random_centered_rgp(&shape, seed, 20).unwrap();
            for rho in ridges(&c) {
                let Ok(p) = translate_flip(&c, &rho) else { continue };
                let strict = FlipPath {
                    mode: FlipMode::Strict,
                    ..p
                };
                // only segments that cross this single ridge are flips
                if verify_flip(&strict).unwrap().path_ok != Some(true) {
                    continue;
                }
                translations += 1;
                check_flip(
                    &strict,
                    &mut bad,
                    &format!("{shape:?} seed {seed} ridge {:?}", rho.members()),
                );
                certified += 1;
            }
        }
    }
    let mut walked = 0;
    for (a, b) in [(1u64, 2u64), (3, 4), (5, 6)] {
        let shape = [3usize, 3, 3];
        let c1 = random_centered_rgp(&shape, a, 10).unwrap();
        let c2 = random_centered_rgp(&shape, b, 10).unwrap();
        if let WalkOutcome::Success(paths) = flip_walk(&c1, &c2, 64, 42).unwrap() {
            for p in paths {
                check_flip(&p, &mut bad, &format!("walk {a}->{b}"));
                walked += 1;
                certified += 1;
            }
        }
    }
    outcome(
        bad.is_empty() && certified >= 20,
        format!("{certified} certified flips ({translations} translations, {walked} from walks), failures {bad:?}"),
    )
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

fn criterion_7() -> Outcome {
    let shapes: [&[usize]; 8] = [
        &[2, 2],
        &[3, 3],
        &[4, 4],
        &[5, 5],
        &[2, 2, 2],
        &[2, 3, 4],
        &[3, 3, 3],
        &[2, 2, 2, 2],
    ];
    let mut rt_bad = Vec::new();
    for i in 0..50u64 {
        let shape = shapes[i as usize % shapes.len()];
        let c = random_centered_rgp(shape, 1000 + i, 8).unwrap();
        let off = class_offsets(shape);
        let part = shape.iter().zip(&off).map(|(&k, &o)| (o..o + k).collect()).collect();
        let g = GaleTransform::new(c.dim(), c.classes().concat(), Some(part)).unwrap();
        let ok = inverse_colorful_gale(&g)
            .and_then(|a| colorful_gale(&a))
            .and_then(|h| positively_equivalent(&h.vectors, &g.vectors))
            .unwrap_or(false);
        if !ok {
            rt_bad.push(format!("{shape:?} seed {}", 1000 + i));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut face_bad = Vec::new();
    let mut subsets_checked = 0;
    for i in 0..50 {
        let d = 1 + i % 3;
        let n = rng.gen_range(d + 1..=7);
        let pts = loop {
            let pts: Vec<QVec> = (0..n)
                .map(|_| (0..d).map(|_| rat(rng.gen_range(-3..=3))).collect())
                .collect();
            let distinct = (0..n).all(|a| (0..a).all(|b| pts[a] != pts[b]));
            if distinct && affine_rank(&pts) == Some(d) {
                break pts;
            }
        };
        let g = gale_transform(&PointConfiguration::new(d, pts.clone(), None).unwrap()).unwrap();
        let facets = facet_oracle(&pts).unwrap();
        for u in subsets(n) {
            let mut closure: Vec<usize> = (0..n).collect();
            for f in facets.iter().filter(|f| u.iter().all(|v| f.contains(v))) {
                closure.retain(|v| f.contains(v));
            }
            subsets_checked += 1;
            if face_test(&g, &u) != (closure == u) {
                face_bad.push(format!("config {i} subset {u:?}"));
            }
        }
    }
    outcome(
        rt_bad.is_empty() && face_bad.is_empty(),
        format!(
            "50 round trips (N <= 10), failures {rt_bad:?}; 50 configurations, {subsets_checked} subsets, disagreements {face_bad:?}"
        ),
    )
}

/// Summand dimensions with sum at most 6 and at most 4 summands.
fn small_dims() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(prefix: &mut Vec<usize>, max: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == 4 {
            return;
        }
        for k in (1..=max.min(left)).rev() {
            prefix.push(k);
            rec(prefix, k, left - k, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::new(), 6, 6, &mut out);
    out
}

fn tight_ambient(dims: &[usize]) -> usize {
    dims.iter().sum::<usize>() + 1 - dims.len()
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let all = small_dims();
    let mut bad = Vec::new();
    let mut bound_bad = Vec::new();
    let mut total_facets = 0;
    for i in 0..100u64 {
        let dims = &all[i as usize % all.len()];
        let s = random_simplices(dims, tight_ambient(dims), i, 6).unwrap();
        let dict = totally_mixed_facets(&s).unwrap();
        let oracle = totally_mixed_from_oracle(&s).unwrap();
        if dict != oracle {
            bad.push(format!("{dims:?} seed {i}: {} vs {}", dict.len(), oracle.len()));
        }
        if dict.len() as u64 > tmf_bound(dims) {
            bound_bad.push(format!("{dims:?} seed {i}"));
        }
        total_facets += dict.len();
    }
    let mut extremal = Vec::new();
    let mut extremal_ok = true;
    for (dims, burton) in [
        (vec![1usize, 1], 2usize),
        (vec![2, 2], 5),
        (vec![2, 2, 2], 9),
        (vec![2, 2, 2, 2], 17),
    ] {
        let s = extremal_minkowski(&dims).unwrap();
        let count = totally_mixed_facets(&s).unwrap().len();
        extremal_ok &= count == burton && count as u64 == tmf_bound(&dims);
        let points: usize = dims.iter().map(|k| k + 1).product();
        if points <= chromadepth::minkowski::FACET_ORACLE_CAP {
            extremal_ok &= totally_mixed_from_oracle(&s).unwrap().len() == count;
        }
        extremal.push(count);
    }
    let el = t.elapsed();
    outcome(
        bad.is_empty() && bound_bad.is_empty() && extremal_ok && el < Duration::from_secs(600),
        format!(
            "100 collections over {} dimension vectors, {total_facets} facets, oracle mismatches {bad:?}, bound violations {bound_bad:?}; extremal counts {extremal:?}; {:.2}s (limit 600s)",
            all.len(),
            el.as_secs_f64()
        ),
    )
}

fn fan_check(simplices: &[SimplexV], label: String, bad: &mut Vec<String>) -> usize {
    let fans: Vec<Fan3> = simplices.iter().map(|t| fan_from_triangle(t).unwrap()).collect();
    let r = intersect_fans(&fans).unwrap();
    let tmf = totally_mixed_facets(simplices).unwrap().len();
    if r.maximal_cones != tmf || r.tmf_count != Some(tmf) {
        bad.push(format!("{label}: {} cones, {tmf} facets", r.maximal_cones));
    }
    r.maximal_cones
}

fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    let mut tested = 0;
    for (k, count) in [(1usize, 20u64), (2, 20), (3, 5)] {
        for seed in 0..count {
            let dims = vec![2; k];
            let s = random_simplices(&dims, k + 1, 500 + seed, 6).unwrap();
            fan_check(&s, format!("{k} triangles seed {}", 500 + seed), &mut bad);
            tested += 1;
        }
    }
    let mut extremal = Vec::new();
    for k in 2..=4 {
        let s = extremal_minkowski(&vec![2; k]).unwrap();
        extremal.push(fan_check(&s, format!("extremal {k} triangles"), &mut bad));
        tested += 1;
    }
    outcome(
        bad.is_empty() && extremal[0] == 5,
        format!("{tested} all-triangle instances, extremal cone counts {extremal:?}, mismatches {bad:?}"),
    )
}

fn criterion_10() -> Outcome {
    let mut shapes = Vec::new();
    for len in 2..=4usize {
        for twos in 0..=len {
            let mut v = vec![2usize; twos];
            v.extend(vec![1usize; len - twos]);
            shapes.push(v);
        }
    }
    let mut bad = Vec::new();
    let mut tested = 0;
    for dims in &shapes {
        let lo = *dims.iter().max().unwrap();
        let hi = tight_ambient(dims).max(lo);
        for seed in 0..50u64 {
            let ambient = lo + (seed as usize) % (hi - lo + 1);
            let s = random_simplices(dims, ambient, seed, 5).unwrap();
            if !verify_coincidence(&s).unwrap() {
                bad.push(format!("{dims:?} in R^{ambient} seed {seed}"));
            }
            tested += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut delta_bad = Vec::new();
    for i in 0..50 {
        let e = 1 + i % 3;
        let m = rng.gen_range(e + 2..=e + 4);
        let q = loop {
            let q: Vec<QVec> = (0..m)
                .map(|_| (0..e).map(|_| rat(rng.gen_range(-4..=4))).collect())
                .collect();
            if affine_rank(&q) == Some(e) {
                break q;
            }
        };
        let t = delta_transform(&q).unwrap();
        let g = gale_transform(&PointConfiguration::new(e, q, None).unwrap()).unwrap();
        if t.dim != g.dim || !positively_equivalent(&t.vectors, &g.vectors).unwrap() {
            delta_bad.push(i);
        }
    }
    outcome(
        bad.is_empty() && delta_bad.is_empty(),
        format!(
            "{tested} collections over {} shapes, failures {bad:?}; 50 delta transforms, failures {delta_bad:?}",
            shapes.len()
        ),
    )
}

fn criterion_11(instances: &[Instance]) -> Outcome {
    let mut zero = Vec::new();
    let mut sampled = 0;
    let mut below = Vec::new();
    for inst in instances {
        if !is_centered(&inst.config) || inst.csd < 1 {
            zero.push(format!("{:?} seed {}", inst.shape, inst.seed));
        }
        let d = inst.config.dim();
        if inst.shape.iter().all(|&n| n == d + 1) && strong_general_position_core(&inst.config) {
            sampled += 1;
            if inst.csd < 1 + d * d {
                below.push(format!("{:?} seed {}: {}", inst.shape, inst.seed, inst.csd));
            }
        }
    }
    outcome(
        zero.is_empty() && below.is_empty(),
        format!(
            "{} centered instances, csd 0 on {zero:?}; {sampled} instances with a general position core, below 1 + d^2: {below:?}",
            instances.len()
        ),
    )
}

fn main() {
    let grid = shape_grid();
    let mut instances = Vec::new();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut report = |n: u32, name: &'static str, o: Outcome| {
        println!(
            "criterion {n:>2} [{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((n, name, o));
    };
    report(1, "extremal equality", criterion_1(&grid));
    report(2, "upper bound", criterion_2(&grid, &mut instances));
    let (c3, c4) = criteria_3_4(&grid, &instances);
    report(3, "homology", c3);
    report(4, "Euler identity", c4);
    report(5, "collapse schedule", criterion_5(&grid));
    report(6, "flip certificates", criterion_6());
    report(7, "Gale round trips", criterion_7());
    report(8, "totally mixed facets", criterion_8());
    report(9, "fan reduction", criterion_9());
    report(10, "transform coincidence", criterion_10());
    report(11, "lower bounds", criterion_11(&instances));
    let failed: Vec<u32> = results.iter().filter(|(_, _, o)| !o.pass).map(|(n, _, _)| *n).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
