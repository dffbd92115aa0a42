//! Seeded batch checks over random centered configurations.

use std::path::{Path, PathBuf};

use chromadepth::colorful::{
    hitting_simplices, is_centered, is_relative_general_position, random_centered_rgp, strong_general_position_core,
    ColorfulConfiguration,
};
use chromadepth::complexes::{avoiding_complex, betti_gf2, verify_euler_identity};
use chromadepth::io::ConfigFile;
use chromadepth::kernel::{rat, QVec};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Bound,
    Betti,
    Euler,
    Lower,
}

pub const ALL_CHECKS: [Check; 4] = [Check::Bound, Check::Betti, Check::Euler, Check::Lower];

pub struct VerifyArgs {
    pub shape: Vec<usize>,
    pub first_seed: u64,
    pub seeds: u64,
    pub checks: Vec<Check>,
    pub coord_bound: u64,
    pub reproducer_dir: PathBuf,
    pub threads: Option<usize>,
    /// Test hook: the generator shifts class 0 off the origin.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub check: String,
    pub detail: String,
    pub reproducer: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeedResult {
    pub seed: u64,
    pub csd: Option<usize>,
    pub sarrabezolles_sampled: bool,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub shape: Vec<usize>,
    pub seeds: [u64; 2],
    pub checks: Vec<Check>,
    pub instances: usize,
    pub csd_min: Option<usize>,
    pub csd_max: Option<usize>,
    pub sarrabezolles_sampled: usize,
    pub threads: usize,
    pub failures: Vec<Failure>,
}

/// Worker count: `CHROMADEPTH_THREADS` caps the pool.
pub fn worker_count(cap: Option<usize>) -> usize {
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    cap.map_or(avail, |c| c.clamp(1, avail.max(1)))
}

fn generate(args: &VerifyArgs, seed: u64) -> chromadepth::Result<ColorfulConfiguration> {
    let c = random_centered_rgp(&args.shape, seed, args.coord_bound)?;
    if !args.inject_fault {
        return Ok(c);
    }
    let shift: QVec = (0..c.dim()).map(|k| rat(if k == 0 { 1000 } else { 0 })).collect();
    c.map_points(c.dim(), |cl, _, p| {
        if cl == 0 {
            p.iter().zip(&shift).map(|(a, b)| a + b).collect()
        } else {
            p.clone()
        }
    })
}

fn run_seed(args: &VerifyArgs, seed: u64) -> SeedResult {
    let mut failures = Vec::new();
    let (csd, sampled) = check_seed(args, seed, &mut |check: &str, detail: String| {
        failures.push(Failure {
            seed,
            check: check.into(),
            detail,
            reproducer: None,
        })
    });
    SeedResult {
        seed,
        csd,
        sarrabezolles_sampled: sampled,
        failures,
    }
}

fn check_seed(args: &VerifyArgs, seed: u64, fail: &mut dyn FnMut(&str, String)) -> (Option<usize>, bool) {
    let c = match generate(args, seed) {
        Ok(c) => c,
        Err(e) => {
            fail("generate", e.to_string());
            return (None, false);
        }
    };
    if !is_centered(&c) || !is_relative_general_position(&c) {
        fail(
            "generate",
            "generator output is not centered and in relative general position".into(),
        );
        return (None, false);
    }
    let d = c.dim();
    let report = match hitting_simplices(&c) {
        Ok(r) => r,
        Err(e) => {
            fail("csd", e.to_string());
            return (None, false);
        }
    };
    let csd = report.csd;
    let mut sampled = false;
    for check in &args.checks {
        match check {
            Check::Bound => {
                if !report.satisfies_bound {
                    fail("bound", format!("csd {csd} > bound {}", report.bound));
                }
            }
            Check::Betti => match avoiding_complex(&c).and_then(|av| betti_gf2(&av)) {
                Ok(b) if b.get(d as isize - 1) == 1 => {}
                Ok(b) => fail(
                    "betti",
                    format!("reduced betti {} of Av is {}", d - 1, b.get(d as isize - 1)),
                ),
                Err(e) => fail("betti", e.to_string()),
            },
            Check::Euler => match verify_euler_identity(&c) {
                Ok(e) if e.identity_holds => {}
                Ok(e) => fail(
                    "euler",
                    format!("csd {} with betti ({}, {})", e.csd, e.betti_dminus1, e.betti_d),
                ),
                Err(e) => fail("euler", e.to_string()),
            },
            Check::Lower => {
                if csd < 1 {
                    fail("lower", "csd is 0 on a centered instance".into());
                }
                if args.shape.iter().all(|&n| n == d + 1) && strong_general_position_core(&c) {
                    sampled = true;
                    if csd < 1 + d * d {
                        fail("lower", format!("csd {csd} < 1 + d^2 = {}", 1 + d * d));
                    }
                }
            }
        }
    }
    (Some(csd), sampled)
}

#[derive(Serialize)]
struct Reproducer<'a> {
    command: &'static str,
    shape: &'a [usize],
    seed: u64,
    coord_bound: u64,
    inject_fault: bool,
    failures: &'a [Failure],
    configuration: Option<ConfigFile>,
}

fn write_reproducer(args: &VerifyArgs, r: &SeedResult) -> std::io::Result<PathBuf> {
    let shape = args.shape.iter().map(usize::to_string).collect::<Vec<_>>().join("-");
    let path = args
        .reproducer_dir
        .join(format!("chromadepth-repro-{shape}-seed{}.json", r.seed));
    let rep = Reproducer {
        command: "verify",
        shape: &args.shape,
        seed: r.seed,
        coord_bound: args.coord_bound,
        inject_fault: args.inject_fault,
        failures: &r.failures,
        configuration: generate(args, r.seed).ok().map(|c| ConfigFile::from_config(&c)),
    };
    write_json(&path, &rep)?;
    Ok(path)
}

pub fn write_json(path: &Path, v: &impl Serialize) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(v).expect("serializable"))
}

pub fn run(args: &VerifyArgs) -> Result<VerifySummary, String> {
    let threads = worker_count(args.threads);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    let end = args.first_seed.saturating_add(args.seeds);
    let results: Vec<SeedResult> = pool.install(|| {
        (args.first_seed..end)
            .into_par_iter()
            .map(|s| run_seed(args, s))
            .collect()
    });
    let mut failures = Vec::new();
    for r in &results {
        if r.failures.is_empty() {
            continue;
        }
        let path = write_reproducer(args, r).map_err(|e| format!("cannot write reproducer: {e}"))?;
        for f in &r.failures {
            failures.push(Failure {
                reproducer: Some(path.display().to_string()),
                ..f.clone()
            });
        }
    }
    let csds = results.iter().filter_map(|r| r.csd);
    Ok(VerifySummary {
        shape: args.shape.clone(),
        seeds: [args.first_seed, end],
        checks: args.checks.clone(),
        instances: results.len(),
        csd_min: csds.clone().min(),
        csd_max: csds.max(),
        sarrabezolles_sampled: results.iter().filter(|r| r.sarrabezolles_sampled).count(),
        threads,
        failures,
    })
}
