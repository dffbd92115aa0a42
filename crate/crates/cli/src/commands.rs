use std::path::Path;

use chromadepth::colorful::{
    extremal_config, hitting_simplices, is_centered, is_relative_general_position, random_centered_rgp, ColorfulSimplex,
};
use chromadepth::complexes::{avoiding_complex, betti_gf2, SimplicialComplexGF2};
use chromadepth::flips::{flip_walk, translate_flip, verify_flip, FlipMode, FlipPath, WalkOutcome};
use chromadepth::gale::{colorful_gale, gale_transform, inverse_colorful_gale, positively_equivalent, GaleTransform};
use chromadepth::io::{
    from_json, simplex_list, vector_list, CertificateReport, ComplexFile, ConfigFile, FlipPathFile, PointConfigFile,
    RatText, SimplicesFile,
};
use chromadepth::minkowski::{
    extremal_minkowski, fan_from_triangle, intersect_fans, random_simplices, tmf_bound, totally_mixed_facets, Fan3,
    FanIntersection, MinkowskiFace, SimplexV,
};
use chromadepth::ptransform::{simplex_minkowski_transform, verify_coincidence};
use chromadepth::{Error, Result};
use serde::Serialize;

use crate::report::{Run, RunReport};

pub fn read_input(run: &mut Run, path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    run.input(&text);
    Ok(text)
}

fn violation_if(cond: bool, msg: impl FnOnce() -> String) -> Vec<String> {
    if cond {
        vec![msg()]
    } else {
        Vec::new()
    }
}

#[derive(Serialize)]
struct CsdResult {
    dimension: usize,
    shape: Vec<usize>,
    csd: usize,
    bound: u64,
    centered: bool,
    rgp: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    hitting: Option<Vec<Vec<[usize; 2]>>>,
}

pub fn csd(mut run: Run, file: &Path, list: bool, assert_bound: bool) -> Result<RunReport> {
    let c = chromadepth::io::read_config(&read_input(&mut run, file)?)?;
    let r = hitting_simplices(&c)?;
    let res = CsdResult {
        dimension: c.dim(),
        shape: c.shape(),
        csd: r.csd,
        bound: r.bound,
        centered: is_centered(&c),
        rgp: is_relative_general_position(&c),
        hitting: list.then(|| simplex_list(&r.hitting)),
    };
    let v = violation_if(assert_bound && !r.satisfies_bound, || {
        format!("csd {} exceeds the bound {}", r.csd, r.bound)
    });
    Ok(run.finish(res, v))
}

#[derive(Serialize)]
struct BettiResult {
    vertices: usize,
    dimension: isize,
    faces: usize,
    reduced_betti: Vec<usize>,
}

pub fn betti(mut run: Run, file: &Path, avoiding: bool) -> Result<RunReport> {
    let text = read_input(&mut run, file)?;
    let k: SimplicialComplexGF2 = if avoiding {
        avoiding_complex(&chromadepth::io::read_config(&text)?)?
    } else {
        from_json::<ComplexFile>(&text)?.to_complex()?
    };
    let b = betti_gf2(&k)?;
    let res = BettiResult {
        vertices: k.vertex_count(),
        dimension: k.dim(),
        faces: k.num_faces(),
        reduced_betti: b.values,
    };
    Ok(run.finish(res, Vec::new()))
}

pub enum TmfSource<'a> {
    File(&'a Path),
    Extremal(&'a [usize]),
    Random(&'a [usize], u64),
}

#[derive(Serialize)]
struct TmfResult {
    dimension: usize,
    dims: Vec<usize>,
    count: usize,
    bound: u64,
    bound_ok: bool,
    equality: bool,
    facets: Vec<MinkowskiFace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    simplices: Option<SimplicesFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fans: Option<FanIntersection>,
}

pub fn tmf(mut run: Run, source: TmfSource, fans: bool) -> Result<RunReport> {
    let (simplices, generated) = match source {
        TmfSource::File(p) => (
            from_json::<SimplicesFile>(&read_input(&mut run, p)?)?.to_simplices()?,
            false,
        ),
        TmfSource::Extremal(dims) => {
            run.input(format!("extremal {dims:?}"));
            (extremal_minkowski(dims)?, true)
        }
        TmfSource::Random(dims, seed) => {
            run.input(format!("random {dims:?}"));
            run.seed(seed);
            let n: usize = dims.iter().sum();
            let ambient = (n + 1)
                .checked_sub(dims.len())
                .filter(|&d| d > 0)
                .ok_or(Error::DimensionMismatch)?;
            (random_simplices(dims, ambient, seed, 6)?, true)
        }
    };
    let dims: Vec<usize> = simplices.iter().map(SimplexV::dim).collect();
    let facets = totally_mixed_facets(&simplices)?;
    let bound = tmf_bound(&dims);
    let count = facets.len();
    let mut violations = violation_if(count as u64 > bound, || {
        format!("{count} facets exceed the bound {bound}")
    });
    let fans = if fans {
        let f: Vec<Fan3> = simplices.iter().map(fan_from_triangle).collect::<Result<_>>()?;
        let r = intersect_fans(&f)?;
        if r.maximal_cones != count {
            violations.push(format!("{} maximal cones but {count} facets", r.maximal_cones));
        }
        if !r.bound_ok {
            violations.push(format!("{} maximal cones exceed {}", r.maximal_cones, r.bound));
        }
        Some(r)
    } else {
        None
    };
    let res = TmfResult {
        dimension: simplices[0].ambient_dim(),
        dims,
        count,
        bound,
        bound_ok: count as u64 <= bound,
        equality: count as u64 == bound,
        facets,
        simplices: generated.then(|| SimplicesFile::from_simplices(&simplices)),
        fans,
    };
    Ok(run.finish(res, violations))
}

pub enum FlipAction<'a> {
    Check,
    Translate(&'a [(usize, usize)]),
    Walk(&'a Path, usize),
}

#[derive(Serialize)]
struct FlipReport {
    path: FlipPathFile,
    certificate: CertificateReport,
    endpoint_betti: [usize; 2],
}

fn certify(p: &FlipPath) -> Result<(FlipReport, Vec<String>)> {
    let cert = verify_flip(p)?;
    let d = p.start.dim() as isize;
    let mut betti = [0; 2];
    if cert.endpoints_ok {
        for (b, c) in betti.iter_mut().zip([&p.start, &p.end]) {
            *b = betti_gf2(&avoiding_complex(c)?)?.get(d - 1);
        }
    }
    let mut v = Vec::new();
    if !cert.valid {
        v.push(format!("certificate for ridge {:?} is invalid", p.ridge.members()));
    } else if betti != [1, 1] {
        v.push(format!("endpoint betti numbers {betti:?} differ from 1"));
    }
    Ok((
        FlipReport {
            path: FlipPathFile::from_path(p),
            certificate: CertificateReport::from_certificate(&cert),
            endpoint_betti: betti,
        },
        v,
    ))
}

#[derive(Serialize)]
struct WalkReport {
    success: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    retries_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    flips: Vec<FlipReport>,
}

pub fn flip(mut run: Run, file: &Path, action: FlipAction, strict: bool, seed: u64) -> Result<RunReport> {
    let text = read_input(&mut run, file)?;
    let mode = if strict {
        FlipMode::Strict
    } else {
        FlipMode::Certificate
    };
    match action {
        FlipAction::Check => {
            let mut p = from_json::<FlipPathFile>(&text)?.to_path()?;
            if strict {
                p.mode = FlipMode::Strict;
            }
            let (r, v) = certify(&p)?;
            Ok(run.finish(r, v))
        }
        FlipAction::Translate(ridge) => {
            run.input(format!("ridge {ridge:?}"));
            let c = chromadepth::io::read_config(&text)?;
            let mut p = translate_flip(&c, &ColorfulSimplex::new(ridge.to_vec())?)?;
            p.mode = mode;
            let (r, v) = certify(&p)?;
            Ok(run.finish(r, v))
        }
        FlipAction::Walk(end, max_retries) => {
            let c1 = chromadepth::io::read_config(&text)?;
            let c2 = chromadepth::io::read_config(&read_input(&mut run, end)?)?;
            run.seed(seed);
            let report = match flip_walk(&c1, &c2, max_retries, seed)? {
                WalkOutcome::Success(paths) => {
                    let mut flips = Vec::new();
                    let mut violations = Vec::new();
                    for mut p in paths {
                        p.mode = mode;
                        let (r, v) = certify(&p)?;
                        flips.push(r);
                        violations.extend(v);
                    }
                    let r = WalkReport {
                        success: true,
                        retries_used: None,
                        reason: None,
                        flips,
                    };
                    return Ok(run.finish(r, violations));
                }
                WalkOutcome::Failure(f) => WalkReport {
                    success: false,
                    retries_used: Some(f.retries_used),
                    reason: Some(f.reason),
                    flips: Vec::new(),
                },
            };
            Ok(run.finish(report, Vec::new()))
        }
    }
}

#[derive(Serialize)]
struct GaleResult {
    dimension: usize,
    vectors: Vec<Vec<RatText>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<Vec<Vec<usize>>>,
    centered: bool,
}

#[derive(Serialize)]
struct InverseResult {
    points: PointConfigFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    simplices: Option<SimplicesFile>,
    round_trip: bool,
}

pub fn gale(mut run: Run, file: &Path, inverse: bool) -> Result<RunReport> {
    let text = read_input(&mut run, file)?;
    if !inverse {
        let a = from_json::<PointConfigFile>(&text)?.to_points()?;
        let g = if a.partition().is_some() {
            colorful_gale(&a)?
        } else {
            gale_transform(&a)?
        };
        let res = GaleResult {
            dimension: g.dim,
            vectors: vector_list(&g.vectors),
            centered: g.partition.is_some() && g.is_centered(),
            partition: g.partition,
        };
        return Ok(run.finish(res, Vec::new()));
    }
    let c = chromadepth::io::read_config(&text)?;
    let sizes = c.shape();
    let offsets = chromadepth::colorful::class_offsets(&sizes);
    let partition = sizes
        .iter()
        .zip(&offsets)
        .map(|(&k, &o)| (o..o + k).collect())
        .collect();
    let g = GaleTransform::new(c.dim(), c.classes().concat(), Some(partition))?;
    let a = inverse_colorful_gale(&g)?;
    let round_trip = positively_equivalent(&colorful_gale(&a)?.vectors, &g.vectors)?;
    let simplices: Option<Vec<SimplexV>> = (0..sizes.len())
        .map(|i| SimplexV::new(a.class_points(i)).ok())
        .collect();
    let res = InverseResult {
        points: PointConfigFile::from_points(&a),
        simplices: simplices.map(|s| SimplicesFile::from_simplices(&s)),
        round_trip,
    };
    let v = violation_if(!round_trip, || {
        "round trip is not positively equivalent to the input".into()
    });
    Ok(run.finish(res, v))
}

#[derive(Serialize)]
#[serde(untagged)]
enum PtResult {
    Transform {
        dimension: usize,
        vectors: Vec<Vec<RatText>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        partition: Option<Vec<Vec<usize>>>,
    },
    Coincidence {
        coincidence: bool,
    },
}

pub fn ptransform(mut run: Run, file: &Path, coincidence: bool) -> Result<RunReport> {
    let s = from_json::<SimplicesFile>(&read_input(&mut run, file)?)?.to_simplices()?;
    if coincidence {
        let ok = verify_coincidence(&s)?;
        let v = violation_if(!ok, || "Minkowski transform and colorful Gale transform differ".into());
        return Ok(run.finish(PtResult::Coincidence { coincidence: ok }, v));
    }
    let t = simplex_minkowski_transform(&s)?;
    let res = PtResult::Transform {
        dimension: t.dim,
        vectors: vector_list(&t.vectors),
        partition: t.partition,
    };
    Ok(run.finish(res, Vec::new()))
}

pub enum Generate<'a> {
    Config {
        shape: &'a [usize],
        extremal: bool,
        coord_bound: u64,
    },
    Simplices {
        dims: &'a [usize],
        ambient: Option<usize>,
        extremal: bool,
        coord_bound: u64,
    },
}

/// Writes a generated input file to `out`, or returns it as the result.
pub fn generate(mut run: Run, what: Generate, seed: u64, out: Option<&Path>) -> Result<RunReport> {
    let value = match what {
        Generate::Config {
            shape,
            extremal,
            coord_bound,
        } => {
            run.input(format!("config {shape:?} {extremal} {coord_bound}"));
            let c = if extremal {
                extremal_config(shape)?
            } else {
                run.seed(seed);
                random_centered_rgp(shape, seed, coord_bound)?
            };
            serde_json::to_value(ConfigFile::from_config(&c))
        }
        Generate::Simplices {
            dims,
            ambient,
            extremal,
            coord_bound,
        } => {
            run.input(format!("simplices {dims:?} {ambient:?} {extremal} {coord_bound}"));
            let s = if extremal {
                extremal_minkowski(dims)?
            } else {
                run.seed(seed);
                let n: usize = dims.iter().sum();
                let d = match ambient {
                    Some(d) => d,
                    None => (n + 1)
                        .checked_sub(dims.len())
                        .filter(|&d| d > 0)
                        .ok_or(Error::DimensionMismatch)?,
                };
                random_simplices(dims, d, seed, coord_bound)?
            };
            serde_json::to_value(SimplicesFile::from_simplices(&s))
        }
    }
    .expect("serializable");
    if let Some(path) = out {
        crate::verify::write_json(path, &value).map_err(|e| Error::InvalidInput(format!("cannot write: {e}")))?;
        return Ok(run.finish(serde_json::json!({ "written": path.display().to_string() }), Vec::new()));
    }
    Ok(run.finish(value, Vec::new()))
}
