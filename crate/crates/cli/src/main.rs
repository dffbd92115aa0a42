mod commands;
mod report;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{FlipAction, Generate, TmfSource};
use report::{Format, Run};
use verify::{Check, VerifyArgs, ALL_CHECKS};

/// Colorful simplicial depth, Gale duality and Minkowski sums of simplices.
///
/// Exit codes: 0 when every assertion holds, 1 when a property is violated,
/// 2 on input errors.
#[derive(Parser, Debug)]
#[command(name = "chromadepth", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

fn parse_ridge(s: &str) -> Result<(usize, usize), String> {
    let (c, i) = s
        .split_once(':')
        .ok_or_else(|| format!("expected class:index, got {s}"))?;
    Ok((
        c.trim().parse().map_err(|e| format!("{s}: {e}"))?,
        i.trim().parse().map_err(|e| format!("{s}: {e}"))?,
    ))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Colorful simplicial depth of a configuration file.
    Csd {
        file: PathBuf,
        /// Include the hitting simplices.
        #[arg(long)]
        list: bool,
        /// Exit 1 when csd exceeds 1 + prod (n_i - 1).
        #[arg(long)]
        assert_bound: bool,
    },
    /// Checks properties on seeded random centered configurations.
    Verify {
        /// Class sizes, e.g. 2,2,2.
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<usize>,
        /// Number of seeds, starting at --seed (default 0).
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, value_enum, value_delimiter = ',')]
        checks: Option<Vec<Check>>,
        #[arg(long, default_value_t = 10)]
        coord_bound: u64,
        /// Directory for reproducer files of failing seeds.
        #[arg(long, default_value = ".")]
        reproducer_dir: PathBuf,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Totally mixed facets of a Minkowski sum of simplices.
    Tmf {
        /// Simplex collection file.
        #[arg(required_unless_present_any = ["extremal", "random"], conflicts_with_all = ["extremal", "random"])]
        file: Option<PathBuf>,
        /// Extremal instance with these summand dimensions.
        #[arg(long, value_delimiter = ',', conflicts_with = "random")]
        extremal: Option<Vec<usize>>,
        /// Random generic instance with these summand dimensions.
        #[arg(long, value_delimiter = ',')]
        random: Option<Vec<usize>>,
        /// Cross-check against the intersection of triangle fans.
        #[arg(long)]
        fans: bool,
    },
    /// Flip certificates: verify a flip path file, translate through a ridge,
    /// or walk between two configurations.
    Flip {
        /// Flip path file, or the start configuration with --ridge or --walk.
        file: PathBuf,
        /// Ridge as class:index pairs, e.g. 0:1,1:0.
        #[arg(long, value_delimiter = ',', value_parser = parse_ridge, conflicts_with = "walk")]
        ridge: Option<Vec<(usize, usize)>>,
        /// End configuration for a flip walk.
        #[arg(long)]
        walk: Option<PathBuf>,
        /// Scan the straight segment for events and centeredness.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 64)]
        max_retries: usize,
    },
    /// Gale transform of a point configuration, or with --inverse the
    /// configuration whose colorful Gale transform is the given one.
    Gale {
        file: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Minkowski transform of a simplex collection.
    Ptransform {
        file: PathBuf,
        /// Compare with the colorful Gale transform of the vertices.
        #[arg(long)]
        coincidence: bool,
    },
    /// Reduced GF(2) Betti numbers of a complex file.
    Betti {
        file: PathBuf,
        /// Read a configuration and use its avoiding complex.
        #[arg(long)]
        avoiding: bool,
    },
    /// Generates input files.
    #[command(subcommand)]
    Generate(GenerateCmd),
}

#[derive(Subcommand, Debug)]
enum GenerateCmd {
    /// A colorful configuration.
    Config {
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<usize>,
        #[arg(long)]
        extremal: bool,
        #[arg(long, default_value_t = 10)]
        coord_bound: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// A collection of simplices.
    Simplices {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Ambient dimension; defaults to sum dims - summands + 1.
        #[arg(long)]
        ambient: Option<usize>,
        #[arg(long)]
        extremal: bool,
        #[arg(long, default_value_t = 6)]
        coord_bound: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn threads_from_env() -> Option<usize> {
    std::env::var("CHROMADEPTH_THREADS").ok()?.trim().parse().ok()
}

fn dispatch(cli: &Cli) -> Result<report::RunReport, String> {
    let seed = cli.seed.unwrap_or(0);
    let lib = |r: chromadepth::Result<report::RunReport>| r.map_err(|e| e.to_string());
    match &cli.command {
        Command::Csd {
            file,
            list,
            assert_bound,
        } => lib(commands::csd(Run::new("csd"), file, *list, *assert_bound)),
        Command::Verify {
            shape,
            seeds,
            checks,
            coord_bound,
            reproducer_dir,
            inject_fault,
        } => {
            let mut run = Run::new("verify");
            let args = VerifyArgs {
                shape: shape.clone(),
                first_seed: seed,
                seeds: *seeds,
                checks: checks.clone().unwrap_or_else(|| ALL_CHECKS.to_vec()),
                coord_bound: *coord_bound,
                reproducer_dir: reproducer_dir.clone(),
                threads: threads_from_env(),
                inject_fault: *inject_fault,
            };
            run.input(format!(
                "{:?} {} {:?} {} {}",
                args.shape, args.seeds, args.checks, args.coord_bound, args.inject_fault
            ));
            run.seed(seed);
            let summary = verify::run(&args)?;
            let violations = summary
                .failures
                .iter()
                .map(|f| format!("seed {}: {}: {}", f.seed, f.check, f.detail))
                .collect();
            Ok(run.finish(summary, violations))
        }
        Command::Tmf {
            file,
            extremal,
            random,
            fans,
        } => {
            let source = match (file, extremal, random) {
                (Some(f), _, _) => TmfSource::File(f),
                (_, Some(d), _) => TmfSource::Extremal(d),
                (_, _, Some(d)) => TmfSource::Random(d, seed),
                _ => unreachable!("clap requires a source"),
            };
            lib(commands::tmf(Run::new("tmf"), source, *fans))
        }
        Command::Flip {
            file,
            ridge,
            walk,
            strict,
            max_retries,
        } => {
            let action = match (ridge, walk) {
                (Some(r), _) => FlipAction::Translate(r),
                (_, Some(end)) => FlipAction::Walk(end, *max_retries),
                _ => FlipAction::Check,
            };
            lib(commands::flip(Run::new("flip"), file, action, *strict, seed))
        }
        Command::Gale { file, inverse } => lib(commands::gale(Run::new("gale"), file, *inverse)),
        Command::Ptransform { file, coincidence } => {
            lib(commands::ptransform(Run::new("ptransform"), file, *coincidence))
        }
        Command::Betti { file, avoiding } => lib(commands::betti(Run::new("betti"), file, *avoiding)),
        Command::Generate(g) => {
            let (what, out) = match g {
                GenerateCmd::Config {
                    shape,
                    extremal,
                    coord_bound,
                    out,
                } => (
                    Generate::Config {
                        shape,
                        extremal: *extremal,
                        coord_bound: *coord_bound,
                    },
                    out,
                ),
                GenerateCmd::Simplices {
                    dims,
                    ambient,
                    extremal,
                    coord_bound,
                    out,
                } => (
                    Generate::Simplices {
                        dims,
                        ambient: *ambient,
                        extremal: *extremal,
                        coord_bound: *coord_bound,
                    },
                    out,
                ),
            };
            lib(commands::generate(Run::new("generate"), what, seed, out.as_deref()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(report) => {
            // A closed pipe is not an error of the command.
            let _ = writeln!(std::io::stdout(), "{}", report.render(cli.format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
