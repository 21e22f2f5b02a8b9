mod bench;
mod io;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use betaskel::delaunay::triangulate;
use betaskel::pointgen::{generate, GenMode};
use betaskel::regions::make_region;
use betaskel::skeleton::{batched, brute_force, dt_filter, first_difference};
use betaskel::{AlgoConfig, Beta, Closure, Error, SkeletonGraph, Variant};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// A fatal error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: String) -> Failure {
        Failure { code: 2, message }
    }

    fn unsupported(message: String) -> Failure {
        Failure { code: 3, message }
    }

    fn mismatch(message: String) -> Failure {
        Failure { code: 1, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Mismatch(_) => 1,
            Error::UnsupportedRange(_) | Error::UnsupportedVariant(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Auto,
    Batched,
    DtFilter,
    Bruteforce,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::Batched => "batched",
            Algo::DtFilter => "dt-filter",
            Algo::Bruteforce => "bruteforce",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Lune,
    Circle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClosureArg {
    Open,
    Closed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Markdown,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Uniform,
    Grid,
    Circle,
}

#[derive(Parser)]
#[command(name = "skel", version, about = "Lune-based beta-skeletons of planar point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SkeletonOpts {
    /// Decimal, fraction `p/q`, or `inf`.
    #[arg(long, default_value = "3")]
    beta: String,
    #[arg(long, value_enum, default_value = "open")]
    closure: ClosureArg,
    #[arg(long, value_enum, default_value = "lune")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "auto")]
    algo: Algo,
    /// Lunes per group for the batched algorithm.
    #[arg(long)]
    group_size: Option<usize>,
    /// Process groups on all cores.
    #[arg(long)]
    parallel: bool,
    /// Re-check batched output against dt-filter.
    #[arg(long)]
    paranoid: bool,
    /// Seed for the randomized structures.
    #[arg(long, default_value_t = betaskel::AlgoConfig::default().rng_seed)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the skeleton of a point file.
    Compute {
        #[arg(long)]
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        opts: SkeletonOpts,
    },
    /// Check that batched, dt-filter and brute force agree.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Also compare against this edge file.
        #[arg(long)]
        expect: Option<PathBuf>,
        /// Largest n for which brute force is run.
        #[arg(long, default_value_t = 400)]
        brute_max: usize,
        #[command(flatten)]
        opts: SkeletonOpts,
    },
    /// Write a seeded point set.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value = "uniform")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Median running times over uniform random inputs.
    Bench {
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', default_value = "1000,4000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Comma-separated algorithms.
        #[arg(long = "algos", value_enum, value_delimiter = ',', default_value = "batched,dt-filter")]
        algos: Vec<Algo>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        opts: SkeletonOpts,
    },
    /// Render points, edges and optionally one region as SVG.
    Plot {
        #[arg(long)]
        input: PathBuf,
        /// Edge file written by `compute` (JSON or TSV).
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overlay the region of the pair `i j`.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        show_region: Option<Vec<usize>>,
        #[command(flatten)]
        opts: SkeletonOpts,
    },
}

struct Resolved {
    beta: Beta,
    closure: Closure,
    variant: Variant,
    cfg: AlgoConfig,
}

fn resolve(o: &SkeletonOpts) -> Result<Resolved, Failure> {
    let beta: Beta = o.beta.parse().map_err(|e: Error| Failure::input(format!("--beta: {e}")))?;
    if o.group_size == Some(0) {
        return Err(Failure::input("--group-size must be at least 1".into()));
    }
    Ok(Resolved {
        beta,
        closure: match o.closure {
            ClosureArg::Open => Closure::Open,
            ClosureArg::Closed => Closure::Closed,
        },
        variant: match o.variant {
            VariantArg::Lune => Variant::LuneBased,
            VariantArg::Circle => Variant::CircleBased,
        },
        cfg: AlgoConfig {
            group_size_override: o.group_size,
            parallel_groups: o.parallel,
            paranoid_verify: o.paranoid,
            rng_seed: o.seed,
        },
    })
}

fn pick(algo: Algo, r: &Resolved) -> Result<Algo, Failure> {
    let fast = r.beta.exceeds(2) && r.variant == Variant::LuneBased;
    match algo {
        Algo::Auto => Ok(if fast { Algo::Batched } else { Algo::Bruteforce }),
        Algo::Bruteforce => Ok(algo),
        Algo::Batched | Algo::DtFilter if r.variant == Variant::CircleBased => {
            Err(Failure::unsupported(format!("{} supports only lune-based regions", algo.name())))
        }
        Algo::Batched | Algo::DtFilter if !r.beta.exceeds(2) => {
            Err(Failure::unsupported(format!("{} requires beta > 2", algo.name())))
        }
        _ => Ok(algo),
    }
}

fn compute(input: &io::Input, algo: Algo, r: &Resolved) -> Result<SkeletonGraph, Failure> {
    let p = &input.points;
    let g = match pick(algo, r)? {
        Algo::Batched => batched(p, &r.beta, r.closure, &r.cfg),
        Algo::DtFilter => dt_filter(p, &r.beta, r.closure),
        _ => brute_force(p, &r.beta, r.variant, r.closure),
    }?;
    let s = &g.stats;
    log::info!(
        "{}: n={} edges={} m={} groups={} dt {:.3}s build {:.3}s locate {:.3}s traverse {:.3}s total {:.3}s",
        s.algorithm,
        g.n,
        g.edges.len(),
        s.group_size,
        s.group_count,
        s.dt_secs,
        s.build_secs,
        s.locate_secs,
        s.traverse_secs,
        s.total_secs
    );
    Ok(g)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compute { input, out, format, opts } => {
            let r = resolve(&opts)?;
            let pts = io::read_points(&input)?;
            let g = compute(&pts, opts.algo, &r)?;
            let text = match format {
                Format::Json => {
                    let mut s = serde_json::to_string(&io::graph_json(&g, &pts)).expect("json");
                    s.push('\n');
                    s
                }
                Format::Tsv => io::edges_tsv(&g.edges),
            };
            io::emit(out.as_deref(), &text)
        }
        Command::Verify { input, expect, brute_max, opts } => {
            let r = resolve(&opts)?;
            let pts = io::read_points(&input)?;
            let b = compute(&pts, Algo::Batched, &r)?;
            let f = compute(&pts, Algo::DtFilter, &r)?;
            let mut report = vec![format!("batched: {} edges", b.edges.len()), format!("dt-filter: {} edges", f.edges.len())];
            if let Some(e) = first_difference(&b.edges, &f.edges) {
                return Err(Failure::mismatch(format!("batched and dt-filter differ at edge {} {}", e.0, e.1)));
            }
            if pts.points.len() <= brute_max {
                let dt = triangulate(&pts.points)?;
                let mut bf = compute(&pts, Algo::Bruteforce, &r)?.edges;
                bf.retain(|e| dt.edges().binary_search(e).is_ok());
                if let Some(e) = first_difference(&b.edges, &bf) {
                    return Err(Failure::mismatch(format!("batched and brute force differ at edge {} {}", e.0, e.1)));
                }
                report.push(format!("bruteforce: {} Delaunay edges", bf.len()));
            }
            if let Some(path) = expect {
                let want = io::read_edges(&path)?;
                if let Some(e) = first_difference(&b.edges, &want) {
                    let side = if b.edges.binary_search(&e).is_ok() { "computed only" } else { "expected only" };
                    return Err(Failure::mismatch(format!(
                        "{} differs from the computed skeleton at edge {} {} ({side})",
                        path.display(),
                        e.0,
                        e.1
                    )));
                }
                report.push(format!("{}: matches", path.display()));
            }
            println!("ok ({})", report.join(", "));
            Ok(())
        }
        Command::Gen { n, mode, seed, out } => {
            let mode = match mode {
                ModeArg::Uniform => GenMode::Uniform,
                ModeArg::Grid => GenMode::Grid,
                ModeArg::Circle => GenMode::Circle,
            };
            let pts = generate(n as usize, mode, seed)?;
            let mut text = String::from("x,y\n");
            for p in pts.iter() {
                let (x, y) = p.approx();
                text.push_str(&format!("{x},{y}\n"));
            }
            io::emit(out.as_deref(), &text)
        }
        Command::Bench { sizes, reps, algos, format, out, opts } => {
            let r = resolve(&opts)?;
            for &a in &algos {
                pick(a, &r)?;
            }
            if sizes.iter().any(|&n| n < 2) {
                return Err(Failure::input("--sizes must all be at least 2".into()));
            }
            let rows = bench::run(&sizes, reps, &algos, &r.beta, r.closure, &r.cfg, opts.seed)?;
            let text = match format {
                TableFormat::Markdown => bench::markdown(&rows),
                TableFormat::Csv => bench::csv(&rows),
            };
            io::emit(out.as_deref(), &text)
        }
        Command::Plot { input, edges, out, show_region, opts } => {
            let r = resolve(&opts)?;
            let pts = io::read_points(&input)?;
            let n = pts.points.len();
            let edges = match edges {
                Some(p) => io::read_edges(&p)?,
                None => Vec::new(),
            };
            if let Some(&(i, j)) = edges.iter().find(|&&(_, j)| j >= n) {
                return Err(Failure::input(format!("edge {i} {j} is out of range for {n} points")));
            }
            let region = match show_region.as_deref() {
                Some(&[i, j]) => {
                    if i >= n || j >= n {
                        return Err(Failure::input(format!("--show-region {i} {j}: index out of range for {n} points")));
                    }
                    Some(make_region(&pts.points[i], &pts.points[j], &r.beta, r.variant)?)
                }
                _ => None,
            };
            io::emit(out.as_deref(), &plot::render(&pts.points, &edges, region.as_ref()))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SKEL_LOG")).format_timestamp(None).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("skel: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
