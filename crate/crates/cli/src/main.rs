//! `kneserdisc`: colorings of generalized Kneser graphs from high-discrepancy
//! hypergraphs, discrepancy computation and bound reports.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use kneserdisc_core::bounds::{bound_report, ReportParams};
use kneserdisc_core::coloring::{extract_hypergraph, verify_proper_with};
use kneserdisc_core::geometry::{
    sample_verify_signed, verify_signed_with, SampleConfig, SignedColorer, SignedColoring,
};
use kneserdisc_core::hadamard::{self, SignMatrix};
use kneserdisc_core::{
    catalog, discrepancy, Coloring, Error, HeuristicConfig, Hypergraph, KneserColorer, KneserParams, Limits, Mode,
};

#[derive(Parser, Debug)]
#[command(
    name = "kneserdisc",
    version,
    about = "Kneser colorings from high-discrepancy hypergraphs"
)]
struct Cli {
    /// Worker threads (default: available parallelism). Results do not
    /// depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build, check or convert Hadamard matrices.
    #[command(subcommand)]
    Hadamard(HadamardCmd),
    /// Discrepancy of a hypergraph.
    Disc(DiscArgs),
    /// Color a Kneser graph, Kneser hypergraph or signed-vector graph.
    #[command(subcommand)]
    Color(ColorCmd),
    /// Re-verify a coloring file.
    Verify {
        file: PathBuf,
        /// Hypergraph source, used only to recover it from the labels.
        #[arg(long)]
        hypergraph: Option<String>,
    },
    /// Dense hypergraph of a set family, or of a coloring's generators.
    Extract(ExtractArgs),
    /// Chromatic bounds for K(n, k, s).
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: Option<u64>,
        /// Alon–Spencer constant.
        #[arg(long = "K")]
        alon_spencer_k: Option<f64>,
    },
    /// List named instances, or print one in hypergraph format.
    Catalog { name: Option<String> },
}

#[derive(Subcommand, Debug)]
enum HadamardCmd {
    /// Print a normalized Hadamard matrix of order m.
    Gen {
        #[arg(long)]
        m: usize,
    },
    /// Check that a matrix file is Hadamard.
    Verify { file: PathBuf },
    /// Row-support hypergraph of a normalized matrix.
    Hypergraph {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        m: Option<usize>,
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct DiscArgs {
    /// plain | shifted:<t> | centered:<r>:<w>
    #[arg(long, default_value = "plain")]
    mode: Mode,
    #[arg(long, conflicts_with = "heuristic")]
    exact: bool,
    #[arg(long)]
    heuristic: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 512)]
    steps: usize,
    /// File path or `catalog:<name>`.
    source: String,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, default_value_t = 0)]
    t: usize,
    /// File path or `catalog:<name>`, embedded into [n] identically.
    #[arg(long)]
    hypergraph: String,
    /// Write the coloring here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ColorCmd {
    /// K(n, n/2 − t, s).
    Graph(Common),
    /// KH(n, r, n/r − t, s).
    Hyper {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: usize,
    },
    /// Vectors with n/2 − l − t entries +1 and l entries −1, adjacent when
    /// the scalar product is below s − 2l.
    Signed {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        l: usize,
        /// Skip enumeration: sample this many same-label pairs instead.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct ExtractArgs {
    /// Family of sets in hypergraph format.
    #[arg(long, conflicts_with_all = ["coloring", "hypergraph"])]
    family: Option<String>,
    /// Coloring file whose color generators form the family.
    #[arg(long, requires = "hypergraph")]
    coloring: Option<PathBuf>,
    /// Hypergraph the coloring was built from.
    #[arg(long)]
    hypergraph: Option<String>,
}

/// Failure that maps to exit code 1 rather than 2.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("error: {}", e.to_string().trim_start_matches("error: ").trim_end());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let failed = e.downcast_ref::<Failed>().is_some()
                || matches!(
                    e.downcast_ref::<Error>(),
                    Some(Error::Uncolorable { .. } | Error::Certification(_))
                );
            ExitCode::from(if failed { 1 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("thread pool")?;
    }
    let limits = Limits::from_env()?;
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Hadamard(cmd) => hadamard_cmd(cmd, &mut out),
        Command::Disc(args) => disc_cmd(args, &limits, &mut out),
        Command::Color(cmd) => color_cmd(cmd, &limits, &mut out),
        Command::Verify { file, hypergraph } => verify_cmd(&file, hypergraph.as_deref(), &limits, &mut out),
        Command::Extract(args) => extract_cmd(args, &mut out),
        Command::Bounds {
            n,
            k,
            s,
            t,
            alon_spencer_k,
        } => {
            let report = bound_report(ReportParams {
                n,
                k,
                s,
                t,
                alon_spencer_k,
            })?;
            write!(out, "{report}")?;
            Ok(())
        }
        Command::Catalog { name: None } => {
            for name in catalog::NAMES {
                writeln!(out, "{name}")?;
            }
            Ok(())
        }
        Command::Catalog { name: Some(name) } => {
            write!(out, "{}", catalog::resolve(&name)?.serialize())?;
            Ok(())
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// `catalog:<name>` or a hypergraph file.
fn load_hypergraph(source: &str) -> anyhow::Result<Hypergraph> {
    match source.strip_prefix("catalog:") {
        Some(name) => Ok(catalog::resolve(name)?),
        None => Ok(Hypergraph::parse(&read(Path::new(source))?)?),
    }
}

fn emit(text: &str, dest: Option<&Path>, out: &mut impl Write) -> anyhow::Result<()> {
    match dest {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn hadamard_cmd(cmd: HadamardCmd, out: &mut impl Write) -> anyhow::Result<()> {
    match cmd {
        HadamardCmd::Gen { m } => write!(out, "{}", hadamard::normalize(&hadamard::construct(m)?)?.serialize())?,
        HadamardCmd::Verify { file } => {
            let mat = SignMatrix::parse(&read(&file)?)?;
            let ok = hadamard::verify_hadamard(&mat);
            writeln!(
                out,
                "pass={ok} order={} normalized={}",
                mat.order(),
                mat.is_normalized()
            )?;
            if !ok {
                return Err(Failed(format!("{} is not a Hadamard matrix", file.display())).into());
            }
        }
        HadamardCmd::Hypergraph { m, matrix } => {
            let h = match (m, matrix) {
                (Some(m), _) => hadamard::hadamard_hypergraph(m)?,
                (None, Some(path)) => {
                    let mat = SignMatrix::parse(&read(&path)?)?;
                    hadamard::to_hypergraph(&hadamard::normalize(&mat)?)?
                }
                (None, None) => bail!("give --m or --matrix"),
            };
            write!(out, "{}", h.serialize())?;
        }
    }
    Ok(())
}

fn disc_cmd(args: DiscArgs, limits: &Limits, out: &mut impl Write) -> anyhow::Result<()> {
    if args.exact == args.heuristic {
        bail!("choose exactly one of --exact and --heuristic");
    }
    let h = load_hypergraph(&args.source)?;
    let result = if args.exact {
        discrepancy::exact_discrepancy_with(&h, args.mode, limits)?
    } else {
        discrepancy::heuristic_discrepancy(
            &h,
            args.mode,
            HeuristicConfig {
                seed: args.seed,
                restarts: args.restarts,
                steps: args.steps,
            },
        )?
    };
    writeln!(out, "{result}")?;
    Ok(())
}

fn color_cmd(cmd: ColorCmd, limits: &Limits, out: &mut impl Write) -> anyhow::Result<()> {
    match cmd {
        ColorCmd::Graph(c) => {
            let h = load_hypergraph(&c.hypergraph)?;
            let params = KneserParams::graph(c.n, c.t, c.s)?;
            let coloring = KneserColorer::graph(params, &h, None)?.color_all(limits)?;
            finish_coloring(
                &coloring.serialize(),
                coloring.colors_used(),
                coloring.vertices.len(),
                &c,
                out,
            )
        }
        ColorCmd::Hyper { common: c, r } => {
            let h = load_hypergraph(&c.hypergraph)?;
            let params = KneserParams::hyper(c.n, r, c.t, c.s)?;
            let coloring = KneserColorer::hyper(params, &h, None)?.color_all(limits)?;
            finish_coloring(
                &coloring.serialize(),
                coloring.colors_used(),
                coloring.vertices.len(),
                &c,
                out,
            )
        }
        ColorCmd::Signed {
            common: c,
            l,
            sample,
            seed,
        } => {
            let h = load_hypergraph(&c.hypergraph)?;
            let colorer = SignedColorer::new(c.n, l, c.t, c.s, &h)?;
            match sample {
                Some(pairs) => {
                    let report = sample_verify_signed(
                        &colorer,
                        SampleConfig {
                            pool: 4096,
                            pairs,
                            adversarial: pairs.min(100_000),
                            seed,
                        },
                    )?;
                    writeln!(
                        out,
                        "pass={} pairs_checked={} adversarial_checked={} adjacent_found={}",
                        report.passed(),
                        report.pairs_checked,
                        report.adversarial_checked,
                        report.adjacent_found
                    )?;
                    match report.violation {
                        None => Ok(()),
                        Some(v) => Err(Failed(format!(
                            "label {} on {} and {} with product {}",
                            v.label, v.pair.0, v.pair.1, v.product
                        ))
                        .into()),
                    }
                }
                None => {
                    let coloring = colorer.color_all(limits)?;
                    finish_coloring(
                        &coloring.serialize(),
                        coloring.colors_used(),
                        coloring.vectors.len(),
                        &c,
                        out,
                    )
                }
            }
        }
    }
}

fn finish_coloring(text: &str, colors: usize, vertices: usize, c: &Common, out: &mut impl Write) -> anyhow::Result<()> {
    emit(text, c.out.as_deref(), out)?;
    let summary = format!("colors_used={colors} vertices={vertices}");
    if c.out.is_some() {
        writeln!(out, "{summary}")?;
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

/// Signed files carry `+`/`-` in their vertex column.
fn is_signed(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .nth(1)
        .and_then(|l| l.split_whitespace().next())
        .is_some_and(|v| v.contains(['+', '-']))
}

fn verify_cmd(file: &Path, hypergraph: Option<&str>, limits: &Limits, out: &mut impl Write) -> anyhow::Result<()> {
    let text = read(file)?;
    let (passed, line, violation) = if is_signed(&text) {
        let report = verify_signed_with(&SignedColoring::parse(&text)?, limits)?;
        let violation = report.violation.as_ref().map(|v| {
            format!(
                "label {} on {} and {} with product {}",
                v.label, v.pair.0, v.pair.1, v.product
            )
        });
        (
            report.passed(),
            report.to_string(),
            violation.or(report.totality.clone()),
        )
    } else {
        let mut coloring = Coloring::parse(&text)?;
        if let Some(src) = hypergraph {
            coloring.hypergraph = Some(load_hypergraph(src)?.embed(coloring.params.n, None)?);
        }
        let report = verify_proper_with(&coloring, limits)?;
        let violation = report.violation.as_ref().map(|v| v.to_string());
        (
            report.passed(),
            report.to_string(),
            violation.or(report.totality.clone()),
        )
    };
    writeln!(out, "{line}")?;
    if passed {
        Ok(())
    } else {
        Err(Failed(format!("verification failed: {}", violation.unwrap_or_default())).into())
    }
}

fn extract_cmd(args: ExtractArgs, out: &mut impl Write) -> anyhow::Result<()> {
    let family = match (&args.family, &args.coloring, &args.hypergraph) {
        (Some(src), _, _) => load_hypergraph(src)?.edges().to_vec(),
        (None, Some(path), Some(src)) => {
            let mut coloring = Coloring::parse(&read(path)?)?;
            coloring.hypergraph = Some(load_hypergraph(src)?.embed(coloring.params.n, None)?);
            coloring.generators()?
        }
        _ => return Err(anyhow!("give --family, or --coloring with --hypergraph")),
    };
    let (h, map) = extract_hypergraph(&family)?;
    let map: Vec<String> = map.iter().map(usize::to_string).collect();
    writeln!(out, "# map {}", map.join(" "))?;
    write!(out, "{}", h.serialize())?;
    Ok(())
}
