//! `fraccut`: fractional distance, redundant-row improvement, LP decoding and
//! BSC simulation for binary parity-check matrices.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use fraccut::bscsim::sweep_with;
use fraccut::codecio::{read_matrix_file, write_cut_log, write_matrix_file, write_sim_csv, MatrixFormat};
use fraccut::cutplane::{greedy_improve_with, StopReason};
use fraccut::fracdist::fractional_distance_with;
use fraccut::rational::{display_exact, parse_rational};
use fraccut::{
    guaranteed_errors, BitMatrix, BitVector, DecodeStatus, GreedyConfig, LpDecoder, Method, Rational, SweepOptions,
};

#[derive(Parser)]
#[command(name = "fraccut", version, about)]
struct Cli {
    /// Worker threads for facet sweeps and simulation (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Alist,
    Dense,
}

impl From<FormatArg> for MatrixFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Alist => MatrixFormat::Alist,
            FormatArg::Dense => MatrixFormat::Dense,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Inactive facets over the fundamental cone.
    Cone,
    /// Every facet over the fundamental polytope.
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, rank and weight profile.
    Info {
        file: PathBuf,
        /// Input format; inferred from the extension by default.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Fractional distance, optionally with its minimum-weight vertices.
    Fracdist {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "cone")]
        method: MethodArg,
        /// Also print the minimum-weight vertices found.
        #[arg(long)]
        gamma: bool,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Append redundant rows that cut minimum-weight vertices.
    Improve {
        file: PathBuf,
        #[arg(long)]
        max_rows: usize,
        /// Stop once the fractional distance reaches this value (e.g. 3, 7/2).
        #[arg(long, value_parser = parse_target)]
        target_dfrac: Option<Rational>,
        /// Skip rows that would lower the fractional distance.
        #[arg(long)]
        only_improving: bool,
        /// Largest index set searched exhaustively when the echelon search fails.
        #[arg(long, default_value_t = 20)]
        fallback_limit: usize,
        #[arg(short, long)]
        output: PathBuf,
        /// Cut log, one JSON object per line.
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Output format; inferred from the output extension by default.
        #[arg(long, value_enum)]
        output_format: Option<FormatArg>,
    },
    /// LP-decode a received word on the binary symmetric channel.
    Decode {
        file: PathBuf,
        /// Received bits, e.g. 0100000.
        #[arg(long)]
        received: String,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Block error rate of LP decoding on the BSC, all-zero word sent.
    Simulate {
        file: PathBuf,
        /// Comma-separated crossover probabilities.
        #[arg(long, value_delimiter = ',', required = true)]
        crossover: Vec<f64>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// CSV destination; standard output by default.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

fn parse_target(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

fn load(path: &Path, format: Option<FormatArg>) -> Result<BitMatrix> {
    read_matrix_file(path, format.map(Into::into)).with_context(|| format!("reading {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn fmt_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn profile(weights: &[usize]) -> String {
    let mut counts = BTreeMap::new();
    for &w in weights {
        *counts.entry(w).or_insert(0usize) += 1;
    }
    counts
        .iter()
        .map(|(w, c)| format!("{w}x{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: Cli) -> Result<()> {
    let jobs = cli.jobs;
    let sweep = SweepOptions::default().with_jobs(jobs);
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Info { file, format } => {
            let h = load(&file, format)?;
            writeln!(out, "n = {}", h.n())?;
            writeln!(out, "m = {}", h.m())?;
            writeln!(out, "rank = {}", h.rank())?;
            writeln!(out, "dimension = {}", h.n() - h.rank())?;
            writeln!(out, "row weights: {}", profile(&h.row_weights()))?;
            writeln!(out, "column weights: {}", profile(&h.col_weights()))?;
        }
        Command::Fracdist {
            file,
            method,
            gamma,
            format,
        } => {
            let h = load(&file, format)?;
            let method = match method {
                MethodArg::Cone => Method::Relaxed,
                MethodArg::Full => Method::Full,
            };
            let r = fractional_distance_with(&h, method, sweep)?;
            writeln!(out, "d_frac = {}", display_exact(&r.d_frac))?;
            writeln!(out, "guaranteed correctable errors = {}", guaranteed_errors(&r.d_frac)?)?;
            writeln!(out, "facets = {} (pruned {})", r.lp_count(), r.pruned)?;
            if gamma {
                writeln!(out, "gamma ({} vertices):", r.gamma.len())?;
                for p in &r.gamma {
                    writeln!(out, "  {}", fmt_point(p))?;
                }
            }
        }
        Command::Improve {
            file,
            max_rows,
            target_dfrac,
            only_improving,
            fallback_limit,
            output,
            log,
            format,
            output_format,
        } => {
            let h = load(&file, format)?;
            let cfg = GreedyConfig {
                max_rows,
                target_dfrac,
                exhaustive_fallback_limit: fallback_limit,
                only_improving,
                sweep,
            };
            let res = greedy_improve_with(&h, &cfg, |r| {
                println!(
                    "row {}: {} -> {} ({})",
                    r.iteration,
                    r.d_frac_before,
                    r.d_frac_after,
                    r.redundant_row
                );
            })?;
            write_matrix_file(&output, &res.matrix, output_format.map(Into::into))
                .with_context(|| format!("writing {}", output.display()))?;
            if let Some(path) = log {
                let mut w = create(&path)?;
                write_cut_log(&res.log, &mut w)?;
                w.flush()?;
            }
            let stop = match res.stop {
                StopReason::NoCut => "no cutting row found",
                StopReason::MaxRows => "row budget reached",
                StopReason::TargetReached => "target reached",
            };
            writeln!(
                out,
                "d_frac = {} -> {} after {} rows ({stop})",
                display_exact(&res.initial.d_frac),
                display_exact(res.d_frac()),
                res.log.len()
            )?;
        }
        Command::Decode { file, received, format } => {
            let h = load(&file, format)?;
            let y: BitVector = received.parse().context("parsing --received")?;
            if y.len() != h.n() {
                bail!("--received has {} bits, the code has length {}", y.len(), h.n());
            }
            let r = LpDecoder::new(&h).decode(&y)?;
            match (r.status, r.codeword()) {
                (DecodeStatus::Codeword, Some(c)) => {
                    writeln!(out, "status = codeword")?;
                    writeln!(out, "output = {c}")?;
                    writeln!(out, "unique = {}", !r.tied)?;
                }
                _ => {
                    writeln!(out, "status = fractional")?;
                    writeln!(out, "output = {}", fmt_point(&r.output))?;
                }
            }
            writeln!(out, "objective = {}", r.objective)?;
        }
        Command::Simulate {
            file,
            crossover,
            trials,
            seed,
            output,
            format,
        } => {
            let h = load(&file, format)?;
            let points = sweep_with(&LpDecoder::new(&h), &crossover, trials, seed, jobs)?;
            match output {
                Some(path) => {
                    let mut w = create(&path)?;
                    write_sim_csv(&points, &mut w)?;
                    w.flush()?;
                }
                None => write_sim_csv(&points, &mut out)?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
