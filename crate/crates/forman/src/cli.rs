use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use forman_core::gradient::count_simplices;
use forman_core::hasse::DEFAULT_ORACLE_GUARD;
use forman_core::IaStarComplex;

use crate::error::{AppError, AppResult};
use crate::io::{format_top, write_file};
use crate::oracle::run_oracle;
use crate::pipeline::{format_timings, load_complex, run_pipeline, InputKind, InputSpec};

#[derive(Debug, Parser)]
#[command(
    name = "forman",
    version,
    about = "Forman gradients and Morse complexes of simplicial complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a complex and write it as a canonical .top file
    Build {
        #[command(flatten)]
        input: InputArgs,
        /// Output .top file
        #[arg(long)]
        out: PathBuf,
        /// Count all simplices only when at most this many could exist
        #[arg(long, default_value_t = DEFAULT_ORACLE_GUARD)]
        oracle_max: usize,
    },
    /// Compute the gradient, Morse complex and homology
    Pipeline {
        #[command(flatten)]
        input: InputArgs,
        /// Output directory for gradient.txt, morse.txt, morse.dot and report.txt
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Skip gradient validation
        #[arg(long)]
        no_validate: bool,
    },
    /// Cross-check removal strategies and the engine on the explicit Hasse diagram
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Randomized runs per check
        #[arg(long, default_value_t = 100)]
        runs: usize,
        /// Largest number of simplices the oracle may materialize
        #[arg(long, default_value_t = DEFAULT_ORACLE_GUARD)]
        oracle_max: usize,
        /// Write counterexample sequences here on failure
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Input format; inferred from the extension (.top, .pts, .edg) when absent
    #[arg(long, value_enum)]
    pub kind: Option<InputKind>,
    /// Neighborhood radius for point inputs
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Filtration file with one value per vertex
    #[arg(long)]
    pub f0: Option<PathBuf>,
}

impl InputArgs {
    fn spec(&self) -> InputSpec {
        InputSpec {
            path: self.input.clone(),
            kind: self.kind,
            epsilon: self.epsilon,
            f0: self.f0.clone(),
        }
    }
}

/// Runs a parsed command, writing human-readable output to `stdout`.
/// Returns the process exit code.
pub fn run(cli: Cli, stdout: &mut dyn std::io::Write) -> AppResult<u8> {
    match cli.command {
        Command::Build {
            input,
            out,
            oracle_max,
        } => {
            let (complex, stats) = load_complex(&input.spec())?;
            write_file(&out, &format_top(&complex))?;
            let mut text = format!(
                "vertices: {}\ntop simplices per dimension: {:?}\nadjacency arcs: {}\n",
                complex.vertex_count(),
                complex.tops_per_dim(),
                complex.adjacency_arc_count()
            );
            text.push_str(&format!(
                "dropped candidates: {} non-maximal, {} duplicate; isolated vertices: {}\n",
                stats.dropped_non_maximal, stats.dropped_duplicates, stats.isolated_vertices
            ));
            if simplex_bound(&complex) <= oracle_max as f64 {
                text.push_str(&format!(
                    "total simplices: {}\n",
                    count_simplices(&complex).iter().sum::<u64>()
                ));
            }
            emit(stdout, &text)?;
            Ok(0)
        }
        Command::Pipeline {
            input,
            out,
            threads,
            no_validate,
        } => {
            let (complex, _) = load_complex(&input.spec())?;
            let result = run_pipeline(&complex, threads, !no_validate)?;
            std::fs::create_dir_all(&out).map_err(|source| AppError::Io {
                path: out.clone(),
                source,
            })?;
            write_file(&out.join("gradient.txt"), &result.gradient_dump)?;
            write_file(&out.join("morse.txt"), &result.morse_file)?;
            write_file(&out.join("morse.dot"), &result.morse_dot)?;
            write_file(&out.join("report.txt"), &result.report)?;
            emit(stdout, &result.report)?;
            emit(stdout, &format_timings(&result.timings))?;
            Ok(0)
        }
        Command::Oracle {
            input,
            seed,
            runs,
            oracle_max,
            out,
        } => {
            let (complex, _) = load_complex(&input.spec())?;
            let report = run_oracle(&complex, seed, runs, oracle_max)?;
            emit(stdout, &report.render())?;
            if report.passed() {
                return Ok(0);
            }
            let dumps = report.counterexamples();
            match out {
                Some(path) => write_file(&path, &dumps)?,
                None => emit(stdout, &dumps)?,
            }
            Ok(1)
        }
    }
}

/// Upper bound on the simplex count: every top contributes at most `2^n - 1`.
fn simplex_bound(complex: &IaStarComplex) -> f64 {
    complex
        .tops()
        .iter()
        .map(|t| (t.vertices().len() as f64).exp2() - 1.0)
        .sum()
}

fn emit(stdout: &mut dyn std::io::Write, text: &str) -> AppResult<()> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|source| AppError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

/// Entry point shared by the binary and the tests.
pub fn main_with_args<I, T>(
    args: I,
    stdout: &mut dyn std::io::Write,
    stderr: &mut dyn std::io::Write,
) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
