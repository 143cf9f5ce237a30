use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use tubal_cli::bench::{self, BenchConfig};
use tubal_cli::compress::{self, CompressAlgo};
use tubal_cli::{hilbert, init_thread_pool, selftest};

/// Tubal-tensor Hot-SVD toolkit. `TUBAL_THREADS` caps the worker pool.
#[derive(Parser)]
#[command(name = "tubal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hot-SVD of the 2x2x2x2 Hilbert tensor against reference values.
    HilbertDemo,
    /// Random low-rank recovery with tr- and seq-tr-Hot-SVD; CSV output.
    BenchRandom {
        /// Every axis, tubal length last, e.g. 10,10,10,10.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        beta: f64,
        /// Core size for every non-tubal mode, or one value per mode.
        #[arg(long, value_delimiter = ',', required = true)]
        trunc: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also run tr-HOSVD and seq-tr-HOSVD (tubal axis untruncated).
        #[arg(long)]
        baselines: bool,
        /// Run trials concurrently; means are unchanged.
        #[arg(long)]
        parallel_trials: bool,
    },
    /// Compress a TTEN file into core and factor files plus a manifest.
    Compress {
        input: PathBuf,
        /// One rank per non-tubal mode.
        #[arg(long, value_delimiter = ',', required = true)]
        trunc: Vec<usize>,
        #[arg(long, value_enum, default_value_t = CompressAlgo::Seq)]
        algo: CompressAlgo,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild a tensor from a compressed directory.
    Decompress {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Original tensor to measure the error against; defaults to the
        /// manifest's source path.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Run the invariant suite; exit status 0 iff every check passes.
    Selftest {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    init_thread_pool()?;
    match cli.command {
        Command::HilbertDemo => {
            let report = hilbert::run()?;
            print!("{}", report.render());
            Ok(if report.passes() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::BenchRandom { dims, rank, beta, trunc, trials, seed, out, baselines, parallel_trials } => {
            let mut cfg = BenchConfig::new(dims, rank, beta, &trunc, trials, seed)?;
            cfg.baselines = baselines;
            cfg.parallel_trials = parallel_trials;
            let report = bench::run(&cfg)?;
            let csv = report.to_csv();
            match &out {
                Some(path) => fs::write(path, &csv)?,
                None => print!("{csv}"),
            }
            for m in report.means() {
                eprintln!(
                    "{:>9}: mean err {} bound {} time {} ms",
                    m.algo.name(),
                    bench::sig6(m.err),
                    bench::sig6(m.bound),
                    bench::sig6(m.time_ms)
                );
            }
            let violations = report.bound_violations();
            if !violations.is_empty() {
                eprintln!("{} rows exceed their fit-error bound", violations.len());
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compress { input, trunc, algo, out } => {
            let m = compress::compress(&input, &trunc, algo, &out)?;
            println!(
                "compressed {} -> {} ({} values, ratio {:.3}): err {:.6e}, bound {:.6e}",
                input.display(),
                out.display(),
                m.stored_values,
                m.compression_ratio,
                m.err,
                m.bound
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompress { dir, out, reference } => {
            let d = compress::decompress(&dir, &out, reference.as_deref())?;
            println!("wrote {} (dims {:?})", out.display(), d.manifest.dims);
            match d.err {
                Some(err) => {
                    let gap = (err - d.manifest.err).abs();
                    println!("err {err:.6e} (manifest {:.6e}, difference {gap:.1e})", d.manifest.err);
                    Ok(if gap <= 1e-12 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
                }
                None => {
                    println!("manifest err {:.6e}; original not available for comparison", d.manifest.err);
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Selftest { seed, inject_fault } => {
            let results = selftest::run(seed, inject_fault.as_deref())?;
            for r in &results {
                println!("{}", r.line());
            }
            let failed = results.iter().filter(|r| !r.passed()).count();
            println!("{} checks, {} passed, {failed} failed", results.len(), results.len() - failed);
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
