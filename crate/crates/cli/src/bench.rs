//! Random-recovery benchmark: noisy low-rank tensors approximated by
//! tr-Hot-SVD and seq-tr-Hot-SVD (and optionally the HOSVD baselines).
//!
//! `err` is the recovery error `||A# - A^|| / ||A#||` against the clean
//! signal. `bound` is the truncation bound on the relative fit error
//! `||A - A^|| / ||A||`, the quantity the theory controls; the fit error is
//! checked against it on every row.

use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{ensure, Result};
use nalgebra::DMatrix;
use rayon::prelude::*;
use tubal::baselines::{seq_tr_hosvd, tr_hosvd, DenseTensor};
use tubal::synth::{recovery_error, recovery_instance};
use tubal::{error_bound, seq_tr_hotsvd, tr_hotsvd, truncation_bound, HotSvdFactors, TransformSpec, TubalTensor};

pub const CSV_HEADER: &str = "config,algo,trunc,err,bound,time_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algo {
    Tr,
    Seq,
    TrHosvd,
    SeqHosvd,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Tr => "tr",
            Algo::Seq => "seq",
            Algo::TrHosvd => "tr-hosvd",
            Algo::SeqHosvd => "seq-hosvd",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Every axis, tubal length last.
    pub dims: Vec<usize>,
    pub rank: usize,
    pub beta: f64,
    /// Core size per non-tubal mode.
    pub trunc: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub baselines: bool,
    pub parallel_trials: bool,
}

impl BenchConfig {
    /// Expands a single truncation size to every non-tubal mode.
    pub fn new(dims: Vec<usize>, rank: usize, beta: f64, trunc: &[usize], trials: usize, seed: u64) -> Result<Self> {
        ensure!(dims.len() >= 2, "--dims needs at least one mode and the tubal length");
        ensure!(dims.iter().all(|&d| d > 0), "--dims entries must be positive");
        ensure!(rank > 0, "--rank must be positive");
        ensure!(beta.is_finite() && beta >= 0.0, "--beta must be finite and nonnegative");
        ensure!(trials > 0, "--trials must be positive");
        let modes = dims.len() - 1;
        let trunc = match trunc {
            [r] => vec![*r; modes],
            list => list.to_vec(),
        };
        ensure!(trunc.len() == modes, "--trunc needs 1 or {modes} values, got {}", trunc.len());
        for (n, (&r, &d)) in trunc.iter().zip(&dims).enumerate() {
            ensure!(r >= 1 && r <= d, "--trunc {r} out of range for mode {} of size {d}", n + 1);
        }
        Ok(Self { dims, rank, beta, trunc, trials, seed, baselines: false, parallel_trials: false })
    }

    pub fn algos(&self) -> Vec<Algo> {
        let mut out = vec![Algo::Tr, Algo::Seq];
        if self.baselines {
            out.extend([Algo::TrHosvd, Algo::SeqHosvd]);
        }
        out
    }

    fn label(&self, trial: &str) -> String {
        let dims = self.dims.iter().map(usize::to_string).collect::<Vec<_>>().join("x");
        format!("dims={dims};R={};beta={};seed={};trial={trial}", self.rank, self.beta, self.seed)
    }

    fn trunc_label(&self) -> String {
        let t = &self.trunc;
        if t.iter().all(|&r| r == t[0]) {
            t[0].to_string()
        } else {
            t.iter().map(usize::to_string).collect::<Vec<_>>().join("x")
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub trial: usize,
    pub algo: Algo,
    pub err: f64,
    pub fit_err: f64,
    pub bound: f64,
    pub time_ms: f64,
}

#[derive(Clone, Debug)]
pub struct AlgoMean {
    pub algo: Algo,
    pub err: f64,
    pub bound: f64,
    pub time_ms: f64,
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Means in trial order, so sequential and parallel runs agree exactly.
    pub fn means(&self) -> Vec<AlgoMean> {
        let t = self.config.trials as f64;
        self.config
            .algos()
            .into_iter()
            .map(|algo| {
                let rows = self.rows.iter().filter(|r| r.algo == algo);
                let (e, b, s) = rows.fold((0.0, 0.0, 0.0), |(e, b, s), r| (e + r.err, b + r.bound, s + r.time_ms));
                AlgoMean { algo, err: e / t, bound: b / t, time_ms: s / t }
            })
            .collect()
    }

    pub fn mean(&self, algo: Algo) -> Option<AlgoMean> {
        self.means().into_iter().find(|m| m.algo == algo)
    }

    /// Rows whose fit error exceeds its bound (slack `1e-10`).
    pub fn bound_violations(&self) -> Vec<&BenchRow> {
        self.rows.iter().filter(|r| r.fit_err > r.bound + 1e-10).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        let trunc = self.config.trunc_label();
        for r in &self.rows {
            let label = self.config.label(&r.trial.to_string());
            let _ = writeln!(out, "{label},{},{trunc},{},{},{}", r.algo.name(), sig6(r.err), sig6(r.bound), sig6(r.time_ms));
        }
        for m in self.means() {
            let label = self.config.label("mean");
            let _ = writeln!(out, "{label},{},{trunc},{},{},{}", m.algo.name(), sig6(m.err), sig6(m.bound), sig6(m.time_ms));
        }
        out
    }
}

/// `%g`-style formatting with 6 significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci.split_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    let s = if (-5..6).contains(&exp) { format!("{:.*}", (5 - exp) as usize, x) } else { sci };
    trim_zeros(&s)
}

fn trim_zeros(s: &str) -> String {
    let (mantissa, exp) = match s.split_once('e') {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let mantissa = if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
    match exp {
        Some(e) => format!("{mantissa}e{e}"),
        None => mantissa.to_string(),
    }
}

fn relative_distance(a: &TubalTensor, b: &TubalTensor) -> Result<f64> {
    Ok(a.sub(b)?.frobenius_norm() / a.frobenius_norm())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

/// Wall time (ms) of tr-Hot-SVD and seq-tr-Hot-SVD on one input.
pub fn time_pair(a: &TubalTensor, ranks: &[usize]) -> Result<(f64, f64)> {
    let (tr, tr_ms) = timed(|| tr_hotsvd(a, ranks));
    tr?;
    let (seq, seq_ms) = timed(|| seq_tr_hotsvd(a, ranks, None));
    seq?;
    Ok((tr_ms, seq_ms))
}

fn hot_row(trial: usize, algo: Algo, f: HotSvdFactors, ms: f64, signal: &TubalTensor, observed: &TubalTensor, bound: f64) -> Result<BenchRow> {
    let approx = f.reconstruct()?;
    Ok(BenchRow {
        trial,
        algo,
        err: recovery_error(signal, &approx)?,
        fit_err: relative_distance(observed, &approx)?,
        bound,
        time_ms: ms,
    })
}

fn run_trial(cfg: &BenchConfig, trial: usize) -> Result<Vec<BenchRow>> {
    let p = *cfg.dims.last().expect("validated");
    let t = TransformSpec::dft(p)?;
    let inst = recovery_instance(&cfg.dims, cfg.rank, cfg.beta, &t, cfg.seed, trial as u64)?;
    let (signal, observed) = (&inst.signal, &inst.observed);
    let scale = observed.frobenius_norm();
    let ranks = &cfg.trunc;
    let mut rows = Vec::new();

    let (tr, tr_ms) = timed(|| tr_hotsvd(observed, ranks));
    let tr = tr?;
    let bound = error_bound(&tr)? / scale;
    rows.push(hot_row(trial, Algo::Tr, tr, tr_ms, signal, observed, bound)?);

    let (seq, seq_ms) = timed(|| seq_tr_hotsvd(observed, ranks, None));
    let bound = truncation_bound(observed, ranks)? / scale;
    rows.push(hot_row(trial, Algo::Seq, seq?, seq_ms, signal, observed, bound)?);

    if cfg.baselines {
        // the tubal axis is never truncated
        let dense = DenseTensor::from_tubal(observed)?;
        let clean = DenseTensor::from_tubal(signal)?;
        let mut dense_ranks = ranks.clone();
        dense_ranks.push(p);
        for algo in [Algo::TrHosvd, Algo::SeqHosvd] {
            let (f, ms) = timed(|| match algo {
                Algo::TrHosvd => tr_hosvd(&dense, &dense_ranks),
                _ => seq_tr_hosvd(&dense, &dense_ranks, None),
            });
            let f = f?;
            let approx = f.reconstruct()?;
            // the bound on the original unfoldings covers both variants
            let bound = tr_hosvd_bound(&dense, &dense_ranks)?;
            rows.push(BenchRow {
                trial,
                algo,
                err: clean.distance(&approx) / clean.norm(),
                fit_err: dense.distance(&approx) / dense.norm(),
                bound: bound / dense.norm(),
                time_ms: ms,
            });
        }
    }
    Ok(rows)
}

fn tr_hosvd_bound(x: &DenseTensor, ranks: &[usize]) -> Result<f64> {
    let tails: f64 = (0..x.order())
        .map(|n| {
            let mut s: Vec<f64> = DMatrix::singular_values(&x.unfold(n)).iter().copied().collect();
            s.sort_by(|a, b| b.total_cmp(a));
            s.iter().skip(ranks[n]).map(|v| v * v).sum::<f64>()
        })
        .sum();
    Ok(tails.sqrt())
}

pub fn run(cfg: &BenchConfig) -> Result<BenchReport> {
    let per_trial: Vec<Result<Vec<BenchRow>>> = if cfg.parallel_trials {
        (0..cfg.trials).into_par_iter().map(|k| run_trial(cfg, k)).collect()
    } else {
        (0..cfg.trials).map(|k| run_trial(cfg, k)).collect()
    };
    let mut rows = Vec::new();
    for r in per_trial {
        rows.extend(r?);
    }
    Ok(BenchReport { config: cfg.clone(), rows })
}
