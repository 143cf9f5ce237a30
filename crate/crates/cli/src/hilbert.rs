//! Hot-SVD of the 2x2x2x2 Hilbert tensor `1 / (i + j + k + l - 3)`.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use anyhow::Result;
use num_complex::Complex64;
use tubal::{check_all_orthogonality, check_ordering, hotsvd, HotSvdFactors, TransformSpec, TubalTensor};

/// Per-mode core slice norms of the reference decomposition.
pub const REFERENCE_NORMS: [f64; 2] = [1.7166, 0.1002];
/// `|S(1,1,1)|` and `|S(2,2,2)|` entry-wise along the tubal axis.
pub const REFERENCE_FIRST: [f64; 2] = [1.4734, 0.8780];
pub const REFERENCE_LAST: [f64; 2] = [0.0102, 0.0107];
pub const TOLERANCE: f64 = 1e-3;

pub struct HilbertReport {
    pub factors: HotSvdFactors,
    pub slice_norms: Vec<Vec<f64>>,
    pub all_orthogonality: f64,
    pub ordered: bool,
    pub elapsed: Duration,
}

impl HilbertReport {
    /// `|S(i,i,i)|` along the tubal axis.
    pub fn diagonal_magnitudes(&self, i: usize) -> Vec<f64> {
        (0..self.factors.core.p()).map(|k| self.factors.core.value(&[i, i, i], k).norm()).collect()
    }

    /// Largest deviation of the slice norms from [`REFERENCE_NORMS`].
    pub fn norm_deviation(&self) -> f64 {
        deviation(&self.slice_norms.concat(), &REFERENCE_NORMS.repeat(self.slice_norms.len()))
    }

    /// Largest deviation of the two diagonal core scalars from the reference.
    pub fn scalar_deviation(&self) -> f64 {
        deviation(&self.diagonal_magnitudes(0), &REFERENCE_FIRST).max(deviation(&self.diagonal_magnitudes(1), &REFERENCE_LAST))
    }

    pub fn passes(&self) -> bool {
        self.norm_deviation() <= TOLERANCE && self.scalar_deviation() <= TOLERANCE
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let core = &self.factors.core;
        let _ = writeln!(out, "Hilbert tensor 2x2x2x2 (tubal axis last), Hot-SVD under the DFT");
        for (n, norms) in self.slice_norms.iter().enumerate() {
            let _ = writeln!(out, "mode {} core slice norms: {}", n + 1, join(norms));
        }
        let _ = writeln!(out, "core tubal scalars S(i,j,k):");
        for idx in [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]] {
            let v: Vec<f64> = (0..core.p()).map(|k| core.value(&idx, k).re).collect();
            let _ = writeln!(out, "  S({},{},{}) = ({})", idx[0] + 1, idx[1] + 1, idx[2] + 1, join(&v));
        }
        let _ = writeln!(out, "all-orthogonality residual: {:.3e}", self.all_orthogonality);
        let _ = writeln!(out, "ordering: {}", if self.ordered { "nonincreasing" } else { "VIOLATED" });
        let _ = writeln!(
            out,
            "deviation from reference: norms {:.2e}, scalars {:.2e} (tolerance {TOLERANCE:.0e})",
            self.norm_deviation(),
            self.scalar_deviation()
        );
        let _ = writeln!(out, "elapsed: {:.3} ms", self.elapsed.as_secs_f64() * 1e3);
        out
    }
}

fn deviation(got: &[f64], want: &[f64]) -> f64 {
    got.iter().zip(want).map(|(g, w)| (g.abs() - w).abs()).fold(0.0, f64::max)
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ")
}

pub fn hilbert_tensor() -> Result<TubalTensor> {
    let t = TransformSpec::dft(2)?;
    // 0-based indices: 1 / (i + j + k + l + 1)
    Ok(TubalTensor::from_fn(&[2, 2, 2], &t, |idx, l| {
        Complex64::new(1.0 / (idx.iter().sum::<usize>() + l + 1) as f64, 0.0)
    })?)
}

pub fn run() -> Result<HilbertReport> {
    let start = Instant::now();
    let a = hilbert_tensor()?;
    let factors = hotsvd(&a)?;
    let slice_norms = (0..a.order()).map(|n| factors.core.mode_slice_norms(n)).collect::<tubal::Result<Vec<_>>>()?;
    let all_orthogonality = check_all_orthogonality(&factors)?;
    let ordered = check_ordering(&factors)?;
    Ok(HilbertReport { factors, slice_norms, all_orthogonality, ordered, elapsed: start.elapsed() })
}
