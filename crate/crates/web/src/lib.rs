//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON document; the plain Rust functions behind
//! them are tested natively.

use num_complex::Complex64;
use serde::Serialize;
use tubal::synth::{recovery_error, recovery_instance};
use tubal::{
    check_all_orthogonality, error_bound, hotsvd, seq_tr_hotsvd, tr_hotsvd, truncation_bound, TransformSpec,
    TubalScalar, TubalTensor,
};
use wasm_bindgen::prelude::*;

/// Inputs larger than this many entries are refused to keep the page responsive.
pub const MAX_ENTRIES: usize = 40_000;

#[derive(Serialize)]
pub struct HilbertView {
    pub slice_norms: Vec<Vec<f64>>,
    /// `(index (1-based), tubal values)` for every core entry.
    pub core: Vec<(Vec<usize>, Vec<f64>)>,
    pub all_orthogonality: f64,
}

/// Hot-SVD of the `n^3 x p` Hilbert tensor `1 / (i + j + k + l - 3)`.
pub fn hilbert(n: usize, p: usize) -> Result<HilbertView, String> {
    if n == 0 || p == 0 || n * n * n * p > MAX_ENTRIES {
        return Err(format!("size {n}^3 x {p} is out of range"));
    }
    let t = TransformSpec::dft(p).map_err(|e| e.to_string())?;
    let a = TubalTensor::from_fn(&[n, n, n], &t, |idx, l| {
        Complex64::new(1.0 / (idx.iter().sum::<usize>() + l + 1) as f64, 0.0)
    })
    .map_err(|e| e.to_string())?;
    let f = hotsvd(&a).map_err(|e| e.to_string())?;
    let slice_norms = (0..3).map(|m| f.core.mode_slice_norms(m)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut core = Vec::new();
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let values = (0..p).map(|l| f.core.value(&[i, j, k], l).re).collect();
                core.push((vec![i + 1, j + 1, k + 1], values));
            }
        }
    }
    let all_orthogonality = check_all_orthogonality(&f).map_err(|e| e.to_string())?;
    Ok(HilbertView { slice_norms, core, all_orthogonality })
}

#[derive(Serialize)]
pub struct SweepPoint {
    pub trunc: usize,
    pub tr_err: f64,
    pub seq_err: f64,
    pub tr_fit: f64,
    pub seq_fit: f64,
    pub bound: f64,
    pub seq_bound: f64,
}

/// Recovery and fit errors of tr- and seq-tr-Hot-SVD for every core size
/// `1..=min(dims)` on one noisy rank-`rank` instance; `dims` lists every
/// axis, tubal length last.
pub fn truncation_sweep(dims: &[usize], rank: usize, beta: f64, seed: u64) -> Result<Vec<SweepPoint>, String> {
    if dims.len() < 2 || dims.iter().product::<usize>() > MAX_ENTRIES || dims.contains(&0) {
        return Err(format!("dims {dims:?} are out of range"));
    }
    let p = dims[dims.len() - 1];
    let modes = &dims[..dims.len() - 1];
    let t = TransformSpec::dft(p).map_err(|e| e.to_string())?;
    let inst = recovery_instance(dims, rank, beta, &t, seed, 0).map_err(|e| e.to_string())?;
    let a = &inst.observed;
    let norm = a.frobenius_norm();
    let top = *modes.iter().min().expect("at least one mode");
    (1..=top)
        .map(|r| {
            let ranks = vec![r; modes.len()];
            let tr = tr_hotsvd(a, &ranks)?;
            let seq = seq_tr_hotsvd(a, &ranks, None)?;
            let (tr_hat, seq_hat) = (tr.reconstruct()?, seq.reconstruct()?);
            Ok(SweepPoint {
                trunc: r,
                tr_err: recovery_error(&inst.signal, &tr_hat)?,
                seq_err: recovery_error(&inst.signal, &seq_hat)?,
                tr_fit: a.sub(&tr_hat)?.frobenius_norm() / norm,
                seq_fit: a.sub(&seq_hat)?.frobenius_norm() / norm,
                bound: truncation_bound(a, &ranks)? / norm,
                seq_bound: error_bound(&seq)? / norm,
            })
        })
        .collect::<tubal::Result<Vec<_>>>()
        .map_err(|e| e.to_string())
}

#[derive(Serialize)]
pub struct ProductView {
    pub product: Vec<f64>,
    /// Transform-domain values as `(re, im)` pairs.
    pub a_hat: Vec<(f64, f64)>,
    pub b_hat: Vec<(f64, f64)>,
    pub product_hat: Vec<(f64, f64)>,
}

/// The t-product of two real tubal scalars with its Fourier-domain view.
pub fn tproduct(a: &[f64], b: &[f64]) -> Result<ProductView, String> {
    if a.is_empty() || a.len() != b.len() || a.len() > 4096 {
        return Err(format!("fibers must have equal length in 1..=4096, got {} and {}", a.len(), b.len()));
    }
    let t = TransformSpec::dft(a.len()).map_err(|e| e.to_string())?;
    let sa = TubalScalar::from_real(a, &t).map_err(|e| e.to_string())?;
    let sb = TubalScalar::from_real(b, &t).map_err(|e| e.to_string())?;
    let prod = sa.tproduct(&sb).map_err(|e| e.to_string())?;
    let hat = |s: &TubalScalar| -> Result<Vec<(f64, f64)>, String> {
        Ok(t.forward(s.values()).map_err(|e| e.to_string())?.into_iter().map(|z| (z.re, z.im)).collect())
    };
    Ok(ProductView {
        product: prod.values().iter().map(|z| z.re).collect(),
        a_hat: hat(&sa)?,
        b_hat: hat(&sb)?,
        product_hat: hat(&prod)?,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = hilbertDemo)]
pub fn hilbert_demo(n: usize, p: usize) -> Result<String, JsValue> {
    to_js(hilbert(n, p))
}

#[wasm_bindgen(js_name = truncationSweep)]
pub fn truncation_sweep_js(dims: Vec<usize>, rank: usize, beta: f64, seed: u64) -> Result<String, JsValue> {
    to_js(truncation_sweep(&dims, rank, beta, seed))
}

#[wasm_bindgen(js_name = tproduct)]
pub fn tproduct_js(a: Vec<f64>, b: Vec<f64>) -> Result<String, JsValue> {
    to_js(tproduct(&a, &b))
}
