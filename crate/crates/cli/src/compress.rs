//! Truncated Hot-SVD compression to a directory of `TTEN` files.
//!
//! A compressed directory holds `core.tten`, `factor_<n>.tten` for every
//! mode (1-based) and `manifest.json`. Errors and bounds in the manifest
//! are relative to `||A||`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use tubal::{error_bound, seq_tr_hotsvd, tr_hotsvd, truncation_bound, TransformSpec, TubalMatrix, TubalTensor};

use crate::tensor_file::TensorFile;

pub const MANIFEST: &str = "manifest.json";
pub const CORE: &str = "core.tten";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CompressAlgo {
    Tr,
    Seq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub algo: CompressAlgo,
    pub transform: String,
    /// Every axis of the input, tubal length last.
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub core: String,
    pub factors: Vec<String>,
    pub source: Option<PathBuf>,
    pub norm: f64,
    /// `||A - A^|| / ||A||`.
    pub err: f64,
    /// Truncation bound on the spectra of the original unfoldings.
    pub bound: f64,
    /// Bound on the sequential spectra; equals `err` for seq.
    pub algorithm_bound: f64,
    pub stored_values: usize,
    pub compression_ratio: f64,
}

fn factor_name(n: usize) -> String {
    format!("factor_{}.tten", n + 1)
}

pub fn compress(input: &Path, ranks: &[usize], algo: CompressAlgo, out: &Path) -> Result<Manifest> {
    let file = TensorFile::load(input)?;
    let t = TransformSpec::dft(file.p())?;
    let a = file.to_tensor(&t)?;
    ensure!(ranks.len() == a.order(), "--trunc needs {} ranks (one per non-tubal mode), got {}", a.order(), ranks.len());
    let f = match algo {
        CompressAlgo::Tr => tr_hotsvd(&a, ranks)?,
        CompressAlgo::Seq => seq_tr_hotsvd(&a, ranks, None)?,
    };
    let approx = f.reconstruct()?;
    let norm = a.frobenius_norm();
    let scale = if norm > 0.0 { norm } else { 1.0 };
    let err = a.sub(&approx)?.frobenius_norm() / scale;
    let bound = truncation_bound(&a, ranks)? / scale;
    let algorithm_bound = error_bound(&f)? / scale;

    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    TensorFile::from_tensor(&f.core).save(&out.join(CORE))?;
    let mut factors = Vec::new();
    for (n, u) in f.factors.iter().enumerate() {
        TensorFile::from_matrix(u).save(&out.join(factor_name(n)))?;
        factors.push(factor_name(n));
    }
    let stored_values = f.core.data().len() + f.factors.iter().map(|u| u.data().len()).sum::<usize>();
    let manifest = Manifest {
        format_version: 1,
        algo,
        transform: "dft".into(),
        dims: file.dims.clone(),
        ranks: ranks.to_vec(),
        core: CORE.into(),
        factors,
        source: input.canonicalize().ok(),
        norm,
        err,
        bound,
        algorithm_bound,
        stored_values,
        compression_ratio: a.data().len() as f64 / stored_values as f64,
    };
    fs::write(out.join(MANIFEST), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub struct Decompressed {
    pub manifest: Manifest,
    pub tensor: TubalTensor,
    /// `||A - A^|| / ||A||` when the original was available.
    pub err: Option<f64>,
}

/// Rebuilds `S *_1 U_1 .. *_N U_N`; compares against `reference`, or the
/// manifest's source when it still exists.
pub fn decompress(dir: &Path, out: &Path, reference: Option<&Path>) -> Result<Decompressed> {
    let manifest = read_manifest(dir)?;
    if manifest.transform != "dft" {
        bail!("unsupported transform {:?}", manifest.transform);
    }
    let p = *manifest.dims.last().context("manifest dims are empty")?;
    let t = TransformSpec::dft(p)?;
    let mut x = TensorFile::load(&dir.join(&manifest.core))?.to_tensor(&t)?;
    ensure!(x.dims() == manifest.ranks, "core dims {:?} disagree with manifest ranks {:?}", x.dims(), manifest.ranks);
    for (n, name) in manifest.factors.iter().enumerate() {
        let u: TubalMatrix = TensorFile::load(&dir.join(name))?.to_matrix(&t)?;
        x = x.mode_n_product(&u, n)?;
    }
    ensure!(
        x.dims() == &manifest.dims[..manifest.dims.len() - 1],
        "reconstruction dims {:?} disagree with manifest dims {:?}",
        x.dims(),
        manifest.dims
    );
    TensorFile::from_tensor(&x).save(out)?;
    let reference = reference.map(Path::to_path_buf).or_else(|| manifest.source.clone().filter(|p| p.exists()));
    let err = match reference {
        Some(path) => {
            let a = TensorFile::load(&path)?.to_tensor(&t)?;
            let norm = a.frobenius_norm();
            Some(a.sub(&x)?.frobenius_norm() / if norm > 0.0 { norm } else { 1.0 })
        }
        None => None,
    };
    Ok(Decompressed { manifest, tensor: x, err })
}
