//! Hot-SVD, its truncated and sequentially truncated variants, their error
//! bounds and core-structure diagnostics.
//!
//! Every algorithm runs on the transform-domain slices of the input: the
//! mode-`n` factor is assembled from the left singular vectors of each
//! slice of the mode-`n` unfolding, and mode products are slice-wise.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, TubalError};
use crate::linalg::{fold_slice, map_indices, mode_product_slice, slice_svd_c64, unfold_slice, SliceSvd};
use crate::multiway::TubalTensor;
use crate::spectral::{independent_slices, map_slices, Conjugate, Spectrum};
use crate::transform::TransformSpec;
use crate::tsvd::{tubal_singular_norms, TsvdFactors};
use crate::tubal::TubalMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Truncation {
    Full,
    Ranks(Vec<usize>),
}

/// `A ~ S *_1 U_1 .. *_N U_N`.
///
/// `slice_norms_per_mode[n]` holds the full spectrum `sigma^(n)` of the
/// unfolding that produced `factors[n]`: `A_(n)` for Hot-SVD and
/// tr-Hot-SVD, the partially projected core for seq-tr-Hot-SVD.
#[derive(Clone, Debug)]
pub struct HotSvdFactors {
    pub core: TubalTensor,
    pub factors: Vec<TubalMatrix>,
    pub slice_norms_per_mode: Vec<Vec<f64>>,
    pub truncation: Truncation,
    pub processing_order: Option<Vec<usize>>,
}

impl HotSvdFactors {
    /// Retained size per mode.
    pub fn ranks(&self) -> Vec<usize> {
        self.factors.iter().map(TubalMatrix::cols).collect()
    }

    /// `S *_1 U_1 .. *_N U_N`.
    pub fn reconstruct(&self) -> Result<TubalTensor> {
        multi_mode_product(&self.core, &self.factors, false)
    }
}

fn check_input(a: &TubalTensor) -> Result<()> {
    if a.is_finite() {
        Ok(())
    } else {
        Err(TubalError::NonFinite)
    }
}

fn check_ranks(a: &TubalTensor, ranks: &[usize]) -> Result<()> {
    if ranks.len() != a.order() {
        return Err(TubalError::Dimension(format!("{} ranks for a tensor of order {}", ranks.len(), a.order())));
    }
    for (mode, (&rank, &size)) in ranks.iter().zip(a.dims()).enumerate() {
        if rank == 0 || rank > size {
            return Err(TubalError::RankOutOfRange { mode, rank, size });
        }
    }
    Ok(())
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(TubalError::InvalidPermutation(format!("{order:?} has length {}, expected {n}", order.len())));
    }
    for &m in order {
        if m >= n || std::mem::replace(&mut seen[m], true) {
            return Err(TubalError::InvalidPermutation(format!("{order:?} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

/// Per-slice SVDs of the mode-`n` unfolding of a spectrum, computed for the
/// independent slices only. The unfoldings are kept when the caller needs
/// the scaled right factors.
struct ModeSvd {
    svds: Vec<SliceSvd<Complex64>>,
    unfolded: Vec<DMatrix<Complex64>>,
    p: usize,
    conj_symmetric: bool,
}

impl ModeSvd {
    fn new(spec: &Spectrum, n: usize, keep_unfolded: bool) -> Self {
        let ks = independent_slices(spec.p, spec.conj_symmetric);
        let pairs = map_indices(&ks, |k| {
            let x = unfold_slice(spec.slice(k), &spec.dims, n);
            if keep_unfolded {
                (slice_svd_c64(x.clone(), false), Some(x))
            } else {
                (slice_svd_c64(x, false), None)
            }
        });
        let (svds, unfolded): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Self { svds, unfolded: unfolded.into_iter().flatten().collect(), p: spec.p, conj_symmetric: spec.conj_symmetric }
    }

    /// `Sigma[:r] * V[:, :r]^H` of independent slice `k`, evaluated as
    /// `U[:, :r]^H * X` (the two agree for any SVD `X = U Sigma V^H`).
    fn scaled_right_factor(&self, k: usize, r: usize) -> DMatrix<Complex64> {
        self.svds[k].u.columns(0, r).adjoint() * &self.unfolded[k]
    }

    /// The SVD for slice `k`, which is the conjugate of the stored one when
    /// `k` is a mirrored slice.
    fn source(&self, k: usize) -> (&SliceSvd<Complex64>, bool) {
        if self.conj_symmetric && k > self.p / 2 {
            (&self.svds[self.p - k], true)
        } else {
            (&self.svds[k], false)
        }
    }

    fn spectrum(&self, transform: &Arc<TransformSpec>) -> Vec<f64> {
        let sigmas: Vec<&[f64]> = (0..self.p).map(|k| self.source(k).0.sigma.as_slice()).collect();
        tubal_singular_norms(&sigmas, transform)
    }

    fn leading_columns(&self, r: usize) -> Vec<DMatrix<Complex64>> {
        (0..self.p)
            .map(|k| {
                let (svd, mirrored) = self.source(k);
                let u = svd.u.columns(0, r).into_owned();
                if mirrored {
                    u.conjugated()
                } else {
                    u
                }
            })
            .collect()
    }
}

fn factor_from_slices(
    slices: &[DMatrix<Complex64>],
    conj_symmetric: bool,
    transform: &Arc<TransformSpec>,
    real: bool,
) -> Result<TubalMatrix> {
    let (rows, cols) = slices[0].shape();
    let data = slices.iter().map(|m| m.as_slice().to_vec()).collect();
    TubalMatrix::from_spectrum(Spectrum::from_slices(vec![rows, cols], data, conj_symmetric), transform, real)
}

/// `X *_1 F_1 .. *_N F_N`, or with every `F_n^H` when `adjoint` is set.
pub(crate) fn multi_mode_product(x: &TubalTensor, factors: &[TubalMatrix], adjoint: bool) -> Result<TubalTensor> {
    if factors.len() != x.order() {
        return Err(TubalError::Dimension(format!("{} factors for a tensor of order {}", factors.len(), x.order())));
    }
    let t = x.transform();
    let mut new_dims = x.dims().to_vec();
    for (n, f) in factors.iter().enumerate() {
        if !crate::transform::same_transform(t, f.transform()) {
            return Err(TubalError::TransformMismatch);
        }
        let (out, inner) = if adjoint { (f.cols(), f.rows()) } else { (f.rows(), f.cols()) };
        if inner != x.dims()[n] {
            return Err(TubalError::Dimension(format!(
                "mode-{n} factor is {}x{}, tensor has size {}",
                f.rows(),
                f.cols(),
                x.dims()[n]
            )));
        }
        new_dims[n] = out;
    }
    let spec = x.spectrum();
    let fspecs: Vec<Spectrum> = factors.iter().map(TubalMatrix::spectrum).collect();
    let sym = spec.conj_symmetric && fspecs.iter().all(|s| s.conj_symmetric);
    let real = x.is_real() && factors.iter().all(TubalMatrix::is_real);
    let slices: Vec<Vec<Complex64>> = map_slices(x.p(), sym, |k| {
        let mut dims = spec.dims.clone();
        let mut cur = spec.slice(k).to_vec();
        for (n, f) in fspecs.iter().enumerate() {
            let m = f.slice_matrix(k);
            let m = if adjoint { m.adjoint() } else { m };
            cur = mode_product_slice(&cur, &dims, &m, n);
            dims[n] = m.nrows();
        }
        cur
    });
    TubalTensor::from_spectrum(Spectrum::from_slices(new_dims, slices, sym), t, real)
}

/// Full Hot-SVD: unitary `U_n` from the t-SVD of every unfolding and
/// `S = A *_1 U_1^H .. *_N U_N^H`.
pub fn hotsvd(a: &TubalTensor) -> Result<HotSvdFactors> {
    let mut f = tr_hotsvd(a, a.dims())?;
    f.truncation = Truncation::Full;
    Ok(f)
}

/// Truncated Hot-SVD: the leading `ranks[n]` left singular tubal vectors of
/// each `A_(n)`, and the projected core.
pub fn tr_hotsvd(a: &TubalTensor, ranks: &[usize]) -> Result<HotSvdFactors> {
    check_input(a)?;
    check_ranks(a, ranks)?;
    let t = a.transform();
    let real = a.is_real() && t.preserves_real();
    let spec = a.spectrum();
    let mut factor_slices = Vec::with_capacity(a.order());
    let mut spectra = Vec::with_capacity(a.order());
    for (n, &r) in ranks.iter().enumerate() {
        let svds = ModeSvd::new(&spec, n, false);
        spectra.push(svds.spectrum(t));
        factor_slices.push(svds.leading_columns(r));
    }
    let core_slices: Vec<Vec<Complex64>> = map_slices(a.p(), spec.conj_symmetric, |k| {
        let mut dims = spec.dims.clone();
        let mut cur = spec.slice(k).to_vec();
        for (n, fs) in factor_slices.iter().enumerate() {
            cur = mode_product_slice(&cur, &dims, &fs[k].adjoint(), n);
            dims[n] = fs[k].ncols();
        }
        cur
    });
    let core = TubalTensor::from_spectrum(Spectrum::from_slices(ranks.to_vec(), core_slices, spec.conj_symmetric), t, real)?;
    let factors = factor_slices
        .iter()
        .map(|fs| factor_from_slices(fs, spec.conj_symmetric, t, real))
        .collect::<Result<Vec<_>>>()?;
    Ok(HotSvdFactors {
        core,
        factors,
        slice_norms_per_mode: spectra,
        truncation: Truncation::Ranks(ranks.to_vec()),
        processing_order: None,
    })
}

/// Sequentially truncated Hot-SVD, processing modes in `order` (default
/// `0, 1, .., N-1`).
///
/// After each mode's t-SVD the core unfolding is replaced by the truncated
/// scaled right factor `Sigma_n[:r] * V_n[:, :r]^H`, so the core shrinks
/// as the sweep goes.
pub fn seq_tr_hotsvd(a: &TubalTensor, ranks: &[usize], order: Option<&[usize]>) -> Result<HotSvdFactors> {
    check_input(a)?;
    check_ranks(a, ranks)?;
    let order: Vec<usize> = match order {
        Some(o) => {
            check_permutation(o, a.order())?;
            o.to_vec()
        }
        None => (0..a.order()).collect(),
    };
    let t = a.transform();
    let real = a.is_real() && t.preserves_real();
    let mut spec = a.spectrum();
    let sym = spec.conj_symmetric;
    let mut factor_slices: Vec<Option<Vec<DMatrix<Complex64>>>> = vec![None; a.order()];
    let mut spectra = vec![Vec::new(); a.order()];

    for &n in &order {
        let r = ranks[n];
        let svds = ModeSvd::new(&spec, n, true);
        spectra[n] = svds.spectrum(t);
        let mut dims = spec.dims.clone();
        dims[n] = r;
        let slices: Vec<Vec<Complex64>> = map_slices(a.p(), sym, |k| {
            let mut out = vec![Complex64::default(); dims.iter().product()];
            fold_slice(&svds.scaled_right_factor(k, r), &dims, n, &mut out);
            out
        });
        factor_slices[n] = Some(svds.leading_columns(r));
        spec = Spectrum::from_slices(dims, slices, sym);
    }

    let core = TubalTensor::from_spectrum(spec, t, real)?;
    let factors = factor_slices
        .iter()
        .map(|fs| factor_from_slices(fs.as_ref().expect("every mode processed"), sym, t, real))
        .collect::<Result<Vec<_>>>()?;
    Ok(HotSvdFactors {
        core,
        factors,
        slice_norms_per_mode: spectra,
        truncation: Truncation::Ranks(ranks.to_vec()),
        processing_order: Some(order),
    })
}

/// Spectra `sigma^(n)` of every unfolding `A_(n)`.
pub fn mode_spectra(a: &TubalTensor) -> Result<Vec<Vec<f64>>> {
    check_input(a)?;
    let spec = a.spectrum();
    Ok((0..a.order()).map(|n| ModeSvd::new(&spec, n, false).spectrum(a.transform())).collect())
}

fn tail_bound(spectra: &[Vec<f64>], ranks: &[usize]) -> f64 {
    spectra
        .iter()
        .zip(ranks)
        .map(|(s, &r)| s.iter().skip(r).map(|x| x * x).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}

/// `sqrt(sum_n sum_{i > ranks[n]} (sigma_i^(n))^2)` over the stored spectra.
pub fn error_bound(f: &HotSvdFactors) -> Result<f64> {
    f.core.transform().require_scaled_unitary()?;
    Ok(tail_bound(&f.slice_norms_per_mode, &f.ranks()))
}

/// The tail bound on the spectra of the original unfoldings, valid for
/// both tr-Hot-SVD and seq-tr-Hot-SVD at `ranks`.
pub fn truncation_bound(a: &TubalTensor, ranks: &[usize]) -> Result<f64> {
    a.transform().require_scaled_unitary()?;
    check_ranks(a, ranks)?;
    Ok(tail_bound(&mode_spectra(a)?, ranks))
}

/// Largest off-diagonal tubal-scalar norm of `S_(n) * S_(n)^H` over all
/// modes.
pub fn check_all_orthogonality(f: &HotSvdFactors) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in 0..f.core.order() {
        let s = f.core.unfold(n)?;
        let g = s.tproduct(&s.hermitian_transpose())?;
        for i in 0..g.rows() {
            for j in (0..g.cols()).filter(|&j| j != i) {
                worst = worst.max(g.get(i, j).norm());
            }
        }
    }
    Ok(worst)
}

/// Core slice norms along every mode are nonincreasing (slack `1e-10`
/// relative to `||S||`) and equal the stored spectra (within `1e-8`
/// relative to `||S||`).
pub fn check_ordering(f: &HotSvdFactors) -> Result<bool> {
    f.core.transform().require_scaled_unitary()?;
    let scale = f.core.frobenius_norm().max(f64::MIN_POSITIVE);
    for n in 0..f.core.order() {
        let norms = f.core.mode_slice_norms(n)?;
        if norms.windows(2).any(|w| w[1] > w[0] + 1e-10 * scale) {
            return Ok(false);
        }
        let spectrum = &f.slice_norms_per_mode[n];
        for (alpha, &x) in norms.iter().enumerate() {
            let want = spectrum.get(alpha).copied().unwrap_or(0.0);
            if (x - want).abs() > 1e-8 * scale {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `A *_n (U * U^H)`.
pub fn project(a: &TubalTensor, u: &TubalMatrix, n: usize) -> Result<TubalTensor> {
    a.mode_n_product(&u.tproduct(&u.hermitian_transpose())?, n)
}

/// Norms of the mutually orthogonal terms
/// `A *_1 P_1 .. *_{n-1} P_{n-1} *_n (I - P_n)`, `P_k = U_k * U_k^H`,
/// whose squares sum to `||A - A *_1 P_1 .. *_N P_N||^2`.
pub fn error_decomposition(a: &TubalTensor, factors: &[TubalMatrix]) -> Result<Vec<f64>> {
    if factors.len() != a.order() {
        return Err(TubalError::Dimension(format!("{} factors for a tensor of order {}", factors.len(), a.order())));
    }
    let mut x = a.clone();
    let mut terms = Vec::with_capacity(factors.len());
    for (n, u) in factors.iter().enumerate() {
        let projected = project(&x, u, n)?;
        terms.push(x.sub(&projected)?.frobenius_norm());
        x = projected;
    }
    Ok(terms)
}

/// Thin t-SVD `A_(n) = U_n * Sigma_n * V_n^H` read off a full Hot-SVD.
///
/// `Sigma_n = diag(sigma_alpha * 1)` with `sigma_alpha = ||S_{i_n = alpha}||`
/// and `V_n^H = Sigma_n^{-1} * (S *_{k != n} U_k)_(n)`. Rows with
/// `sigma_alpha <= 1e-12 * sigma_1` are dropped. The rows of `V_n^H` are
/// orthogonal but, unless `A` is real and `L` the DFT, not normalized.
pub fn thin_tsvd_from_hotsvd(f: &HotSvdFactors, n: usize) -> Result<TsvdFactors> {
    f.core.check_mode(n)?;
    let t = f.core.transform().clone();
    let sigma = f.core.mode_slice_norms(n)?;
    let top = sigma.first().copied().unwrap_or(0.0);
    let r = sigma.iter().take_while(|&&s| top > 0.0 && s > 1e-12 * top).count();

    let mut partial = f.core.clone();
    for (k, u) in f.factors.iter().enumerate().filter(|&(k, _)| k != n) {
        partial = partial.mode_n_product(u, k)?;
    }
    let m = partial.unfold(n)?;
    let one = crate::tubal::TubalScalar::identity(&t);
    let vh = TubalMatrix::from_fn(r, m.cols(), &t, |i, j, k| m.value(i, j, k) / sigma[i]);
    let mut s = TubalMatrix::zeros(r, r, &t);
    for (i, &sig) in sigma.iter().take(r).enumerate() {
        s.set(i, i, &one.scale(Complex64::new(sig, 0.0)));
    }
    Ok(TsvdFactors {
        u: f.factors[n].columns(0, r),
        s,
        v: vh.hermitian_transpose(),
        slice_norms: sigma[..r].to_vec(),
    })
}
