//! t-SVD of tubal matrices, its truncation, and the two rank notions.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, TubalError};
use crate::linalg::{complete_basis, numerical_rank, slice_svd_c64, SliceSvd};
use crate::spectral::{map_slices, norm_from_spectrum, Spectrum};
use crate::transform::TransformSpec;
use crate::tubal::TubalMatrix;

/// `A = U * S * V^H` with unitary `U` (`I x I`), `V` (`J x J`) and
/// f-diagonal `S`.
///
/// `slice_norms[i]` is the Frobenius norm of the tubal scalar `S(i, i)`.
#[derive(Clone, Debug)]
pub struct TsvdFactors {
    pub u: TubalMatrix,
    pub s: TubalMatrix,
    pub v: TubalMatrix,
    pub slice_norms: Vec<f64>,
}

/// Per-slice SVDs of a transform-domain buffer viewed as `rows x cols`
/// slices.
pub(crate) fn slice_svds(spec: &Spectrum, rows: usize, cols: usize, want_v: bool) -> Vec<SliceSvd<Complex64>> {
    let m = rows * cols;
    map_slices(spec.p, spec.conj_symmetric, |k| {
        let slice = DMatrix::from_column_slice(rows, cols, &spec.data[k * m..(k + 1) * m]);
        slice_svd_c64(slice, want_v)
    })
}

/// `sigma_i = ||L^{-1}(sigma_i^(1), .., sigma_i^(p))||` for each `i`, from
/// the singular values of every slice.
pub(crate) fn tubal_singular_norms(sigmas: &[&[f64]], transform: &Arc<TransformSpec>) -> Vec<f64> {
    let count = sigmas.first().map_or(0, |s| s.len());
    (0..count)
        .map(|i| {
            let fiber: Vec<Complex64> = sigmas.iter().map(|s| Complex64::new(s[i], 0.0)).collect();
            norm_from_spectrum(&fiber, transform)
        })
        .collect()
}

pub(crate) fn sigmas(svds: &[SliceSvd<Complex64>]) -> Vec<&[f64]> {
    svds.iter().map(|s| s.sigma.as_slice()).collect()
}

pub fn tsvd(a: &TubalMatrix) -> Result<TsvdFactors> {
    if !a.is_finite() {
        return Err(TubalError::NonFinite);
    }
    let t = a.transform();
    let (rows, cols) = a.shape();
    let spec = a.spectrum();
    let real = a.is_real() && t.preserves_real();
    let svds = slice_svds(&spec, rows, cols, true);

    let mut u_slices = Vec::with_capacity(svds.len());
    let mut s_slices = Vec::with_capacity(svds.len());
    let mut v_slices = Vec::with_capacity(svds.len());
    for svd in &svds {
        u_slices.push(svd.u.as_slice().to_vec());
        let mut s = DMatrix::<Complex64>::zeros(rows, cols);
        for (i, &sigma) in svd.sigma.iter().enumerate() {
            s[(i, i)] = Complex64::new(sigma, 0.0);
        }
        s_slices.push(s.as_slice().to_vec());
        let v = complete_basis(svd.v.clone().expect("requested V"));
        v_slices.push(v.as_slice().to_vec());
    }
    let sym = spec.conj_symmetric;
    let u = TubalMatrix::from_spectrum(Spectrum::from_slices(vec![rows, rows], u_slices, sym), t, real)?;
    let s = TubalMatrix::from_spectrum(Spectrum::from_slices(vec![rows, cols], s_slices, sym), t, real)?;
    let v = TubalMatrix::from_spectrum(Spectrum::from_slices(vec![cols, cols], v_slices, sym), t, real)?;
    Ok(TsvdFactors { u, s, v, slice_norms: tubal_singular_norms(&sigmas(&svds), t) })
}

/// Number of diagonal tubal scalars with `||S(i, i)|| > tol * sigma_1`.
pub fn t_rank(f: &TsvdFactors, tol: f64) -> usize {
    match f.slice_norms.first() {
        Some(&top) if top > 0.0 => f.slice_norms.iter().filter(|&&s| s > tol * top).count(),
        _ => 0,
    }
}

/// Numerical rank of every frontal slice of `L(A)`.
pub fn multi_rank(a: &TubalMatrix) -> Vec<usize> {
    let (rows, cols) = a.shape();
    let spec = a.spectrum();
    (0..a.p())
        .map(|k| {
            let sigma: Vec<f64> = spec.slice_matrix(k).singular_values().iter().copied().collect();
            numerical_rank(&sigma, rows, cols)
        })
        .collect()
}

/// `sum_{i < k} U(:, i) * S(i, i) * V(:, i)^H`, the best t-rank-`k`
/// approximation when `L = cW`.
pub fn truncate_tsvd(f: &TsvdFactors, k: usize) -> Result<TubalMatrix> {
    f.u.transform().require_scaled_unitary()?;
    let (rows, cols) = f.s.shape();
    let max = rows.min(cols);
    if k == 0 || k > max {
        return Err(TubalError::Dimension(format!("truncation rank {k} outside 1..={max}")));
    }
    let us = f.u.columns(0, k).tproduct(&f.s.top_left(k, k))?;
    us.tproduct(&f.v.columns(0, k).hermitian_transpose())
}

/// `sqrt(sum_{i >= k} sigma_i^2)`, the truncation error predicted by the
/// slice norms.
pub fn tail_norm(f: &TsvdFactors, k: usize) -> f64 {
    f.slice_norms.iter().skip(k).map(|s| s * s).sum::<f64>().sqrt()
}
