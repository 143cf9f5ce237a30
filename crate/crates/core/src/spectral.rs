//! Transform-domain views of tubal arrays.
//!
//! Under the DFT a real tubal array has conjugate-symmetric frontal slices
//! (`slice[p - k] = conj(slice[k])`). Per-slice work is then done only for
//! `k <= p / 2` and mirrored, so factors of real inputs come back exactly
//! real even when singular values repeat.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, TubalError};
use crate::linalg::{map_indices, SliceSvd};
use crate::transform::{Direction, TransformSpec};

/// Relative tolerance on the imaginary part of a result expected to be real.
pub const IMAG_RESIDUAL_TOL: f64 = 1e-10;

pub(crate) trait Conjugate {
    fn conjugated(&self) -> Self;
}

impl Conjugate for DMatrix<Complex64> {
    fn conjugated(&self) -> Self {
        self.map(|z| z.conj())
    }
}

impl Conjugate for Vec<Complex64> {
    fn conjugated(&self) -> Self {
        self.iter().map(|z| z.conj()).collect()
    }
}

impl Conjugate for Vec<f64> {
    fn conjugated(&self) -> Self {
        self.clone()
    }
}

impl Conjugate for SliceSvd<Complex64> {
    fn conjugated(&self) -> Self {
        SliceSvd {
            u: self.u.conjugated(),
            sigma: self.sigma.clone(),
            v: self.v.as_ref().map(|v| v.conjugated()),
        }
    }
}

impl<A: Conjugate, B: Conjugate> Conjugate for (A, B) {
    fn conjugated(&self) -> Self {
        (self.0.conjugated(), self.1.conjugated())
    }
}

/// Slice indices that must be computed explicitly.
pub(crate) fn independent_slices(p: usize, conj_symmetric: bool) -> Vec<usize> {
    if conj_symmetric {
        (0..=p / 2).collect()
    } else {
        (0..p).collect()
    }
}

/// Evaluates `f` on every independent slice and fills in the mirrored ones.
pub(crate) fn map_slices<T, F>(p: usize, conj_symmetric: bool, f: F) -> Vec<T>
where
    T: Conjugate + Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let ks = independent_slices(p, conj_symmetric);
    let computed = map_indices(&ks, f);
    if !conj_symmetric {
        return computed;
    }
    let mut out: Vec<Option<T>> = (0..p).map(|_| None).collect();
    for k in 1..p {
        if k > p / 2 {
            out[k] = Some(computed[p - k].conjugated());
        }
    }
    for (k, v) in computed.into_iter().enumerate() {
        out[k] = Some(v);
    }
    out.into_iter().map(|v| v.expect("every slice is filled")).collect()
}

/// A tubal-axis-last buffer after the forward transform.
#[derive(Clone, Debug)]
pub(crate) struct Spectrum {
    pub dims: Vec<usize>,
    pub p: usize,
    pub data: Vec<Complex64>,
    pub conj_symmetric: bool,
}

impl Spectrum {
    pub fn forward(data: &[Complex64], dims: &[usize], transform: &TransformSpec, real: bool) -> Self {
        let mut out = data.to_vec();
        transform.apply_in_place(&mut out, Direction::Forward);
        Self {
            dims: dims.to_vec(),
            p: transform.p(),
            data: out,
            conj_symmetric: real && transform.is_dft(),
        }
    }

    /// Builds a spectrum from per-slice buffers (all `p` of them).
    pub fn from_slices(dims: Vec<usize>, slices: Vec<Vec<Complex64>>, conj_symmetric: bool) -> Self {
        let p = slices.len();
        let mut data = Vec::with_capacity(slices.iter().map(Vec::len).sum());
        for s in slices {
            data.extend(s);
        }
        Self { dims, p, data, conj_symmetric }
    }

    pub fn slice_len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn slice(&self, k: usize) -> &[Complex64] {
        let m = self.slice_len();
        &self.data[k * m..(k + 1) * m]
    }

    pub fn slice_matrix(&self, k: usize) -> DMatrix<Complex64> {
        debug_assert_eq!(self.dims.len(), 2);
        DMatrix::from_column_slice(self.dims[0], self.dims[1], self.slice(k))
    }

    /// Back to the tubal domain; `expect_real` enforces and strips the
    /// imaginary residual.
    pub fn inverse(self, transform: &TransformSpec, expect_real: bool) -> Result<Vec<Complex64>> {
        let mut out = self.data;
        transform.apply_in_place(&mut out, Direction::Inverse);
        if expect_real {
            strip_imaginary(&mut out)?;
        }
        Ok(out)
    }
}

/// Zeroes the imaginary part after checking it is negligible.
pub(crate) fn strip_imaginary(data: &mut [Complex64]) -> Result<()> {
    let (mut re2, mut im2) = (0.0, 0.0);
    for z in data.iter() {
        re2 += z.re * z.re;
        im2 += z.im * z.im;
    }
    let norm = (re2 + im2).sqrt();
    let residual = im2.sqrt();
    if residual > IMAG_RESIDUAL_TOL * norm {
        return Err(TubalError::ImaginaryResidual { residual, norm });
    }
    data.iter_mut().for_each(|z| z.im = 0.0);
    Ok(())
}

pub(crate) fn is_real(data: &[Complex64]) -> bool {
    data.iter().all(|z| z.im == 0.0)
}

/// Frobenius norm of a tubal-domain buffer, evaluated from its spectrum.
pub(crate) fn norm_from_spectrum(spec: &[Complex64], transform: &Arc<TransformSpec>) -> f64 {
    match transform.c_magnitude() {
        Some(c) => spec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / c,
        None => {
            let mut tmp = spec.to_vec();
            transform.apply_in_place(&mut tmp, Direction::Inverse);
            tmp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirrored_slices_match_full_computation() {
        let t = TransformSpec::dft(5).unwrap();
        let data: Vec<Complex64> = (0..15).map(|i| Complex64::new((i as f64 * 0.37).sin(), 0.0)).collect();
        let spec = Spectrum::forward(&data, &[3], &t, true);
        assert!(spec.conj_symmetric);
        for k in 1..5 {
            for (a, b) in spec.slice(k).iter().zip(spec.slice(5 - k)) {
                assert!((a - b.conj()).norm() < 1e-14);
            }
        }
        let full: Vec<Vec<Complex64>> = map_slices(5, false, |k| spec.slice(k).to_vec());
        let mirrored: Vec<Vec<Complex64>> = map_slices(5, true, |k| spec.slice(k).to_vec());
        for (a, b) in full.iter().zip(&mirrored) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-14);
            }
        }
        let back = spec.inverse(&t, true).unwrap();
        for (x, y) in back.iter().zip(&data) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn imaginary_residual_is_enforced() {
        let mut ok = vec![Complex64::new(1.0, 1e-13)];
        strip_imaginary(&mut ok).unwrap();
        assert_eq!(ok[0].im, 0.0);
        let mut bad = vec![Complex64::new(1.0, 1e-3)];
        assert!(matches!(strip_imaginary(&mut bad), Err(TubalError::ImaginaryResidual { .. })));
    }
}
