//! Order-`N` tubal tensors: unfolding, mode-`n` products and the tubal
//! Kronecker product.
//!
//! Modes are 0-based. A tensor with dims `[I_1, .., I_N]` is stored as an
//! `I_1 x .. x I_N x p` array, first index fastest, tubal index slowest.
//! The mode-`n` unfolding puts entry `(i_1, .., i_N)` at row `i_n`, column
//! `sum_{k != n} i_k prod_{m < k, m != n} I_m`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Result, TubalError};
use crate::linalg::{c64_slice_is_finite, fold_slice, mode_product_slice, unfold_slice};
use crate::spectral::{is_real, map_slices, Spectrum};
use crate::transform::{same_transform, TransformSpec};
use crate::tsvd::{t_rank, tsvd};
use crate::tubal::{TubalMatrix, TubalScalar};

#[derive(Clone, Debug)]
pub struct TubalTensor {
    dims: Vec<usize>,
    data: Vec<Complex64>,
    transform: Arc<TransformSpec>,
}

impl TubalTensor {
    pub fn new(dims: &[usize], data: Vec<Complex64>, transform: &Arc<TransformSpec>) -> Result<Self> {
        if dims.is_empty() {
            return Err(TubalError::Dimension("a tubal tensor needs at least one mode".into()));
        }
        let expected = dims.iter().product::<usize>() * transform.p();
        if data.len() != expected {
            return Err(TubalError::Dimension(format!(
                "tubal tensor {dims:?} x {} needs {expected} values, got {}",
                transform.p(),
                data.len()
            )));
        }
        Ok(Self { dims: dims.to_vec(), data, transform: transform.clone() })
    }

    pub fn from_real(dims: &[usize], data: &[f64], transform: &Arc<TransformSpec>) -> Result<Self> {
        Self::new(dims, data.iter().map(|&v| Complex64::new(v, 0.0)).collect(), transform)
    }

    /// `f(index, k)` gives entry `index` of tubal slice `k`.
    pub fn from_fn(
        dims: &[usize],
        transform: &Arc<TransformSpec>,
        mut f: impl FnMut(&[usize], usize) -> Complex64,
    ) -> Result<Self> {
        let m: usize = dims.iter().product();
        let mut data = Vec::with_capacity(m * transform.p());
        let mut index = vec![0; dims.len()];
        for k in 0..transform.p() {
            for lin in 0..m {
                linear_to_index(lin, dims, &mut index);
                data.push(f(&index, k));
            }
        }
        Self::new(dims, data, transform)
    }

    pub fn zeros(dims: &[usize], transform: &Arc<TransformSpec>) -> Result<Self> {
        let len = dims.iter().product::<usize>() * transform.p();
        Self::new(dims, vec![Complex64::default(); len], transform)
    }

    /// The tubal matrix as an order-2 tensor.
    pub fn from_matrix(m: &TubalMatrix) -> Self {
        Self { dims: vec![m.rows(), m.cols()], data: m.data().to_vec(), transform: m.transform().clone() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn p(&self) -> usize {
        self.transform.p()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn transform(&self) -> &Arc<TransformSpec> {
        &self.transform
    }

    pub fn is_real(&self) -> bool {
        is_real(&self.data)
    }

    pub fn is_finite(&self) -> bool {
        c64_slice_is_finite(&self.data)
    }

    fn slice_len(&self) -> usize {
        self.dims.iter().product()
    }

    fn linear(&self, index: &[usize]) -> usize {
        index.iter().zip(&self.dims).rev().fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Scalar entry `index` of tubal slice `k`.
    pub fn value(&self, index: &[usize], k: usize) -> Complex64 {
        self.data[self.linear(index) + k * self.slice_len()]
    }

    pub fn get(&self, index: &[usize]) -> TubalScalar {
        let (base, m) = (self.linear(index), self.slice_len());
        let values = (0..self.p()).map(|k| self.data[base + k * m]).collect();
        TubalScalar::new(values, &self.transform).expect("length p by construction")
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.check_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dims: self.dims.clone(), data: self.data.iter().map(|z| z * s).collect(), transform: self.transform.clone() }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if !same_transform(&self.transform, &other.transform) {
            return Err(TubalError::TransformMismatch);
        }
        if self.dims != other.dims {
            return Err(TubalError::Dimension(format!("shapes {:?} and {:?} differ", self.dims, other.dims)));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            dims: self.dims.clone(),
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
            transform: self.transform.clone(),
        })
    }

    pub(crate) fn check_mode(&self, n: usize) -> Result<()> {
        if n >= self.order() {
            return Err(TubalError::ModeOutOfRange { mode: n, order: self.order() });
        }
        Ok(())
    }

    pub(crate) fn spectrum(&self) -> Spectrum {
        Spectrum::forward(&self.data, &self.dims, &self.transform, self.is_real())
    }

    pub(crate) fn from_spectrum(spec: Spectrum, transform: &Arc<TransformSpec>, expect_real: bool) -> Result<Self> {
        let dims = spec.dims.clone();
        let data = spec.inverse(transform, expect_real && transform.preserves_real())?;
        Ok(Self { dims, data, transform: transform.clone() })
    }

    /// Mode-`n` unfolding `A_(n)`, an `I_n x prod_{k != n} I_k` tubal matrix.
    pub fn unfold(&self, n: usize) -> Result<TubalMatrix> {
        self.check_mode(n)?;
        let m = self.slice_len();
        let rows = self.dims[n];
        let cols = m.checked_div(rows).unwrap_or(0);
        let mut data = Vec::with_capacity(self.data.len());
        for k in 0..self.p() {
            let u = unfold_slice(&self.data[k * m..(k + 1) * m], &self.dims, n);
            data.extend(u.iter().copied());
        }
        TubalMatrix::new(rows, cols, data, &self.transform)
    }

    /// Inverse of [`TubalTensor::unfold`].
    pub fn fold(m: &TubalMatrix, n: usize, dims: &[usize]) -> Result<Self> {
        if n >= dims.len() {
            return Err(TubalError::ModeOutOfRange { mode: n, order: dims.len() });
        }
        let total: usize = dims.iter().product();
        if m.rows() != dims[n] || m.rows() * m.cols() != total {
            return Err(TubalError::Dimension(format!(
                "a {}x{} unfolding cannot fold to {dims:?} along mode {n}",
                m.rows(),
                m.cols()
            )));
        }
        let mut data = vec![Complex64::default(); total * m.p()];
        for k in 0..m.p() {
            fold_slice(&m.frontal_slice(k), dims, n, &mut data[k * total..(k + 1) * total]);
        }
        Self::new(dims, data, m.transform())
    }

    /// `A *_n U` with `(A *_n U)_(n) = U * A_(n)`.
    pub fn mode_n_product(&self, u: &TubalMatrix, n: usize) -> Result<Self> {
        self.check_mode(n)?;
        if !same_transform(&self.transform, u.transform()) {
            return Err(TubalError::TransformMismatch);
        }
        if u.cols() != self.dims[n] {
            return Err(TubalError::Dimension(format!(
                "mode-{n} product needs {} columns, factor has {}",
                self.dims[n],
                u.cols()
            )));
        }
        let a = self.spectrum();
        let f = u.spectrum();
        let sym = a.conj_symmetric && f.conj_symmetric;
        let dims = self.dims.clone();
        let slices: Vec<Vec<Complex64>> =
            map_slices(self.p(), sym, |k| mode_product_slice(a.slice(k), &dims, &f.slice_matrix(k), n));
        let mut new_dims = self.dims.clone();
        new_dims[n] = u.rows();
        Self::from_spectrum(Spectrum::from_slices(new_dims, slices, sym), &self.transform, self.is_real() && u.is_real())
    }

    /// `||S_{i_n = alpha}||` for every `alpha` along mode `n`.
    pub fn mode_slice_norms(&self, n: usize) -> Result<Vec<f64>> {
        self.check_mode(n)?;
        let mut sq = vec![0.0; self.dims[n]];
        let before: usize = self.dims[..n].iter().product();
        for (lin, z) in self.data.iter().enumerate() {
            sq[(lin / before) % self.dims[n]] += z.norm_sqr();
        }
        Ok(sq.into_iter().map(f64::sqrt).collect())
    }
}

pub(crate) fn linear_to_index(mut lin: usize, dims: &[usize], index: &mut [usize]) {
    for (slot, &d) in index.iter_mut().zip(dims) {
        *slot = lin % d;
        lin /= d;
    }
}

/// Tubal Kronecker product: entry `(k + i K, l + j L)` of the `IK x JL`
/// result is `A(i, j) * B(k, l)`.
pub fn tubal_kron(a: &TubalMatrix, b: &TubalMatrix) -> Result<TubalMatrix> {
    if !same_transform(a.transform(), b.transform()) {
        return Err(TubalError::TransformMismatch);
    }
    let sa = a.spectrum();
    let sb = b.spectrum();
    let sym = sa.conj_symmetric && sb.conj_symmetric;
    let slices: Vec<Vec<Complex64>> =
        map_slices(a.p(), sym, |k| sa.slice_matrix(k).kronecker(&sb.slice_matrix(k)).as_slice().to_vec());
    let spec = Spectrum::from_slices(vec![a.rows() * b.rows(), a.cols() * b.cols()], slices, sym);
    TubalMatrix::from_spectrum(spec, a.transform(), a.is_real() && b.is_real())
}

/// `A_1 (x) A_2 (x) .. (x) A_m`, folded from the left.
pub fn tubal_kron_all(factors: &[TubalMatrix]) -> Result<TubalMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| TubalError::Dimension("Kronecker product of no factors".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| tubal_kron(&acc, f))
}

/// t-rank of the mode-`n` unfolding.
pub fn mode_n_tubal_rank(a: &TubalTensor, n: usize, tol: f64) -> Result<usize> {
    Ok(t_rank(&tsvd(&a.unfold(n)?)?, tol))
}
