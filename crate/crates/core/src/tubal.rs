//! Tubal scalars and tubal matrices with the tensor-tensor product.
//!
//! A tubal matrix `A` of size `I x J` over tubal length `p` is stored as an
//! `I x J x p` array, column-major inside each frontal slice and with the
//! tubal axis slowest: entry `(i, j)` of slice `k` lives at
//! `i + j * I + k * I * J`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, TubalError};
use crate::linalg::c64_slice_is_finite;
use crate::spectral::{is_real, map_slices, strip_imaginary, Spectrum};
use crate::transform::{same_transform, Direction, TransformSpec};

/// Default tolerance for structural predicates (unitarity, orthogonality).
pub const STRUCTURAL_TOL: f64 = 1e-8;

/// An element of the ring `C_p`: a length-`p` fiber under `L`.
#[derive(Clone, Debug)]
pub struct TubalScalar {
    values: Vec<Complex64>,
    transform: Arc<TransformSpec>,
}

impl TubalScalar {
    pub fn new(values: Vec<Complex64>, transform: &Arc<TransformSpec>) -> Result<Self> {
        if values.len() != transform.p() {
            return Err(TubalError::Dimension(format!(
                "tubal scalar has length {}, transform expects {}",
                values.len(),
                transform.p()
            )));
        }
        Ok(Self { values, transform: transform.clone() })
    }

    pub fn from_real(values: &[f64], transform: &Arc<TransformSpec>) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), transform)
    }

    pub fn zero(transform: &Arc<TransformSpec>) -> Self {
        Self { values: vec![Complex64::default(); transform.p()], transform: transform.clone() }
    }

    /// The ring identity `L^{-1}((1, .., 1))`.
    pub fn identity(transform: &Arc<TransformSpec>) -> Self {
        let mut values = vec![Complex64::new(1.0, 0.0); transform.p()];
        transform.apply_in_place(&mut values, Direction::Inverse);
        if transform.preserves_real() {
            values.iter_mut().for_each(|z| z.im = 0.0);
        }
        Self { values, transform: transform.clone() }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn transform(&self) -> &Arc<TransformSpec> {
        &self.transform
    }

    pub fn is_real(&self) -> bool {
        is_real(&self.values)
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `L^{-1}(L(a) .* L(b))`; circular convolution under the DFT.
    pub fn tproduct(&self, other: &Self) -> Result<Self> {
        if !same_transform(&self.transform, &other.transform) {
            return Err(TubalError::TransformMismatch);
        }
        let a = self.transform.forward(&self.values)?;
        let b = self.transform.forward(&other.values)?;
        let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let mut values = self.transform.inverse(&prod)?;
        if self.transform.preserves_real() && self.is_real() && other.is_real() {
            strip_imaginary(&mut values)?;
        }
        Ok(Self { values, transform: self.transform.clone() })
    }

    /// Hermitian transpose of a `1 x 1` tubal matrix.
    pub fn hermitian(&self) -> Self {
        let mut spec = self.transform.forward(&self.values).expect("length checked at construction");
        spec.iter_mut().for_each(|z| *z = z.conj());
        let mut values = self.transform.inverse(&spec).expect("length checked at construction");
        if self.transform.preserves_real() && self.is_real() {
            values.iter_mut().for_each(|z| z.im = 0.0);
        }
        Self { values, transform: self.transform.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_transform(&self.transform, &other.transform) {
            return Err(TubalError::TransformMismatch);
        }
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            transform: self.transform.clone(),
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { values: self.values.iter().map(|z| z * s).collect(), transform: self.transform.clone() }
    }
}

/// An `I x J` array of tubal scalars.
#[derive(Clone, Debug)]
pub struct TubalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
    transform: Arc<TransformSpec>,
}

impl TubalMatrix {
    /// Builds from a tubal-axis-last buffer of length `rows * cols * p`.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>, transform: &Arc<TransformSpec>) -> Result<Self> {
        let expected = rows * cols * transform.p();
        if data.len() != expected {
            return Err(TubalError::Dimension(format!(
                "tubal matrix {rows}x{cols}x{} needs {expected} values, got {}",
                transform.p(),
                data.len()
            )));
        }
        Ok(Self { rows, cols, data, transform: transform.clone() })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64], transform: &Arc<TransformSpec>) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&v| Complex64::new(v, 0.0)).collect(), transform)
    }

    /// `f(i, j, k)` gives entry `(i, j)` of frontal slice `k`.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        transform: &Arc<TransformSpec>,
        mut f: impl FnMut(usize, usize, usize) -> Complex64,
    ) -> Self {
        let p = transform.p();
        let mut data = Vec::with_capacity(rows * cols * p);
        for k in 0..p {
            for j in 0..cols {
                for i in 0..rows {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { rows, cols, data, transform: transform.clone() }
    }

    pub fn zeros(rows: usize, cols: usize, transform: &Arc<TransformSpec>) -> Self {
        Self { rows, cols, data: vec![Complex64::default(); rows * cols * transform.p()], transform: transform.clone() }
    }

    /// `L^{-1}` of the array whose every frontal slice is `I_n`.
    pub fn identity(n: usize, transform: &Arc<TransformSpec>) -> Self {
        let spectral = Self::from_fn(n, n, transform, |i, j, _| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::default() });
        let mut data = spectral.data;
        transform.apply_in_place(&mut data, Direction::Inverse);
        if transform.preserves_real() {
            data.iter_mut().for_each(|z| z.im = 0.0);
        }
        Self { rows: n, cols: n, data, transform: transform.clone() }
    }

    /// Assembles from tubal-domain frontal slices.
    pub fn from_frontal_slices(slices: &[DMatrix<Complex64>], transform: &Arc<TransformSpec>) -> Result<Self> {
        if slices.len() != transform.p() {
            return Err(TubalError::Dimension(format!("expected {} slices, got {}", transform.p(), slices.len())));
        }
        let (rows, cols) = slices[0].shape();
        if slices.iter().any(|s| s.shape() != (rows, cols)) {
            return Err(TubalError::Dimension("frontal slices differ in shape".into()));
        }
        let data = slices.iter().flat_map(|s| s.iter().copied()).collect();
        Ok(Self { rows, cols, data, transform: transform.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
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

    /// Scalar entry `(i, j)` of frontal slice `k`.
    pub fn value(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.data[i + j * self.rows + k * self.rows * self.cols]
    }

    /// Tubal scalar at `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> TubalScalar {
        let values = (0..self.p()).map(|k| self.value(i, j, k)).collect();
        TubalScalar { values, transform: self.transform.clone() }
    }

    pub fn set(&mut self, i: usize, j: usize, a: &TubalScalar) {
        let stride = self.rows * self.cols;
        for (k, v) in a.values.iter().enumerate() {
            self.data[i + j * self.rows + k * stride] = *v;
        }
    }

    pub fn frontal_slice(&self, k: usize) -> DMatrix<Complex64> {
        let m = self.rows * self.cols;
        DMatrix::from_column_slice(self.rows, self.cols, &self.data[k * m..(k + 1) * m])
    }

    /// Tubal columns `start..start + count`.
    pub fn columns(&self, start: usize, count: usize) -> Self {
        Self::from_fn(self.rows, count, &self.transform, |i, j, k| self.value(i, start + j, k))
    }

    /// Leading `rows x cols` block.
    pub fn top_left(&self, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, &self.transform, |i, j, k| self.value(i, j, k))
    }

    pub(crate) fn spectrum(&self) -> Spectrum {
        Spectrum::forward(&self.data, &[self.rows, self.cols], &self.transform, self.is_real())
    }

    pub(crate) fn from_spectrum(spec: Spectrum, transform: &Arc<TransformSpec>, expect_real: bool) -> Result<Self> {
        let (rows, cols) = (spec.dims[0], spec.dims[1]);
        let data = spec.inverse(transform, expect_real && transform.preserves_real())?;
        Ok(Self { rows, cols, data, transform: transform.clone() })
    }

    fn check_same_transform(&self, other: &Self) -> Result<()> {
        if same_transform(&self.transform, &other.transform) {
            Ok(())
        } else {
            Err(TubalError::TransformMismatch)
        }
    }

    /// Slice-by-slice matrix product, without any transform.
    pub fn face_wise_product(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.p() != other.p() {
            return Err(TubalError::Dimension(format!(
                "face-wise product of {}x{}x{} and {}x{}x{}",
                self.rows,
                self.cols,
                self.p(),
                other.rows,
                other.cols,
                other.p()
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols * self.p());
        for k in 0..self.p() {
            let prod = self.frontal_slice(k) * other.frontal_slice(k);
            data.extend(prod.iter().copied());
        }
        Ok(Self { rows: self.rows, cols: other.cols, data, transform: self.transform.clone() })
    }

    /// `L^{-1}(L(A) face-wise L(B))`.
    pub fn tproduct(&self, other: &Self) -> Result<Self> {
        self.check_same_transform(other)?;
        if self.cols != other.rows {
            return Err(TubalError::Dimension(format!(
                "t-product of {}x{} and {}x{} tubal matrices",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let a = self.spectrum();
        let b = other.spectrum();
        let symmetric = a.conj_symmetric && b.conj_symmetric;
        let slices: Vec<Vec<Complex64>> = map_slices(self.p(), symmetric, |k| {
            let prod = a.slice_matrix(k) * b.slice_matrix(k);
            prod.as_slice().to_vec()
        });
        let spec = Spectrum::from_slices(vec![self.rows, other.cols], slices, symmetric);
        Self::from_spectrum(spec, &self.transform, self.is_real() && other.is_real())
    }

    /// `A^H` with `L(A^H)^(k) = (L(A)^(k))^H`.
    pub fn hermitian_transpose(&self) -> Self {
        let spec = self.spectrum();
        let slices: Vec<Vec<Complex64>> =
            (0..self.p()).map(|k| spec.slice_matrix(k).adjoint().as_slice().to_vec()).collect();
        let out = Spectrum::from_slices(vec![self.cols, self.rows], slices, spec.conj_symmetric);
        Self::from_spectrum(out, &self.transform, self.is_real()).expect("conjugate transpose keeps reals real")
    }

    /// Face-wise transpose: `A^t(j, i) = A(i, j)`, slice order unchanged.
    pub fn smallt_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.transform, |i, j, k| self.value(j, i, k))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `sum conj(a) * b` over all underlying entries.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.shape() != other.shape() || self.p() != other.p() {
            return Err(TubalError::Dimension("inner product of differently shaped tubal matrices".into()));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect(), transform: self.transform.clone() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_same_transform(other)?;
        if self.shape() != other.shape() {
            return Err(TubalError::Dimension("elementwise operation on differently shaped tubal matrices".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
            transform: self.transform.clone(),
        })
    }

    /// `||A^H * A - I|| <= tol`, and `||A * A^H - I|| <= tol` as well.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.rows == self.cols && self.is_partially_unitary(tol) && {
            let aah = self.tproduct(&self.hermitian_transpose()).expect("square product");
            residual_from_identity(&aah) <= tol
        }
    }

    /// `||A^H * A - I|| <= tol` for `I >= J`.
    pub fn is_partially_unitary(&self, tol: f64) -> bool {
        if self.rows < self.cols {
            return false;
        }
        let aha = self.hermitian_transpose().tproduct(self).expect("conformable by construction");
        residual_from_identity(&aha) <= tol
    }
}

fn residual_from_identity(m: &TubalMatrix) -> f64 {
    let id = TubalMatrix::identity(m.rows, &m.transform);
    m.sub(&id).map(|d| d.frobenius_norm()).unwrap_or(f64::INFINITY)
}
