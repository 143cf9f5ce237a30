//! The invertible linear map `L` acting on tubal fibers.
//!
//! Every tubal object stores its entries with the tubal axis last, so a
//! flat buffer of `m * p` values holds `m` fibers of length `p`, with the
//! fiber index fastest. [`TransformSpec::apply_along_tubal_axis`] works on
//! that layout directly.
//!
//! The default transform is the non-normalized DFT (`L = cW` with
//! `|c| = sqrt(p)`), backed by `rustfft`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, TubalError};

/// Largest accepted condition number for a general invertible transform.
pub const MAX_CONDITION: f64 = 1e12;

/// Relative tolerance used to recognise `M^H M = |c|^2 I`.
const SCALED_UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// How `L` acts on a length-`p` fiber.
#[derive(Clone, Debug, PartialEq)]
pub enum TransformKind {
    /// Non-normalized discrete Fourier transform.
    Dft,
    /// `L = M` with `M = cW`, `W` unitary.
    ScaledUnitary(DMatrix<Complex64>),
    /// Any well-conditioned invertible matrix.
    GeneralInvertible(DMatrix<Complex64>),
}

type FftPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

/// An immutable, thread-safe description of `L`.
pub struct TransformSpec {
    p: usize,
    kind: TransformKind,
    c_magnitude: Option<f64>,
    inverse_matrix: Option<DMatrix<Complex64>>,
    real_preserving: bool,
    fft: Option<FftPair>,
}

impl TransformSpec {
    /// Non-normalized DFT of length `p`.
    pub fn dft(p: usize) -> Result<Arc<Self>> {
        if p == 0 {
            return Err(TubalError::InvalidTransform("tubal length must be positive".into()));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(p);
        let inv = planner.plan_fft_inverse(p);
        Ok(Arc::new(Self {
            p,
            kind: TransformKind::Dft,
            c_magnitude: Some((p as f64).sqrt()),
            inverse_matrix: None,
            real_preserving: true,
            fft: Some((fwd, inv)),
        }))
    }

    /// `L = M` where `M^H M = |c|^2 I` for some nonzero `c`.
    pub fn scaled_unitary(matrix: DMatrix<Complex64>) -> Result<Arc<Self>> {
        let p = check_square(&matrix)?;
        let gram = matrix.adjoint() * &matrix;
        let c2 = gram.trace().re / p as f64;
        if c2.is_nan() || c2 <= 0.0 {
            return Err(TubalError::InvalidTransform("scale factor must be nonzero".into()));
        }
        let deviation = (&gram - DMatrix::<Complex64>::identity(p, p) * Complex64::from(c2)).norm();
        if deviation > SCALED_UNITARY_TOL * c2 * p as f64 {
            return Err(TubalError::InvalidTransform(format!(
                "matrix is not a multiple of a unitary matrix (deviation {deviation:e})"
            )));
        }
        let inverse = matrix.adjoint().unscale(c2);
        let real_preserving = matrix.iter().all(|z| z.im == 0.0);
        Ok(Arc::new(Self {
            p,
            kind: TransformKind::ScaledUnitary(matrix),
            c_magnitude: Some(c2.sqrt()),
            inverse_matrix: Some(inverse),
            real_preserving,
            fft: None,
        }))
    }

    /// Any invertible `M`; rejected when its condition number exceeds [`MAX_CONDITION`].
    pub fn general(matrix: DMatrix<Complex64>) -> Result<Arc<Self>> {
        let p = check_square(&matrix)?;
        let sv = matrix.clone().singular_values();
        let (max, min) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| (hi.max(s), lo.min(s)));
        if min.is_nan() || min <= 0.0 || max / min > MAX_CONDITION {
            return Err(TubalError::InvalidTransform(format!(
                "matrix is singular or ill-conditioned (condition {:e})",
                max / min
            )));
        }
        let inverse = matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| TubalError::InvalidTransform("matrix is singular".into()))?;
        let real_preserving = matrix.iter().all(|z| z.im == 0.0);
        Ok(Arc::new(Self {
            p,
            kind: TransformKind::GeneralInvertible(matrix),
            c_magnitude: None,
            inverse_matrix: Some(inverse),
            real_preserving,
            fft: None,
        }))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn kind(&self) -> &TransformKind {
        &self.kind
    }

    /// `|c|` when `L = cW`, `None` for a general transform.
    pub fn c_magnitude(&self) -> Option<f64> {
        self.c_magnitude
    }

    pub fn is_scaled_unitary(&self) -> bool {
        self.c_magnitude.is_some()
    }

    pub fn is_dft(&self) -> bool {
        matches!(self.kind, TransformKind::Dft)
    }

    /// Whether real inputs to a t-product give real outputs.
    pub fn preserves_real(&self) -> bool {
        self.real_preserving
    }

    pub(crate) fn require_scaled_unitary(&self) -> Result<f64> {
        self.c_magnitude.ok_or(TubalError::UnsupportedTransform)
    }

    /// `L(x)` for a single fiber.
    pub fn forward(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_fiber(x)?;
        self.apply_along_tubal_axis(x, Direction::Forward)
    }

    /// `L^{-1}(y)` for a single fiber.
    pub fn inverse(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_fiber(y)?;
        self.apply_along_tubal_axis(y, Direction::Inverse)
    }

    /// Transforms every tubal fiber of a tubal-axis-last buffer.
    pub fn apply_along_tubal_axis(&self, data: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
        if !data.len().is_multiple_of(self.p) {
            return Err(TubalError::Dimension(format!(
                "buffer of length {} is not a whole number of fibers of length {}",
                data.len(),
                self.p
            )));
        }
        let mut out = data.to_vec();
        self.apply_in_place(&mut out, direction);
        Ok(out)
    }

    pub(crate) fn apply_in_place(&self, data: &mut [Complex64], direction: Direction) {
        let p = self.p;
        let m = data.len() / p;
        if m == 0 || p == 1 && self.is_dft() {
            return;
        }
        match &self.kind {
            TransformKind::Dft => {
                let (fwd, inv) = self.fft.as_ref().expect("DFT plans are built at construction");
                // gather fibers contiguously, run the batched FFT, scatter back
                let mut fibers = vec![Complex64::default(); data.len()];
                for k in 0..p {
                    for f in 0..m {
                        fibers[f * p + k] = data[k * m + f];
                    }
                }
                match direction {
                    Direction::Forward => fwd.process(&mut fibers),
                    Direction::Inverse => {
                        inv.process(&mut fibers);
                        let scale = 1.0 / p as f64;
                        fibers.iter_mut().for_each(|z| *z *= scale);
                    }
                }
                for k in 0..p {
                    for f in 0..m {
                        data[k * m + f] = fibers[f * p + k];
                    }
                }
            }
            TransformKind::ScaledUnitary(matrix) | TransformKind::GeneralInvertible(matrix) => {
                let op = match direction {
                    Direction::Forward => matrix,
                    Direction::Inverse => self.inverse_matrix.as_ref().expect("inverse built at construction"),
                };
                // rows of `x` are fibers: y_f = op x_f  <=>  Y = X op^T
                let x = DMatrix::from_column_slice(m, p, data);
                let y = x * op.transpose();
                data.copy_from_slice(y.as_slice());
            }
        }
    }

    fn check_fiber(&self, x: &[Complex64]) -> Result<()> {
        if x.len() != self.p {
            return Err(TubalError::Dimension(format!(
                "fiber has length {}, transform expects {}",
                x.len(),
                self.p
            )));
        }
        Ok(())
    }
}

fn check_square(matrix: &DMatrix<Complex64>) -> Result<usize> {
    if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
        return Err(TubalError::InvalidTransform(format!(
            "transform matrix must be square and nonempty, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(TubalError::InvalidTransform("transform matrix has non-finite entries".into()));
    }
    Ok(matrix.nrows())
}

impl PartialEq for TransformSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.kind == other.kind
    }
}

impl fmt::Debug for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            TransformKind::Dft => "Dft",
            TransformKind::ScaledUnitary(_) => "ScaledUnitary",
            TransformKind::GeneralInvertible(_) => "GeneralInvertible",
        };
        f.debug_struct("TransformSpec")
            .field("p", &self.p)
            .field("kind", &kind)
            .field("c_magnitude", &self.c_magnitude)
            .finish()
    }
}

/// Same transform by identity or by value.
pub(crate) fn same_transform(a: &Arc<TransformSpec>, b: &Arc<TransformSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
