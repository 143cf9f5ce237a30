//! Independent oracles and seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use tubal::{TransformSpec, TubalMatrix, TubalTensor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn real_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| gauss(rng)).collect()
}

pub fn complex_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| Complex64::new(gauss(rng), gauss(rng))).collect()
}

pub fn real_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, t: &Arc<TransformSpec>) -> TubalMatrix {
    TubalMatrix::from_real(rows, cols, &real_vec(rng, rows * cols * t.p()), t).unwrap()
}

pub fn complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, t: &Arc<TransformSpec>) -> TubalMatrix {
    TubalMatrix::new(rows, cols, complex_vec(rng, rows * cols * t.p()), t).unwrap()
}

pub fn real_tensor(rng: &mut ChaCha8Rng, dims: &[usize], t: &Arc<TransformSpec>) -> TubalTensor {
    let len = dims.iter().product::<usize>() * t.p();
    TubalTensor::from_real(dims, &real_vec(rng, len), t).unwrap()
}

pub fn complex_tensor(rng: &mut ChaCha8Rng, dims: &[usize], t: &Arc<TransformSpec>) -> TubalTensor {
    let len = dims.iter().product::<usize>() * t.p();
    TubalTensor::new(dims, complex_vec(rng, len), t).unwrap()
}

/// `c * Q` with `Q` the unitary factor of a random complex matrix.
pub fn random_scaled_unitary(rng: &mut ChaCha8Rng, p: usize, c: f64) -> Arc<TransformSpec> {
    let m = DMatrix::from_vec(p, p, complex_vec(rng, p * p));
    let q = m.qr().q();
    TransformSpec::scaled_unitary(q * Complex64::new(c, 0.0)).unwrap()
}

/// Direct `O(p^2)` non-normalized DFT.
pub fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
    let p = x.len();
    (0..p)
        .map(|k| {
            (0..p)
                .map(|j| x[j] * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / p as f64))
                .sum()
        })
        .collect()
}

/// `c_k = sum_j a_j b_{(k - j) mod p}`.
pub fn circular_convolution(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let p = a.len();
    (0..p).map(|k| (0..p).map(|j| a[j] * b[(k + p - j) % p]).sum()).collect()
}

/// `C(i, k) = sum_j A(i, j) * B(j, k)` with every scalar product a
/// circular convolution (DFT case).
pub fn summation_tproduct(a: &TubalMatrix, b: &TubalMatrix) -> Vec<Complex64> {
    let (m, n, q, p) = (a.rows(), a.cols(), b.cols(), a.p());
    let mut out = vec![Complex64::new(0.0, 0.0); m * q * p];
    for i in 0..m {
        for k in 0..q {
            for j in 0..n {
                let c = circular_convolution(a.get(i, j).values(), b.get(j, k).values());
                for (l, z) in c.into_iter().enumerate() {
                    out[i + k * m + l * m * q] += z;
                }
            }
        }
    }
    out
}

/// Singular values of every transform-domain slice, computed through the
/// naive DFT and nalgebra's SVD on the full slice.
pub fn slice_singular_values(a: &TubalMatrix) -> Vec<Vec<f64>> {
    let (m, n, p) = (a.rows(), a.cols(), a.p());
    let mut hat = vec![Complex64::new(0.0, 0.0); m * n * p];
    for j in 0..n {
        for i in 0..m {
            let fiber = naive_dft(a.get(i, j).values());
            for (k, z) in fiber.into_iter().enumerate() {
                hat[i + j * m + k * m * n] = z;
            }
        }
    }
    (0..p)
        .map(|k| {
            let slice = DMatrix::from_column_slice(m, n, &hat[k * m * n..(k + 1) * m * n]);
            let mut s: Vec<f64> = slice.singular_values().iter().copied().collect();
            s.sort_by(|x, y| y.total_cmp(x));
            s
        })
        .collect()
}

pub fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// `||a - b|| <= tol * max(||a||, ||b||, 1e-300)`.
pub fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.len() == b.len() && dist(a, b) <= tol * norm(a).max(norm(b)).max(1e-300)
}
