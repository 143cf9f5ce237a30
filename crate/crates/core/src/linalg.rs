//! Dense per-slice kernels shared by the tubal decompositions.

use nalgebra::{ComplexField, DMatrix, DVector, Dyn, Matrix, RawStorage, U1};
use num_complex::Complex64;

/// SVD of one frontal slice with a deterministic phase convention.
///
/// `u` is square (`m x m`), `sigma` has `min(m, n)` nonincreasing entries,
/// and `v` (when requested) is thin (`n x min(m, n)`).
#[derive(Clone, Debug)]
pub(crate) struct SliceSvd<T: ComplexField<RealField = f64>> {
    pub u: DMatrix<T>,
    pub sigma: Vec<f64>,
    pub v: Option<DMatrix<T>>,
}

/// Left-complete SVD of `m`: square `U`, optional thin `V`.
///
/// Each column pair is rotated so the largest-magnitude entry of the left
/// singular vector is real and positive.
pub(crate) fn slice_svd<T>(m: DMatrix<T>, want_v: bool) -> SliceSvd<T>
where
    T: ComplexField<RealField = f64>,
{
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return SliceSvd {
            u: DMatrix::identity(rows, rows),
            sigma: Vec::new(),
            v: want_v.then(|| DMatrix::zeros(cols, 0)),
        };
    }
    let (mut u, sigma, mut v) = if cols >= 2 * rows {
        wide_svd(m, want_v)
    } else {
        let svd = m.svd(true, want_v);
        let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
        (svd.u.expect("requested U"), sigma, svd.v_t.map(|vt| vt.adjoint()))
    };

    for j in 0..k {
        let phase = unit_phase(&u.column(j));
        if phase != T::one() {
            let rot = phase.conjugate();
            scale_column(&mut u, j, &rot);
            if let Some(v) = v.as_mut() {
                scale_column(v, j, &rot);
            }
        }
    }
    if rows > k {
        u = complete_basis(u);
    }
    SliceSvd { u, sigma, v }
}

type RawSvd<T> = (DMatrix<T>, Vec<f64>, Option<DMatrix<T>>);

/// SVD of a wide matrix through `X^H = Q R`: with `R^H = U S W^H`,
/// `X = U S (Q W)^H`. Only the small `R` goes through the SVD proper.
fn wide_svd<T>(m: DMatrix<T>, want_v: bool) -> RawSvd<T>
where
    T: ComplexField<RealField = f64>,
{
    let qr = m.adjoint().qr();
    let r = qr.r();
    let svd = r.adjoint().svd(true, want_v);
    let sigma = svd.singular_values.iter().copied().collect();
    let v = svd.v_t.map(|wt| qr.q() * wt.adjoint());
    (svd.u.expect("requested U"), sigma, v)
}

/// [`slice_svd`] for complex slices, routed through a real SVD when every
/// entry is real so the factors come back exactly real.
pub(crate) fn slice_svd_c64(m: DMatrix<Complex64>, want_v: bool) -> SliceSvd<Complex64> {
    if m.iter().all(|z| z.im == 0.0) {
        let r = slice_svd(m.map(|z| z.re), want_v);
        let lift = |a: DMatrix<f64>| a.map(|x| Complex64::new(x, 0.0));
        return SliceSvd { u: lift(r.u), sigma: r.sigma, v: r.v.map(lift) };
    }
    slice_svd(m, want_v)
}

fn scale_column<T: ComplexField>(m: &mut DMatrix<T>, j: usize, a: &T) {
    for x in m.column_mut(j).iter_mut() {
        *x = x.clone() * a.clone();
    }
}

/// `x_max / |x_max|` for the first largest-magnitude entry, or one.
fn unit_phase<T, S>(col: &Matrix<T, Dyn, U1, S>) -> T
where
    T: ComplexField<RealField = f64>,
    S: RawStorage<T, Dyn, U1>,
{
    let mut best = 0.0;
    let mut pick = T::one();
    for x in col.iter() {
        let m = x.clone().modulus();
        if m > best {
            best = m;
            pick = x.clone();
        }
    }
    if best == 0.0 {
        T::one()
    } else {
        pick.unscale(best)
    }
}

/// Extends orthonormal columns to a square unitary matrix.
///
/// Greedy Gram-Schmidt over the standard basis: each step takes the basis
/// vector with the largest residual, orthogonalized twice.
pub(crate) fn complete_basis<T>(q: DMatrix<T>) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    let (m, k) = q.shape();
    if k >= m {
        return q;
    }
    let mut basis: Vec<DVector<T>> = (0..k).map(|j| q.column(j).into_owned()).collect();
    let mut used = vec![false; m];
    while basis.len() < m {
        let mut best: Option<(usize, DVector<T>, f64)> = None;
        for i in (0..m).filter(|&i| !used[i]) {
            let mut r = DVector::<T>::zeros(m);
            r[i] = T::one();
            for _ in 0..2 {
                for b in &basis {
                    let proj = b.dotc(&r);
                    r.axpy(-proj, b, T::one());
                }
            }
            let nr = r.norm();
            if best.as_ref().is_none_or(|(_, _, n)| nr > *n) {
                best = Some((i, r, nr));
            }
        }
        let (i, r, nr) = best.expect("a residual always exists while the basis is incomplete");
        used[i] = true;
        basis.push(r.unscale(nr));
    }
    let mut out = DMatrix::<T>::zeros(m, m);
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// Number of singular values above `max(m, n) * eps * sigma_max`.
pub(crate) fn numerical_rank(sigma: &[f64], rows: usize, cols: usize) -> usize {
    let top = sigma.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    let tol = rows.max(cols) as f64 * f64::EPSILON * top;
    sigma.iter().filter(|&&s| s > tol).count()
}

/// Mode-`n` unfolding of one column-major slice with the given dims.
///
/// Entry `(i_1, .., i_N)` lands in row `i_n`, column
/// `sum_{k != n} i_k prod_{m < k, m != n} I_m` (0-based).
pub(crate) fn unfold_slice<T: ComplexField>(slice: &[T], dims: &[usize], n: usize) -> DMatrix<T> {
    let before: usize = dims[..n].iter().product();
    let size = dims[n];
    let after: usize = dims[n + 1..].iter().product();
    if n == 0 {
        return DMatrix::from_column_slice(size, after, slice);
    }
    let mut out = DMatrix::<T>::zeros(size, before * after);
    for outer in 0..after {
        for i in 0..size {
            let src = (i + size * outer) * before;
            for inner in 0..before {
                out[(i, inner + before * outer)] = slice[src + inner].clone();
            }
        }
    }
    out
}

/// Inverse of [`unfold_slice`]; `dims[n]` must equal `m.nrows()`.
pub(crate) fn fold_slice<T: ComplexField>(m: &DMatrix<T>, dims: &[usize], n: usize, out: &mut [T]) {
    let before: usize = dims[..n].iter().product();
    let size = dims[n];
    let after: usize = dims[n + 1..].iter().product();
    debug_assert_eq!(m.nrows(), size);
    if n == 0 {
        out.clone_from_slice(m.as_slice());
        return;
    }
    for outer in 0..after {
        for i in 0..size {
            let dst = (i + size * outer) * before;
            for inner in 0..before {
                out[dst + inner] = m[(i, inner + before * outer)].clone();
            }
        }
    }
}

/// Mode-`n` product of one slice: fold(`u * unfold(x, n)`).
pub(crate) fn mode_product_slice<T: ComplexField>(x: &[T], dims: &[usize], u: &DMatrix<T>, n: usize) -> Vec<T> {
    let unfolded = unfold_slice(x, dims, n);
    let prod = u * unfolded;
    let mut new_dims = dims.to_vec();
    new_dims[n] = u.nrows();
    let mut out = vec![T::zero(); new_dims.iter().product()];
    fold_slice(&prod, &new_dims, n, &mut out);
    out
}

pub(crate) fn c64_slice_is_finite(data: &[Complex64]) -> bool {
    data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Runs `f` for each index, in parallel when the `parallel` feature is on.
/// Results are returned in index order.
pub(crate) fn map_indices<T, F>(indices: &[usize], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        indices.par_iter().map(|&i| f(i)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        indices.iter().map(|&i| f(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rows: usize, cols: usize, seed: u64) -> DMatrix<Complex64> {
        let mut s = seed;
        DMatrix::from_fn(rows, cols, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            Complex64::new(a, b)
        })
    }

    #[test]
    fn slice_svd_shapes_and_reconstruction() {
        for (r, c) in [(3, 5), (5, 3), (4, 4), (1, 6), (6, 1)] {
            let m = sample(r, c, (r * 10 + c) as u64);
            let svd = slice_svd(m.clone(), true);
            let k = r.min(c);
            assert_eq!(svd.u.shape(), (r, r));
            assert_eq!(svd.sigma.len(), k);
            let v = svd.v.unwrap();
            assert_eq!(v.shape(), (c, k));
            let uu = svd.u.adjoint() * &svd.u;
            assert!((uu - DMatrix::identity(r, r)).norm() < 1e-12);
            let sig = DMatrix::from_diagonal(&DVector::from_iterator(
                k,
                svd.sigma.iter().map(|&s| Complex64::new(s, 0.0)),
            ));
            let rec = svd.u.columns(0, k) * sig * v.adjoint();
            assert!((rec - &m).norm() < 1e-12 * m.norm());
            assert!(svd.sigma.windows(2).all(|w| w[0] >= w[1]));
            for j in 0..k {
                let col = svd.u.column(j);
                let best = col.iter().fold(Complex64::default(), |b, z| if z.norm() > b.norm() { *z } else { b });
                assert!(best.im.abs() < 1e-14 && best.re > 0.0);
            }
        }
    }

    #[test]
    fn unfold_and_fold_are_inverse() {
        let dims = [2, 3, 4];
        let x: Vec<f64> = (0..24).map(|v| v as f64).collect();
        for n in 0..3 {
            let m = unfold_slice(&x, &dims, n);
            assert_eq!(m.nrows(), dims[n]);
            let mut back = vec![0.0; 24];
            fold_slice(&m, &dims, n, &mut back);
            assert_eq!(back, x);
        }
        // entry (1,2,3) 0-based -> linear 1 + 2*2 + 3*6 = 23; mode-1 column 2 + 3*3 = 11
        let m = unfold_slice(&x, &dims, 0);
        assert_eq!(m[(1, 11)], 23.0);
    }

    #[test]
    fn basis_completion_is_unitary() {
        let m = sample(5, 2, 3);
        let q = m.qr().q();
        let full = complete_basis(q.clone());
        assert!((full.adjoint() * &full - DMatrix::identity(5, 5)).norm() < 1e-12);
        assert!((full.columns(0, 2) - q).norm() == 0.0);
    }
}
