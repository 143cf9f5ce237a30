//! Invariant suite over every module at small sizes.
//!
//! Each check measures a residual against a tolerance. Under fault
//! injection the named check perturbs one of its own intermediate results
//! by `1e-3` of its norm, which must make it fail.

use std::f64::consts::PI;
use std::sync::Arc;

use anyhow::{ensure, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use tubal::baselines::{hosvd, DenseTensor};
use tubal::synth::{gaussian_vec, trial_rng, TrialRng};
use tubal::{
    check_all_orthogonality, check_ordering, error_bound, error_decomposition, hotsvd, project, seq_tr_hotsvd,
    tail_norm, tr_hotsvd, truncate_tsvd, truncation_bound, tsvd, tubal_kron, tubal_kron_all, Direction,
    TransformSpec, TubalError, TubalMatrix, TubalScalar, TubalTensor,
};

use crate::tensor_file::TensorFile;

/// Relative size of an injected perturbation.
const FAULT: f64 = 1e-3;

pub struct Ctx {
    rng: TrialRng,
    faulty: bool,
}

impl Ctx {
    fn real(&mut self, len: usize) -> Vec<f64> {
        gaussian_vec(&mut self.rng, len)
    }

    fn complex(&mut self, len: usize) -> Vec<Complex64> {
        let re = self.real(len);
        let im = self.real(len);
        re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect()
    }

    fn fiber(&mut self, p: usize) -> Vec<Complex64> {
        self.complex(p)
    }

    fn matrix(&mut self, rows: usize, cols: usize, t: &Arc<TransformSpec>) -> TubalMatrix {
        TubalMatrix::from_real(rows, cols, &self.real(rows * cols * t.p()), t).expect("sizes agree")
    }

    fn tensor(&mut self, dims: &[usize], t: &Arc<TransformSpec>) -> TubalTensor {
        let len = dims.iter().product::<usize>() * t.p();
        TubalTensor::from_real(dims, &self.real(len), t).expect("sizes agree")
    }

    fn unitary(&mut self, n: usize, t: &Arc<TransformSpec>) -> Result<TubalMatrix> {
        Ok(tsvd(&self.matrix(n, n, t))?.u)
    }

    fn tamper(&self, v: &mut [Complex64]) {
        if self.faulty && !v.is_empty() {
            let n = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt().max(1.0);
            v[0] += FAULT * n;
        }
    }

    fn tamper_vec(&self, mut v: Vec<Complex64>) -> Vec<Complex64> {
        self.tamper(&mut v);
        v
    }

    fn tamper_matrix(&self, m: TubalMatrix) -> Result<TubalMatrix> {
        if !self.faulty {
            return Ok(m);
        }
        let (r, c, t) = (m.rows(), m.cols(), m.transform().clone());
        Ok(TubalMatrix::new(r, c, self.tamper_vec(m.into_data()), &t)?)
    }

    fn tamper_tensor(&self, x: TubalTensor) -> Result<TubalTensor> {
        if !self.faulty {
            return Ok(x);
        }
        let (dims, t) = (x.dims().to_vec(), x.transform().clone());
        Ok(TubalTensor::new(&dims, self.tamper_vec(x.into_data()), &t)?)
    }
}

/// Residual and tolerance; passes when `residual <= tolerance`.
pub struct Outcome {
    pub residual: f64,
    pub tolerance: f64,
}

impl Outcome {
    fn new(residual: f64, tolerance: f64) -> Self {
        Self { residual, tolerance }
    }

    /// `true` maps to residual 0, `false` to 1, tolerance 0.
    fn holds(ok: bool) -> Self {
        Self { residual: if ok { 0.0 } else { 1.0 }, tolerance: 0.0 }
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

type CheckFn = fn(&mut Ctx) -> Result<Outcome>;

pub struct Check {
    pub name: &'static str,
    run: CheckFn,
}

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Result<Outcome>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.outcome.as_ref().is_ok_and(Outcome::passed)
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        match &self.outcome {
            Ok(o) => format!("{status} {:<28} residual {:.2e} (tol {:.0e})", self.name, o.residual, o.tolerance),
            Err(e) => format!("{status} {:<28} error: {e:#}", self.name),
        }
    }
}

fn rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let n = a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt().max(b.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt());
    if a.len() != b.len() {
        f64::INFINITY
    } else {
        d / n.max(f64::MIN_POSITIVE)
    }
}

fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
    let p = x.len();
    (0..p)
        .map(|k| (0..p).map(|j| x[j] * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / p as f64)).sum())
        .collect()
}

fn circular_convolution(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let p = a.len();
    (0..p).map(|k| (0..p).map(|j| a[j] * b[(k + p - j) % p]).sum()).collect()
}

fn dft_oracle(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(7)?;
    let x = c.fiber(7);
    let got = c.tamper_vec(t.forward(&x)?);
    Ok(Outcome::new(rel(&got, &naive_dft(&x)), 1e-12))
}

fn transform_round_trip(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(6)?;
    let x = c.fiber(6);
    let back = c.tamper_vec(t.inverse(&t.forward(&x)?)?);
    Ok(Outcome::new(rel(&back, &x), 1e-12))
}

fn transform_norm_scaling(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(5)?;
    let x = c.fiber(5);
    let y = c.tamper_vec(t.forward(&x)?);
    let norm = |v: &[Complex64]| v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    let want = 5f64.sqrt() * norm(&x);
    Ok(Outcome::new((norm(&y) - want).abs() / want, 1e-12))
}

fn conjugate_symmetry(c: &mut Ctx) -> Result<Outcome> {
    let p = 8;
    let t = TransformSpec::dft(p)?;
    let x: Vec<Complex64> = c.real(p).into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let mut y = t.forward(&x)?;
    // the DC term has no partner, so sabotage slice 1
    c.tamper(&mut y[1..]);
    let worst = (1..p).map(|k| (y[k] - y[p - k].conj()).norm()).fold(0.0, f64::max);
    Ok(Outcome::new(worst / y.iter().map(|z| z.norm()).fold(0.0, f64::max), 1e-12))
}

fn scalar_convolution(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(9)?;
    let (a, b) = (c.fiber(9), c.fiber(9));
    let got = TubalScalar::new(a.clone(), &t)?.tproduct(&TubalScalar::new(b.clone(), &t)?)?;
    let got = c.tamper_vec(got.values().to_vec());
    Ok(Outcome::new(rel(&got, &circular_convolution(&a, &b)), 1e-12))
}

fn scalar_ring(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(6)?;
    let (a, b, d) = (TubalScalar::new(c.fiber(6), &t)?, TubalScalar::new(c.fiber(6), &t)?, TubalScalar::new(c.fiber(6), &t)?);
    let ab = c.tamper_vec(a.tproduct(&b)?.values().to_vec());
    let comm = rel(&ab, b.tproduct(&a)?.values());
    let assoc = rel(a.tproduct(&b)?.tproduct(&d)?.values(), a.tproduct(&b.tproduct(&d)?)?.values());
    Ok(Outcome::new(comm.max(assoc), 1e-12))
}

fn tproduct_oracle(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let (a, b) = (c.matrix(3, 2, &t), c.matrix(2, 4, &t));
    let mut want = vec![Complex64::new(0.0, 0.0); 3 * 4 * 4];
    for i in 0..3 {
        for k in 0..4 {
            for j in 0..2 {
                for (l, z) in circular_convolution(a.get(i, j).values(), b.get(j, k).values()).into_iter().enumerate() {
                    want[i + 3 * k + 12 * l] += z;
                }
            }
        }
    }
    let got = c.tamper_matrix(a.tproduct(&b)?)?;
    Ok(Outcome::new(rel(got.data(), &want), 1e-10))
}

fn tproduct_associativity(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(5)?;
    let (a, b, d) = (c.matrix(3, 2, &t), c.matrix(2, 4, &t), c.matrix(4, 2, &t));
    let left = c.tamper_matrix(a.tproduct(&b)?.tproduct(&d)?)?;
    Ok(Outcome::new(rel(left.data(), a.tproduct(&b.tproduct(&d)?)?.data()), 1e-10))
}

fn hermitian_transpose_rule(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let (a, b) = (c.matrix(3, 2, &t), c.matrix(2, 3, &t));
    let lhs = c.tamper_matrix(a.tproduct(&b)?.hermitian_transpose())?;
    Ok(Outcome::new(rel(lhs.data(), b.hermitian_transpose().tproduct(&a.hermitian_transpose())?.data()), 1e-10))
}

fn smallt_transpose_rule(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let (a, b) = (c.matrix(3, 2, &t), c.matrix(2, 3, &t));
    let lhs = c.tamper_matrix(a.tproduct(&b)?.smallt_transpose())?;
    Ok(Outcome::new(rel(lhs.data(), b.smallt_transpose().tproduct(&a.smallt_transpose())?.data()), 1e-10))
}

fn identity_slices(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let id = TubalMatrix::identity(3, &t);
    let hat = c.tamper_vec(t.apply_along_tubal_axis(id.data(), Direction::Forward)?);
    let mut want = vec![Complex64::new(0.0, 0.0); 36];
    for k in 0..4 {
        for i in 0..3 {
            want[i + 3 * i + 9 * k] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(Outcome::new(rel(&hat, &want), 1e-14))
}

fn tsvd_reconstruction(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(5)?;
    let a = c.matrix(4, 6, &t);
    let f = tsvd(&a)?;
    let s = c.tamper_matrix(f.s)?;
    let back = f.u.tproduct(&s)?.tproduct(&f.v.hermitian_transpose())?;
    Ok(Outcome::new(rel(back.data(), a.data()), 1e-10))
}

fn tsvd_unitarity(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let f = tsvd(&c.matrix(5, 3, &t))?;
    let u = c.tamper_matrix(f.u)?;
    let gram = u.hermitian_transpose().tproduct(&u)?;
    Ok(Outcome::new(rel(gram.data(), TubalMatrix::identity(5, &t).data()), 1e-10))
}

fn tsvd_slice_oracle(c: &mut Ctx) -> Result<Outcome> {
    let (m, n, p) = (4, 3, 5);
    let t = TransformSpec::dft(p)?;
    let a = c.matrix(m, n, &t);
    let s = c.tamper_matrix(tsvd(&a)?.s)?;
    let mut worst: f64 = 0.0;
    for k in 0..p {
        let mut slice = DMatrix::<Complex64>::zeros(m, n);
        for j in 0..n {
            for i in 0..m {
                slice[(i, j)] = naive_dft(a.get(i, j).values())[k];
            }
        }
        let want = slice.singular_values();
        let mut want: Vec<f64> = want.iter().copied().collect();
        want.sort_by(|x, y| y.total_cmp(x));
        for (i, w) in want.iter().enumerate() {
            let got = naive_dft(s.get(i, i).values())[k];
            worst = worst.max((got - Complex64::new(*w, 0.0)).norm());
        }
    }
    Ok(Outcome::new(worst / a.frobenius_norm(), 1e-10))
}

fn eckart_young(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let a = c.matrix(5, 4, &t);
    let f = tsvd(&a)?;
    let best = c.tamper_matrix(truncate_tsvd(&f, 2)?)?;
    let best = a.sub(&best)?.frobenius_norm();
    let mut worst = (best - tail_norm(&f, 2)).abs();
    for _ in 0..50 {
        let x = c.matrix(5, 2, &t).tproduct(&c.matrix(2, 4, &t))?;
        worst = worst.max(best - a.sub(&x)?.frobenius_norm());
    }
    Ok(Outcome::new(worst.max(0.0) / a.frobenius_norm(), 1e-10))
}

fn kronecker_mixed_product(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(3)?;
    let (a, b, cm, d) = (c.matrix(2, 3, &t), c.matrix(2, 2, &t), c.matrix(3, 2, &t), c.matrix(2, 1, &t));
    let lhs = c.tamper_matrix(tubal_kron(&a, &b)?.tproduct(&tubal_kron(&cm, &d)?)?)?;
    Ok(Outcome::new(rel(lhs.data(), tubal_kron(&a.tproduct(&cm)?, &b.tproduct(&d)?)?.data()), 1e-10))
}

fn kronecker_unitary(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let (u, v) = (c.unitary(3, &t)?, c.unitary(2, &t)?);
    let k = c.tamper_matrix(tubal_kron(&u, &v)?)?;
    let gram = k.hermitian_transpose().tproduct(&k)?;
    Ok(Outcome::new(rel(gram.data(), TubalMatrix::identity(6, &t).data()), 1e-10))
}

fn mode_product_unfolding(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(3)?;
    let a = c.tensor(&[3, 4, 2], &t);
    let u = c.matrix(5, 4, &t);
    let b = c.tamper_tensor(a.mode_n_product(&u, 1)?)?;
    Ok(Outcome::new(rel(b.unfold(1)?.data(), u.tproduct(&a.unfold(1)?)?.data()), 1e-10))
}

fn mode_products_commute(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(3)?;
    let a = c.tensor(&[3, 4, 2], &t);
    let (f, g) = (c.matrix(2, 3, &t), c.matrix(3, 2, &t));
    let fg = c.tamper_tensor(a.mode_n_product(&f, 0)?.mode_n_product(&g, 2)?)?;
    Ok(Outcome::new(rel(fg.data(), a.mode_n_product(&g, 2)?.mode_n_product(&f, 0)?.data()), 1e-10))
}

fn hotsvd_reconstruction(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let a = c.tensor(&[3, 4, 2, 3], &t);
    let mut f = hotsvd(&a)?;
    f.core = c.tamper_tensor(f.core)?;
    Ok(Outcome::new(rel(f.reconstruct()?.data(), a.data()), 1e-10))
}

fn hotsvd_norm(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(5)?;
    let a = c.tensor(&[4, 3, 3], &t);
    let core = c.tamper_tensor(hotsvd(&a)?.core)?;
    Ok(Outcome::new((core.frobenius_norm() - a.frobenius_norm()).abs() / a.frobenius_norm(), 1e-10))
}

fn all_orthogonality(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(3)?;
    let a = c.tensor(&[3, 4, 3], &t);
    let mut f = hotsvd(&a)?;
    f.core = c.tamper_tensor(f.core)?;
    Ok(Outcome::new(check_all_orthogonality(&f)? / a.frobenius_norm().powi(2), 1e-8))
}

fn ordering(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let a = c.tensor(&[4, 3, 4], &t);
    let mut f = hotsvd(&a)?;
    f.core = c.tamper_tensor(f.core)?;
    Ok(Outcome::holds(check_ordering(&f)?))
}

fn unfolding_identity(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(3)?;
    let a = c.tensor(&[2, 3, 2], &t);
    let f = hotsvd(&a)?;
    let core = c.tamper_tensor(f.core.clone())?;
    let mut worst: f64 = 0.0;
    for n in 0..3 {
        let others: Vec<TubalMatrix> = (0..3).rev().filter(|&k| k != n).map(|k| f.factors[k].clone()).collect();
        let rhs = f.factors[n].tproduct(&core.unfold(n)?)?.tproduct(&tubal_kron_all(&others)?.smallt_transpose())?;
        worst = worst.max(rel(a.unfold(n)?.data(), rhs.data()));
    }
    Ok(Outcome::new(worst, 1e-10))
}

fn projection_pythagoras(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let a = c.tensor(&[4, 3, 2], &t);
    let u = c.unitary(4, &t)?.columns(0, 2);
    let kept = c.tamper_tensor(project(&a, &u, 0)?)?;
    let rest = a.sub(&project(&a, &u, 0)?)?;
    let total = a.frobenius_norm().powi(2);
    Ok(Outcome::new((kept.frobenius_norm().powi(2) + rest.frobenius_norm().powi(2) - total).abs() / total, 1e-10))
}

fn error_decomposition_check(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(3)?;
    let a = c.tensor(&[3, 4, 3], &t);
    let factors = vec![c.unitary(3, &t)?.columns(0, 2), c.unitary(4, &t)?.columns(0, 2), c.unitary(3, &t)?.columns(0, 1)];
    let terms = error_decomposition(&a, &factors)?;
    let mut approx = a.clone();
    for (n, u) in factors.iter().enumerate() {
        approx = project(&approx, u, n)?;
    }
    let approx = c.tamper_tensor(approx)?;
    let err = a.sub(&approx)?.frobenius_norm().powi(2);
    let sum: f64 = terms.iter().map(|x| x * x).sum();
    Ok(Outcome::new((err - sum).abs() / a.frobenius_norm().powi(2), 1e-8))
}

fn truncated_bound(c: &mut Ctx, seq: bool) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let a = c.tensor(&[5, 4, 4], &t);
    let ranks = [2, 2, 3];
    let f = if seq { seq_tr_hotsvd(&a, &ranks, None)? } else { tr_hotsvd(&a, &ranks)? };
    let bound = if seq { truncation_bound(&a, &ranks)? } else { error_bound(&f)? };
    // a faulty approximant lands far from A, past the bound
    let mut approx = f.reconstruct()?;
    if c.faulty {
        approx = approx.scale(Complex64::new(0.0, 0.0));
    }
    let err = a.sub(&approx)?.frobenius_norm();
    Ok(Outcome::new((err - bound).max(0.0) / a.frobenius_norm(), 1e-10))
}

fn tr_bound(c: &mut Ctx) -> Result<Outcome> {
    truncated_bound(c, false)
}

fn seq_bound(c: &mut Ctx) -> Result<Outcome> {
    truncated_bound(c, true)
}

fn order_two_link(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(4)?;
    let a = c.matrix(4, 3, &t);
    let core = c.tamper_tensor(hotsvd(&TubalTensor::from_matrix(&a))?.core)?;
    let norms = core.mode_slice_norms(0)?;
    let want = tsvd(&a)?.slice_norms;
    let worst = want.iter().zip(&norms).map(|(w, g)| (w - g).abs()).fold(0.0, f64::max);
    Ok(Outcome::new(worst / a.frobenius_norm(), 1e-10))
}

fn p_one_matches_hosvd(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(1)?;
    let a = c.tensor(&[3, 4, 2], &t);
    let core = c.tamper_tensor(hotsvd(&a)?.core)?;
    let dense = hosvd(&DenseTensor::from_tubal(&a)?)?;
    let core_norms = |n| core.mode_slice_norms(n);
    let mut worst: f64 = 0.0;
    for n in 0..3 {
        let got = core_norms(n)?;
        for (g, w) in got.iter().zip(&dense.mode_singular_values[n]) {
            worst = worst.max((g - w).abs());
        }
    }
    Ok(Outcome::new(worst / a.frobenius_norm(), 1e-12))
}

fn tensor_file_round_trip(c: &mut Ctx) -> Result<Outcome> {
    let t = TransformSpec::dft(3)?;
    let a = c.tensor(&[2, 3], &t);
    let mut buf = Vec::new();
    TensorFile::from_tensor(&a).write_to(&mut buf)?;
    if c.faulty {
        let last = buf.len() - 1;
        buf[last] ^= 0x40;
    }
    let back = TensorFile::read_from(&mut buf.as_slice())?.to_tensor(&t)?;
    Ok(Outcome::new(rel(back.data(), a.data()), 0.0))
}

fn general_transform_refused(c: &mut Ctx) -> Result<Outcome> {
    let m = DMatrix::from_fn(3, 3, |i, j| Complex64::new(if i == j { 2.0 } else { 0.5 * (i + j) as f64 }, 0.0));
    let t = if c.faulty { TransformSpec::dft(3)? } else { TransformSpec::general(m)? };
    let a = c.tensor(&[2, 2], &t);
    let f = hotsvd(&a)?;
    Ok(Outcome::holds(matches!(error_bound(&f), Err(TubalError::UnsupportedTransform))))
}

pub fn checks() -> Vec<Check> {
    macro_rules! list {
        ($($name:literal => $f:ident),* $(,)?) => { vec![$(Check { name: $name, run: $f }),*] };
    }
    list![
        "dft-oracle" => dft_oracle,
        "transform-round-trip" => transform_round_trip,
        "transform-norm-scaling" => transform_norm_scaling,
        "dft-conjugate-symmetry" => conjugate_symmetry,
        "scalar-circular-convolution" => scalar_convolution,
        "scalar-ring" => scalar_ring,
        "tproduct-summation-oracle" => tproduct_oracle,
        "tproduct-associativity" => tproduct_associativity,
        "hermitian-transpose-rule" => hermitian_transpose_rule,
        "smallt-transpose-rule" => smallt_transpose_rule,
        "identity-slices" => identity_slices,
        "tsvd-reconstruction" => tsvd_reconstruction,
        "tsvd-unitarity" => tsvd_unitarity,
        "tsvd-slice-oracle" => tsvd_slice_oracle,
        "eckart-young" => eckart_young,
        "kronecker-mixed-product" => kronecker_mixed_product,
        "kronecker-unitary" => kronecker_unitary,
        "mode-product-unfolding" => mode_product_unfolding,
        "mode-products-commute" => mode_products_commute,
        "hotsvd-reconstruction" => hotsvd_reconstruction,
        "hotsvd-norm" => hotsvd_norm,
        "all-orthogonality" => all_orthogonality,
        "ordering" => ordering,
        "unfolding-identity" => unfolding_identity,
        "projection-pythagoras" => projection_pythagoras,
        "error-decomposition" => error_decomposition_check,
        "tr-error-bound" => tr_bound,
        "seq-error-bound" => seq_bound,
        "order-two-tsvd-link" => order_two_link,
        "p1-matches-hosvd" => p_one_matches_hosvd,
        "tensor-file-round-trip" => tensor_file_round_trip,
        "general-transform-refused" => general_transform_refused,
    ]
}

/// Runs every check; `fault` names one to sabotage.
pub fn run(seed: u64, fault: Option<&str>) -> Result<Vec<CheckResult>> {
    let all = checks();
    if let Some(name) = fault {
        ensure!(all.iter().any(|c| c.name == name), "unknown check {name:?}");
    }
    Ok(all
        .iter()
        .enumerate()
        .map(|(i, check)| {
            let mut ctx = Ctx { rng: trial_rng(seed, i as u64), faulty: fault == Some(check.name) };
            CheckResult { name: check.name, outcome: (check.run)(&mut ctx) }
        })
        .collect())
}
