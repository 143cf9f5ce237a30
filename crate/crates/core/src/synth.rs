//! Seeded synthetic tensors for recovery benchmarks.
//!
//! Randomness comes from `ChaCha8Rng` seeded with `seed` and switched to
//! stream `trial`, with standard normal variates from `rand_distr`. The
//! same `(seed, trial)` yields the same tensor on every platform.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, TubalError};
use crate::multiway::TubalTensor;
use crate::transform::TransformSpec;

/// A noisy observation of a low-rank signal.
#[derive(Clone, Debug)]
pub struct RecoveryInstance {
    /// `A# / ||A#||`.
    pub signal: TubalTensor,
    /// `A# / ||A#|| + beta * E / ||E||`.
    pub observed: TubalTensor,
}

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn gaussian_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// `sum_r a_r^(1) o .. o a_r^(N+1)` with Gaussian vectors; `shape` lists
/// every axis, tubal last. Vectors are drawn term by term, axis by axis.
pub fn gaussian_cp(rng: &mut impl Rng, shape: &[usize], rank: usize) -> Vec<f64> {
    let total: usize = shape.iter().product();
    let mut out = vec![0.0; total];
    for _ in 0..rank {
        let vecs: Vec<Vec<f64>> = shape.iter().map(|&d| gaussian_vec(rng, d)).collect();
        // outer product built axis by axis, first index fastest
        let mut scratch = vecs[0].clone();
        for v in &vecs[1..] {
            let prev = scratch.len();
            let mut next = Vec::with_capacity(prev * v.len());
            for &x in v {
                next.extend(scratch.iter().map(|&s| s * x));
            }
            scratch = next;
        }
        out.iter_mut().zip(&scratch).for_each(|(o, s)| *o += s);
    }
    out
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Builds trial `trial` of the recovery model on `shape` (tubal axis last).
pub fn recovery_instance(
    shape: &[usize],
    rank: usize,
    beta: f64,
    transform: &Arc<TransformSpec>,
    seed: u64,
    trial: u64,
) -> Result<RecoveryInstance> {
    if shape.len() < 2 || shape.last() != Some(&transform.p()) {
        return Err(TubalError::Dimension(format!(
            "shape {shape:?} must have at least two axes and end with p = {}",
            transform.p()
        )));
    }
    if rank == 0 || !beta.is_finite() || beta < 0.0 {
        return Err(TubalError::Dimension(format!("invalid recovery model: rank {rank}, beta {beta}")));
    }
    let mut rng = trial_rng(seed, trial);
    let mut signal = gaussian_cp(&mut rng, shape, rank);
    normalize(&mut signal);
    let mut noise = gaussian_vec(&mut rng, signal.len());
    normalize(&mut noise);
    let observed: Vec<f64> = signal.iter().zip(&noise).map(|(s, e)| s + beta * e).collect();
    let dims = &shape[..shape.len() - 1];
    let lift = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    Ok(RecoveryInstance {
        signal: TubalTensor::new(dims, lift(&signal), transform)?,
        observed: TubalTensor::new(dims, lift(&observed), transform)?,
    })
}

/// `||signal - approx|| / ||signal||`.
pub fn recovery_error(signal: &TubalTensor, approx: &TubalTensor) -> Result<f64> {
    Ok(signal.sub(approx)?.frobenius_norm() / signal.frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed_and_trial() {
        let t = TransformSpec::dft(3).unwrap();
        let a = recovery_instance(&[4, 5, 3], 2, 0.1, &t, 7, 0).unwrap();
        let b = recovery_instance(&[4, 5, 3], 2, 0.1, &t, 7, 0).unwrap();
        let c = recovery_instance(&[4, 5, 3], 2, 0.1, &t, 7, 1).unwrap();
        assert_eq!(a.observed.data(), b.observed.data());
        assert_ne!(a.observed.data(), c.observed.data());
        assert!((a.signal.frobenius_norm() - 1.0).abs() < 1e-14);
        let noise = a.observed.sub(&a.signal).unwrap().frobenius_norm();
        assert!((noise - 0.1).abs() < 1e-14);
    }

    #[test]
    fn cp_term_is_an_outer_product() {
        let mut rng = trial_rng(1, 0);
        let x = gaussian_cp(&mut rng, &[2, 3, 2], 1);
        let mut rng = trial_rng(1, 0);
        let (a, b, c) = (gaussian_vec(&mut rng, 2), gaussian_vec(&mut rng, 3), gaussian_vec(&mut rng, 2));
        for k in 0..2 {
            for j in 0..3 {
                for i in 0..2 {
                    assert_eq!(x[i + 2 * j + 6 * k], a[i] * b[j] * c[k]);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let t = TransformSpec::dft(3).unwrap();
        assert!(recovery_instance(&[4, 4], 1, 0.1, &t, 0, 0).is_err());
        assert!(recovery_instance(&[3], 1, 0.1, &t, 0, 0).is_err());
        assert!(recovery_instance(&[4, 3], 0, 0.1, &t, 0, 0).is_err());
    }
}
