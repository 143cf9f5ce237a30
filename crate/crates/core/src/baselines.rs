//! Classical HOSVD, truncated HOSVD and sequentially truncated HOSVD on
//! dense real tensors, used as comparison baselines.

use nalgebra::DMatrix;

use crate::error::{Result, TubalError};
use crate::linalg::{fold_slice, map_indices, mode_product_slice, slice_svd, unfold_slice};
use crate::multiway::TubalTensor;

/// A real tensor, first index fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    pub dims: Vec<usize>,
    pub data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(dims: &[usize], data: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.iter().product::<usize>() != data.len() {
            return Err(TubalError::Dimension(format!("{} values cannot fill dims {dims:?}", data.len())));
        }
        Ok(Self { dims: dims.to_vec(), data })
    }

    /// The underlying array of a real tubal tensor, tubal axis last.
    pub fn from_tubal(a: &TubalTensor) -> Result<Self> {
        if !a.is_real() {
            return Err(TubalError::Dimension("baselines take real tensors only".into()));
        }
        let mut dims = a.dims().to_vec();
        dims.push(a.p());
        Self::new(&dims, a.data().iter().map(|z| z.re).collect())
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn unfold(&self, n: usize) -> DMatrix<f64> {
        unfold_slice(&self.data, &self.dims, n)
    }

    pub fn mode_n_product(&self, u: &DMatrix<f64>, n: usize) -> Result<Self> {
        if n >= self.order() {
            return Err(TubalError::ModeOutOfRange { mode: n, order: self.order() });
        }
        if u.ncols() != self.dims[n] {
            return Err(TubalError::Dimension(format!("mode-{n} factor has {} columns, expected {}", u.ncols(), self.dims[n])));
        }
        let mut dims = self.dims.clone();
        dims[n] = u.nrows();
        Ok(Self { data: mode_product_slice(&self.data, &self.dims, u, n), dims })
    }

    /// `||S_{i_n = alpha}||` for every `alpha`.
    pub fn mode_slice_norms(&self, n: usize) -> Vec<f64> {
        let before: usize = self.dims[..n].iter().product();
        let mut sq = vec![0.0; self.dims[n]];
        for (lin, x) in self.data.iter().enumerate() {
            sq[(lin / before) % self.dims[n]] += x * x;
        }
        sq.into_iter().map(f64::sqrt).collect()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct HosvdFactors {
    pub core: DenseTensor,
    pub factors: Vec<DMatrix<f64>>,
    /// Full singular-value list of the unfolding each factor came from.
    pub mode_singular_values: Vec<Vec<f64>>,
}

impl HosvdFactors {
    pub fn reconstruct(&self) -> Result<DenseTensor> {
        self.factors.iter().enumerate().try_fold(self.core.clone(), |x, (n, u)| x.mode_n_product(u, n))
    }

    /// `sqrt(sum_n sum_{i > r_n} sigma_i^(n)^2)`.
    pub fn error_bound(&self) -> f64 {
        self.mode_singular_values
            .iter()
            .zip(&self.factors)
            .map(|(s, u)| s.iter().skip(u.ncols()).map(|x| x * x).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest off-diagonal entry of `S_(n) S_(n)^T` over all modes.
    pub fn all_orthogonality(&self) -> f64 {
        (0..self.core.order())
            .map(|n| {
                let s = self.core.unfold(n);
                let g = &s * s.transpose();
                let mut worst: f64 = 0.0;
                for i in 0..g.nrows() {
                    for j in (0..g.ncols()).filter(|&j| j != i) {
                        worst = worst.max(g[(i, j)].abs());
                    }
                }
                worst
            })
            .fold(0.0, f64::max)
    }
}

fn check_ranks(x: &DenseTensor, ranks: &[usize]) -> Result<()> {
    if ranks.len() != x.order() {
        return Err(TubalError::Dimension(format!("{} ranks for a tensor of order {}", ranks.len(), x.order())));
    }
    for (mode, (&rank, &size)) in ranks.iter().zip(&x.dims).enumerate() {
        if rank == 0 || rank > size {
            return Err(TubalError::RankOutOfRange { mode, rank, size });
        }
    }
    Ok(())
}

pub fn hosvd(x: &DenseTensor) -> Result<HosvdFactors> {
    tr_hosvd(x, &x.dims.clone())
}

pub fn tr_hosvd(x: &DenseTensor, ranks: &[usize]) -> Result<HosvdFactors> {
    check_ranks(x, ranks)?;
    let modes: Vec<usize> = (0..x.order()).collect();
    let svds = map_indices(&modes, |n| slice_svd(x.unfold(n), false));
    let factors: Vec<DMatrix<f64>> = svds.iter().zip(ranks).map(|(s, &r)| s.u.columns(0, r).into_owned()).collect();
    let core = factors.iter().enumerate().try_fold(x.clone(), |c, (n, u)| c.mode_n_product(&u.transpose(), n))?;
    Ok(HosvdFactors { core, factors, mode_singular_values: svds.into_iter().map(|s| s.sigma).collect() })
}

/// Modes in `order` (default `0..N`); the core unfolding after each step is
/// `U[:, :r]^T X_(n)`.
pub fn seq_tr_hosvd(x: &DenseTensor, ranks: &[usize], order: Option<&[usize]>) -> Result<HosvdFactors> {
    check_ranks(x, ranks)?;
    let n_modes = x.order();
    let order: Vec<usize> = order.map_or_else(|| (0..n_modes).collect(), <[usize]>::to_vec);
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if sorted != (0..n_modes).collect::<Vec<_>>() {
        return Err(TubalError::InvalidPermutation(format!("{order:?} is not a permutation of 0..{n_modes}")));
    }
    let mut core = x.clone();
    let mut factors = vec![DMatrix::zeros(0, 0); n_modes];
    let mut spectra = vec![Vec::new(); n_modes];
    for &n in &order {
        let unfolded = core.unfold(n);
        let svd = slice_svd(unfolded.clone(), false);
        let u = svd.u.columns(0, ranks[n]).into_owned();
        let reduced = u.transpose() * unfolded;
        let mut dims = core.dims.clone();
        dims[n] = ranks[n];
        let mut data = vec![0.0; dims.iter().product()];
        fold_slice(&reduced, &dims, n, &mut data);
        core = DenseTensor { dims, data };
        factors[n] = u;
        spectra[n] = svd.sigma;
    }
    Ok(HosvdFactors { core, factors, mode_singular_values: spectra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hotsvd::{hotsvd, seq_tr_hotsvd, tr_hotsvd};
    use crate::transform::TransformSpec;

    fn lcg_tensor(dims: &[usize], seed: u64) -> DenseTensor {
        let mut s = seed;
        let data = (0..dims.iter().product::<usize>())
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect();
        DenseTensor::new(dims, data).unwrap()
    }

    #[test]
    fn full_hosvd_invariants() {
        let x = lcg_tensor(&[5, 4, 5, 3], 1);
        let f = hosvd(&x).unwrap();
        assert!(f.reconstruct().unwrap().distance(&x) < 1e-10 * x.norm());
        assert!(f.all_orthogonality() < 1e-8 * x.norm().powi(2));
        for n in 0..4 {
            let norms = f.core.mode_slice_norms(n);
            assert!(norms.windows(2).all(|w| w[0] >= w[1] - 1e-12));
            let u = &f.factors[n];
            assert!((u.transpose() * u - DMatrix::identity(u.ncols(), u.ncols())).norm() < 1e-8);
        }
    }

    #[test]
    fn rank_one_is_recovered() {
        let a = [1.0, -2.0, 0.5];
        let b = [0.3, 1.0];
        let c = [2.0, 1.0, -1.0, 0.25];
        let mut data = Vec::new();
        for &z in &c {
            for &y in &b {
                for &x in &a {
                    data.push(x * y * z);
                }
            }
        }
        let x = DenseTensor::new(&[3, 2, 4], data).unwrap();
        for f in [tr_hosvd(&x, &[1, 1, 1]).unwrap(), seq_tr_hosvd(&x, &[1, 1, 1], None).unwrap()] {
            assert!(f.reconstruct().unwrap().distance(&x) < 1e-12 * x.norm());
        }
    }

    #[test]
    fn truncated_bound_holds() {
        let x = lcg_tensor(&[6, 5, 4], 3);
        for f in [tr_hosvd(&x, &[3, 2, 2]).unwrap(), seq_tr_hosvd(&x, &[3, 2, 2], Some(&[1, 2, 0])).unwrap()] {
            let err = f.reconstruct().unwrap().distance(&x);
            assert!(err <= f.error_bound() + 1e-10 * x.norm());
        }
        assert!(seq_tr_hosvd(&x, &[1, 1, 1], Some(&[0, 0, 1])).is_err());
        assert!(matches!(tr_hosvd(&x, &[7, 1, 1]), Err(TubalError::RankOutOfRange { .. })));
    }

    #[test]
    fn p_one_matches_hot_svd() {
        let t = TransformSpec::dft(1).unwrap();
        let x = lcg_tensor(&[4, 3, 5], 4);
        let a = TubalTensor::from_real(&x.dims, &x.data, &t).unwrap();
        let h = hotsvd(&a).unwrap();
        let c = hosvd(&x).unwrap();
        for n in 0..3 {
            let u: Vec<f64> = h.factors[n].data().iter().map(|z| z.re).collect();
            assert_eq!(u, c.factors[n].as_slice());
        }
        let tr = tr_hotsvd(&a, &[2, 2, 3]).unwrap();
        let trc = tr_hosvd(&x, &[2, 2, 3]).unwrap();
        assert!(tr.core.data().iter().zip(&trc.core.data).all(|(z, w)| (z.re - w).abs() < 1e-14));
        let seq = seq_tr_hotsvd(&a, &[2, 2, 3], None).unwrap();
        let seqc = seq_tr_hosvd(&x, &[2, 2, 3], None).unwrap();
        assert!(seq.core.data().iter().zip(&seqc.core.data).all(|(z, w)| (z.re - w).abs() < 1e-12));
    }
}
