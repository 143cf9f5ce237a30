//! Tubal tensors over the t-product: t-SVD, Hot-SVD and its truncated
//! variants.
//!
//! Arrays are stored with the tubal axis last and the first index fastest.

pub mod baselines;
pub mod error;
pub mod hotsvd;
pub(crate) mod linalg;
pub(crate) mod spectral;
#[cfg(feature = "synth")]
pub mod synth;
pub mod multiway;
pub mod transform;
pub mod tsvd;
pub mod tubal;

pub use error::{Result, TubalError};
pub use hotsvd::{
    check_all_orthogonality, check_ordering, error_bound, error_decomposition, hotsvd, mode_spectra, project,
    seq_tr_hotsvd, thin_tsvd_from_hotsvd, tr_hotsvd, truncation_bound, HotSvdFactors, Truncation,
};
pub use multiway::{mode_n_tubal_rank, tubal_kron, tubal_kron_all, TubalTensor};
pub use transform::{Direction, TransformKind, TransformSpec};
pub use tsvd::{multi_rank, t_rank, tail_norm, truncate_tsvd, tsvd, TsvdFactors};
pub use tubal::{TubalMatrix, TubalScalar, STRUCTURAL_TOL};
