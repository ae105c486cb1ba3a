//! Algorithms built on the t-matrix toolbox: generalized low-rank
//! approximation, least-squares, principal component analysis, average
//! pooling, PSNR, and nearest-neighbor classification over the partial
//! order.

mod lowrank;
mod lstsq;
mod pool;
mod tnn;
mod tpca;

pub use lowrank::{delta_from_rank, low_rank_approx, low_rank_from_factors, RankSpec};
pub use lstsq::{lstsq, lstsq_general, LstsqResult};
pub use pool::{average_pool, psnr, psnr_complex, psnr_from_sq_error};
pub use tnn::{frobenius_slice_metric, tnn_classify, tnn_classify_with, TnnVerdict};
pub use tpca::{tpca_fit, tpca_reconstruct, tpca_transform, TpcaModel};
