//! Generalized scalars and matrices over a semisimple convolution algebra.
//!
//! A t-scalar is a fixed-shape multi-way complex array; multiplication is
//! circular convolution, which the multi-way DFT turns into entrywise
//! products of spectra. Matrices of t-scalars canonically decompose into
//! independent complex matrix slices, one per spectral coordinate, and the
//! classical toolbox (SVD, pseudoinverse, rank, least-squares, PCA) lifts
//! slice by slice while staying backward-compatible with the `K = 1` case.

pub mod algorithms;
pub mod error;
pub mod lift;
pub mod spectral;
pub mod tmatrix;
pub mod tscalar;

pub use error::{Result, TalgError};
pub use spectral::{dft, fourier_matrix, idft, FourierMatrix, Spectrum, TShape};
pub use tmatrix::{TMatrix, TsvdFactors};
pub use tscalar::{IdempotentSet, TScalar, ToleranceProfile};
