//! Matrices over the t-scalar algebra.
//!
//! Canonical storage is the spectral slice stack: a t-matrix is `K` complex
//! matrices, one per spectral coordinate, and every nontrivial operation
//! factors through the slices. The spatial order-(N+2) array view is
//! produced on demand.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, TalgError};
use crate::spectral::{self, TShape};
use crate::tscalar::{TScalar, ToleranceProfile};

/// A rectangular array of t-scalars, stored as `K` spectral matrix slices.
#[derive(Clone, Debug)]
pub struct TMatrix {
    shape: TShape,
    rows: usize,
    cols: usize,
    slices: Vec<DMatrix<Complex64>>,
}

impl TMatrix {
    pub fn zeros(shape: &TShape, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(TalgError::DimMismatch("t-matrix with zero dimension".into()));
        }
        let k = shape.num_entries();
        Ok(Self {
            shape: shape.clone(),
            rows,
            cols,
            slices: vec![DMatrix::zeros(rows, cols); k],
        })
    }

    /// `diag(E_T, ..., E_T)`: identity matrix in every slice.
    pub fn identity(shape: &TShape, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(TalgError::DimMismatch("identity of size 0".into()));
        }
        let k = shape.num_entries();
        Ok(Self {
            shape: shape.clone(),
            rows: m,
            cols: m,
            slices: vec![DMatrix::identity(m, m); k],
        })
    }

    /// Rebuild from the orthogonality series: one `M1 x M2` matrix per slice.
    pub fn assemble(shape: &TShape, slices: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let k = shape.num_entries();
        if slices.len() != k {
            return Err(TalgError::DimMismatch(format!(
                "{} slices for K = {k}",
                slices.len()
            )));
        }
        let rows = slices[0].nrows();
        let cols = slices[0].ncols();
        if rows == 0 || cols == 0 {
            return Err(TalgError::DimMismatch("t-matrix with zero dimension".into()));
        }
        if slices.iter().any(|s| s.nrows() != rows || s.ncols() != cols) {
            return Err(TalgError::DimMismatch("slice sizes differ".into()));
        }
        Ok(Self {
            shape: shape.clone(),
            rows,
            cols,
            slices,
        })
    }

    /// Build from a spatial order-(N+2) array in canonical flat order
    /// `(i_1, ..., i_N, m_1, m_2)`, last index fastest.
    pub fn from_spatial(
        shape: &TShape,
        rows: usize,
        cols: usize,
        data: &[Complex64],
    ) -> Result<Self> {
        let k = shape.num_entries();
        let batch = rows * cols;
        if rows == 0 || cols == 0 {
            return Err(TalgError::DimMismatch("t-matrix with zero dimension".into()));
        }
        if data.len() != k * batch {
            return Err(TalgError::DimMismatch(format!(
                "{} entries for shape {:?} x {rows} x {cols}",
                data.len(),
                shape
            )));
        }
        let mut buf = data.to_vec();
        spectral::transform_modes(shape.dims(), &mut buf, batch, false);
        let slices = (0..k)
            .map(|ki| {
                let base = ki * batch;
                DMatrix::from_fn(rows, cols, |r, c| buf[base + r * cols + c])
            })
            .collect();
        Ok(Self {
            shape: shape.clone(),
            rows,
            cols,
            slices,
        })
    }

    pub fn from_real_spatial(
        shape: &TShape,
        rows: usize,
        cols: usize,
        data: &[f64],
    ) -> Result<Self> {
        let complex: Vec<Complex64> = data.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        Self::from_spatial(shape, rows, cols, &complex)
    }

    /// The spatial array in canonical flat order.
    pub fn to_spatial(&self) -> Vec<Complex64> {
        let batch = self.rows * self.cols;
        let k = self.shape.num_entries();
        let mut buf = vec![Complex64::default(); k * batch];
        for (ki, slice) in self.slices.iter().enumerate() {
            let base = ki * batch;
            for r in 0..self.rows {
                for c in 0..self.cols {
                    buf[base + r * self.cols + c] = slice[(r, c)];
                }
            }
        }
        spectral::transform_modes(self.shape.dims(), &mut buf, batch, true);
        buf
    }

    /// Row-major t-scalar entries.
    pub fn from_tscalars(rows: usize, cols: usize, entries: &[TScalar]) -> Result<Self> {
        if entries.is_empty() || entries.len() != rows * cols {
            return Err(TalgError::DimMismatch(format!(
                "{} t-scalars for {rows} x {cols}",
                entries.len()
            )));
        }
        let shape = entries[0].shape().clone();
        if entries.iter().any(|e| e.shape() != &shape) {
            return Err(TalgError::ShapeMismatch(
                "t-scalar entries have differing shapes".into(),
            ));
        }
        let k = shape.num_entries();
        let slices = (0..k)
            .map(|ki| DMatrix::from_fn(rows, cols, |r, c| entries[r * cols + c].spectrum()[ki]))
            .collect();
        Ok(Self {
            shape,
            rows,
            cols,
            slices,
        })
    }

    /// A t-vector: a single-column t-matrix.
    pub fn from_tscalar_column(entries: &[TScalar]) -> Result<Self> {
        Self::from_tscalars(entries.len(), 1, entries)
    }

    /// Horizontal concatenation of equally-shaped t-vectors/matrices.
    pub fn from_columns(columns: &[&TMatrix]) -> Result<Self> {
        if columns.is_empty() {
            return Err(TalgError::DimMismatch("no columns".into()));
        }
        let shape = columns[0].shape.clone();
        let rows = columns[0].rows;
        for c in columns {
            if c.shape != shape {
                return Err(TalgError::ShapeMismatch("column shapes differ".into()));
            }
            if c.rows != rows {
                return Err(TalgError::DimMismatch("column heights differ".into()));
            }
        }
        let total_cols: usize = columns.iter().map(|c| c.cols).sum();
        let k = shape.num_entries();
        let slices = (0..k)
            .map(|ki| {
                let mut m = DMatrix::zeros(rows, total_cols);
                let mut at = 0;
                for c in columns {
                    m.view_mut((0, at), (rows, c.cols)).copy_from(&c.slices[ki]);
                    at += c.cols;
                }
                m
            })
            .collect();
        Ok(Self {
            shape,
            rows,
            cols: total_cols,
            slices,
        })
    }

    pub fn shape(&self) -> &TShape {
        &self.shape
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Slice `k` of the orthogonality series, 1-based.
    pub fn slice(&self, k: usize) -> Result<&DMatrix<Complex64>> {
        if k == 0 || k > self.slices.len() {
            return Err(TalgError::IndexOutOfRange(format!(
                "slice {k} not in 1..={}",
                self.slices.len()
            )));
        }
        Ok(&self.slices[k - 1])
    }

    pub fn slices(&self) -> &[DMatrix<Complex64>] {
        &self.slices
    }

    /// The `(m1, m2)` t-scalar entry, 0-based.
    pub fn entry(&self, m1: usize, m2: usize) -> Result<TScalar> {
        if m1 >= self.rows || m2 >= self.cols {
            return Err(TalgError::IndexOutOfRange(format!(
                "({m1}, {m2}) outside {} x {}",
                self.rows, self.cols
            )));
        }
        let spec = self.slices.iter().map(|s| s[(m1, m2)]).collect();
        TScalar::from_spectrum(self.shape.clone(), spec)
    }

    /// Single column as a t-vector, 0-based.
    pub fn column(&self, j: usize) -> Result<TMatrix> {
        if j >= self.cols {
            return Err(TalgError::IndexOutOfRange(format!(
                "column {j} outside 0..{}",
                self.cols
            )));
        }
        let slices = self
            .slices
            .iter()
            .map(|s| DMatrix::from_fn(self.rows, 1, |r, _| s[(r, j)]))
            .collect();
        Self::assemble(&self.shape, slices)
    }

    /// Leading `q` columns (`q >= 1`).
    pub fn leading_columns(&self, q: usize) -> Result<TMatrix> {
        if q == 0 || q > self.cols {
            return Err(TalgError::IndexOutOfRange(format!(
                "{q} columns requested of {}",
                self.cols
            )));
        }
        let slices = self
            .slices
            .iter()
            .map(|s| s.columns(0, q).into_owned())
            .collect();
        Self::assemble(&self.shape, slices)
    }

    fn check_same_dims(&self, other: &TMatrix) -> Result<()> {
        if self.shape != other.shape {
            return Err(TalgError::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(TalgError::DimMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TMatrix) -> Result<TMatrix> {
        self.check_same_dims(other)?;
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a + b)
            .collect();
        Self::assemble(&self.shape, slices)
    }

    pub fn sub(&self, other: &TMatrix) -> Result<TMatrix> {
        self.check_same_dims(other)?;
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a - b)
            .collect();
        Self::assemble(&self.shape, slices)
    }

    pub fn negate(&self) -> TMatrix {
        let slices = self.slices.iter().map(|s| -s).collect();
        Self::assemble(&self.shape, slices).expect("dims preserved")
    }

    /// Complex scalar multiple.
    pub fn scalar_mul(&self, alpha: Complex64) -> TMatrix {
        let slices = self.slices.iter().map(|s| s * alpha).collect();
        Self::assemble(&self.shape, slices).expect("dims preserved")
    }

    /// T-scalar multiple: slice `k` scaled by the k-th spectral coordinate.
    pub fn tscalar_mul(&self, lambda: &TScalar) -> Result<TMatrix> {
        if lambda.shape() != &self.shape {
            return Err(TalgError::ShapeMismatch(format!(
                "{:?} vs {:?}",
                lambda.shape(),
                self.shape
            )));
        }
        let spec = lambda.spectrum();
        let slices = self
            .slices
            .iter()
            .zip(spec)
            .map(|(s, &l)| s * l)
            .collect();
        Self::assemble(&self.shape, slices)
    }

    /// T-matrix product: slicewise complex matrix products.
    pub fn matmul(&self, other: &TMatrix) -> Result<TMatrix> {
        if self.shape != other.shape {
            return Err(TalgError::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        if self.cols != other.rows {
            return Err(TalgError::DimMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let slices: Vec<_> = self
            .slices
            .par_iter()
            .zip(other.slices.par_iter())
            .map(|(a, b)| a * b)
            .collect();
        Self::assemble(&self.shape, slices)
    }

    /// Conjugate transpose; involutive, and `(X * Y)^* = Y^* * X^*`.
    pub fn conj_transpose(&self) -> TMatrix {
        let slices = self.slices.iter().map(|s| s.adjoint()).collect();
        Self::assemble(&self.shape, slices).expect("dims preserved")
    }

    /// Extension of `psi` to t-matrices: sum of entrywise `conj(x) * y`.
    pub fn psi(&self, other: &TMatrix) -> Result<TScalar> {
        self.check_same_dims(other)?;
        let spec = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a.dotc(b))
            .collect();
        TScalar::from_spectrum(self.shape.clone(), spec)
    }

    /// Frobenius norm as a nonnegative t-scalar: slice norms in the spectrum.
    pub fn frob_norm_r(&self) -> TScalar {
        let spec = self
            .slices
            .iter()
            .map(|s| Complex64::new(s.norm(), 0.0))
            .collect();
        TScalar::from_spectrum(self.shape.clone(), spec).expect("length K")
    }

    /// Generalized distance `r(X - Y)_F`.
    pub fn distance_d(&self, other: &TMatrix) -> Result<TScalar> {
        Ok(self.sub(other)?.frob_norm_r())
    }

    /// Sum of diagonal t-scalar entries of a square t-matrix.
    pub fn trace(&self) -> Result<TScalar> {
        if self.rows != self.cols {
            return Err(TalgError::DimMismatch(format!(
                "trace of {}x{}",
                self.rows, self.cols
            )));
        }
        let spec = self.slices.iter().map(|s| s.trace()).collect();
        TScalar::from_spectrum(self.shape.clone(), spec)
    }

    /// Tensorial singular value decomposition: per-slice compact SVD with
    /// descending singular values, reassembled over the slice stack.
    pub fn tsvd(&self) -> Result<TsvdFactors> {
        let m = self.rows.min(self.cols);
        let parts: Vec<_> = self
            .slices
            .par_iter()
            .map(slice_svd)
            .collect::<Result<_>>()?;
        let mut u_slices = Vec::with_capacity(parts.len());
        let mut v_slices = Vec::with_capacity(parts.len());
        let mut sigma = vec![vec![0.0f64; parts.len()]; m];
        for (k, (u, s, v)) in parts.into_iter().enumerate() {
            for (i, row) in sigma.iter_mut().enumerate() {
                row[k] = s[i];
            }
            u_slices.push(u);
            v_slices.push(v);
        }
        let singular = sigma
            .into_iter()
            .map(|vals| {
                TScalar::from_spectrum(
                    self.shape.clone(),
                    vals.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TsvdFactors {
            u: Self::assemble(&self.shape, u_slices)?,
            s: singular,
            v: Self::assemble(&self.shape, v_slices)?,
        })
    }

    /// Moore-Penrose pseudoinverse, slice by slice. Singular values below
    /// the per-slice relative cutoff are treated as zero.
    pub fn pinv(&self, tol: &ToleranceProfile) -> Result<TMatrix> {
        let (rows, cols) = (self.rows, self.cols);
        let slices: Vec<_> = self
            .slices
            .par_iter()
            .map(|s| {
                let (u, sv, v) = slice_svd(s)?;
                let cutoff = tol.rank_cutoff(rows, cols, sv.max());
                let mut acc = DMatrix::<Complex64>::zeros(cols, rows);
                for i in 0..sv.len() {
                    if sv[i] > cutoff {
                        let scale = Complex64::new(1.0 / sv[i], 0.0);
                        acc += (v.column(i) * u.column(i).adjoint()) * scale;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        Self::assemble(&self.shape, slices)
    }

    /// Generalized rank: per-slice numerical rank in the spectrum.
    pub fn rank(&self, tol: &ToleranceProfile) -> Result<TScalar> {
        let (rows, cols) = (self.rows, self.cols);
        let spec: Vec<_> = self
            .slices
            .par_iter()
            .map(|s| {
                let sv = nalgebra::SVD::new(s.clone(), false, false).singular_values;
                let cutoff = tol.rank_cutoff(rows, cols, sv.max());
                let count = sv.iter().filter(|&&x| x > cutoff).count();
                Ok(Complex64::new(count as f64, 0.0))
            })
            .collect::<Result<_>>()?;
        TScalar::from_spectrum(self.shape.clone(), spec)
    }

    /// Diagonal t-matrix from t-scalar entries.
    pub fn diag(entries: &[TScalar]) -> Result<TMatrix> {
        if entries.is_empty() {
            return Err(TalgError::DimMismatch("empty diagonal".into()));
        }
        let shape = entries[0].shape().clone();
        if entries.iter().any(|e| e.shape() != &shape) {
            return Err(TalgError::ShapeMismatch(
                "diagonal entries have differing shapes".into(),
            ));
        }
        let m = entries.len();
        let k = shape.num_entries();
        let slices = (0..k)
            .map(|ki| {
                DMatrix::from_fn(m, m, |r, c| {
                    if r == c {
                        entries[r].spectrum()[ki]
                    } else {
                        Complex64::default()
                    }
                })
            })
            .collect();
        Self::assemble(&shape, slices)
    }
}

/// Multiplication of a complex matrix and a t-scalar: every slice is the
/// matrix scaled by the corresponding spectral coordinate.
pub fn ltimes(y_mat: &DMatrix<Complex64>, x: &TScalar) -> TMatrix {
    let slices = x.spectrum().iter().map(|&l| y_mat * l).collect();
    TMatrix::assemble(x.shape(), slices).expect("dims preserved")
}

fn slice_svd(
    s: &DMatrix<Complex64>,
) -> Result<(DMatrix<Complex64>, DVector<f64>, DMatrix<Complex64>)> {
    let svd = nalgebra::SVD::try_new(s.clone(), true, true, f64::EPSILON, 0)
        .ok_or_else(|| TalgError::Numeric("SVD did not converge".into()))?;
    let u = svd.u.ok_or_else(|| TalgError::Numeric("SVD lost U".into()))?;
    let v = svd
        .v_t
        .ok_or_else(|| TalgError::Numeric("SVD lost V".into()))?
        .adjoint();
    let sv = svd.singular_values;
    if sv.iter().any(|x| !x.is_finite()) {
        return Err(TalgError::Numeric("non-finite singular value".into()));
    }
    Ok((u, sv, v))
}

/// TSVD factors `(U, S, V)` with diagonal nonnegative t-scalar singular
/// values sorted into a descending chain under the partial order.
#[derive(Clone, Debug)]
pub struct TsvdFactors {
    pub u: TMatrix,
    pub s: Vec<TScalar>,
    pub v: TMatrix,
}

impl TsvdFactors {
    /// `U * diag(S) * V^*`.
    pub fn reconstruct(&self) -> Result<TMatrix> {
        self.u
            .matmul(&TMatrix::diag(&self.s)?)?
            .matmul(&self.v.conj_transpose())
    }
}
