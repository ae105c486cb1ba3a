//! Multi-way discrete Fourier transform engine.
//!
//! The transform realizes the algebra isomorphism between circular
//! convolution and entrywise (Hadamard) multiplication: a t-scalar is an
//! order-N complex array, and its spectrum is obtained by applying the DFT
//! matrix along every mode. All modules downstream index spectra by the
//! canonical flat order: row-major over the multi-index, last index fastest.

use std::fmt;
use std::sync::Mutex;

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::FftPlanner;

use crate::error::{Result, TalgError};

/// The tuple of mode sizes defining the t-scalar algebra.
///
/// `K` is the product of the mode sizes; `N = 0` (an empty tuple) is allowed
/// and denotes the trivial algebra where t-scalars are plain complex numbers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TShape {
    dims: Vec<usize>,
}

impl TShape {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(TalgError::InvalidDimension(format!(
                "mode {} has size 0",
                pos + 1
            )));
        }
        Ok(Self {
            dims: dims.to_vec(),
        })
    }

    /// The trivial shape: `K = 1`, algebra reduces to the complex field.
    pub fn scalar() -> Self {
        Self { dims: Vec::new() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// Number of entries `K = I_1 * ... * I_N`.
    pub fn num_entries(&self) -> usize {
        self.dims.iter().product()
    }
}

impl fmt::Debug for TShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TShape{:?}", self.dims)
    }
}

/// A t-scalar in the Fourier domain: `K` complex values in canonical flat
/// order (last multi-index fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    shape: TShape,
    entries: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(shape: TShape, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != shape.num_entries() {
            return Err(TalgError::ShapeMismatch(format!(
                "spectrum has {} entries, shape {:?} requires {}",
                entries.len(),
                shape,
                shape.num_entries()
            )));
        }
        Ok(Self { shape, entries })
    }

    pub fn shape(&self) -> &TShape {
        &self.shape
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }
}

/// The `n x n` DFT matrix with entries `exp(-2*pi*i*(m1-1)*(m2-1)/n)`.
#[derive(Clone, Debug)]
pub struct FourierMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl FourierMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry at 0-based row/column.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

/// Build the DFT matrix for a single mode of size `n`.
pub fn fourier_matrix(n: usize) -> Result<FourierMatrix> {
    if n == 0 {
        return Err(TalgError::InvalidDimension(
            "Fourier matrix of size 0".into(),
        ));
    }
    let mut entries = Vec::with_capacity(n * n);
    for row in 0..n {
        for col in 0..n {
            // Reduce the exponent index mod n before multiplying to keep the
            // angle well inside f64 range for large products.
            let idx = (row * col) % n;
            let angle = -2.0 * std::f64::consts::PI * idx as f64 / n as f64;
            entries.push(Complex64::from_polar(1.0, angle));
        }
    }
    Ok(FourierMatrix { n, entries })
}

/// Forward multi-way DFT of a spatial array laid out in canonical flat order.
pub fn dft(shape: &TShape, spatial: &[Complex64]) -> Result<Spectrum> {
    if spatial.len() != shape.num_entries() {
        return Err(TalgError::ShapeMismatch(format!(
            "array has {} entries, shape {:?} requires {}",
            spatial.len(),
            shape,
            shape.num_entries()
        )));
    }
    let mut data = spatial.to_vec();
    transform_modes(shape.dims(), &mut data, 1, false);
    Spectrum::new(shape.clone(), data)
}

/// Inverse multi-way DFT, returning the spatial array.
pub fn idft(spectrum: &Spectrum) -> Vec<Complex64> {
    let mut data = spectrum.entries().to_vec();
    transform_modes(spectrum.shape().dims(), &mut data, 1, true);
    data
}

static PLANNER: Lazy<Mutex<FftPlanner<f64>>> = Lazy::new(|| Mutex::new(FftPlanner::new()));

/// Apply the (inverse) DFT along every mode of `dims`, treating `data` as an
/// array of shape `(dims..., batch)` in row-major order. The inverse path
/// folds the `1/K` normalization into a single final pass.
pub(crate) fn transform_modes(dims: &[usize], data: &mut [Complex64], batch: usize, inverse: bool) {
    debug_assert_eq!(data.len(), dims.iter().product::<usize>() * batch);
    let total = data.len();
    for (mode, &size) in dims.iter().enumerate() {
        if size == 1 {
            continue;
        }
        let plan = {
            let mut planner = PLANNER.lock().unwrap();
            if inverse {
                planner.plan_fft_inverse(size)
            } else {
                planner.plan_fft_forward(size)
            }
        };
        let post: usize = dims[mode + 1..].iter().product::<usize>() * batch;
        let pre = total / (size * post);
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        let mut fiber = vec![Complex64::default(); size];
        for p in 0..pre {
            let block = p * size * post;
            if post == 1 {
                let chunk = &mut data[block..block + size];
                plan.process_with_scratch(chunk, &mut scratch);
            } else {
                for q in 0..post {
                    for i in 0..size {
                        fiber[i] = data[block + i * post + q];
                    }
                    plan.process_with_scratch(&mut fiber, &mut scratch);
                    for i in 0..size {
                        data[block + i * post + q] = fiber[i];
                    }
                }
            }
        }
    }
    if inverse {
        let k: usize = dims.iter().product();
        if k > 1 {
            let scale = 1.0 / k as f64;
            for v in data.iter_mut() {
                *v *= scale;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Mode-product reference transform built directly from Fourier matrices.
    fn dft_by_mode_products(shape: &TShape, spatial: &[Complex64]) -> Vec<Complex64> {
        let dims = shape.dims();
        let mut data = spatial.to_vec();
        for (mode, &size) in dims.iter().enumerate() {
            let w = fourier_matrix(size).unwrap();
            let post: usize = dims[mode + 1..].iter().product();
            let pre: usize = dims[..mode].iter().product();
            let mut out = data.clone();
            for p in 0..pre {
                for q in 0..post {
                    for row in 0..size {
                        let mut acc = Complex64::default();
                        for colv in 0..size {
                            acc += w.entry(row, colv) * data[(p * size + colv) * post + q];
                        }
                        out[(p * size + row) * post + q] = acc;
                    }
                }
            }
            data = out;
        }
        data
    }

    fn pseudo_random(len: usize, seed: u64) -> Vec<Complex64> {
        // Small deterministic LCG; good enough for transform checks.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        (0..len).map(|_| c(next(), next())).collect()
    }

    #[test]
    fn fourier_matrix_size_one_is_identity() {
        let w = fourier_matrix(1).unwrap();
        assert_eq!(w.size(), 1);
        assert_relative_eq!(w.entry(0, 0).re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(w.entry(0, 0).im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn fourier_matrix_size_two_by_hand() {
        let w = fourier_matrix(2).unwrap();
        let expect = [[1.0, 1.0], [1.0, -1.0]];
        for r in 0..2 {
            for cidx in 0..2 {
                assert_relative_eq!(w.entry(r, cidx).re, expect[r][cidx], epsilon = 1e-14);
                assert_relative_eq!(w.entry(r, cidx).im, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn fourier_matrix_size_four_entry() {
        // (2,2) in 1-based indexing: exp(-2*pi*i/4) = -i.
        let w = fourier_matrix(4).unwrap();
        let e = w.entry(1, 1);
        assert_relative_eq!(e.re, 0.0, epsilon = 1e-14);
        assert_relative_eq!(e.im, -1.0, epsilon = 1e-14);
    }

    #[test]
    fn fourier_matrix_zero_rejected() {
        assert!(matches!(
            fourier_matrix(0),
            Err(TalgError::InvalidDimension(_))
        ));
    }

    #[test]
    fn fourier_matrix_unitary_up_to_scale() {
        for n in [2usize, 3, 4, 5, 8] {
            let w = fourier_matrix(n).unwrap();
            for r in 0..n {
                for cidx in 0..n {
                    let mut acc = Complex64::default();
                    for m in 0..n {
                        acc += w.entry(r, m) * w.entry(cidx, m).conj();
                    }
                    let expect = if r == cidx { n as f64 } else { 0.0 };
                    assert!((acc.re - expect).abs() < 1e-12 * n as f64);
                    assert!(acc.im.abs() < 1e-12 * n as f64);
                }
            }
        }
    }

    #[test]
    fn dft_two_point_by_hand() {
        let shape = TShape::new(&[2]).unwrap();
        let s = dft(&shape, &[c(3.0, 1.0), c(2.0, -1.0)]).unwrap();
        assert_relative_eq!(s.entries()[0].re, 5.0, epsilon = 1e-12);
        assert_relative_eq!(s.entries()[0].im, 0.0, epsilon = 1e-12);
        assert_relative_eq!(s.entries()[1].re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(s.entries()[1].im, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn delta_transforms_to_all_ones() {
        let shape = TShape::new(&[2, 3, 2]).unwrap();
        let mut x = vec![Complex64::default(); shape.num_entries()];
        x[0] = c(1.0, 0.0);
        let s = dft(&shape, &x).unwrap();
        for v in s.entries() {
            assert_relative_eq!(v.re, 1.0, epsilon = 1e-12);
            assert_relative_eq!(v.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let shape = TShape::new(&[2, 2]).unwrap();
        let s = dft(&shape, &vec![Complex64::default(); 4]).unwrap();
        assert!(s.entries().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn all_ones_spectrum_inverts_to_delta() {
        let shape = TShape::new(&[2]).unwrap();
        let s = Spectrum::new(shape, vec![c(1.0, 0.0); 2]).unwrap();
        let x = idft(&s);
        assert_relative_eq!(x[0].re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(x[1].re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn round_trip_identity() {
        for dims in [vec![], vec![1], vec![2], vec![3], vec![2, 3, 2], vec![4, 5]] {
            let shape = TShape::new(&dims).unwrap();
            let x = pseudo_random(shape.num_entries(), 7 + dims.len() as u64);
            let back = idft(&dft(&shape, &x).unwrap());
            let num: f64 = x
                .iter()
                .zip(&back)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let den: f64 = x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            assert!(num <= 1e-12 * den, "round trip error {num} vs norm {den}");
        }
    }

    #[test]
    fn spectrum_round_trip_identity() {
        let shape = TShape::new(&[3, 4]).unwrap();
        let s0 = Spectrum::new(shape.clone(), pseudo_random(12, 99)).unwrap();
        let s1 = dft(&shape, &idft(&s0)).unwrap();
        for (a, b) in s0.entries().iter().zip(s1.entries()) {
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn fast_path_agrees_with_mode_products() {
        for dims in [
            vec![1],
            vec![2],
            vec![3],
            vec![4],
            vec![5],
            vec![8],
            vec![2, 3],
            vec![3, 4, 5],
            vec![8, 2, 3],
            vec![5, 5],
        ] {
            let shape = TShape::new(&dims).unwrap();
            let x = pseudo_random(shape.num_entries(), 1234 + dims.len() as u64);
            let fast = dft(&shape, &x).unwrap();
            let slow = dft_by_mode_products(&shape, &x);
            let num: f64 = fast
                .entries()
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let den: f64 = slow.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            assert!(
                num <= 1e-10 * den.max(1e-30),
                "mode-product disagreement at {dims:?}: {num}"
            );
        }
    }

    #[test]
    fn dft_is_linear() {
        let shape = TShape::new(&[3, 3]).unwrap();
        let x = pseudo_random(9, 5);
        let y = pseudo_random(9, 6);
        let (alpha, beta) = (c(0.3, -1.2), c(2.0, 0.7));
        let combo: Vec<Complex64> = x
            .iter()
            .zip(&y)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let lhs = dft(&shape, &combo).unwrap();
        let sx = dft(&shape, &x).unwrap();
        let sy = dft(&shape, &y).unwrap();
        for ((l, a), b) in lhs.entries().iter().zip(sx.entries()).zip(sy.entries()) {
            let rhs = alpha * a + beta * b;
            assert!((l - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn norm_scaling_law() {
        let shape = TShape::new(&[2, 3, 2]).unwrap();
        let x = pseudo_random(12, 42);
        let s = dft(&shape, &x).unwrap();
        let spatial_norm: f64 = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let spectral_norm: f64 = s.entries().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let k = shape.num_entries() as f64;
        assert_relative_eq!(
            spatial_norm,
            spectral_norm / k.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn length_mismatch_rejected() {
        let shape = TShape::new(&[2, 2]).unwrap();
        assert!(matches!(
            dft(&shape, &[c(1.0, 0.0); 3]),
            Err(TalgError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn zero_dim_rejected() {
        assert!(TShape::new(&[2, 0, 3]).is_err());
    }
}
