//! The t-scalar algebra: arithmetic, conjugation, the nonnegative cone and
//! its partial order, roots, norms, inner products, and idempotents.
//!
//! Values are immutable and carry both representations lazily: whichever of
//! the spatial array / spectrum is missing gets filled on first use. All
//! multiplicative, order, root, and rank operations act on the spectrum.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Result, TalgError};
use crate::spectral::{self, Spectrum, TShape};

/// Absolute floor under the relative cone tolerance.
const CONE_ABS_FLOOR: f64 = 1e-12;
/// Absolute floor under the relative rank cutoff.
pub(crate) const RANK_ABS_FLOOR: f64 = 1e-14;

/// Numerical tolerances shared across the library.
#[derive(Clone, Debug)]
pub struct ToleranceProfile {
    /// Relative tolerance for t-scalar equality (Frobenius, on spectra).
    pub eq_tol: f64,
    /// Tolerance for nonnegativity / imaginary-part checks, relative to the
    /// maximum spectral magnitude with an absolute floor of `1e-12`.
    pub cone_tol: f64,
    /// Singular-value cutoff factor; `None` means machine epsilon times the
    /// larger matrix dimension, the usual numerical-rank convention.
    pub rank_tol_factor: Option<f64>,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            eq_tol: 1e-10,
            cone_tol: 1e-10,
            rank_tol_factor: None,
        }
    }
}

impl ToleranceProfile {
    pub fn validate(&self) -> Result<()> {
        let ok = self.eq_tol > 0.0
            && self.cone_tol > 0.0
            && self.rank_tol_factor.map_or(true, |f| f > 0.0);
        if ok {
            Ok(())
        } else {
            Err(TalgError::Domain("tolerances must be positive".into()))
        }
    }

    /// Threshold below which a spectral magnitude counts as zero.
    pub(crate) fn cone_threshold(&self, max_magnitude: f64) -> f64 {
        (self.cone_tol * max_magnitude).max(CONE_ABS_FLOOR)
    }

    /// Singular-value cutoff for a slice of an `m1 x m2` matrix.
    pub(crate) fn rank_cutoff(&self, m1: usize, m2: usize, sigma_max: f64) -> f64 {
        let factor = self
            .rank_tol_factor
            .unwrap_or(f64::EPSILON * m1.max(m2) as f64);
        (factor * sigma_max).max(RANK_ABS_FLOOR)
    }
}

/// One element of the t-scalar algebra.
#[derive(Debug)]
pub struct TScalar {
    shape: TShape,
    spatial: OnceLock<Vec<Complex64>>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl Clone for TScalar {
    fn clone(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            spatial: self.spatial.clone(),
            spectrum: self.spectrum.clone(),
        }
    }
}

/// The additive identity.
pub fn zero(shape: &TShape) -> TScalar {
    let k = shape.num_entries();
    let t = TScalar::new(shape.clone());
    let _ = t.spatial.set(vec![Complex64::default(); k]);
    let _ = t.spectrum.set(vec![Complex64::default(); k]);
    t
}

/// The multiplicative identity: inception entry 1, all other entries 0.
pub fn one(shape: &TShape) -> TScalar {
    let k = shape.num_entries();
    let mut delta = vec![Complex64::default(); k];
    delta[0] = Complex64::new(1.0, 0.0);
    let t = TScalar::new(shape.clone());
    let _ = t.spatial.set(delta);
    let _ = t.spectrum.set(vec![Complex64::new(1.0, 0.0); k]);
    t
}

impl TScalar {
    fn new(shape: TShape) -> Self {
        Self {
            shape,
            spatial: OnceLock::new(),
            spectrum: OnceLock::new(),
        }
    }

    pub fn from_spatial(shape: TShape, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != shape.num_entries() {
            return Err(TalgError::ShapeMismatch(format!(
                "{} spatial entries for shape {:?}",
                entries.len(),
                shape
            )));
        }
        let t = Self::new(shape);
        let _ = t.spatial.set(entries);
        Ok(t)
    }

    pub fn from_spectrum(shape: TShape, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != shape.num_entries() {
            return Err(TalgError::ShapeMismatch(format!(
                "{} spectral entries for shape {:?}",
                entries.len(),
                shape
            )));
        }
        let t = Self::new(shape);
        let _ = t.spectrum.set(entries);
        Ok(t)
    }

    pub fn from_real_spatial(shape: TShape, entries: &[f64]) -> Result<Self> {
        Self::from_spatial(
            shape,
            entries.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        )
    }

    pub fn shape(&self) -> &TShape {
        &self.shape
    }

    /// Spatial entries in canonical flat order, materialized on demand.
    pub fn spatial(&self) -> &[Complex64] {
        self.spatial.get_or_init(|| {
            let spec = self
                .spectrum
                .get()
                .expect("t-scalar holds at least one representation");
            let s = Spectrum::new(self.shape.clone(), spec.clone()).expect("consistent length");
            spectral::idft(&s)
        })
    }

    /// Spectral entries in canonical flat order, materialized on demand.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| {
            let spatial = self
                .spatial
                .get()
                .expect("t-scalar holds at least one representation");
            spectral::dft(&self.shape, spatial)
                .expect("consistent length")
                .into_entries()
        })
    }

    fn check_shape(&self, other: &TScalar) -> Result<()> {
        if self.shape != other.shape {
            return Err(TalgError::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }

    fn map_spectrum(&self, f: impl Fn(Complex64) -> Complex64) -> TScalar {
        let entries = self.spectrum().iter().map(|&v| f(v)).collect();
        TScalar::from_spectrum(self.shape.clone(), entries).expect("length preserved")
    }

    fn zip_spectrum(
        &self,
        other: &TScalar,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<TScalar> {
        self.check_shape(other)?;
        let entries = self
            .spectrum()
            .iter()
            .zip(other.spectrum())
            .map(|(&a, &b)| f(a, b))
            .collect();
        TScalar::from_spectrum(self.shape.clone(), entries)
    }

    pub fn add(&self, other: &TScalar) -> Result<TScalar> {
        self.zip_spectrum(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TScalar) -> Result<TScalar> {
        self.zip_spectrum(other, |a, b| a - b)
    }

    pub fn negate(&self) -> TScalar {
        self.map_spectrum(|v| -v)
    }

    pub fn scale(&self, lambda: Complex64) -> TScalar {
        self.map_spectrum(|v| lambda * v)
    }

    /// Circular-convolution product; entrywise in the spectral domain.
    pub fn mul(&self, other: &TScalar) -> Result<TScalar> {
        self.zip_spectrum(other, |a, b| a * b)
    }

    /// `p`-fold product; `p = 0` returns the identity.
    pub fn pow(&self, p: u32) -> TScalar {
        if p == 0 {
            return one(&self.shape);
        }
        self.map_spectrum(|v| v.powu(p))
    }

    /// The conjugation antiautomorphism; entrywise conjugation of the
    /// spectrum, equivalently index reflection plus conjugation in space.
    pub fn conj(&self) -> TScalar {
        self.map_spectrum(|v| v.conj())
    }

    fn max_spectral_magnitude(&self) -> f64 {
        self.spectrum().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_self_conjugate(&self, tol: &ToleranceProfile) -> bool {
        let thr = tol.cone_threshold(self.max_spectral_magnitude());
        self.spectrum().iter().all(|v| v.im.abs() <= thr)
    }

    /// Real part `(x + conj(x)) / 2`.
    pub fn re(&self) -> TScalar {
        self.map_spectrum(|v| Complex64::new(v.re, 0.0))
    }

    /// Imaginary part `(x - conj(x)) / (2i)`.
    pub fn im(&self) -> TScalar {
        self.map_spectrum(|v| Complex64::new(v.im, 0.0))
    }

    fn require_self_conjugate(&self, tol: &ToleranceProfile) -> Result<()> {
        if self.is_self_conjugate(tol) {
            Ok(())
        } else {
            Err(TalgError::Domain(
                "operand is not self-conjugate within tolerance".into(),
            ))
        }
    }

    /// Membership in the nonnegative cone: real spectrum with nonnegative
    /// entries, both up to the cone tolerance.
    pub fn is_nonnegative(&self, tol: &ToleranceProfile) -> Result<bool> {
        self.require_self_conjugate(tol)?;
        let thr = tol.cone_threshold(self.max_spectral_magnitude());
        Ok(self.spectrum().iter().all(|v| v.re >= -thr))
    }

    /// The partial order: `x <= y` iff `y - x` is nonnegative. Incomparable
    /// pairs answer `false` in both directions.
    pub fn partial_le(&self, other: &TScalar, tol: &ToleranceProfile) -> Result<bool> {
        self.require_self_conjugate(tol)?;
        other.require_self_conjugate(tol)?;
        other.sub(self)?.is_nonnegative(tol)
    }

    /// Unique nonnegative `p`-th root of a nonnegative t-scalar.
    pub fn nth_root(&self, p: u32, tol: &ToleranceProfile) -> Result<TScalar> {
        if p == 0 {
            return Err(TalgError::InvalidDimension("0-th root".into()));
        }
        if !self.is_nonnegative(tol)? {
            return Err(TalgError::Domain(
                "nth_root requires a nonnegative t-scalar".into(),
            ));
        }
        // Residual negatives inside the cone tolerance clamp to zero; the
        // comparisons above never clamp.
        Ok(self.map_spectrum(|v| Complex64::new(v.re.max(0.0).powf(1.0 / p as f64), 0.0)))
    }

    /// Absolute value `sqrt(conj(x) * x)`: entrywise spectral magnitudes.
    pub fn abs_r(&self) -> TScalar {
        self.map_spectrum(|v| Complex64::new(v.norm(), 0.0))
    }

    /// Algebra-valued inner product `conj(x) * y`.
    pub fn psi(&self, other: &TScalar) -> Result<TScalar> {
        self.zip_spectrum(other, |a, b| a.conj() * b)
    }

    /// Canonical sesquilinear form: sum of `conj(x_i) * y_i` over spatial
    /// entries (conjugate-linear in the first argument).
    pub fn inner_canonical(&self, other: &TScalar) -> Result<Complex64> {
        self.check_shape(other)?;
        Ok(self
            .spatial()
            .iter()
            .zip(other.spatial())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Relative Frobenius comparison of spectra.
    pub fn approx_eq(&self, other: &TScalar, eq_tol: f64) -> bool {
        if self.shape != other.shape {
            return false;
        }
        let diff: f64 = self
            .spectrum()
            .iter()
            .zip(other.spectrum())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let na: f64 = self.spectrum().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let nb: f64 = other.spectrum().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let scale = na.max(nb);
        if scale == 0.0 {
            return true;
        }
        diff <= eq_tol * scale
    }

    pub fn is_zero(&self, tol: &ToleranceProfile) -> bool {
        self.approx_eq(&zero(&self.shape), tol.eq_tol)
    }

    pub fn is_idempotent(&self, tol: &ToleranceProfile) -> bool {
        let thr = tol.cone_threshold(self.max_spectral_magnitude().max(1.0));
        self.spectrum()
            .iter()
            .all(|v| v.norm() <= thr || (v - Complex64::new(1.0, 0.0)).norm() <= thr)
    }

    pub fn is_invertible(&self, tol: &ToleranceProfile) -> bool {
        let thr = tol.cone_threshold(self.max_spectral_magnitude());
        self.spectrum().iter().all(|v| v.norm() > thr)
    }

    /// Entrywise spectral reciprocal; fails listing the dead slices.
    pub fn invert(&self, tol: &ToleranceProfile) -> Result<TScalar> {
        let thr = tol.cone_threshold(self.max_spectral_magnitude());
        let dead: Vec<usize> = self
            .spectrum()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() <= thr)
            .map(|(k, _)| k + 1)
            .collect();
        if !dead.is_empty() {
            return Err(TalgError::SingularSlices(dead));
        }
        Ok(self.map_spectrum(|v| v.inv()))
    }

    /// Rank of a t-scalar: the idempotent marking its invertible slices.
    pub fn rank(&self, tol: &ToleranceProfile) -> TScalar {
        let thr = tol.cone_threshold(self.max_spectral_magnitude());
        self.map_spectrum(|v| {
            if v.norm() > thr {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        })
    }
}

/// The `K` primitive idempotents of a shape, in canonical slice order.
#[derive(Clone, Debug)]
pub struct IdempotentSet {
    shape: TShape,
    members: Vec<TScalar>,
}

impl IdempotentSet {
    pub fn shape(&self) -> &TShape {
        &self.shape
    }

    pub fn members(&self) -> &[TScalar] {
        &self.members
    }

    /// 1-based accessor matching the slice numbering.
    pub fn get(&self, k: usize) -> Result<&TScalar> {
        self.members
            .get(k.checked_sub(1).ok_or_else(|| {
                TalgError::IndexOutOfRange("idempotent index starts at 1".into())
            })?)
            .ok_or_else(|| {
                TalgError::IndexOutOfRange(format!("{k} > K = {}", self.members.len()))
            })
    }
}

/// The primitive idempotents: `Q_k` has the k-th standard basis spectrum.
pub fn primitive_idempotents(shape: &TShape) -> IdempotentSet {
    let k = shape.num_entries();
    let members = (0..k)
        .map(|i| {
            let mut spec = vec![Complex64::default(); k];
            spec[i] = Complex64::new(1.0, 0.0);
            TScalar::from_spectrum(shape.clone(), spec).expect("length matches")
        })
        .collect();
    IdempotentSet {
        shape: shape.clone(),
        members,
    }
}

/// The k-th complex coordinate of `y` in the orthogonality series,
/// `K * <Q_k, y>` with the canonical inner product (1-based `k`).
pub fn tau(k: usize, y: &TScalar) -> Result<Complex64> {
    let big_k = y.shape().num_entries();
    if k == 0 || k > big_k {
        return Err(TalgError::IndexOutOfRange(format!("{k} not in 1..={big_k}")));
    }
    let mut spec = vec![Complex64::default(); big_k];
    spec[k - 1] = Complex64::new(1.0, 0.0);
    let q = TScalar::from_spectrum(y.shape().clone(), spec)?;
    Ok(q.inner_canonical(y)? * big_k as f64)
}

/// All `K` series coordinates of `y`. These coincide with the spectrum
/// entries; `tau` evaluates the defining inner product directly and the two
/// routes are cross-checked in tests.
pub fn series_coords(y: &TScalar) -> Vec<Complex64> {
    y.spectrum().to_vec()
}
