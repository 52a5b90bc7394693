//! Complex vectors indexed by ℤ_d.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// A vector in ℂ^d viewed as a function on ℤ_d. Always has `d >= 2`
/// finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::BadDimension {
                d: entries.len(),
                reason: "dimension must be at least 2",
            });
        }
        if let Some(index) = entries
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFiniteEntry { index });
        }
        Ok(Self { entries })
    }

    /// Builds a vector from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(d: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); d])
    }

    /// Standard basis vector e_j.
    pub fn basis(d: usize, j: usize) -> Result<Self> {
        let mut entries = vec![Complex64::new(0.0, 0.0); d];
        if let Some(e) = entries.get_mut(j) {
            *e = Complex64::new(1.0, 0.0);
        }
        Self::new(entries)
    }

    /// Unit vector with i.i.d. complex Gaussian entries before normalization.
    pub fn random_unit<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        loop {
            let entries = (0..d)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re, im)
                })
                .collect();
            match Self::new(entries)?.normalized() {
                Err(Error::ZeroVector) => continue,
                other => return other,
            }
        }
    }

    /// Deterministic random unit vector for a given seed.
    pub fn random_unit_seeded(d: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_unit(d, &mut rng)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    /// Entry at `j mod d`.
    pub fn at(&self, j: isize) -> Complex64 {
        let d = self.dim() as isize;
        self.entries[j.rem_euclid(d) as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// Divides by `v(0)` so the result satisfies the gauge `v(0) = 1`.
    pub fn gauged(&self) -> Result<Self> {
        let v0 = self.entries[0];
        if v0.norm() <= f64::EPSILON * self.norm() || v0.norm() == 0.0 {
            return Err(Error::GaugeViolation {
                re: v0.re,
                im: v0.im,
            });
        }
        let mut out = self.scale(v0.inv());
        out.entries[0] = Complex64::new(1.0, 0.0);
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: f64, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b * c)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(-1.0, other)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    /// Inner product, linear in `self` and conjugate-linear in `other`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// Flattened `[re_0, im_0, re_1, im_1, ...]`.
    pub fn to_real_coords(&self) -> Vec<f64> {
        self.entries.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn from_real_coords(coords: &[f64]) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: coords.len() + 1,
                found: coords.len(),
            });
        }
        Self::new(
            coords
                .chunks_exact(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        )
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, j: usize) -> &Complex64 {
        &self.entries[j]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}
