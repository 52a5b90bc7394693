//! Heisenberg operators on ℂ^d, correlation tables, angle profiles and the
//! frame potential.
//!
//! Throughout, `⟨x, y⟩ = Σ_j x(j)·conj(y(j))` and the Gabor frame of `v` is
//! `{ M^ℓ T^k v : 0 ≤ k, ℓ < d }` with `(Tv)(j) = v(j-1)` and
//! `(Mv)(j) = ω^j v(j)`, `ω = e^{2πi/d}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vector::ComplexVector;

/// Default tolerance on angle spreads for the biangularity predicate.
pub const DEFAULT_BIANGULAR_TOL: f64 = 1e-9;

/// Tolerance on `‖v‖ - 1` accepted by [`frame_potential`].
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// The d-th roots of unity `ω^0, ..., ω^{d-1}`, each evaluated directly
/// from its angle.
#[derive(Clone, Debug)]
pub struct RootsOfUnity {
    powers: Vec<Complex64>,
}

impl RootsOfUnity {
    pub fn new(d: usize) -> Self {
        let powers = (0..d)
            .map(|j| {
                // exact values at the quarter turns
                match (4 * j) % d {
                    0 => match (4 * j) / d {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, 1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, -1.0),
                    },
                    _ => Complex64::from_polar(1.0, 2.0 * PI * j as f64 / d as f64),
                }
            })
            .collect();
        Self { powers }
    }

    pub fn dim(&self) -> usize {
        self.powers.len()
    }

    /// `ω^e` for any integer exponent.
    pub fn pow(&self, e: i64) -> Complex64 {
        let d = self.powers.len() as i64;
        self.powers[e.rem_euclid(d) as usize]
    }
}

/// `(T^k v)(j) = v(j - k)`.
pub fn translate(v: &ComplexVector, k: i64) -> ComplexVector {
    let d = v.dim() as i64;
    let entries = (0..d).map(|j| v.at((j - k) as isize)).collect();
    ComplexVector::new(entries).expect("translation preserves dimension and finiteness")
}

/// `(M^ℓ v)(j) = ω^{jℓ} v(j)`.
pub fn modulate(v: &ComplexVector, l: i64) -> ComplexVector {
    let roots = RootsOfUnity::new(v.dim());
    modulate_with(&roots, v, l)
}

fn modulate_with(roots: &RootsOfUnity, v: &ComplexVector, l: i64) -> ComplexVector {
    let entries = v
        .entries()
        .iter()
        .enumerate()
        .map(|(j, z)| roots.pow(j as i64 * l) * z)
        .collect();
    ComplexVector::new(entries).expect("modulation preserves dimension and finiteness")
}

/// The frame element `M^ℓ T^k v`.
pub fn heisenberg(v: &ComplexVector, k: i64, l: i64) -> ComplexVector {
    modulate(&translate(v, k), l)
}

/// Correlation amplitude `⟨v, M^ℓ T^k v⟩ = Σ_j v(j)·conj(v(j-k))·ω^{-jℓ}`.
pub(crate) fn amplitude(roots: &RootsOfUnity, v: &ComplexVector, k: usize, l: usize) -> Complex64 {
    let d = v.dim();
    (0..d)
        .map(|j| {
            let p = v[j] * v[(j + d - k % d) % d].conj();
            p * roots.pow(-((j * l) as i64))
        })
        .sum()
}

/// All `d²` amplitudes, row-major in `(k, ℓ)`.
pub(crate) fn amplitudes(roots: &RootsOfUnity, v: &ComplexVector) -> Vec<Complex64> {
    let d = v.dim();
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            out.push(amplitude(roots, v, k, l));
        }
    }
    out
}

/// Gradient of `|⟨v, M^ℓ T^k v⟩|²` with respect to `(Re v(m), Im v(m))`,
/// given the amplitude `c` at `(k, ℓ)`.
pub(crate) fn correlation_partials(
    roots: &RootsOfUnity,
    v: &ComplexVector,
    c: Complex64,
    k: usize,
    l: usize,
    m: usize,
) -> (f64, f64) {
    let d = v.dim();
    // c = Σ_j v(j) conj(v(j-k)) ω^{-jℓ}; v(m) enters as v(j) at j = m and
    // as conj(v(j-k)) at j = m + k.
    let a = v[(m + d - k % d) % d].conj() * roots.pow(-((m * l) as i64));
    let b = v[(m + k) % d] * roots.pow(-(((m + k) * l) as i64));
    let cc = c.conj();
    let d_re = 2.0 * (cc * (a + b)).re;
    let d_im = -2.0 * (cc * (a - b)).im;
    (d_re, d_im)
}

/// The `d × d` table `a[k][ℓ] = |⟨v, M^ℓ T^k v⟩|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTable {
    d: usize,
    a: Vec<f64>,
}

impl CorrelationTable {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// `a[k mod d][ℓ mod d]`.
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.a[(k % self.d) * self.d + l % self.d]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.a.chunks_exact(self.d)
    }

    pub fn total(&self) -> f64 {
        self.a.iter().sum()
    }

    /// Translation-only correlations `a[k][0]`, `k ≠ 0`.
    pub fn alpha_class(&self) -> impl Iterator<Item = f64> + '_ {
        (1..self.d).map(move |k| self.get(k, 0))
    }

    /// Modulated correlations `a[k][ℓ]`, `ℓ ≠ 0`, row-major.
    pub fn beta_class(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.d).flat_map(move |k| (1..self.d).map(move |l| self.get(k, l)))
    }
}

pub fn correlation_table(v: &ComplexVector) -> Result<CorrelationTable> {
    correlation_table_with(&RootsOfUnity::new(v.dim()), v)
}

pub(crate) fn correlation_table_with(
    roots: &RootsOfUnity,
    v: &ComplexVector,
) -> Result<CorrelationTable> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let a = amplitudes(roots, v)
        .iter()
        .map(Complex64::norm_sqr)
        .collect();
    Ok(CorrelationTable { d: v.dim(), a })
}

/// Means and spreads of the two angle classes of a correlation table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleProfile {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_spread: f64,
    pub beta_spread: f64,
    /// `a[0][0] = ‖v‖⁴`, the scale the other entries are measured against.
    pub self_correlation: f64,
}

impl AngleProfile {
    pub fn from_table(table: &CorrelationTable) -> Self {
        let (alpha, alpha_spread) = mean_and_spread(table.alpha_class());
        let (beta, beta_spread) = mean_and_spread(table.beta_class());
        Self {
            alpha,
            beta,
            alpha_spread,
            beta_spread,
            self_correlation: table.get(0, 0),
        }
    }

    pub fn max_spread(&self) -> f64 {
        self.alpha_spread.max(self.beta_spread)
    }

    /// Biangular when both spreads are within `tol` relative to `‖v‖⁴`.
    pub fn is_biangular(&self, tol: f64) -> bool {
        self.max_spread() <= tol * self.self_correlation
    }

    /// `β - α`.
    pub fn delta(&self) -> f64 {
        self.beta - self.alpha
    }
}

fn mean_and_spread(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut sum, mut n, mut lo, mut hi) = (0.0, 0usize, f64::INFINITY, f64::NEG_INFINITY);
    for x in values {
        sum += x;
        n += 1;
        lo = lo.min(x);
        hi = hi.max(x);
    }
    (sum / n as f64, hi - lo)
}

pub fn angles(v: &ComplexVector) -> Result<AngleProfile> {
    Ok(AngleProfile::from_table(&correlation_table(v)?))
}

/// `(1/d) Σ_{k,ℓ} a[k][ℓ]²` for a unit-norm `v`. Bounded below by `2/(d+1)`
/// with equality exactly at fiducial vectors.
pub fn frame_potential(v: &ComplexVector) -> Result<f64> {
    let norm = v.norm();
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::NotUnitNorm { norm });
    }
    let table = correlation_table(v)?;
    Ok(potential_of_table(&table))
}

pub(crate) fn potential_of_table(table: &CorrelationTable) -> f64 {
    table.as_slice().iter().map(|a| a * a).sum::<f64>() / table.dim() as f64
}

/// The lower bound `2/(d+1)` on the frame potential of unit vectors.
pub fn potential_lower_bound(d: usize) -> f64 {
    2.0 / (d as f64 + 1.0)
}

/// Potential `(1/d) Σ a²` and its Euclidean gradient in the flattened real
/// coordinates `[re_0, im_0, ...]`. No norm precondition.
pub fn frame_potential_and_gradient(v: &ComplexVector) -> (f64, Vec<f64>) {
    let d = v.dim();
    let roots = RootsOfUnity::new(d);
    let amps = amplitudes(&roots, v);
    let scale = 1.0 / d as f64;
    let mut value = 0.0;
    let mut grad = vec![0.0; 2 * d];
    for k in 0..d {
        for l in 0..d {
            let c = amps[k * d + l];
            let a = c.norm_sqr();
            value += a * a;
            for m in 0..d {
                let (gr, gi) = correlation_partials(&roots, v, c, k, l, m);
                grad[2 * m] += 2.0 * a * gr;
                grad[2 * m + 1] += 2.0 * a * gi;
            }
        }
    }
    grad.iter_mut().for_each(|g| *g *= scale);
    (value * scale, grad)
}

/// `|Σ_{k,ℓ} |⟨x, M^ℓ T^k v⟩|² - d‖v‖²‖x‖²|`, which vanishes because every
/// Gabor frame is tight.
pub fn tightness_defect(v: &ComplexVector, x: &ComplexVector) -> Result<f64> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if v.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: x.dim(),
        });
    }
    let d = v.dim();
    let roots = RootsOfUnity::new(d);
    let mut sum = 0.0;
    for k in 0..d as i64 {
        let shifted = translate(v, k);
        for l in 0..d as i64 {
            sum += x.inner(&modulate_with(&roots, &shifted, l)).norm_sqr();
        }
    }
    Ok((sum - d as f64 * v.norm_sqr() * x.norm_sqr()).abs())
}
