//! The gauge-fixed variety of biangular Gabor seeds,
//! `C_d = { v : G(v) biangular, v(0) = 1 }`.
//!
//! Points are parameterized by the `2(d-1)` real coordinates
//! `[Re v(1), Im v(1), ..., Re v(d-1), Im v(d-1)]`. The defining equations are
//! differences of correlations against two reference entries: `a[1][0]` for
//! the translation class and `a[0][1]` for the modulated class. The adjoint
//! symmetry `a[k][ℓ] = a[-k][-ℓ]` makes about half of them redundant; they are
//! all kept since the least-squares solver does not mind.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gabor::{self, correlation_partials, RootsOfUnity, DEFAULT_BIANGULAR_TOL};
use crate::vector::ComplexVector;

/// Default threshold on the residual norm for a point to count as on the
/// variety.
pub const ON_VARIETY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Equation {
    /// `a[k][0] - a[1][0]`
    Translation { k: usize },
    /// `a[k][ℓ] - a[0][1]`
    Modulated { k: usize, l: usize },
}

/// Residual map for `C_d`.
#[derive(Clone, Debug)]
pub struct ResidualSystem {
    d: usize,
    roots: RootsOfUnity,
    equations: Vec<Equation>,
}

impl ResidualSystem {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadDimension {
                d,
                reason: "dimension must be at least 2",
            });
        }
        let mut equations: Vec<Equation> = (2..d).map(|k| Equation::Translation { k }).collect();
        for k in 0..d {
            for l in 1..d {
                if (k, l) != (0, 1) {
                    equations.push(Equation::Modulated { k, l });
                }
            }
        }
        Ok(Self {
            d,
            roots: RootsOfUnity::new(d),
            equations,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of residuals, `(d-2) + (d²-d-1)`.
    pub fn num_residuals(&self) -> usize {
        self.equations.len()
    }

    /// Number of free real variables, `2(d-1)`.
    pub fn num_vars(&self) -> usize {
        2 * (self.d - 1)
    }

    fn check(&self, v: &ComplexVector) -> Result<()> {
        if v.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: v.dim(),
            });
        }
        let v0 = v[0];
        if v0 != Complex64::new(1.0, 0.0) {
            return Err(Error::GaugeViolation {
                re: v0.re,
                im: v0.im,
            });
        }
        Ok(())
    }

    /// Free coordinates of a gauge-fixed vector.
    pub fn coords(&self, v: &ComplexVector) -> Result<Vec<f64>> {
        self.check(v)?;
        Ok(v.to_real_coords()[2..].to_vec())
    }

    /// Gauge-fixed vector `(1, x_0 + i x_1, ...)` from free coordinates.
    pub fn point(&self, coords: &[f64]) -> Result<ComplexVector> {
        if coords.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                found: coords.len(),
            });
        }
        let mut full = Vec::with_capacity(2 * self.d);
        full.extend_from_slice(&[1.0, 0.0]);
        full.extend_from_slice(coords);
        ComplexVector::from_real_coords(&full)
    }

    pub fn residuals(&self, v: &ComplexVector) -> Result<Vec<f64>> {
        self.check(v)?;
        let d = self.d;
        let a = |k: usize, l: usize| gabor::amplitude(&self.roots, v, k, l).norm_sqr();
        let alpha_ref = a(1, 0);
        let beta_ref = a(0, 1);
        Ok(self
            .equations
            .iter()
            .map(|eq| match *eq {
                Equation::Translation { k } => a(k, 0) - alpha_ref,
                Equation::Modulated { k, l } => a(k % d, l) - beta_ref,
            })
            .collect())
    }

    pub fn residual_norm(&self, v: &ComplexVector) -> Result<f64> {
        Ok(self.residuals(v)?.iter().map(|r| r * r).sum::<f64>().sqrt())
    }

    /// Analytic Jacobian of [`residuals`](Self::residuals) with respect to
    /// the free coordinates.
    pub fn jacobian(&self, v: &ComplexVector) -> Result<DMatrix<f64>> {
        self.check(v)?;
        let d = self.d;
        // row of ∂a[k][ℓ]/∂x over the free coordinates
        let grad = |k: usize, l: usize| -> Vec<f64> {
            let c = gabor::amplitude(&self.roots, v, k, l);
            let mut row = Vec::with_capacity(2 * (d - 1));
            for m in 1..d {
                let (gr, gi) = correlation_partials(&self.roots, v, c, k, l, m);
                row.push(gr);
                row.push(gi);
            }
            row
        };
        let alpha_ref = grad(1, 0);
        let beta_ref = grad(0, 1);
        let n = self.num_vars();
        let mut jac = DMatrix::zeros(self.num_residuals(), n);
        for (i, eq) in self.equations.iter().enumerate() {
            let (row, reference) = match *eq {
                Equation::Translation { k } => (grad(k, 0), &alpha_ref),
                Equation::Modulated { k, l } => (grad(k, l), &beta_ref),
            };
            for j in 0..n {
                jac[(i, j)] = row[j] - reference[j];
            }
        }
        Ok(jac)
    }
}

/// Moves `v` into the gauge `v(0) = 1`. When `|v(0)|` is negligible the
/// largest entry is first translated to index 0; `T^k v` has the same
/// correlation table as `v`, so biangularity and angles are unchanged.
pub fn gauge_fix(v: &ComplexVector) -> Result<ComplexVector> {
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    if v[0].norm() > 1e-8 * norm {
        return v.gauged();
    }
    let (j, _) = v
        .entries()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("d >= 2");
    gabor::translate(v, -(j as i64)).gauged()
}

/// A gauge-fixed vector together with its residual norm.
#[derive(Clone, Debug, PartialEq)]
pub struct VarietyPoint {
    pub v: ComplexVector,
    pub residual_norm: f64,
}

impl VarietyPoint {
    pub fn new(sys: &ResidualSystem, v: ComplexVector) -> Result<Self> {
        let residual_norm = sys.residual_norm(&v)?;
        Ok(Self { v, residual_norm })
    }

    pub fn is_on_variety(&self, tol: f64) -> bool {
        self.residual_norm <= tol
    }

    /// `β - α` of the normalized seed.
    pub fn delta(&self) -> f64 {
        delta(&self.v).expect("gauge-fixed vectors are nonzero")
    }
}

/// `Δ = β - α` computed on `v / ‖v‖`.
pub fn delta(v: &ComplexVector) -> Result<f64> {
    Ok(gabor::angles(&v.normalized()?)?.delta())
}

/// `|α + dβ - ‖v‖⁴|`, which vanishes on every biangular Gabor frame.
pub fn angle_balance_defect(v: &ComplexVector) -> Result<f64> {
    angle_balance_defect_with_tol(v, DEFAULT_BIANGULAR_TOL)
}

pub fn angle_balance_defect_with_tol(v: &ComplexVector, tol: f64) -> Result<f64> {
    let profile = gabor::angles(v)?;
    if !profile.is_biangular(tol) {
        return Err(Error::NotBiangular {
            spread: profile.max_spread() / profile.self_correlation,
            tol,
        });
    }
    let d = v.dim() as f64;
    Ok((profile.alpha + d * profile.beta - v.norm_sqr().powi(2)).abs())
}
