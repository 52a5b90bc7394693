//! Local solvers: Levenberg–Marquardt on the variety residuals, projected
//! gradient descent of the frame potential on the unit sphere, and bisection
//! of `Δ = β - α` between two variety points.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gabor::{frame_potential_and_gradient, potential_lower_bound};
use crate::variety::{delta, ResidualSystem, VarietyPoint, ON_VARIETY_TOL};
use crate::vector::ComplexVector;

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    /// Stop once `‖Jᵀr‖` falls below this.
    pub grad_tol: f64,
    /// Stop once `‖r‖` falls below this.
    pub residual_tol: f64,
    pub initial_damping: f64,
    /// Damping multiplier after a rejected step.
    pub damping_up: f64,
    /// Damping multiplier after an accepted step.
    pub damping_down: f64,
    /// Largest Euclidean step length in the free coordinates.
    pub step_limit: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iters: 200,
            grad_tol: 1e-15,
            residual_tol: 1e-13,
            initial_damping: 1e-3,
            damping_up: 10.0,
            damping_down: 0.1,
            step_limit: 0.5,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.grad_tol,
            self.residual_tol,
            self.initial_damping,
            self.damping_up,
            self.damping_down,
            self.step_limit,
        ];
        if self.max_iters == 0 || positive.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::BadConfig(
                "optimizer tolerances must be positive and max_iters >= 1",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    ResidualTol,
    GradTol,
    MaxIters,
    Stalled,
    NonFinite,
}

#[derive(Clone, Debug)]
pub struct OptimizeReport {
    pub v_final: ComplexVector,
    /// `‖r‖` for residual minimization; `potential - 2/(d+1)` for the
    /// frame-potential search.
    pub residual_norm: f64,
    /// Final objective value: `½‖r‖²` or the frame potential.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
}

const MAX_DAMPING: f64 = 1e20;
const MIN_DAMPING: f64 = 1e-20;

/// Damped Gauss–Newton on `½‖r(x)‖²` over the free coordinates of `C_d`.
/// Accepted steps strictly decrease the objective.
pub fn minimize_residual(
    sys: &ResidualSystem,
    v0: &ComplexVector,
    cfg: &OptimizerConfig,
) -> Result<OptimizeReport> {
    cfg.validate()?;
    let mut x = DVector::from_vec(sys.coords(v0)?);
    let eval = |x: &DVector<f64>| -> Result<(ComplexVector, DVector<f64>)> {
        let v = sys.point(x.as_slice())?;
        let r = DVector::from_vec(sys.residuals(&v)?);
        Ok((v, r))
    };

    let (mut v, mut r) = eval(&x)?;
    let mut cost = 0.5 * r.norm_squared();
    let report = |v: ComplexVector, r: &DVector<f64>, iterations, termination| OptimizeReport {
        v_final: v,
        residual_norm: r.norm(),
        objective: 0.5 * r.norm_squared(),
        iterations,
        converged: matches!(termination, Termination::ResidualTol | Termination::GradTol),
        termination,
    };
    if !cost.is_finite() {
        return Ok(report(v, &r, 0, Termination::NonFinite));
    }

    let n = sys.num_vars();
    let mut damping = cfg.initial_damping;
    for iter in 0..cfg.max_iters {
        if r.norm() <= cfg.residual_tol {
            return Ok(report(v, &r, iter, Termination::ResidualTol));
        }
        let jac: DMatrix<f64> = sys.jacobian(&v)?;
        let grad = jac.tr_mul(&r);
        if grad.norm() <= cfg.grad_tol {
            return Ok(report(v, &r, iter, Termination::GradTol));
        }
        let normal = jac.tr_mul(&jac);

        let accepted = loop {
            if damping > MAX_DAMPING {
                break None;
            }
            let mut lhs = normal.clone();
            for i in 0..n {
                lhs[(i, i)] += damping;
            }
            let Some(chol) = lhs.cholesky() else {
                damping *= cfg.damping_up;
                continue;
            };
            let mut step = -chol.solve(&grad);
            let len = step.norm();
            if len > cfg.step_limit {
                step *= cfg.step_limit / len;
            }
            let x_new = &x + &step;
            if let Ok((v_new, r_new)) = eval(&x_new) {
                let cost_new = 0.5 * r_new.norm_squared();
                if cost_new.is_finite() && cost_new < cost {
                    damping = (damping * cfg.damping_down).max(MIN_DAMPING);
                    break Some((x_new, v_new, r_new, cost_new, step.norm()));
                }
            }
            damping *= cfg.damping_up;
        };

        match accepted {
            Some((x_new, v_new, r_new, cost_new, step_len)) => {
                x = x_new;
                v = v_new;
                r = r_new;
                cost = cost_new;
                if step_len <= f64::EPSILON * (1.0 + x.norm()) {
                    return Ok(report(v, &r, iter + 1, Termination::Stalled));
                }
            }
            None => return Ok(report(v, &r, iter + 1, Termination::Stalled)),
        }
    }
    Ok(report(v, &r, cfg.max_iters, Termination::MaxIters))
}

/// Settings for the multi-start frame-potential search.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop a run once the Riemannian gradient norm falls below this.
    pub grad_tol: f64,
    /// A run succeeds when `potential - 2/(d+1) <= potential_tol`.
    pub potential_tol: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iters: 20_000,
            grad_tol: 1e-11,
            potential_tol: 1e-9,
            armijo: 1e-4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    /// Best run; `residual_norm` holds `potential - 2/(d+1)`.
    pub best: OptimizeReport,
    pub potential: f64,
    pub restarts_used: usize,
}

impl SearchReport {
    pub fn gap(&self) -> f64 {
        self.best.residual_norm
    }
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed.wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Multi-start minimization of the frame potential over unit vectors in ℂ^d.
/// Restarts stop early once one run reaches `potential_tol`.
pub fn minimize_frame_potential(d: usize, seed: u64, cfg: &SearchConfig) -> Result<SearchReport> {
    if d < 2 {
        return Err(Error::BadDimension {
            d,
            reason: "dimension must be at least 2",
        });
    }
    if cfg.restarts == 0 || cfg.max_iters == 0 {
        return Err(Error::BadConfig("restarts and max_iters must be >= 1"));
    }
    let mut best: Option<OptimizeReport> = None;
    let mut used = 0;
    for restart in 0..cfg.restarts {
        used = restart + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(seed, restart));
        let start = ComplexVector::random_unit(d, &mut rng)?;
        let run = descend_on_sphere(start, cfg)?;
        let better = best.as_ref().is_none_or(|b| run.objective < b.objective);
        if better {
            best = Some(run);
        }
        if best.as_ref().is_some_and(|b| b.converged) {
            break;
        }
    }
    let best = best.expect("at least one restart");
    Ok(SearchReport {
        potential: best.objective,
        best,
        restarts_used: used,
    })
}

/// Projected gradient with renormalization retraction and Armijo
/// backtracking.
fn descend_on_sphere(start: ComplexVector, cfg: &SearchConfig) -> Result<OptimizeReport> {
    let d = start.dim();
    let bound = potential_lower_bound(d);
    let mut v = start;
    let (mut value, mut grad) = frame_potential_and_gradient(&v);
    let mut step = 1.0;
    let finish = |v: ComplexVector, value: f64, iterations, termination| OptimizeReport {
        v_final: v,
        residual_norm: value - bound,
        objective: value,
        iterations,
        converged: value - bound <= cfg.potential_tol,
        termination,
    };

    for iter in 0..cfg.max_iters {
        let x = v.to_real_coords();
        let radial: f64 = x.iter().zip(&grad).map(|(a, b)| a * b).sum();
        let tangent: Vec<f64> = grad.iter().zip(&x).map(|(g, xi)| g - radial * xi).collect();
        let tnorm2: f64 = tangent.iter().map(|t| t * t).sum();
        if tnorm2.sqrt() <= cfg.grad_tol {
            return Ok(finish(v, value, iter, Termination::GradTol));
        }
        let mut t = step;
        let accepted = loop {
            let trial: Vec<f64> = x.iter().zip(&tangent).map(|(xi, g)| xi - t * g).collect();
            let candidate = ComplexVector::from_real_coords(&trial)
                .and_then(|c| c.normalized())
                .ok();
            if let Some(c) = candidate {
                let (cv, cg) = frame_potential_and_gradient(&c);
                if cv <= value - cfg.armijo * t * tnorm2 {
                    break Some((c, cv, cg));
                }
                // Near the minimum the sufficient decrease drops below the
                // rounding of the potential; then require a smaller gradient.
                let flat = (cv - value).abs() <= 8.0 * f64::EPSILON * value;
                if flat && tangent_norm_sqr(&c, &cg) < tnorm2 {
                    break Some((c, cv, cg));
                }
            }
            t *= 0.5;
            if t < 1e-20 {
                break None;
            }
        };
        match accepted {
            Some((c, cv, cg)) => {
                v = c;
                value = cv;
                grad = cg;
                step = 2.0 * t;
            }
            None => return Ok(finish(v, value, iter + 1, Termination::Stalled)),
        }
    }
    Ok(finish(v, value, cfg.max_iters, Termination::MaxIters))
}

fn tangent_norm_sqr(v: &ComplexVector, grad: &[f64]) -> f64 {
    let x = v.to_real_coords();
    let radial: f64 = x.iter().zip(grad).map(|(a, b)| a * b).sum();
    grad.iter()
        .zip(&x)
        .map(|(g, xi)| (g - radial * xi).powi(2))
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefineConfig {
    /// Stop when `|Δ| <= delta_tol`.
    pub delta_tol: f64,
    pub on_variety_tol: f64,
    pub max_bisections: usize,
    pub optimizer: OptimizerConfig,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            delta_tol: 1e-10,
            on_variety_tol: ON_VARIETY_TOL,
            max_bisections: 60,
            optimizer: OptimizerConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Refinement {
    pub point: VarietyPoint,
    pub delta: f64,
    pub bisections: usize,
}

/// Bisects a bracket of `Δ = β - α` along the variety. Each midpoint is the
/// average of the bracket ends re-projected with [`minimize_residual`].
pub fn refine_sic(
    sys: &ResidualSystem,
    lo: &VarietyPoint,
    hi: &VarietyPoint,
    cfg: &RefineConfig,
) -> Result<Refinement> {
    for end in [lo, hi] {
        if end.residual_norm > cfg.on_variety_tol {
            return Err(Error::ProjectionLost {
                residual: end.residual_norm,
            });
        }
    }
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let mut d_lo = lo.delta();
    let d_hi = hi.delta();
    if d_lo.abs() <= cfg.delta_tol {
        return Ok(Refinement {
            point: lo,
            delta: d_lo,
            bisections: 0,
        });
    }
    if d_hi.abs() <= cfg.delta_tol {
        return Ok(Refinement {
            point: hi,
            delta: d_hi,
            bisections: 0,
        });
    }
    if d_lo.signum() == d_hi.signum() {
        return Err(Error::InvalidBracket { lo: d_lo, hi: d_hi });
    }

    let mut last = d_lo;
    for it in 1..=cfg.max_bisections {
        let mid_seed = lo.v.add_scaled(1.0, &hi.v).scale(0.5.into());
        let proj = minimize_residual(sys, &mid_seed, &cfg.optimizer)?;
        if proj.residual_norm > 10.0 * cfg.on_variety_tol {
            return Err(Error::ProjectionLost {
                residual: proj.residual_norm,
            });
        }
        let d_mid = delta(&proj.v_final)?;
        let mid = VarietyPoint {
            v: proj.v_final,
            residual_norm: proj.residual_norm,
        };
        last = d_mid;
        if d_mid.abs() <= cfg.delta_tol && mid.residual_norm <= cfg.on_variety_tol {
            return Ok(Refinement {
                point: mid,
                delta: d_mid,
                bisections: it,
            });
        }
        if d_mid.signum() == d_lo.signum() {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::RefineExhausted {
        bisections: cfg.max_bisections,
        delta: last,
    })
}
