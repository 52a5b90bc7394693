//! Perturb-and-reminimize continuation along `C_d`.
//!
//! Starting from a projected seed `v_0` and a randomly perturbed, re-projected
//! `v_1`, each subsequent point is obtained by minimizing the residuals from
//! the extrapolation `v_j + c·(v_j - v_{j-1})/‖v_j - v_{j-1}‖`.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gabor::angles;
use crate::optimizer::{minimize_residual, OptimizerConfig};
use crate::variety::{ResidualSystem, VarietyPoint, ON_VARIETY_TOL};
use crate::vector::ComplexVector;

#[derive(Clone, Debug, PartialEq)]
pub struct TraversalConfig {
    /// Extrapolation step length.
    pub c: f64,
    /// Length of the initial random perturbation.
    pub epsilon0: f64,
    pub max_steps: usize,
    pub on_variety_tol: f64,
    pub rng_seed: u64,
    /// Negate the initial perturbation to explore the other direction.
    pub reverse: bool,
    pub optimizer: OptimizerConfig,
}

impl Default for TraversalConfig {
    fn default() -> Self {
        Self {
            c: 0.05,
            epsilon0: 1e-2,
            max_steps: 400,
            on_variety_tol: ON_VARIETY_TOL,
            rng_seed: 0,
            reverse: false,
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl TraversalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) || !(self.epsilon0 > 0.0) || !(self.on_variety_tol > 0.0) {
            return Err(Error::BadConfig(
                "c, epsilon0 and on_variety_tol must be positive",
            ));
        }
        if self.max_steps < 2 {
            return Err(Error::BadConfig("max_steps must be >= 2"));
        }
        self.optimizer.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub step: usize,
    /// Gauge-fixed, `v(0) = 1`.
    pub v: ComplexVector,
    /// Angles of `v / ‖v‖`.
    pub alpha: f64,
    pub beta: f64,
    pub residual_norm: f64,
}

impl TrajectoryPoint {
    fn new(step: usize, v: ComplexVector, residual_norm: f64) -> Result<Self> {
        let profile = angles(&v.normalized()?)?;
        Ok(Self {
            step,
            v,
            alpha: profile.alpha,
            beta: profile.beta,
            residual_norm,
        })
    }

    pub fn delta(&self) -> f64 {
        self.beta - self.alpha
    }

    pub fn variety_point(&self) -> VarietyPoint {
        VarietyPoint {
            v: self.v.clone(),
            residual_norm: self.residual_norm,
        }
    }
}

/// Why a traversal ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    MaxSteps,
    /// Re-projection did not land back on the variety.
    LostVariety,
    /// The new point is closer than `c/10` to the previous one.
    Stalled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub d: usize,
    pub points: Vec<TrajectoryPoint>,
    pub stop: StopReason,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn deltas(&self) -> Vec<f64> {
        self.points.iter().map(TrajectoryPoint::delta).collect()
    }

    /// `‖v_{j+1} - v_j‖` for consecutive points.
    pub fn step_lengths(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| w[1].v.distance(&w[0].v))
            .collect()
    }

    pub fn csv_header(d: usize) -> Vec<String> {
        let mut header: Vec<String> = ["step", "alpha", "beta", "residual_norm"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        for j in 0..d {
            header.push(format!("re_{j}"));
            header.push(format!("im_{j}"));
        }
        header
    }

    /// CSV with a header row and 17 significant digits per float.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_io = |e: csv::Error| Error::io("<csv>", e.into());
        w.write_record(Self::csv_header(self.d)).map_err(to_io)?;
        for p in &self.points {
            let mut row = vec![
                p.step.to_string(),
                fmt_f64(p.alpha),
                fmt_f64(p.beta),
                fmt_f64(p.residual_norm),
            ];
            for z in p.v.entries() {
                row.push(fmt_f64(z.re));
                row.push(fmt_f64(z.im));
            }
            w.write_record(&row).map_err(to_io)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
            .map_err(|e| match e {
                Error::Io { source, .. } => Error::io(path, source),
                other => other,
            })
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(&text, path)
    }

    /// Parses the CSV written by [`write_csv`](Self::write_csv). Stored angles
    /// and residuals are taken as-is.
    pub fn from_csv(text: &str, origin: impl AsRef<Path>) -> Result<Self> {
        let origin = origin.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .flexible(true)
            .from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| Error::parse(origin, 1, "<header>", e.to_string()))?
            .clone();
        let cols = header.len();
        if cols < 8 || (cols - 4) % 2 != 0 {
            return Err(Error::parse(
                origin,
                1,
                "<header>",
                format!("unexpected column count {cols}"),
            ));
        }
        let d = (cols - 4) / 2;
        let expected = Self::csv_header(d);
        for (got, want) in header.iter().zip(&expected) {
            if got != want {
                return Err(Error::parse(
                    origin,
                    1,
                    want.clone(),
                    format!("expected column `{want}`, found `{got}`"),
                ));
            }
        }

        let mut points = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| Error::parse(origin, line, "<row>", e.to_string()))?;
            if record.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: record.len(),
                });
            }
            let num = |idx: usize| -> Result<f64> {
                record[idx]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::parse(origin, line, expected[idx].clone(), e.to_string()))
            };
            let step = record[0]
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::parse(origin, line, "step", e.to_string()))?;
            let entries = (0..d)
                .map(|j| Ok(Complex64::new(num(4 + 2 * j)?, num(5 + 2 * j)?)))
                .collect::<Result<Vec<_>>>()?;
            let v = ComplexVector::new(entries)
                .map_err(|e| Error::parse(origin, line, "re_0", e.to_string()))?;
            points.push(TrajectoryPoint {
                step,
                v,
                alpha: num(1)?,
                beta: num(2)?,
                residual_norm: num(3)?,
            });
        }
        Ok(Self {
            d,
            points,
            stop: StopReason::MaxSteps,
        })
    }
}

/// 17 significant digits.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn project(
    sys: &ResidualSystem,
    v: &ComplexVector,
    cfg: &TraversalConfig,
) -> Result<Option<(ComplexVector, f64)>> {
    let rep = minimize_residual(sys, v, &cfg.optimizer)?;
    if rep.residual_norm.is_finite() && rep.residual_norm <= cfg.on_variety_tol {
        Ok(Some((rep.v_final, rep.residual_norm)))
    } else {
        Ok(None)
    }
}

/// Traces a path on `C_d` from `v_start` (which must satisfy `v(0) = 1`).
/// The run ends after `max_steps` points, or earlier when a re-projection
/// fails or the path stalls.
pub fn traverse(
    sys: &ResidualSystem,
    v_start: &ComplexVector,
    cfg: &TraversalConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let d = sys.dim();
    let seed_rep = minimize_residual(sys, v_start, &cfg.optimizer)?;
    if !(seed_rep.residual_norm <= cfg.on_variety_tol) {
        return Err(Error::SeedOffVariety {
            residual: seed_rep.residual_norm,
        });
    }
    let mut points = vec![TrajectoryPoint::new(
        0,
        seed_rep.v_final,
        seed_rep.residual_norm,
    )?];

    // initial perturbation of length epsilon0 in the free coordinates
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut dir = ComplexVector::random_unit(d, &mut rng)?.into_entries();
    dir[0] = Complex64::new(0.0, 0.0);
    let dir = ComplexVector::new(dir)?;
    let sign = if cfg.reverse { -1.0 } else { 1.0 };
    let dir_norm = dir.norm();
    let perturbed = points[0].v.add_scaled(sign * cfg.epsilon0 / dir_norm, &dir);

    let mut stop = StopReason::MaxSteps;
    match project(sys, &perturbed, cfg)? {
        Some((v, res)) if v.distance(&points[0].v) > 0.0 => {
            points.push(TrajectoryPoint::new(1, v, res)?);
        }
        Some(_) => stop = StopReason::Stalled,
        None => stop = StopReason::LostVariety,
    }

    while stop == StopReason::MaxSteps && points.len() < cfg.max_steps {
        let n = points.len();
        let (prev, cur) = (&points[n - 2].v, &points[n - 1].v);
        let diff = cur.sub(prev);
        let guess = cur.add_scaled(cfg.c / diff.norm(), &diff);
        match project(sys, &guess, cfg)? {
            Some((v, res)) => {
                if v.distance(cur) < cfg.c / 10.0 {
                    stop = StopReason::Stalled;
                } else {
                    points.push(TrajectoryPoint::new(n, v, res)?);
                }
            }
            None => stop = StopReason::LostVariety,
        }
    }
    Ok(Trajectory { d, points, stop })
}

/// Index pairs `(j, j+1)` across which `Δ = β - α` changes sign. A zero takes
/// the sign of the last nonzero value before it.
pub fn detect_sign_changes(traj: &Trajectory) -> Vec<(usize, usize)> {
    sign_change_brackets(&traj.deltas())
}

pub fn sign_change_brackets(deltas: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut prev_sign = 0.0;
    for (j, &x) in deltas.iter().enumerate() {
        let s = if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            prev_sign
        };
        if j > 0 && prev_sign != 0.0 && s != 0.0 && s != prev_sign {
            out.push((j - 1, j));
        }
        if s != 0.0 {
            prev_sign = s;
        }
    }
    out
}
