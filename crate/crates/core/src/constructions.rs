//! Closed-form seed vectors and fiducial files.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabor::RootsOfUnity;
use crate::vector::ComplexVector;

/// Tolerance on `‖v‖ - 1` after loading a fiducial file.
pub const FIDUCIAL_NORM_TOL: f64 = 1e-9;

/// `𝟏/√d`, which generates the trivial `(1, 0)`-biangular Gabor frame.
pub fn all_ones(d: usize) -> Result<ComplexVector> {
    if d < 2 {
        return Err(Error::BadDimension {
            d,
            reason: "dimension must be at least 2",
        });
    }
    ComplexVector::from_real(&vec![1.0 / (d as f64).sqrt(); d])
}

/// Unitary DFT, `(Fv)(j) = d^{-1/2} Σ_t ω^{-jt} v(t)`.
pub fn dft(v: &ComplexVector) -> ComplexVector {
    let d = v.dim();
    let roots = RootsOfUnity::new(d);
    let scale = 1.0 / (d as f64).sqrt();
    let entries = (0..d)
        .map(|j| {
            v.entries()
                .iter()
                .enumerate()
                .map(|(t, z)| roots.pow(-((j * t) as i64)) * z)
                .sum::<Complex64>()
                * scale
        })
        .collect();
    ComplexVector::new(entries).expect("DFT of a finite vector is finite")
}

/// Trial division; `d` is always small here.
pub fn is_prime(d: usize) -> bool {
    if d < 2 {
        return false;
    }
    (2..)
        .take_while(|p| p * p <= d)
        .all(|p| !d.is_multiple_of(p))
}

/// Fourier transform of the Alltop sequence `f(t) = d^{-1/2} e^{2πi t³/d}`.
/// For prime `d ≥ 5` this seeds a `(0, 1/d)`-biangular Gabor frame whose
/// modulation classes are mutually unbiased bases.
pub fn alltop_mub(d: usize) -> Result<ComplexVector> {
    if d < 5 {
        return Err(Error::BadDimension {
            d,
            reason: "Alltop construction needs d >= 5",
        });
    }
    if !is_prime(d) {
        return Err(Error::BadDimension {
            d,
            reason: "Alltop construction needs prime d",
        });
    }
    let scale = 1.0 / (d as f64).sqrt();
    let seq: Vec<Complex64> = (0..d)
        .map(|t| {
            let cube = (t * t % d) * t % d;
            Complex64::from_polar(scale, 2.0 * PI * cube as f64 / d as f64)
        })
        .collect();
    Ok(dft(&ComplexVector::new(seq)?))
}

/// Which of the two circles `x² + (y ∓ 1)² = 2` a d = 2 point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Centered at `(0, 1)`.
    Plus,
    /// Centered at `(0, -1)`.
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "+" | "plus" => Ok(Branch::Plus),
            "-" | "minus" => Ok(Branch::Minus),
            other => Err(format!("unknown branch `{other}` (expected + or -)")),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        })
    }
}

/// `(1, x + iy)` with `(x, y) = (√2 cos θ, ±1 + √2 sin θ)`. Every such point
/// lies on `C_2`.
pub fn circle_family_d2(theta: f64, branch: Branch) -> ComplexVector {
    let x = SQRT_2 * theta.cos();
    let y = branch.sign() + SQRT_2 * theta.sin();
    ComplexVector::from_pairs(&[(1.0, 0.0), (x, y)]).expect("finite for finite theta")
}

/// Euclidean distance from `(x, y)` to the nearer of the two circles.
pub fn distance_to_circles_d2(x: f64, y: f64) -> f64 {
    let plus = (x.hypot(y - 1.0) - SQRT_2).abs();
    let minus = (x.hypot(y + 1.0) - SQRT_2).abs();
    plus.min(minus)
}

/// A named unit vector stored on disk as JSON:
/// `{"d": 2, "label": "...", "source": "...", "v": [[re, im], ...]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiducialRecord {
    pub d: usize,
    pub v: ComplexVector,
    pub label: String,
    pub source: String,
}

#[derive(Serialize, Deserialize)]
struct FiducialFile {
    d: usize,
    #[serde(default)]
    label: String,
    #[serde(default)]
    source: String,
    v: Vec<[f64; 2]>,
}

impl FiducialRecord {
    pub fn new(v: ComplexVector, label: impl Into<String>, source: impl Into<String>) -> Self {
        Self {
            d: v.dim(),
            v,
            label: label.into(),
            source: source.into(),
        }
    }

    pub fn to_json(&self) -> String {
        let file = FiducialFile {
            d: self.d,
            label: self.label.clone(),
            source: self.source.clone(),
            v: self.v.entries().iter().map(|z| [z.re, z.im]).collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    /// Parses a fiducial file and normalizes the vector. `origin` is only
    /// used in diagnostics.
    pub fn from_json(text: &str, origin: impl AsRef<Path>) -> Result<Self> {
        let origin = origin.as_ref();
        let file: FiducialFile = serde_json::from_str(text).map_err(|e| {
            let field = json_error_field(&e.to_string());
            Error::parse(origin, e.line(), field, e.to_string())
        })?;
        if file.v.len() != file.d {
            return Err(Error::DimensionMismatch {
                expected: file.d,
                found: file.v.len(),
            });
        }
        let line = line_of(text, "\"v\"");
        let pairs: Vec<(f64, f64)> = file.v.iter().map(|p| (p[0], p[1])).collect();
        let v = ComplexVector::from_pairs(&pairs)
            .and_then(|v| v.normalized())
            .map_err(|e| Error::parse(origin, line, "v", e.to_string()))?;
        debug_assert!((v.norm() - 1.0).abs() <= FIDUCIAL_NORM_TOL);
        Ok(Self {
            d: file.d,
            v,
            label: file.label,
            source: file.source,
        })
    }
}

fn json_error_field(message: &str) -> String {
    // serde reports e.g. "missing field `label`" or "invalid type ... for key `d`"
    message
        .split('`')
        .nth(1)
        .map(str::to_owned)
        .unwrap_or_else(|| "<document>".to_owned())
}

fn line_of(text: &str, needle: &str) -> usize {
    text.lines()
        .position(|l| l.contains(needle))
        .map_or(0, |i| i + 1)
}

pub fn load_fiducial(path: impl AsRef<Path>) -> Result<FiducialRecord> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    FiducialRecord::from_json(&text, path)
}

/// Saves `v` as a fiducial file with an empty provenance note.
pub fn save_vector(v: &ComplexVector, path: impl AsRef<Path>) -> Result<()> {
    let label = path
        .as_ref()
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    FiducialRecord::new(v.clone(), label, "").save(path)
}
