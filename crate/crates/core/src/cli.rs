//! The `sicpath` command line.
//!
//! Exit codes: 0 ok, 2 search did not converge, 3 verify found no structure,
//! 4 seed or projection off the variety, 5 invalid bracket, 64 usage error,
//! 65 bad input data, 1 anything else (I/O).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::constructions::{alltop_mub, circle_family_d2, load_fiducial, Branch, FiducialRecord};
use crate::error::Error;
use crate::gabor::{angles, frame_potential, potential_lower_bound};
use crate::optimizer::{minimize_frame_potential, refine_sic, RefineConfig, SearchConfig};
use crate::plot;
use crate::traversal::{detect_sign_changes, traverse, Trajectory, TraversalConfig};
use crate::variety::{angle_balance_defect_with_tol, gauge_fix, ResidualSystem, VarietyPoint};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;
pub const EXIT_UNCLASSIFIED: u8 = 3;
pub const EXIT_OFF_VARIETY: u8 = 4;
pub const EXIT_BAD_BRACKET: u8 = 5;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "SICPATH_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "sicpath",
    version,
    about = "Biangular Gabor frames and SIC fiducial search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimize the frame potential to find a fiducial vector.
    Search(SearchArgs),
    /// Report the angle structure of a stored vector.
    Verify(VerifyArgs),
    /// Trace a path along the biangular variety from a stored vector.
    Traverse(TraverseArgs),
    /// Bisect a sign change of beta - alpha from a trajectory into a SIC.
    Refine(RefineArgs),
    /// Write the Alltop Gabor MUB seed for a prime dimension.
    Mub(MubArgs),
    /// Sample the d = 2 circle family.
    Circle(CircleArgs),
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    potential_tol: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Debug, Args)]
struct TraverseArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 400)]
    steps: usize,
    #[arg(long, default_value_t = 0.05)]
    c: f64,
    #[arg(long, default_value_t = 1e-2)]
    epsilon0: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    reverse: bool,
    #[arg(long)]
    out: PathBuf,
    /// Also write `<out>.path.svg` and `<out>.angles.svg`.
    #[arg(long)]
    plot: bool,
}

#[derive(Debug, Args)]
struct RefineArgs {
    #[arg(long)]
    traj: PathBuf,
    /// Row index `j` (bracket `j, j+1`) or an explicit pair `j,k`.
    #[arg(long)]
    bracket: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    delta_tol: f64,
}

#[derive(Debug, Args)]
struct MubArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CircleArgs {
    #[arg(long)]
    samples: usize,
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    branch: Branch,
    #[arg(long)]
    out: PathBuf,
}

/// Provenance written next to every output as `<out>.manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub rng_seed: u64,
    pub timestamp: String,
}

impl RunManifest {
    fn new(command: &str, rng_seed: u64) -> Self {
        Self {
            command: command.to_owned(),
            parameters: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            rng_seed,
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn path_for(out: &Path) -> PathBuf {
        let mut s = out.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }

    fn save(&self, out: &Path) -> Result<(), Error> {
        let path = Self::path_for(out);
        let mut text = serde_json::to_string_pretty(self).expect("plain data serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| Error::io(path, e))
    }
}

/// Failure of a command, carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::DimensionMismatch { .. }
            | Error::NonFiniteEntry { .. } => EXIT_DATA,
            Error::BadDimension { .. } | Error::BadConfig(_) => EXIT_USAGE,
            Error::SeedOffVariety { .. } | Error::ProjectionLost { .. } => EXIT_OFF_VARIETY,
            Error::InvalidBracket { .. } => EXIT_BAD_BRACKET,
            Error::GaugeViolation { .. }
            | Error::ZeroVector
            | Error::NotUnitNorm { .. }
            | Error::NotBiangular { .. } => EXIT_DATA,
            Error::RefineExhausted { .. } => EXIT_NOT_CONVERGED,
            Error::Io { .. } => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

/// Entry point used by the binary: reads `std::env::args` and `SICPATH_SEED`.
pub fn main_from_env() -> ExitCode {
    let seed = std::env::var(SEED_ENV).ok();
    let code = run(
        std::env::args_os(),
        seed.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code)
}

/// Runs one command and returns its exit code. `seed_override` plays the
/// role of `SICPATH_SEED`.
pub fn run<I, T>(
    args: I,
    seed_override: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let seed = match seed_override.map(|s| s.trim().parse::<u64>()) {
        None => None,
        Some(Ok(s)) => Some(s),
        Some(Err(_)) => {
            let _ = writeln!(err, "error: {SEED_ENV} must be an unsigned integer");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Search(a) => cmd_search(a, seed, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Traverse(a) => cmd_traverse(a, seed, out, err),
        Command::Refine(a) => cmd_refine(a, out),
        Command::Mub(a) => cmd_mub(a, out),
        Command::Circle(a) => cmd_circle(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Error::io(path, e).into()
}

fn cmd_search(a: SearchArgs, seed_override: Option<u64>, out: &mut dyn Write) -> CmdResult {
    if a.d < 2 {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("--d must be at least 2 (got {})", a.d),
        ));
    }
    if a.restarts == 0 {
        return Err(Failure::new(EXIT_USAGE, "--restarts must be at least 1"));
    }
    let seed = seed_override.unwrap_or(a.seed);
    let cfg = SearchConfig {
        restarts: a.restarts,
        potential_tol: a.potential_tol,
        ..Default::default()
    };
    let report = minimize_frame_potential(a.d, seed, &cfg)?;
    let bound = potential_lower_bound(a.d);
    let record = FiducialRecord::new(
        report.best.v_final.clone(),
        format!("search-d{}", a.d),
        format!(
            "frame potential search, seed {seed}, {} restart(s), potential {:.17e}",
            report.restarts_used, report.potential
        ),
    );
    record.save(&a.out)?;
    RunManifest::new("search", seed)
        .param("d", a.d)
        .param("restarts", a.restarts)
        .param("seed", seed)
        .param("potential_tol", a.potential_tol)
        .param("out", a.out.display())
        .save(&a.out)?;
    let _ = writeln!(out, "d = {}", a.d);
    let _ = writeln!(out, "potential = {:.15}", report.potential);
    let _ = writeln!(out, "bound 2/(d+1) = {bound:.15}");
    let _ = writeln!(out, "gap = {:.3e}", report.potential - bound);
    let _ = writeln!(out, "restarts used = {}", report.restarts_used);
    if report.potential - bound <= a.potential_tol {
        Ok(EXIT_OK)
    } else {
        Err(Failure::new(
            EXIT_NOT_CONVERGED,
            format!(
                "search did not converge: best potential {:.15} exceeds {bound:.15} by {:.3e}",
                report.potential,
                report.potential - bound
            ),
        ))
    }
}

/// Structure detected by `verify`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Classification {
    Sic { angle: f64 },
    Mub { alpha: f64, beta: f64 },
    Biangular { alpha: f64, beta: f64 },
    Unstructured,
}

/// Classifies the Gabor frame of a unit vector at tolerance `tol`.
pub fn classify(v: &crate::vector::ComplexVector, tol: f64) -> Result<Classification, Error> {
    let unit = v.normalized()?;
    let p = angles(&unit)?;
    let d = v.dim() as f64;
    Ok(if !p.is_biangular(tol) {
        Classification::Unstructured
    } else if (p.alpha - p.beta).abs() <= tol {
        Classification::Sic {
            angle: 0.5 * (p.alpha + p.beta),
        }
    } else if p.alpha.abs() <= tol && (p.beta - 1.0 / d).abs() <= tol {
        Classification::Mub {
            alpha: p.alpha,
            beta: p.beta,
        }
    } else {
        Classification::Biangular {
            alpha: p.alpha,
            beta: p.beta,
        }
    })
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> CmdResult {
    if !(a.tol > 0.0) {
        return Err(Failure::new(EXIT_USAGE, "--tol must be positive"));
    }
    let rec = load_fiducial(&a.input).map_err(|e| match e {
        Error::Io { .. } => Failure::new(EXIT_DATA, e.to_string()),
        other => other.into(),
    })?;
    let v = &rec.v;
    let d = rec.d;
    let p = angles(v)?;
    let _ = writeln!(out, "label = {}", rec.label);
    let _ = writeln!(out, "d = {d}");
    let _ = writeln!(out, "norm = {:.15}", v.norm());
    let _ = writeln!(
        out,
        "alpha = {:.12} (spread {:.3e})",
        p.alpha, p.alpha_spread
    );
    let _ = writeln!(out, "beta = {:.12} (spread {:.3e})", p.beta, p.beta_spread);
    let _ = writeln!(out, "delta = {:.3e}", p.delta());
    let _ = writeln!(
        out,
        "frame potential = {:.15} (bound {:.15})",
        frame_potential(v)?,
        potential_lower_bound(d)
    );
    match gauge_fix(v) {
        Ok(g) => {
            let res = ResidualSystem::new(d)?.residual_norm(&g)?;
            let _ = writeln!(out, "residual norm = {res:.3e}");
        }
        Err(_) => {
            let _ = writeln!(out, "residual norm = n/a");
        }
    }
    match angle_balance_defect_with_tol(v, a.tol) {
        Ok(defect) => {
            let _ = writeln!(out, "angle balance defect = {defect:.3e}");
        }
        Err(_) => {
            let _ = writeln!(out, "angle balance defect = n/a (not biangular)");
        }
    }
    let code = match classify(v, a.tol)? {
        Classification::Sic { angle } => {
            let _ = writeln!(out, "SIC: α=β={angle:.6}");
            EXIT_OK
        }
        Classification::Mub { alpha, beta } => {
            let _ = writeln!(out, "MUB: (α,β)=({:.6}, {beta:.6})", alpha.abs());
            EXIT_OK
        }
        Classification::Biangular { alpha, beta } => {
            let _ = writeln!(out, "biangular: (α,β)=({alpha:.6}, {beta:.6})");
            EXIT_OK
        }
        Classification::Unstructured => {
            let _ = writeln!(
                out,
                "none: max spread {:.3e} exceeds tol {:.1e}",
                p.max_spread(),
                a.tol
            );
            EXIT_UNCLASSIFIED
        }
    };
    Ok(code)
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_traverse(
    a: TraverseArgs,
    seed_override: Option<u64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    if a.d < 2 {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("--d must be at least 2 (got {})", a.d),
        ));
    }
    if a.d == 3 {
        let _ = writeln!(
            err,
            "warning: d = 3 is supported, but its SIC fiducials form a continuous family"
        );
    }
    let seed = seed_override.unwrap_or(a.seed);
    let rec = load_fiducial(&a.input).map_err(|e| match e {
        Error::Io { .. } => Failure::new(EXIT_DATA, e.to_string()),
        other => other.into(),
    })?;
    if rec.d != a.d {
        return Err(Failure::new(
            EXIT_DATA,
            format!(
                "--d {} does not match the dimension {} of {}",
                a.d,
                rec.d,
                a.input.display()
            ),
        ));
    }
    let start = gauge_fix(&rec.v)
        .map_err(|e| Failure::new(EXIT_OFF_VARIETY, format!("cannot gauge seed: {e}")))?;
    let sys = ResidualSystem::new(a.d)?;
    let cfg = TraversalConfig {
        c: a.c,
        epsilon0: a.epsilon0,
        max_steps: a.steps,
        rng_seed: seed,
        reverse: a.reverse,
        ..Default::default()
    };
    let traj = traverse(&sys, &start, &cfg)?;
    traj.save_csv(&a.out)?;
    RunManifest::new("traverse", seed)
        .param("d", a.d)
        .param("input", a.input.display())
        .param("steps", a.steps)
        .param("c", a.c)
        .param("epsilon0", a.epsilon0)
        .param("seed", seed)
        .param("reverse", a.reverse)
        .param("out", a.out.display())
        .save(&a.out)?;
    if a.plot {
        for (suffix, plot) in [
            (".path.svg", plot::coordinate_path(&traj)),
            (".angles.svg", plot::angle_path(&traj)),
        ] {
            let path = with_suffix(&a.out, suffix);
            plot.save(&path)?;
            let _ = writeln!(out, "wrote {}", path.display());
        }
    }
    let _ = writeln!(out, "points = {} (stop: {:?})", traj.len(), traj.stop);
    let brackets = detect_sign_changes(&traj);
    let _ = writeln!(out, "brackets = {}", brackets.len());
    for (j, k) in brackets {
        let _ = writeln!(
            out,
            "bracket {j},{k} delta {:+.6e} {:+.6e}",
            traj.points[j].delta(),
            traj.points[k].delta()
        );
    }
    Ok(EXIT_OK)
}

fn parse_bracket(spec: &str) -> Option<(usize, usize)> {
    let mut parts = spec.split(',').map(|s| s.trim().parse::<usize>());
    match (parts.next(), parts.next(), parts.next()) {
        (Some(Ok(j)), None, None) => Some((j, j + 1)),
        (Some(Ok(j)), Some(Ok(k)), None) => Some((j, k)),
        _ => None,
    }
}

fn cmd_refine(a: RefineArgs, out: &mut dyn Write) -> CmdResult {
    let (j, k) = parse_bracket(&a.bracket)
        .ok_or_else(|| Failure::new(EXIT_USAGE, format!("bad --bracket `{}`", a.bracket)))?;
    let traj = Trajectory::load_csv(&a.traj).map_err(|e| match e {
        Error::Io { .. } => Failure::new(EXIT_DATA, e.to_string()),
        other => other.into(),
    })?;
    if j >= traj.len() || k >= traj.len() {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("bracket ({j}, {k}) out of range for {} points", traj.len()),
        ));
    }
    let sys = ResidualSystem::new(traj.d)?;
    let lo = VarietyPoint::new(&sys, traj.points[j].v.clone())?;
    let hi = VarietyPoint::new(&sys, traj.points[k].v.clone())?;
    let cfg = RefineConfig {
        delta_tol: a.delta_tol,
        ..Default::default()
    };
    let refined = refine_sic(&sys, &lo, &hi, &cfg)?;
    let unit = refined.point.v.normalized()?;
    let p = angles(&unit)?;
    let potential = frame_potential(&unit)?;
    FiducialRecord::new(
        unit,
        format!("refined-d{}", traj.d),
        format!(
            "bisection of {} between rows {j} and {k} after {} step(s)",
            a.traj.display(),
            refined.bisections
        ),
    )
    .save(&a.out)?;
    RunManifest::new("refine", 0)
        .param("traj", a.traj.display())
        .param("bracket", format!("{j},{k}"))
        .param("delta_tol", a.delta_tol)
        .param("out", a.out.display())
        .save(&a.out)?;
    let _ = writeln!(out, "bisections = {}", refined.bisections);
    let _ = writeln!(out, "|alpha - beta| = {:.3e}", (p.alpha - p.beta).abs());
    let _ = writeln!(out, "residual norm = {:.3e}", refined.point.residual_norm);
    let _ = writeln!(
        out,
        "frame potential = {potential:.15} (bound {:.15})",
        potential_lower_bound(traj.d)
    );
    Ok(EXIT_OK)
}

fn cmd_mub(a: MubArgs, out: &mut dyn Write) -> CmdResult {
    let v = alltop_mub(a.d)?;
    FiducialRecord::new(
        v,
        format!("alltop-mub-d{}", a.d),
        "DFT of the Alltop sequence",
    )
    .save(&a.out)?;
    RunManifest::new("mub", 0)
        .param("d", a.d)
        .param("out", a.out.display())
        .save(&a.out)?;
    let _ = writeln!(out, "wrote {}", a.out.display());
    Ok(EXIT_OK)
}

fn cmd_circle(a: CircleArgs, out: &mut dyn Write) -> CmdResult {
    if a.samples == 0 {
        return Err(Failure::new(EXIT_USAGE, "--samples must be at least 1"));
    }
    let sys = ResidualSystem::new(2)?;
    let file = std::fs::File::create(&a.out).map_err(|e| io_failure(&a.out, e))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    let csv_err = |e: csv::Error| Failure::from(Error::io(&a.out, e.into()));
    w.write_record([
        "index",
        "theta",
        "branch",
        "x",
        "y",
        "alpha",
        "beta",
        "residual_norm",
    ])
    .map_err(csv_err)?;
    for i in 0..a.samples {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / a.samples as f64;
        let v = circle_family_d2(theta, a.branch);
        let p = angles(&v.normalized()?)?;
        let res = sys.residual_norm(&v)?;
        w.write_record([
            i.to_string(),
            format!("{theta:.16e}"),
            a.branch.to_string(),
            format!("{:.16e}", v[1].re),
            format!("{:.16e}", v[1].im),
            format!("{:.16e}", p.alpha),
            format!("{:.16e}", p.beta),
            format!("{res:.16e}"),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| io_failure(&a.out, e))?;
    RunManifest::new("circle", 0)
        .param("samples", a.samples)
        .param("branch", a.branch)
        .param("out", a.out.display())
        .save(&a.out)?;
    let _ = writeln!(out, "wrote {} samples to {}", a.samples, a.out.display());
    Ok(EXIT_OK)
}
