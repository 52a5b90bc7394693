//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sicpath::cli;
use sicpath::constructions::{
    alltop_mub, circle_family_d2, distance_to_circles_d2, load_fiducial, Branch,
};
use sicpath::gabor::{
    frame_potential, frame_potential_and_gradient, heisenberg, potential_lower_bound,
};
use sicpath::optimizer::{refine_sic, RefineConfig};
use sicpath::traversal::{detect_sign_changes, traverse, Trajectory, TraversalConfig};
use sicpath::variety::{angle_balance_defect, gauge_fix, ResidualSystem};
use sicpath::{all_ones, ComplexVector};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed <= Duration::from_secs(limit_s), || {
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn fixture(name: &str) -> ComplexVector {
    load_fiducial(format!(
        "{}/tests/fixtures/{name}",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap()
    .v
}

fn brute_force_table(v: &ComplexVector) -> Vec<f64> {
    let d = v.dim() as i64;
    let mut out = Vec::new();
    for k in 0..d {
        for l in 0..d {
            out.push(v.inner(&heisenberg(v, k, l)).norm_sqr());
        }
    }
    out
}

fn run_cli(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["sicpath"];
    full.extend_from_slice(args);
    let code = cli::run(full, None, &mut out, &mut err);
    let mut text = String::from_utf8_lossy(&out).into_owned();
    text.push_str(&String::from_utf8_lossy(&err));
    (code, text)
}

fn potential_bound() -> Check {
    let t = Instant::now();
    let mut worst = f64::INFINITY;
    for d in 2..=8 {
        let bound = potential_lower_bound(d);
        for seed in 0..1000u64 {
            let v = ComplexVector::random_unit_seeded(d, seed).map_err(|e| e.to_string())?;
            let p = frame_potential(&v).map_err(|e| e.to_string())?;
            worst = worst.min(p - bound);
            ensure(p >= bound - 1e-9, || {
                format!("d={d} seed={seed}: {p} < {bound}")
            })?;
        }
    }
    within(t.elapsed(), 5)?;
    Ok(format!("min gap {worst:.3e} over 7000 vectors"))
}

fn fiducial_search() -> Check {
    let t = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for d in 2..=5 {
        let out = dir.path().join(format!("sic{d}.json"));
        let (code, text) = run_cli(&[
            "search",
            "--d",
            &d.to_string(),
            "--restarts",
            "20",
            "--out",
            out.to_str().unwrap(),
        ]);
        ensure(code == cli::EXIT_OK, || {
            format!("d={d}: exit {code}: {text}")
        })?;
        let v = load_fiducial(&out).map_err(|e| e.to_string())?.v;
        let gap = frame_potential(&v).map_err(|e| e.to_string())? - potential_lower_bound(d);
        worst = worst.max(gap.abs());
        ensure(gap.abs() <= 1e-9, || format!("d={d}: gap {gap:e}"))?;
    }
    within(t.elapsed(), 60)?;
    Ok(format!("max |gap| {worst:.3e} for d = 2..5"))
}

fn circle_equivalence() -> Check {
    let t = Instant::now();
    let sys = ResidualSystem::new(2).unwrap();
    let mut worst: f64 = 0.0;
    for branch in [Branch::Plus, Branch::Minus] {
        for i in 0..360 {
            let r = sys
                .residual_norm(&circle_family_d2(i as f64 * PI / 180.0, branch))
                .unwrap();
            worst = worst.max(r);
            ensure(r <= 1e-12, || {
                format!("{branch} sample {i}: residual {r:e}")
            })?;
        }
    }
    let mut hits = 0;
    let mut far: f64 = 0.0;
    for i in 0..=600 {
        for j in 0..=600 {
            let (x, y) = (-3.0 + 0.01 * i as f64, -3.0 + 0.01 * j as f64);
            let v = ComplexVector::from_pairs(&[(1.0, 0.0), (x, y)]).unwrap();
            if sys.residual_norm(&v).unwrap() < 1e-8 {
                hits += 1;
                let dist = distance_to_circles_d2(x, y);
                far = far.max(dist);
                ensure(dist <= 1e-6, || {
                    format!("grid point ({x}, {y}) off the circles by {dist:e}")
                })?;
            }
        }
    }
    within(t.elapsed(), 10)?;
    Ok(format!(
        "max circle residual {worst:.1e}; {hits} grid hits, max distance {far:.1e}"
    ))
}

fn angle_balance() -> Check {
    let mut seeds: Vec<(String, ComplexVector)> = Vec::new();
    for d in 2..=8 {
        seeds.push((format!("all-ones d={d}"), all_ones(d).unwrap()));
    }
    for d in [5, 7, 11] {
        seeds.push((format!("alltop d={d}"), alltop_mub(d).unwrap()));
    }
    for i in 0..24 {
        let theta = i as f64 * PI / 12.0;
        seeds.push((
            format!("circle+ {i}"),
            circle_family_d2(theta, Branch::Plus),
        ));
        seeds.push((
            format!("circle- {i}"),
            circle_family_d2(theta, Branch::Minus),
        ));
    }
    for (d, sic) in refined_sics()? {
        seeds.push((format!("refined SIC d={d}"), sic));
    }
    let mut worst: f64 = 0.0;
    for (name, v) in &seeds {
        let defect = angle_balance_defect(v).map_err(|e| format!("{name}: {e}"))?;
        worst = worst.max(defect);
        ensure(defect <= 1e-8, || format!("{name}: defect {defect:e}"))?;
    }
    Ok(format!("max defect {worst:.1e} over {} seeds", seeds.len()))
}

fn alltop_oracle() -> Check {
    let mut worst: f64 = 0.0;
    for d in [5usize, 7] {
        let table = brute_force_table(&alltop_mub(d).unwrap());
        let beta = 1.0 / d as f64;
        for k in 0..d {
            for l in 0..d {
                if (k, l) == (0, 0) {
                    continue;
                }
                let want = if l == 0 { 0.0 } else { beta };
                let err = (table[k * d + l] - want).abs();
                worst = worst.max(err);
                ensure(err <= 1e-12, || {
                    format!("d={d} a[{k}][{l}] = {}", table[k * d + l])
                })?;
            }
        }
    }
    Ok(format!("(0, 1/d) with max deviation {worst:.1e}"))
}

fn nearest(traj: &Trajectory, target: (f64, f64)) -> f64 {
    traj.points
        .iter()
        .map(|p| (p.alpha - target.0).hypot(p.beta - target.1))
        .fold(f64::INFINITY, f64::min)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn angle_sweep() -> Check {
    let t = Instant::now();
    let sys = ResidualSystem::new(2).unwrap();
    let start = fixture("sic_d2.json").gauged().unwrap();
    let traj = traverse(&sys, &start, &TraversalConfig::default()).map_err(|e| e.to_string())?;
    let sic = nearest(&traj, (1.0 / 3.0, 1.0 / 3.0));
    let mub = nearest(&traj, (0.0, 0.5));
    let basis = nearest(&traj, (1.0, 0.0));
    ensure(sic <= 1e-3 && mub <= 1e-3 && basis <= 1e-2, || {
        format!("distances sic {sic:e}, mub {mub:e}, (1,0) {basis:e}")
    })?;
    within(t.elapsed(), 30)?;

    let cfg = TraversalConfig::default();
    let mut notes = Vec::new();
    for d in [4usize, 5] {
        let start = gauge_fix(&fixture(&format!("sic_d{d}.json"))).unwrap();
        let sys = ResidualSystem::new(d).unwrap();
        let traj = traverse(&sys, &start, &cfg).map_err(|e| e.to_string())?;
        let worst = traj
            .points
            .iter()
            .map(|p| p.residual_norm)
            .fold(0.0, f64::max);
        let m = median(traj.step_lengths());
        ensure(traj.len() >= 100, || {
            format!("d={d}: only {} points ({:?})", traj.len(), traj.stop)
        })?;
        ensure(worst <= 1e-8, || format!("d={d}: residual {worst:e}"))?;
        ensure(m >= cfg.c / 2.0 && m <= 2.0 * cfg.c, || {
            format!("d={d}: median step {m}")
        })?;
        notes.push(format!("d={d}: {} pts, median step {m:.4}", traj.len()));
    }
    Ok(format!(
        "d=2 distances {sic:.1e}/{mub:.1e}/{basis:.1e}; {}",
        notes.join("; ")
    ))
}

fn refined_sics() -> Result<Vec<(usize, ComplexVector)>, String> {
    let mut out = Vec::new();
    for d in [2usize, 4, 5] {
        let t = Instant::now();
        let sys = ResidualSystem::new(d).unwrap();
        let start = gauge_fix(&fixture(&format!("sic_d{d}.json"))).unwrap();
        let traj =
            traverse(&sys, &start, &TraversalConfig::default()).map_err(|e| e.to_string())?;
        let brackets = detect_sign_changes(&traj);
        // prefer a crossing away from the starting SIC
        let &(j, k) = brackets
            .iter()
            .find(|b| b.0 > 0)
            .or(brackets.first())
            .ok_or_else(|| format!("d={d}: no sign change in {} points", traj.len()))?;
        let r = refine_sic(
            &sys,
            &traj.points[j].variety_point(),
            &traj.points[k].variety_point(),
            &RefineConfig::default(),
        )
        .map_err(|e| format!("d={d}: {e}"))?;
        let unit = r.point.v.normalized().unwrap();
        let profile = sicpath::angles(&unit).unwrap();
        let gap = frame_potential(&unit).unwrap() - potential_lower_bound(d);
        ensure((profile.alpha - profile.beta).abs() <= 1e-10, || {
            format!(
                "d={d}: |alpha - beta| = {:e}",
                (profile.alpha - profile.beta).abs()
            )
        })?;
        ensure(r.point.residual_norm <= 1e-9, || {
            format!("d={d}: residual {:e}", r.point.residual_norm)
        })?;
        ensure(gap.abs() <= 1e-8, || {
            format!("d={d}: potential gap {gap:e}")
        })?;
        within(t.elapsed(), 60)?;
        out.push((d, r.point.v));
    }
    Ok(out)
}

fn refinement() -> Check {
    let sics = refined_sics()?;
    Ok(format!(
        "refined SICs for d = {:?}",
        sics.iter().map(|s| s.0).collect::<Vec<_>>()
    ))
}

fn derivative_checks() -> Check {
    let h = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for d in 2..=6 {
        let sys = ResidualSystem::new(d).unwrap();
        for _ in 0..100 {
            let mut pairs = vec![(1.0, 0.0)];
            for _ in 1..d {
                pairs.push((rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)));
            }
            let v = ComplexVector::from_pairs(&pairs).unwrap();
            let jac = sys.jacobian(&v).unwrap();
            let x = sys.coords(&v).unwrap();
            for j in 0..x.len() {
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[j] += h;
                xm[j] -= h;
                let rp = sys.residuals(&sys.point(&xp).unwrap()).unwrap();
                let rm = sys.residuals(&sys.point(&xm).unwrap()).unwrap();
                for i in 0..rp.len() {
                    let fd = (rp[i] - rm[i]) / (2.0 * h);
                    let rel = (jac[(i, j)] - fd).abs() / jac[(i, j)].abs().max(1.0);
                    worst = worst.max(rel);
                    ensure(rel <= 1e-5, || {
                        format!("jacobian d={d} ({i},{j}): {} vs {fd}", jac[(i, j)])
                    })?;
                }
            }

            let u = v.normalized().unwrap();
            let (_, grad) = frame_potential_and_gradient(&u);
            let y = u.to_real_coords();
            let potential = |c: &[f64]| -> f64 {
                let w = ComplexVector::from_real_coords(c).unwrap();
                brute_force_table(&w).iter().map(|a| a * a).sum::<f64>() / d as f64
            };
            for i in 0..y.len() {
                let (mut yp, mut ym) = (y.clone(), y.clone());
                yp[i] += h;
                ym[i] -= h;
                let fd = (potential(&yp) - potential(&ym)) / (2.0 * h);
                let rel = (grad[i] - fd).abs() / grad[i].abs().max(1.0);
                worst = worst.max(rel);
                ensure(rel <= 1e-5, || {
                    format!("gradient d={d} [{i}]: {} vs {fd}", grad[i])
                })?;
            }
        }
    }
    Ok(format!("max relative error {worst:.1e}"))
}

fn read_fields(path: &Path) -> Result<Vec<Vec<f64>>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    Ok(text
        .lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .map(|f| f.parse::<f64>().unwrap_or(f64::NAN))
                .collect()
        })
        .collect())
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = format!("{}/tests/fixtures/sic_d4.json", env!("CARGO_MANIFEST_DIR"));
    let mut runs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let out = dir.path().join(name);
        let (code, text) = run_cli(&[
            "traverse",
            "--d",
            "4",
            "--input",
            &input,
            "--steps",
            "150",
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
        ]);
        ensure(code == cli::EXIT_OK, || format!("exit {code}: {text}"))?;
        runs.push(read_fields(&out)?);
    }
    ensure(runs[0].len() == runs[1].len(), || {
        "row counts differ".into()
    })?;
    let mut worst: f64 = 0.0;
    for (ra, rb) in runs[0].iter().zip(&runs[1]) {
        for (a, b) in ra.iter().zip(rb) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max field difference {worst:e}"))?;
    Ok(format!(
        "{} rows, max field difference {worst:.1e}",
        runs[0].len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("frame potential bound", potential_bound),
        ("fiducial search", fiducial_search),
        ("d=2 circle equivalence", circle_equivalence),
        ("angle balance identity", angle_balance),
        ("Alltop MUB oracle", alltop_oracle),
        ("d=2 angle sweep and d=4,5 continuation", angle_sweep),
        ("sign-change refinement", refinement),
        ("derivative checks", derivative_checks),
        ("traversal determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("[PASS] criterion {}: {name} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name} ({why}; {secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
