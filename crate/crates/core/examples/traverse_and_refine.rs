//! Trace the biangular variety in d = 4 from a numerical fiducial, then bisect
//! every sign change of Δ into a SIC.
//!
//!     cargo run --release --example traverse_and_refine -- /tmp/d4

use std::path::PathBuf;

use sicpath::gabor::potential_lower_bound;
use sicpath::plot::{angle_path, coordinate_path};
use sicpath::{
    detect_sign_changes, frame_potential, minimize_frame_potential, refine_sic, traverse,
    RefineConfig, ResidualSystem, SearchConfig, TraversalConfig,
};

fn main() -> sicpath::Result<()> {
    let d = 4;
    let out_dir = std::env::args().nth(1).map(PathBuf::from);
    let seed = minimize_frame_potential(d, 0, &SearchConfig::default())?;
    let sys = ResidualSystem::new(d)?;
    let traj = traverse(
        &sys,
        &seed.best.v_final.gauged()?,
        &TraversalConfig::default(),
    )?;
    println!("{} points, stop = {:?}", traj.len(), traj.stop);

    for (j, k) in detect_sign_changes(&traj) {
        let r = refine_sic(
            &sys,
            &traj.points[j].variety_point(),
            &traj.points[k].variety_point(),
            &RefineConfig::default(),
        )?;
        let gap = frame_potential(&r.point.v.normalized()?)? - potential_lower_bound(d);
        println!(
            "bracket ({j:>3}, {k:>3}): {:>2} bisections, delta {:+.1e}, residual {:.1e}, potential gap {gap:+.1e}",
            r.bisections, r.delta, r.point.residual_norm
        );
    }

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(&dir).map_err(|e| sicpath::Error::Io {
            path: dir.clone(),
            source: e,
        })?;
        traj.save_csv(dir.join("trajectory.csv"))?;
        coordinate_path(&traj).save(dir.join("path.svg"))?;
        angle_path(&traj).save(dir.join("angles.svg"))?;
        println!(
            "wrote trajectory.csv, path.svg, angles.svg to {}",
            dir.display()
        );
    }
    Ok(())
}
