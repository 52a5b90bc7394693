//! Multi-start frame-potential search for fiducial vectors in small dimensions.
//!
//!     cargo run --example frame_potential_search -- 6

use sicpath::gabor::potential_lower_bound;
use sicpath::{angles, minimize_frame_potential, SearchConfig};

fn main() -> sicpath::Result<()> {
    let max_d: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(5);
    let cfg = SearchConfig::default();
    println!(
        "{:>3} {:>20} {:>12} {:>9} {:>12}",
        "d", "potential", "gap", "restarts", "max spread"
    );
    for d in 2..=max_d {
        let rep = minimize_frame_potential(d, 0, &cfg)?;
        let p = angles(&rep.best.v_final)?;
        println!(
            "{d:>3} {:>20.15} {:>12.3e} {:>9} {:>12.3e}",
            rep.potential,
            rep.potential - potential_lower_bound(d),
            rep.restarts_used,
            p.max_spread()
        );
    }
    Ok(())
}
