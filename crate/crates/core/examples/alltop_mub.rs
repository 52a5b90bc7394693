//! Alltop seeds give (0, 1/d)-biangular Gabor frames in prime dimensions.

use sicpath::constructions::{alltop_mub, is_prime};
use sicpath::{correlation_table, frame_potential, gauge_fix};

fn main() -> sicpath::Result<()> {
    for d in (5..=19).filter(|&d| is_prime(d)) {
        let v = alltop_mub(d)?;
        let t = correlation_table(&v)?;
        let beta = t.beta_class();
        let spread = beta.fold(0.0f64, |m, b| m.max((b - 1.0 / d as f64).abs()));
        // v(0) vanishes when d ≡ 2 (mod 3); the gauge shifts the seed first
        let g = gauge_fix(&v)?;
        println!(
            "d = {d:>2}: |v(0)| = {:.1e}, max |a[k][0]| = {:.1e}, beta spread = {spread:.1e}, potential = {:.6}, gauged v(1) = {:.4}",
            v[0].norm(),
            t.alpha_class().fold(0.0f64, f64::max),
            frame_potential(&v)?,
            g[1],
        );
    }
    Ok(())
}
