//! In d = 2 the gauge-fixed variety is the pair of circles x² + (y ± 1)² = 2.
//! Walk one circle and show how (α, β) and Δ vary.

use std::f64::consts::PI;

use sicpath::constructions::{circle_family_d2, Branch};
use sicpath::{angles, delta, ResidualSystem};

fn main() -> sicpath::Result<()> {
    let sys = ResidualSystem::new(2)?;
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "theta", "x", "y", "alpha", "beta", "delta"
    );
    for i in 0..=16 {
        let theta = i as f64 * PI / 8.0;
        let v = circle_family_d2(theta, Branch::Plus);
        assert!(sys.residual_norm(&v)? < 1e-12);
        let p = angles(&v.normalized()?)?;
        println!(
            "{theta:>8.4} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            v[1].re,
            v[1].im,
            p.alpha,
            p.beta,
            delta(&v)?
        );
    }
    let s = (1.0 + 3f64.sqrt()) / 2.0;
    println!("SICs sit where the circle meets x = y, e.g. v(1) = {s:.6}(1 + i)");
    Ok(())
}
