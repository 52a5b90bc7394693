//! Classify a few seeds by the angle structure of their Gabor frames.

use sicpath::cli::{classify, Classification};
use sicpath::constructions::{alltop_mub, circle_family_d2, Branch};
use sicpath::{all_ones, ComplexVector};

fn main() -> sicpath::Result<()> {
    let seeds = [
        ("all-ones d=4", all_ones(4)?),
        ("Alltop d=7", alltop_mub(7)?),
        ("circle point d=2", circle_family_d2(0.7, Branch::Minus)),
        ("random d=3", ComplexVector::random_unit_seeded(3, 1)?),
    ];
    for (name, v) in seeds {
        let unit = v.normalized()?;
        let label = match classify(&unit, 1e-8)? {
            Classification::Sic { angle } => format!("SIC with angle {angle:.6}"),
            Classification::Mub { alpha, beta } => {
                format!("MUB with (α, β) = ({alpha:.3}, {beta:.6})")
            }
            Classification::Biangular { alpha, beta } => {
                format!("biangular with (α, β) = ({alpha:.6}, {beta:.6})")
            }
            Classification::Unstructured => "no biangular structure".to_owned(),
        };
        println!("{name:>18}: {label}");
    }
    Ok(())
}
