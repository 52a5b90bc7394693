use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sicpath::constructions::{alltop_mub, circle_family_d2, distance_to_circles_d2, Branch};
use sicpath::gabor::angles;
use sicpath::variety::{angle_balance_defect, delta, gauge_fix, ResidualSystem};
use sicpath::ComplexVector;

fn random_gauged(d: usize, rng: &mut ChaCha8Rng) -> ComplexVector {
    let mut pairs = vec![(1.0, 0.0)];
    for _ in 1..d {
        pairs.push((rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)));
    }
    ComplexVector::from_pairs(&pairs).unwrap()
}

fn finite_difference_jacobian(sys: &ResidualSystem, v: &ComplexVector, h: f64) -> DMatrix<f64> {
    let x = sys.coords(v).unwrap();
    let mut jac = DMatrix::zeros(sys.num_residuals(), sys.num_vars());
    for j in 0..x.len() {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += h;
        xm[j] -= h;
        let rp = sys.residuals(&sys.point(&xp).unwrap()).unwrap();
        let rm = sys.residuals(&sys.point(&xm).unwrap()).unwrap();
        for i in 0..rp.len() {
            jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
        }
    }
    jac
}

#[test]
fn circle_family_lies_on_the_variety() {
    let sys = ResidualSystem::new(2).unwrap();
    for branch in [Branch::Plus, Branch::Minus] {
        for i in 0..360 {
            let v = circle_family_d2(i as f64 * PI / 180.0, branch);
            let r = sys.residuals(&v).unwrap();
            assert!(r.iter().all(|x| x.abs() <= 1e-12), "{branch} {i}: {r:?}");
        }
    }
}

#[test]
fn alltop_first_entry_vanishes_when_cubing_permutes() {
    // d ≡ 2 (mod 3): t ↦ t³ is a bijection, so the DFT at 0 sums all roots
    for d in [5, 11] {
        assert!(alltop_mub(d).unwrap()[0].norm() < 1e-15);
    }
    assert!(alltop_mub(7).unwrap()[0].norm() > 0.1);
    let v = alltop_mub(7).unwrap();
    let sys = ResidualSystem::new(7).unwrap();
    let g = v.gauged().unwrap();
    assert!(sys
        .residuals(&g)
        .unwrap()
        .iter()
        .all(|r| r.abs() <= 1e-12 * g.norm_sqr().powi(2)));
}

#[test]
fn alltop_mub_lies_on_the_variety() {
    for d in [5, 7, 11] {
        let sys = ResidualSystem::new(d).unwrap();
        let unit = alltop_mub(d).unwrap();
        let v = gauge_fix(&unit).unwrap();
        let r = sys.residuals(&v).unwrap();
        let scale = v.norm_sqr().powi(2);
        assert!(r.iter().all(|x| x.abs() <= 1e-12 * scale), "d={d}");
    }
}

#[test]
fn d2_residual_zero_set_matches_two_circles() {
    let sys = ResidualSystem::new(2).unwrap();
    let mut hits = 0;
    for i in 0..=300 {
        for j in 0..=300 {
            let (x, y) = (-3.0 + 0.02 * i as f64, -3.0 + 0.02 * j as f64);
            let v = ComplexVector::from_pairs(&[(1.0, 0.0), (x, y)]).unwrap();
            let res = sys.residual_norm(&v).unwrap();
            if res < 1e-8 {
                hits += 1;
                assert!(distance_to_circles_d2(x, y) < 1e-6, "({x}, {y})");
            }
            if distance_to_circles_d2(x, y) > 0.05 {
                assert!(res > 1e-8);
            }
        }
    }
    assert!(hits >= 4);
}

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for d in 2..=6 {
        let sys = ResidualSystem::new(d).unwrap();
        for _ in 0..100 {
            let v = random_gauged(d, &mut rng);
            let jac = sys.jacobian(&v).unwrap();
            let fd = finite_difference_jacobian(&sys, &v, 1e-6);
            for (a, b) in jac.iter().zip(fd.iter()) {
                assert!(
                    (a - b).abs() <= 1e-5 * a.abs().max(1.0),
                    "d={d}: {a} vs {b}"
                );
            }
        }
    }
}

#[test]
fn d2_jacobian_has_rank_one_on_the_circle() {
    let sys = ResidualSystem::new(2).unwrap();
    for i in 0..12 {
        let theta = i as f64 * PI / 6.0 + 0.1;
        let jac = sys
            .jacobian(&circle_family_d2(theta, Branch::Plus))
            .unwrap();
        assert_eq!(jac.nrows(), 1);
        assert_eq!(jac.rank(1e-10), 1);
    }
}

#[test]
fn residuals_control_angle_spreads() {
    // Spreads are differences of residuals, so spread <= 2‖r‖ exactly.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for d in [2, 4, 5] {
        let sys = ResidualSystem::new(d).unwrap();
        let base = if d == 5 {
            gauge_fix(&alltop_mub(5).unwrap()).unwrap()
        } else {
            let path = format!(
                "{}/tests/fixtures/sic_d{d}.json",
                env!("CARGO_MANIFEST_DIR")
            );
            sicpath::constructions::load_fiducial(path)
                .unwrap()
                .v
                .gauged()
                .unwrap()
        };
        for _ in 0..200 {
            let eps = 10f64.powf(rng.random_range(-9.0..-3.0));
            let mut bump = vec![Complex64::new(0.0, 0.0)];
            for _ in 1..d {
                bump.push(Complex64::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ));
            }
            let bump = ComplexVector::new(bump).unwrap();
            let v = base.add_scaled(eps, &bump);
            let res = sys.residual_norm(&v).unwrap();
            let p = angles(&v).unwrap();
            if res > 0.0 {
                worst = worst.max(p.max_spread() / res);
            }
            assert!(p.max_spread() <= 2.0 * res + 1e-13);
        }
    }
    println!("calibrated spread/residual constant C = {worst:.4}");
}

#[test]
fn delta_is_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for d in 2..=6 {
        let v = random_gauged(d, &mut rng);
        let base = delta(&v).unwrap();
        for c in [
            Complex64::new(3.0, -1.0),
            Complex64::new(0.01, 0.2),
            Complex64::new(-7.0, 0.0),
        ] {
            assert!((delta(&v.scale(c)).unwrap() - base).abs() < 1e-13);
        }
    }
}

#[test]
fn delta_on_biangular_unit_vectors_follows_alpha() {
    // Δ = (1 - (d+1)α)/d for unit biangular seeds
    for d in [5, 7] {
        let v = alltop_mub(d).unwrap();
        assert!((delta(&v).unwrap() - 1.0 / d as f64).abs() < 1e-13);
    }
    for i in 0..36 {
        let v = circle_family_d2(i as f64 * PI / 18.0, Branch::Minus)
            .normalized()
            .unwrap();
        let p = angles(&v).unwrap();
        assert!((delta(&v).unwrap() - (1.0 - 3.0 * p.alpha) / 2.0).abs() < 1e-13);
    }
    // α = 1/(d+1) gives Δ = 0: the d = 2 SIC at x = y = (1+√3)/2
    let s = (1.0 + 3f64.sqrt()) / 2.0;
    let sic = ComplexVector::from_pairs(&[(1.0, 0.0), (s, s)]).unwrap();
    assert!(delta(&sic).unwrap().abs() < 1e-15);
}

#[test]
fn angle_balance_on_circle_and_all_ones() {
    for i in 0..72 {
        let v = circle_family_d2(i as f64 * PI / 36.0, Branch::Plus);
        let n4 = v.norm_sqr().powi(2);
        assert!(angle_balance_defect(&v).unwrap() <= 1e-12 * n4);
    }
    for d in 2..=8 {
        let v = sicpath::all_ones(d).unwrap();
        assert!(angle_balance_defect(&v).unwrap() < 1e-13);
    }
}
