use std::f64::consts::PI;

use dbo_core::spectral::{bessel, ddx, frac_deriv, hilbert, Grid1D, MultiplierSymbol, PhysicalField, SpectralField};
use dbo_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: &PhysicalField, b: &PhysicalField) -> f64 {
    let diff: f64 = a.samples().iter().zip(b.samples()).map(|(x, y)| (x - y).powi(2)).sum();
    let norm: f64 = b.samples().iter().map(|y| y * y).sum();
    (diff / norm.max(f64::MIN_POSITIVE)).sqrt()
}

/// Random real field whose Nyquist mode is zero (optionally also the mean).
fn band_limited(grid: &Grid1D, coeffs: &[(f64, f64)], mean: f64) -> PhysicalField {
    let l = grid.half_length();
    PhysicalField::from_fn(grid, |x| {
        mean + coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let arg = PI * (k + 1) as f64 * x / l;
                a * arg.cos() + b * arg.sin()
            })
            .sum::<f64>()
    })
    .unwrap()
}

fn coeff_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..60)
}

fn random_samples() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 128)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_is_identity(samples in random_samples(), l in 0.5f64..100.0) {
        let grid = Grid1D::new(128, l).unwrap();
        let f = PhysicalField::new(&grid, samples).unwrap();
        prop_assert!(rel(&f.forward().inverse(), &f) <= 1e-12);
    }

    #[test]
    fn parseval_holds(samples in random_samples(), l in 0.5f64..100.0) {
        let grid = Grid1D::new(128, l).unwrap();
        let f = PhysicalField::new(&grid, samples).unwrap();
        let physical: f64 = f.samples().iter().map(|u| u * u).sum::<f64>() * grid.dx();
        let spectral: f64 = f.forward().coefficients().iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.dxi() / (2.0 * PI);
        prop_assert!((physical - spectral).abs() <= 1e-12 * physical);
    }

    #[test]
    fn first_derivative_twice_is_second(samples in random_samples()) {
        let grid = Grid1D::new(128, 3.0).unwrap();
        let f = PhysicalField::new(&grid, samples).unwrap();
        let twice = frac_deriv(&frac_deriv(&f, 1.0).unwrap(), 1.0).unwrap();
        prop_assert!(rel(&twice, &frac_deriv(&f, 2.0).unwrap()) <= 1e-12);
    }

    #[test]
    fn fractional_orders_compose(samples in random_samples(), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let grid = Grid1D::new(128, 3.0).unwrap();
        let f = PhysicalField::new(&grid, samples).unwrap();
        let composed = frac_deriv(&frac_deriv(&f, s).unwrap(), t).unwrap();
        prop_assert!(rel(&composed, &frac_deriv(&f, s + t).unwrap()) <= 1e-11);
    }

    #[test]
    fn hilbert_squares_to_minus_identity(coeffs in coeff_strategy()) {
        let grid = Grid1D::new(128, 5.0).unwrap();
        let f = band_limited(&grid, &coeffs, 0.0);
        let hh = hilbert(&hilbert(&f));
        prop_assert!(rel(&hh.map(|_, v| -v), &f) <= 1e-12);
    }

    #[test]
    fn bessel_inverse_pair(samples in random_samples(), s in -2.0f64..2.0) {
        // ξ_max ≈ 10 keeps the condition number ⟨ξ_max⟩^{2|s|} near 1e4
        let grid = Grid1D::new(128, 20.0).unwrap();
        let f = PhysicalField::new(&grid, samples).unwrap();
        prop_assert!(rel(&bessel(&bessel(&f, s), -s), &f) <= 1e-12);
    }

    #[test]
    fn products_of_symbols_match_composition(samples in random_samples(), s in 0.0f64..2.0) {
        let grid = Grid1D::new(128, 4.0).unwrap();
        let f = PhysicalField::new(&grid, samples).unwrap().forward();
        let (m1, m2) = (MultiplierSymbol::bessel(s), MultiplierSymbol::frac_deriv(s).unwrap());
        let a = f.apply(&m1).unwrap().apply(&m2).unwrap();
        let b = f.apply(&m1.product(&m2)).unwrap();
        for (x, y) in a.coefficients().iter().zip(b.coefficients()) {
            prop_assert!((x - y).norm() <= 1e-14 * y.norm().max(1e-300));
        }
    }

    #[test]
    fn shipped_symbols_preserve_reality(samples in random_samples(), s in 0.0f64..2.0) {
        let grid = Grid1D::new(128, 4.0).unwrap();
        let f = PhysicalField::new(&grid, samples).unwrap();
        let fhat = f.forward();
        let norm = fhat.l2_norm();
        for m in [
            MultiplierSymbol::hilbert(),
            MultiplierSymbol::frac_deriv(s).unwrap(),
            MultiplierSymbol::bessel(-s),
            MultiplierSymbol::ddx(),
        ] {
            let g = fhat.apply(&m).unwrap();
            let complex = g.to_complex_samples();
            let imag: f64 = complex.iter().map(|c| c.im * c.im).sum::<f64>().sqrt();
            let scale: f64 = complex.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(norm);
            prop_assert!(imag <= 1e-12 * scale, "{} leaked {imag:e}", m.name());
        }
    }
}

#[test]
fn make_grid_examples() {
    let g = Grid1D::new(8, PI).unwrap();
    assert!((g.dx() - PI / 4.0).abs() < 1e-15);
    assert!((g.dxi() - 1.0).abs() < 1e-15);
    let xi: Vec<f64> = g.frequencies().to_vec();
    let expected: Vec<f64> = (-4..4).map(f64::from).collect();
    for (a, b) in xi.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-14);
    }
    assert_eq!(g.frequencies()[g.zero_index()], 0.0);

    let g = Grid1D::new(1024, 64.0 * PI).unwrap();
    assert!((g.dxi() - 1.0 / 64.0).abs() < 1e-16);
    assert!((g.dx() * 1024.0 - 128.0 * PI).abs() < 1e-12);

    match Grid1D::new(7, 1.0) {
        Err(Error::InvalidGrid(msg)) => assert!(msg.contains("n_points must be even")),
        other => panic!("expected grid error, got {other:?}"),
    }
    assert!(Grid1D::new(6, 1.0).is_err());
    assert!(Grid1D::new(8, 0.0).is_err());
}

#[test]
fn constant_and_single_mode_transforms() {
    let grid = Grid1D::new(256, 32.0 * PI).unwrap();
    let one = PhysicalField::from_fn(&grid, |_| 1.0).unwrap().forward();
    let z = grid.zero_index();
    assert!((one.coefficients()[z] - Complex64::new(64.0 * PI, 0.0)).norm() < 1e-10);
    for (i, c) in one.coefficients().iter().enumerate() {
        if i != z {
            assert!(c.norm() < 1e-10);
        }
    }

    let cos = PhysicalField::from_fn(&grid, f64::cos).unwrap().forward();
    let l = grid.half_length();
    for (i, (&xi, c)) in grid.frequencies().iter().zip(cos.coefficients()).enumerate() {
        let expected = if (xi.abs() - 1.0).abs() < 1e-12 { l } else { 0.0 };
        assert!((c.norm() - expected).abs() < 1e-9, "mode {i}: {c}");
    }
}

#[test]
fn gaussian_transform_matches_closed_form() {
    let grid = Grid1D::new(1024, 32.0 * PI).unwrap();
    let g = PhysicalField::from_fn(&grid, |x| (-0.5 * x * x).exp()).unwrap().forward();
    let err = grid
        .frequencies()
        .iter()
        .zip(g.coefficients())
        .map(|(&xi, c)| (c - Complex64::new((2.0 * PI).sqrt() * (-0.5 * xi * xi).exp(), 0.0)).norm())
        .fold(0.0, f64::max);
    assert!(err <= 1e-8, "max error {err:e}");
}

#[test]
fn named_multipliers_on_single_modes() {
    let grid = Grid1D::new(64, PI).unwrap();
    let cos = PhysicalField::from_fn(&grid, f64::cos).unwrap();
    let sin = PhysicalField::from_fn(&grid, f64::sin).unwrap();
    assert!(rel(&hilbert(&cos), &sin) <= 1e-14);
    assert!(rel(&ddx(&sin), &cos) <= 1e-14);

    let cos2 = PhysicalField::from_fn(&grid, |x| (2.0 * x).cos()).unwrap();
    let half = frac_deriv(&cos2, 0.5).unwrap();
    assert!(rel(&half, &cos2.map(|_, v| 2f64.sqrt() * v)) <= 1e-14);

    assert!(rel(&frac_deriv(&cos2, 0.0).unwrap(), &cos2) <= 1e-15);
    let mut samples = vec![0.0; 64];
    samples[32] = 1.0;
    let spike = PhysicalField::new(&grid, samples).unwrap();
    assert!(rel(&bessel(&spike, 0.0), &spike) <= 1e-14);
}

#[test]
fn singular_symbol_is_rejected() {
    let grid = Grid1D::new(16, 1.0).unwrap();
    let f = SpectralField::zeros(&grid);
    let m = MultiplierSymbol::custom("|xi|^-0.5", |xi| Complex64::new(xi.abs().powf(-0.5), 0.0), None);
    assert!(matches!(f.apply(&m), Err(Error::SingularSymbol { .. })));
    let other = Grid1D::new(32, 1.0).unwrap();
    let g = PhysicalField::zeros(&other);
    assert!(matches!(PhysicalField::zeros(&grid).mul(&g), Err(Error::GridMismatch)));
}

#[test]
fn sobolev_identity_through_bessel() {
    let grid = Grid1D::new(512, 20.0).unwrap();
    let f = PhysicalField::from_fn(&grid, |x| (-x * x).exp() * (3.0 * x).sin()).unwrap();
    let s = 1.5;
    let via_bessel = bessel(&f, s).l2_norm();
    let direct = f.forward().weighted_l2_norm(|xi| (1.0 + xi * xi).powf(0.5 * s));
    assert!((via_bessel - direct).abs() <= 1e-12 * direct);
}
