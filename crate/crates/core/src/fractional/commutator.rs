use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::spectral::{MultiplierSymbol, PhysicalField, SpectralField};

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid("gamma", format!("must lie in (0, 1), got {gamma}")));
    }
    Ok(())
}

/// `[D^γ; φ] f = D^γ(φ f) - φ D^γ f` for real fields.
///
/// Products are formed on the grid without dealiasing, so the result is exact
/// when the spectra of `φ` and `f` together fit below the Nyquist frequency.
pub fn commutator_apply(gamma: f64, phi: &PhysicalField, f: &PhysicalField) -> Result<PhysicalField> {
    check_gamma(gamma)?;
    phi.check_grid(f.grid())?;
    let d = MultiplierSymbol::frac_deriv(gamma)?;
    let product = phi.mul(f)?;
    let left = product.forward().apply(&d)?.inverse();
    let right = phi.mul(&f.forward().apply(&d)?.inverse())?;
    left.add_scaled(&right, -1.0)
}

/// Commutator on spectral data of possibly complex fields.
pub fn commutator_spectral(
    gamma: f64,
    phi: &SpectralField,
    f: &SpectralField,
) -> Result<SpectralField> {
    check_gamma(gamma)?;
    if phi.grid() != f.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = phi.grid();
    let d = MultiplierSymbol::frac_deriv(gamma)?;
    let phi_x = phi.to_complex_samples();
    let f_x = f.to_complex_samples();
    let df_x = f.apply(&d)?.to_complex_samples();
    let prod: Vec<Complex64> = phi_x.iter().zip(&f_x).map(|(a, b)| a * b).collect();
    let left = SpectralField::from_complex_samples(grid, prod).apply(&d)?;
    let right: Vec<Complex64> = phi_x.iter().zip(&df_x).map(|(a, b)| a * b).collect();
    left.add_scaled(
        &SpectralField::from_complex_samples(grid, right),
        Complex64::new(-1.0, 0.0),
    )
}

/// `‖[D^γ; φ] f‖ / (‖φ‖_{H²} ‖f‖)`; `None` when the denominator vanishes.
pub fn commutator_ratio(gamma: f64, phi: &PhysicalField, f: &PhysicalField) -> Result<Option<f64>> {
    let c = commutator_apply(gamma, phi, f)?;
    let denom = phi.forward().weighted_l2_norm(|xi| 1.0 + xi * xi) * f.l2_norm();
    if denom == 0.0 {
        return Ok(None);
    }
    Ok(Some(c.l2_norm() / denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid1D;
    use std::f64::consts::PI;

    #[test]
    fn constant_multiplier_commutes() {
        let g = Grid1D::new(64, 8.0).unwrap();
        let phi = PhysicalField::from_fn(&g, |_| 2.5).unwrap();
        let f = PhysicalField::from_fn(&g, |x| (-x * x).exp()).unwrap();
        let c = commutator_apply(0.3, &phi, &f).unwrap();
        assert!(c.max_abs() < 1e-13);
    }

    #[test]
    fn single_mode_identity_complex() {
        // φ = f = e^{ix}: [D^γ; φ] f = (2^γ - 1) e^{2ix}
        let g = Grid1D::new(16, PI).unwrap();
        let z = g.zero_index();
        let mut mode = SpectralField::zeros(&g);
        mode.coefficients_mut()[z + 1] = Complex64::new(2.0 * PI, 0.0);
        let c = commutator_spectral(0.5, &mode, &mode).unwrap();
        for (i, v) in c.coefficients().iter().enumerate() {
            let expected = if i == z + 2 {
                (2f64.sqrt() - 1.0) * 2.0 * PI
            } else {
                0.0
            };
            assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-12, "{i} {v}");
        }
    }

    #[test]
    fn single_mode_identity_real() {
        // φ = f = cos x: φ f = 1/2 + cos(2x)/2, so the commutator is
        // (2^γ - 1) cos(2x)/2 - 1/2.
        let g = Grid1D::new(32, PI).unwrap();
        let phi = PhysicalField::from_fn(&g, f64::cos).unwrap();
        let gamma = 0.5;
        let c = commutator_apply(gamma, &phi, &phi).unwrap();
        for (x, v) in g.positions().iter().zip(c.samples()) {
            let expected = 0.5 * (2f64.powf(gamma) - 1.0) * (2.0 * x).cos() - 0.5;
            assert!((v - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_gamma_and_grids() {
        let g = Grid1D::new(16, 1.0).unwrap();
        let h = Grid1D::new(32, 1.0).unwrap();
        let a = PhysicalField::zeros(&g);
        assert!(commutator_apply(1.0, &a, &a).is_err());
        assert_eq!(
            commutator_apply(0.5, &a, &PhysicalField::zeros(&h)).unwrap_err(),
            Error::GridMismatch
        );
        assert_eq!(commutator_ratio(0.5, &a, &a).unwrap(), None);
    }
}
