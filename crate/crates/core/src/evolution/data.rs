use std::f64::consts::PI;

use super::smoothing::critical_profile;
use crate::error::{invalid, Result};
use crate::spectral::{Grid1D, PhysicalField};

/// Initial-data presets.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// `A e^{-(x-c)²/(2w²)}`.
    Gaussian { amplitude: f64, width: f64, center: f64 },
    /// `A x e^{-x²/(2w²)}`: zero mean, nonzero first moment.
    XTimesGaussian { amplitude: f64, width: f64 },
    /// `A ∂ₓ^k e^{-x²/(2w²)}`; for `k ≥ 2` mean and first moment both vanish.
    GaussianDerivative { amplitude: f64, width: f64, order: u32 },
    /// Inverse transform of `⟨ξ⟩^{-s-1/2-ε}`.
    SpectralCritical { s: f64, epsilon: f64 },
    /// Raw samples, one per grid point.
    Samples(Vec<f64>),
}

impl InitialData {
    /// Gaussian with `∫ φ = 1`.
    pub fn unit_mean_gaussian() -> Self {
        InitialData::Gaussian {
            amplitude: 1.0 / (2.0 * PI).sqrt(),
            width: 1.0,
            center: 0.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InitialData::Gaussian { .. } => "gaussian",
            InitialData::XTimesGaussian { .. } => "x-times-gaussian",
            InitialData::GaussianDerivative { .. } => "gaussian-derivative",
            InitialData::SpectralCritical { .. } => "spectral-critical",
            InitialData::Samples(_) => "custom",
        }
    }

    pub fn sample(&self, grid: &Grid1D) -> Result<PhysicalField> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, format!("must be positive, got {v}")))
            }
        };
        match *self {
            InitialData::Gaussian { amplitude, width, center } => {
                positive("width", width)?;
                PhysicalField::from_fn(grid, |x| {
                    let z = (x - center) / width;
                    amplitude * (-0.5 * z * z).exp()
                })
            }
            InitialData::XTimesGaussian { amplitude, width } => {
                positive("width", width)?;
                PhysicalField::from_fn(grid, |x| {
                    let z = x / width;
                    amplitude * x * (-0.5 * z * z).exp()
                })
            }
            InitialData::GaussianDerivative { amplitude, width, order } => {
                positive("width", width)?;
                PhysicalField::from_fn(grid, |x| {
                    amplitude * gaussian_derivative(x / width, order) / width.powi(order as i32)
                })
            }
            InitialData::SpectralCritical { s, epsilon } => {
                if !(s >= 0.0) {
                    return Err(invalid("s", format!("must be >= 0, got {s}")));
                }
                positive("epsilon", epsilon)?;
                Ok(critical_profile(grid, s, epsilon).inverse())
            }
            InitialData::Samples(ref values) => PhysicalField::new(grid, values.clone()),
        }
    }
}

/// `d^k/dz^k e^{-z²/2} = (-1)^k He_k(z) e^{-z²/2}` with probabilists' Hermite polynomials.
fn gaussian_derivative(z: f64, order: u32) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..order {
        let next = z * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    sign * cur * (-0.5 * z * z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_presets_match_closed_forms() {
        for &z in &[-1.3f64, 0.0, 0.4, 2.2] {
            let g = (-0.5 * z * z).exp();
            assert!((gaussian_derivative(z, 0) - g).abs() < 1e-15);
            assert!((gaussian_derivative(z, 1) + z * g).abs() < 1e-15);
            assert!((gaussian_derivative(z, 2) - (z * z - 1.0) * g).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_mean_gaussian_has_unit_mean() {
        let grid = Grid1D::new(256, 16.0).unwrap();
        let phi = InitialData::unit_mean_gaussian().sample(&grid).unwrap();
        assert!((phi.forward().zero_mode().re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn samples_must_match_the_grid() {
        let grid = Grid1D::new(16, 1.0).unwrap();
        assert!(InitialData::Samples(vec![0.0; 15]).sample(&grid).is_err());
        assert!(InitialData::Samples(vec![0.0; 16]).sample(&grid).is_ok());
    }
}
