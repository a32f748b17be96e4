use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::{Grid1D, MultiplierSymbol, PhysicalField, SpectralField};

/// Dissipation order `a ∈ (0, 1]` and the semigroup symbol
/// `ψ(ξ, t) = exp(-itξ|ξ| - t|ξ|^{1+a})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemigroupSpec {
    a: f64,
}

impl SemigroupSpec {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(invalid("a", format!("must lie in (0, 1], got {a}")));
        }
        Ok(SemigroupSpec { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Symbol of the linear part, `-iξ|ξ| - |ξ|^{1+a}`.
    pub fn generator(&self, xi: f64) -> Complex64 {
        Complex64::new(-xi.abs().powf(1.0 + self.a), -xi * xi.abs())
    }

    pub fn psi(&self, xi: f64, t: f64) -> Complex64 {
        (self.generator(xi) * t).exp()
    }

    pub fn symbol(&self, t: f64) -> MultiplierSymbol {
        let spec = *self;
        MultiplierSymbol::custom(
            format!("psi(a={}, t={t})", self.a),
            move |xi| spec.psi(xi, t),
            Some(Complex64::new(1.0, 0.0)),
        )
    }

    /// `ψ(ξ_k, t)` on the grid.
    ///
    /// The unpaired Nyquist frequency keeps only the dissipative factor
    /// `e^{-t|ξ|^{1+a}}`: it stays real, so real fields stay real, and the
    /// semigroup law holds on every mode.
    pub fn values_on(&self, grid: &Grid1D, t: f64) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = grid.frequencies().iter().map(|&xi| self.psi(xi, t)).collect();
        v[0] = Complex64::new(v[0].norm(), 0.0);
        v
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("the semigroup is defined for t >= 0, got {t}")));
    }
    Ok(())
}

/// `U(t)φ̂ = ψ(·, t) φ̂`.
pub fn linear_evolve_spectral(phi: &SpectralField, spec: &SemigroupSpec, t: f64) -> Result<SpectralField> {
    check_time(t)?;
    let mut out = phi.clone();
    out.scale_by(&spec.values_on(phi.grid(), t));
    Ok(out)
}

pub fn linear_evolve(phi: &PhysicalField, spec: &SemigroupSpec, t: f64) -> Result<PhysicalField> {
    Ok(linear_evolve_spectral(&phi.forward(), spec, t)?.inverse())
}
