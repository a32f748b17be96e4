//! Periodic grid, the continuous-convention discrete Fourier transform and
//! Fourier multiplier operators.
//!
//! The transform follows `û(ξ) = ∫ e^{-iξx} u(x) dx`, discretised on the box
//! `[-L, L)` as `dx · Σ_j u(x_j) e^{-iξ_k x_j}`. Consequently
//! `Σ |u_j|² dx = (1/2π) Σ |û_k|² dξ` and the Gaussian `e^{-x²/2}` maps to
//! `√(2π) e^{-ξ²/2}`.

mod field;
mod grid;
mod symbol;

pub use field::{PhysicalField, SpectralField};
pub use grid::Grid1D;
pub use symbol::MultiplierSymbol;

use crate::error::Result;

/// Hilbert transform, symbol `-i sgn ξ`.
pub fn hilbert(f: &PhysicalField) -> PhysicalField {
    apply_known(f, &MultiplierSymbol::hilbert())
}

/// `D^s`, symbol `|ξ|^s`.
pub fn frac_deriv(f: &PhysicalField, s: f64) -> Result<PhysicalField> {
    Ok(apply_known(f, &MultiplierSymbol::frac_deriv(s)?))
}

/// Bessel potential `J^s`, symbol `(1 + ξ²)^{s/2}`.
pub fn bessel(f: &PhysicalField, s: f64) -> PhysicalField {
    apply_known(f, &MultiplierSymbol::bessel(s))
}

/// `∂_x`, symbol `iξ`.
pub fn ddx(f: &PhysicalField) -> PhysicalField {
    apply_known(f, &MultiplierSymbol::ddx())
}

fn apply_known(f: &PhysicalField, m: &MultiplierSymbol) -> PhysicalField {
    f.forward()
        .apply(m)
        .expect("shipped symbols are finite on every grid frequency")
        .inverse()
}
