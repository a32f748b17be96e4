use serde::{Deserialize, Serialize};

use super::semigroup::SemigroupSpec;
use crate::error::{invalid, Error, Result};
use crate::fit::{self, geomspace};
use crate::par::{self, Exec};
use crate::spectral::{Grid1D, SpectralField};

/// Below this share of the `H^{s+λ}` mass beyond the dissipation frequency
/// of the latest time the profile is too smooth for a rate to show.
pub const OBSERVABLE_TAIL_FRACTION: f64 = 1e-2;
/// Smoothing orders closer than this to `1 + a` are not fitted.
pub const ENDPOINT_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingFit {
    pub a: f64,
    pub s: f64,
    pub lambda: f64,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub fitted_slope: f64,
    pub expected_slope: f64,
    pub residual: f64,
    pub tail_fraction: f64,
}

impl SmoothingFit {
    pub fn relative_deviation(&self) -> f64 {
        if self.expected_slope == 0.0 {
            self.fitted_slope.abs()
        } else {
            ((self.fitted_slope - self.expected_slope) / self.expected_slope).abs()
        }
    }
}

/// `φ̂(ξ) = ⟨ξ⟩^{-s-1/2-ε}`, as heavy a Fourier tail as `H^s` allows.
pub fn critical_profile(grid: &Grid1D, s: f64, epsilon: f64) -> SpectralField {
    let p = -s - 0.5 - epsilon;
    SpectralField::from_fn(grid, |xi| (1.0 + xi * xi).powf(0.5 * p).into()).expect("finite profile")
}

/// `‖U(t)φ‖_{H^σ}` from the coefficients.
pub fn evolved_sobolev_norm(profile: &SpectralField, spec: &SemigroupSpec, sigma: f64, t: f64) -> f64 {
    let alpha = 1.0 + spec.a();
    profile.weighted_l2_norm(|xi| (1.0 + xi * xi).powf(0.5 * sigma) * (-t * xi.abs().powf(alpha)).exp())
}

/// Log-log slope of `‖U(t)φ‖_{H^{s+λ}}` over `count` geometric times in `window`.
pub fn smoothing_rate_fit(
    spec: &SemigroupSpec,
    s: f64,
    lambda: f64,
    profile: &SpectralField,
    window: (f64, f64),
    count: usize,
) -> Result<SmoothingFit> {
    let a = spec.a();
    if !(s >= 0.0) {
        return Err(invalid("s", format!("must be >= 0, got {s}")));
    }
    if !(lambda >= 0.0 && lambda <= 1.0 + a - ENDPOINT_MARGIN) {
        return Err(invalid(
            "lambda",
            format!("must lie in [0, {}], got {lambda}", 1.0 + a - ENDPOINT_MARGIN),
        ));
    }
    let (t_lo, t_hi) = window;
    if !(t_lo > 0.0 && t_hi > t_lo) || count < 3 {
        return Err(Error::FitRejected("degenerate time window".into()));
    }
    let alpha = 1.0 + a;
    let grid = profile.grid();
    let xi_max = grid.frequencies()[0].abs();
    if t_lo * xi_max.powf(alpha) < 30.0 {
        return Err(invalid(
            "window",
            format!("t = {t_lo} is not resolved: frequencies reach only {xi_max}"),
        ));
    }
    let sigma = s + lambda;
    let xi_c = t_hi.powf(-1.0 / alpha);
    let density = |xi: f64, c: &num_complex::Complex64| {
        (1.0 + xi * xi).powf(sigma) * (-2.0 * t_lo * xi.abs().powf(alpha)).exp() * c.norm_sqr()
    };
    let (mut total, mut tail) = (0.0, 0.0);
    for (&xi, c) in grid.frequencies().iter().zip(profile.coefficients()) {
        let d = density(xi, c);
        total += d;
        if xi.abs() > xi_c {
            tail += d;
        }
    }
    let tail_fraction = if total > 0.0 { tail / total } else { 0.0 };
    if tail_fraction < OBSERVABLE_TAIL_FRACTION {
        return Err(Error::FitRejected(format!(
            "rate unobservable: only {tail_fraction:e} of the H^{sigma} mass lies beyond |xi| = {xi_c}"
        )));
    }
    let times = geomspace(t_lo, t_hi, count);
    let norms = par::map(Exec::default(), &times, |&t| evolved_sobolev_norm(profile, spec, sigma, t));
    let line = fit::power_law(&times, &norms).ok_or_else(|| Error::FitRejected("norms not positive".into()))?;
    Ok(SmoothingFit {
        a,
        s,
        lambda,
        times,
        norms,
        fitted_slope: line.slope,
        expected_slope: -lambda / alpha,
        residual: line.residual,
        tail_fraction,
    })
}
