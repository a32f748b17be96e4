use crate::error::{invalid, Result};
use crate::spectral::{PhysicalField, SpectralField};

/// `‖u‖_{H^s} = ‖⟨ξ⟩^s û‖`. For `s = 0` this is the plain `L²` norm.
pub fn sobolev_norm(u: &PhysicalField, s: f64) -> f64 {
    if s == 0.0 {
        return u.l2_norm();
    }
    sobolev_norm_spectral(&u.forward(), s)
}

pub fn sobolev_norm_spectral(u: &SpectralField, s: f64) -> f64 {
    u.weighted_l2_norm(|xi| (1.0 + xi * xi).powf(0.5 * s))
}

fn truncated(u: &PhysicalField, radius: f64, weight: impl Fn(f64) -> f64) -> Result<f64> {
    let l = u.grid().half_length();
    if !(radius >= 0.0) || radius > l {
        return Err(invalid(
            "R",
            format!("truncation radius {radius} must lie in [0, L = {l}]"),
        ));
    }
    let sum: f64 = u
        .grid()
        .positions()
        .iter()
        .zip(u.samples())
        .filter(|(x, _)| x.abs() <= radius)
        .map(|(&x, &v)| weight(x) * v * v)
        .sum();
    Ok((sum * u.grid().dx()).sqrt())
}

/// `‖⟨x⟩^r u‖_{L²(|x| ≤ R)}`.
pub fn weighted_norm(u: &PhysicalField, r: f64, radius: f64) -> Result<f64> {
    truncated(u, radius, |x| (1.0 + x * x).powf(r))
}

/// `‖|x|^r u‖_{L²(|x| ≤ R)}`, the quantity tracked by the barrier scan.
pub fn moment_norm(u: &PhysicalField, r: f64, radius: f64) -> Result<f64> {
    truncated(u, radius, |x| x.abs().powf(2.0 * r))
}

/// `∫ x u dx` with the box coordinate.
pub fn first_moment(u: &PhysicalField) -> f64 {
    u.grid()
        .positions()
        .iter()
        .zip(u.samples())
        .map(|(x, v)| x * v)
        .sum::<f64>()
        * u.grid().dx()
}
