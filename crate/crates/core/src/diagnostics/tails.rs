//! Algebraic tail exponents `|u(x)| ≈ C|x|^p`.
//!
//! The field is split into its even and odd parts and each is fitted on the
//! window. Tails produced by the semigroup come with a definite parity (the
//! `|ξ|^{1+a}` cusp acting on `φ̂(0)` is even, the dispersive cusp `ξ|ξ|` is
//! odd), so each part is close to a single power law. The reported exponent
//! is the slower of the two, which governs `|u|` as `|x| → ∞` even where the
//! faster part is still larger inside the window.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fit;
use crate::spectral::PhysicalField;

/// Window amplitudes must exceed this multiple of the roundoff floor.
pub const NOISE_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailParity {
    Even,
    Odd,
}

/// Fit interval on `|x|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailWindow {
    /// `[lo·L, hi·L]`.
    Fraction { lo: f64, hi: f64 },
    Absolute { x1: f64, x2: f64 },
}

impl Default for TailWindow {
    fn default() -> Self {
        TailWindow::Fraction { lo: 1.0 / 16.0, hi: 0.25 }
    }
}

impl TailWindow {
    pub fn resolve(&self, half_length: f64) -> (f64, f64) {
        match *self {
            TailWindow::Fraction { lo, hi } => (lo * half_length, hi * half_length),
            TailWindow::Absolute { x1, x2 } => (x1, x2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFitReport {
    pub interval: (f64, f64),
    pub exponent: f64,
    pub residual: f64,
    /// `L - x₂`.
    pub wraparound_margin: f64,
    /// Parity of the part whose exponent is reported.
    pub parity: TailParity,
    pub opposite_parity_exponent: Option<f64>,
    pub points: usize,
}

pub fn tail_exponent_fit(u: &PhysicalField, window: &TailWindow) -> Result<TailFitReport> {
    let grid = u.grid();
    let l = grid.half_length();
    let (x1, x2) = window.resolve(l);
    if !(x1 > 0.0 && x2 > x1) {
        return Err(invalid("window", format!("need 0 < x1 < x2, got [{x1}, {x2}]")));
    }
    if x2 >= 0.5 * l {
        return Err(invalid("window", format!("x2 = {x2} violates the wrap-around guard x2 < L/2 = {}", 0.5 * l)));
    }
    let n = grid.n_points();
    let xs = grid.positions();
    let v = u.samples();
    // x_{n-j} = -x_j for j ≥ 1.
    let idx: Vec<usize> = (1..n).filter(|&j| xs[j] >= x1 && xs[j] <= x2).collect();
    if idx.len() < 4 {
        return Err(Error::FitRejected(format!("window [{x1}, {x2}] holds fewer than 4 grid points")));
    }
    let even: Vec<f64> = idx.iter().map(|&j| 0.5 * (v[j] + v[n - j])).collect();
    let odd: Vec<f64> = idx.iter().map(|&j| 0.5 * (v[j] - v[n - j])).collect();
    let ax: Vec<f64> = idx.iter().map(|&j| xs[j]).collect();
    let floor = NOISE_MARGIN * f64::EPSILON * u.max_abs() * (n as f64).sqrt();
    let fits = [
        (TailParity::Even, fit_part(&ax, &even, floor)),
        (TailParity::Odd, fit_part(&ax, &odd, floor)),
    ];
    let best = fits
        .iter()
        .filter_map(|(p, f)| f.as_ref().ok().map(|line| (*p, *line)))
        .max_by(|a, b| a.1.slope.total_cmp(&b.1.slope));
    let Some((parity, line)) = best else {
        let reasons: Vec<String> = fits
            .iter()
            .filter_map(|(p, f)| f.as_ref().err().map(|e| format!("{p:?}: {e}")))
            .collect();
        return Err(Error::FitRejected(format!("no usable tail in [{x1}, {x2}] ({})", reasons.join("; "))));
    };
    let opposite = fits
        .iter()
        .find(|(p, _)| *p != parity)
        .and_then(|(_, f)| f.as_ref().ok().map(|l| l.slope));
    Ok(TailFitReport {
        interval: (x1, x2),
        exponent: line.slope,
        residual: line.residual,
        wraparound_margin: l - x2,
        parity,
        opposite_parity_exponent: opposite,
        points: idx.len(),
    })
}

fn fit_part(xs: &[f64], part: &[f64], floor: f64) -> std::result::Result<fit::LineFit, String> {
    let smallest = part.iter().map(|a| a.abs()).fold(f64::INFINITY, f64::min);
    if !(smallest > floor) {
        return Err(format!("amplitude {smallest:e} is below the noise floor {floor:e}"));
    }
    if part.iter().any(|a| a.signum() != part[0].signum()) {
        return Err("changes sign".into());
    }
    let ys: Vec<f64> = part.iter().map(|a| a.abs()).collect();
    fit::power_law(xs, &ys).ok_or_else(|| "degenerate window".into())
}
