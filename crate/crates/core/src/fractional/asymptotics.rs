//! Asymptotics of `𝒟^θ(|ξ|^γ χ(ξ))(η)` and the `L²` membership test.
//!
//! Expected behaviour, for `θ ∈ (0, 1)` and `γ > 0`:
//!
//! * `|η| ≪ 1`, `γ ≠ θ`: `c|η|^{γ-θ} + c₁`
//! * `|η| ≪ 1`, `γ = θ`: `c(-ln|η|)^{1/2}`
//! * `|η| ≫ 1`: `c|η|^{-1/2-θ}`
//!
//! so the profile is square integrable exactly when `θ < γ + 1/2`.

use serde::{Deserialize, Serialize};

use super::cutoff::CutoffFunction;
use super::stein::{stein_derivative_analytic, AnalyticFunction};
use crate::error::{invalid, Error, Result};
use crate::fit::{self, geomspace};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SmallEta,
    /// `γ = θ`. With `𝒟² ≈ c² (-ln η) + c₁` the constant is removed by
    /// anchoring at the largest `η₀` of the window:
    /// `(𝒟²(η) - 𝒟²(η₀))^{1/2}` is regressed on `(ln(η₀/η))^{1/2}` in
    /// log-log form, expected slope 1.
    SmallEtaLogarithmic,
    LargeEta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    /// `|ξ|^γ χ(ξ)`
    Even,
    /// `|ξ|^γ sgn(ξ) χ(ξ)`
    Odd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsFitReport {
    pub regime: Regime,
    pub fitted_slope: f64,
    pub expected_slope: f64,
    pub fit_window: (f64, f64),
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    InL2,
    NotInL2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    /// `(η_min, ∫_{η_min ≤ |η| ≤ 1} |𝒟 F|²)` for shrinking `η_min`.
    pub truncated_norms: Vec<(f64, f64)>,
    pub verdict: Membership,
    /// False when a truncated norm decreased; never corrected.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinAsymptoticsReport {
    pub gamma: f64,
    pub theta: f64,
    pub parity: Parity,
    pub small: AsymptoticsFitReport,
    pub large: AsymptoticsFitReport,
    pub membership: MembershipReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeGrid {
    pub small: Vec<f64>,
    pub large: Vec<f64>,
    /// Truncated norms use `η_min = 10^{-1}, …, 10^{-decades}`.
    pub decades: u32,
    pub parity: Parity,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        ProbeGrid {
            small: geomspace(1e-4, 1e-2, 9),
            large: geomspace(20.0, 1000.0, 9),
            decades: 6,
            parity: Parity::Even,
        }
    }
}

/// Relative increment ratio at or above which the last two decades count as
/// non-shrinking.
pub const DIVERGENCE_RATIO: f64 = 0.9;
const NODES_PER_DECADE: usize = 32;

/// `|ξ|^p χ(ξ)` or its odd counterpart; `p` may be negative (`p > -1/2`).
pub fn cutoff_power(exponent: f64, parity: Parity) -> impl Fn(f64) -> f64 + Sync {
    let chi = CutoffFunction;
    move |xi: f64| {
        if xi == 0.0 {
            return if exponent > 0.0 { 0.0 } else { f64::INFINITY };
        }
        let v = xi.abs().powf(exponent) * chi.eval(xi);
        match parity {
            Parity::Even => v,
            Parity::Odd => v * xi.signum(),
        }
    }
}

/// `𝒟^θ(|ξ|^p χ)` at the given points.
pub fn stein_of_cutoff_power(exponent: f64, theta: f64, parity: Parity, etas: &[f64]) -> Result<Vec<f64>> {
    let f = cutoff_power(exponent, parity);
    let breakpoints = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let func = AnalyticFunction {
        f: &f,
        far_left: 0.0,
        far_right: 0.0,
        breakpoints: &breakpoints,
    };
    Ok(stein_derivative_analytic(&func, etas, theta, 4.0, NODES_PER_DECADE)?.values)
}

pub fn stein_asymptotics_probe(gamma: f64, theta: f64, grid: &ProbeGrid) -> Result<SteinAsymptoticsReport> {
    if !(gamma > 0.0) {
        return Err(invalid("gamma", format!("must be positive, got {gamma}")));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(invalid("theta", format!("must lie in (0, 1), got {theta}")));
    }
    let small_vals = stein_of_cutoff_power(gamma, theta, grid.parity, &grid.small)?;
    let small = if gamma == theta {
        let anchor = (0..grid.small.len())
            .max_by(|&i, &j| grid.small[i].total_cmp(&grid.small[j]))
            .ok_or_else(|| Error::FitRejected("degenerate fit window: empty".into()))?;
        let (eta0, d0) = (grid.small[anchor], small_vals[anchor]);
        let (xs, ys): (Vec<f64>, Vec<f64>) = grid
            .small
            .iter()
            .zip(&small_vals)
            .filter(|(e, _)| **e < eta0)
            .map(|(e, d)| ((eta0 / e).ln().sqrt(), (d * d - d0 * d0).max(0.0).sqrt()))
            .unzip();
        fit_report(Regime::SmallEtaLogarithmic, &xs, &ys, 1.0, &grid.small)?
    } else {
        fit_report(Regime::SmallEta, &grid.small, &small_vals, gamma - theta, &grid.small)?
    };
    let large_vals = stein_of_cutoff_power(gamma, theta, grid.parity, &grid.large)?;
    let large = fit_report(Regime::LargeEta, &grid.large, &large_vals, -(0.5 + theta), &grid.large)?;
    let membership = truncated_norms(gamma, theta, grid.parity, grid.decades)?;
    Ok(SteinAsymptoticsReport {
        gamma,
        theta,
        parity: grid.parity,
        small,
        large,
        membership,
    })
}

fn fit_report(
    regime: Regime,
    xs: &[f64],
    ys: &[f64],
    expected_slope: f64,
    window: &[f64],
) -> Result<AsymptoticsFitReport> {
    if xs.len() < 3 {
        return Err(Error::FitRejected("degenerate fit window: need at least 3 points".into()));
    }
    let line = fit::power_law(xs, ys)
        .ok_or_else(|| Error::FitRejected("degenerate fit window".into()))?;
    let lo = window.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = window.iter().copied().fold(0.0, f64::max);
    Ok(AsymptoticsFitReport {
        regime,
        fitted_slope: line.slope,
        expected_slope,
        fit_window: (lo, hi),
        residual: line.residual,
    })
}

/// Truncated squared norms `2∫_{η_min}^{1} |𝒟^θ F|² dη` over shrinking
/// `η_min`, integrated in `ln η` with Gauss–Legendre (two panels per decade).
pub fn truncated_norms(exponent: f64, theta: f64, parity: Parity, decades: u32) -> Result<MembershipReport> {
    if decades < 3 {
        return Err(invalid("decades", "need at least 3 decades"));
    }
    let unit = GaussLegendre::new(8).rule_on(0.0, 1.0);
    let ln10 = std::f64::consts::LN_10;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for k in 0..decades {
        for panel in 0..2 {
            let lo = -(k as f64) * ln10 - (panel as f64 + 1.0) * 0.5 * ln10;
            for (s, w) in &unit {
                let t = lo + s * 0.5 * ln10;
                nodes.push(t.exp());
                weights.push(w * 0.5 * ln10 * t.exp());
            }
        }
    }
    let values = stein_of_cutoff_power(exponent, theta, parity, &nodes)?;
    let per_decade = 2 * unit.len();
    let mut norms = Vec::with_capacity(decades as usize);
    let mut acc = 0.0;
    let mut monotone = true;
    for k in 0..decades as usize {
        let inc: f64 = (k * per_decade..(k + 1) * per_decade)
            .map(|i| 2.0 * weights[i] * values[i] * values[i])
            .sum();
        if !(inc >= 0.0) {
            monotone = false;
        }
        acc += inc;
        norms.push((10f64.powi(-(k as i32) - 1), acc));
    }
    let inc = |k: usize| norms[k].1 - if k == 0 { 0.0 } else { norms[k - 1].1 };
    let m = norms.len();
    let verdict = if inc(m - 1) >= DIVERGENCE_RATIO * inc(m - 2) {
        Membership::NotInL2
    } else {
        Membership::InL2
    };
    Ok(MembershipReport {
        truncated_norms: norms,
        verdict,
        monotone,
    })
}

/// `(η, 𝒟^γ(|ξ|^{γ-1/2} χ)(η), (γ₁²/(2(1-γ)))^{1/2} η^{-1/2})` with `γ₁ = γ - 1/2`.
pub fn singular_profile_envelope(gamma: f64, etas: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(invalid("gamma", format!("must lie in (0, 1/2), got {gamma}")));
    }
    if etas.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(invalid("eta", "envelope holds on (0, 1)"));
    }
    let g1 = gamma - 0.5;
    let vals = stein_of_cutoff_power(g1, gamma, Parity::Even, etas)?;
    let c = (g1 * g1 / (2.0 * (1.0 - gamma))).sqrt();
    Ok(etas
        .iter()
        .zip(vals)
        .map(|(&e, v)| (e, v, c / e.sqrt()))
        .collect())
}
