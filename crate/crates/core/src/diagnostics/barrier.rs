//! Truncated weighted norms `‖|x|^r u(t)‖_{L²(|x| ≤ R)}` over growing `R`.
//!
//! On the line the weighted norm is finite or not; on the box the surrogate
//! is whether the truncated norm settles as `R` grows. With squared-norm
//! increments `δ_k = N_k² - N_{k-1}²` over the radius list:
//!
//! * diverging: `δ_last ≥ 0.9 δ_prev`, i.e. increments do not shrink
//!   (constant increments over geometric radii are a logarithmic divergence);
//! * saturating: otherwise, if the last two increments each change `N` by
//!   less than 2%;
//! * borderline otherwise.
//!
//! The growth test goes first: a slowly diverging tail with a small
//! coefficient changes `N` by little per radius but never stops doing so.

use serde::{Deserialize, Serialize};

use super::norms::moment_norm;
use crate::error::{invalid, Result};
use crate::par::{self, Exec};
use crate::spectral::PhysicalField;

pub const SATURATION_TOLERANCE: f64 = 0.02;
pub const GROWTH_RATIO: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BarrierVerdict {
    Saturating,
    Diverging,
    Borderline,
}

impl BarrierVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            BarrierVerdict::Saturating => "saturating",
            BarrierVerdict::Diverging => "diverging",
            BarrierVerdict::Borderline => "borderline",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub t: f64,
    pub r: f64,
    pub radius: f64,
    pub norm: f64,
    pub verdict: BarrierVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
}

impl GrowthTable {
    pub fn verdict(&self, t: f64, r: f64) -> Option<BarrierVerdict> {
        self.rows.iter().find(|row| row.t == t && row.r == r).map(|row| row.verdict)
    }
}

/// Verdict for truncated norms listed in order of increasing radius.
pub fn classify_growth(norms: &[f64]) -> BarrierVerdict {
    let m = norms.len();
    if m < 3 {
        return BarrierVerdict::Borderline;
    }
    let inc = |k: usize| norms[k] * norms[k] - norms[k - 1] * norms[k - 1];
    if inc(m - 1) >= GROWTH_RATIO * inc(m - 2) {
        return BarrierVerdict::Diverging;
    }
    let rel = |k: usize| (norms[k] - norms[k - 1]) / norms[k - 1];
    if rel(m - 1) < SATURATION_TOLERANCE && rel(m - 2) < SATURATION_TOLERANCE {
        BarrierVerdict::Saturating
    } else {
        BarrierVerdict::Borderline
    }
}

pub fn decay_barrier_scan(history: &[(f64, PhysicalField)], r_list: &[f64], radii: &[f64]) -> Result<GrowthTable> {
    if radii.len() < 3 {
        return Err(invalid("R", "need at least three radii"));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(invalid("R", "radii must be positive and strictly increasing"));
    }
    for (_, u) in history {
        let guard = 0.5 * u.grid().half_length();
        if radii[radii.len() - 1] > guard {
            return Err(invalid(
                "R",
                format!("radius {} exceeds the wrap-around guard L/2 = {guard}", radii[radii.len() - 1]),
            ));
        }
    }
    let cells: Vec<(usize, f64)> = (0..history.len())
        .flat_map(|i| r_list.iter().map(move |&r| (i, r)))
        .collect();
    let blocks = par::map(Exec::default(), &cells, |&(i, r)| -> Result<Vec<GrowthRow>> {
        let (t, u) = &history[i];
        let norms = radii
            .iter()
            .map(|&radius| moment_norm(u, r, radius))
            .collect::<Result<Vec<f64>>>()?;
        let verdict = classify_growth(&norms);
        Ok(radii
            .iter()
            .zip(norms)
            .map(|(&radius, norm)| GrowthRow {
                t: *t,
                r,
                radius,
                norm,
                verdict,
            })
            .collect())
    });
    let mut rows = Vec::new();
    for b in blocks {
        rows.extend(b?);
    }
    Ok(GrowthTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        assert_eq!(classify_growth(&[1.0, 1.01, 1.015]), BarrierVerdict::Saturating);
        assert_eq!(classify_growth(&[1.0, 1.005, 1.01]), BarrierVerdict::Diverging);
        // constant squared increments
        let log: Vec<f64> = (1..=4).map(|k| (k as f64).sqrt()).collect();
        assert_eq!(classify_growth(&log), BarrierVerdict::Diverging);
        assert_eq!(classify_growth(&[1.0, 2.0, 2.2]), BarrierVerdict::Borderline);
    }
}
