//! Fixed-point iteration of the Duhamel formula
//!
//! ```text
//! û(t) = ψ(t) φ̂ + ∫₀ᵗ ψ(t - τ) N(û(τ)) dτ
//! ```
//!
//! on equally spaced `τ` nodes with the composite trapezoid rule. Its fixed
//! point is the implicit trapezoidal exponential scheme, a solver independent
//! of the explicit predictor–corrector march it is compared against.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::semigroup::SemigroupSpec;
use super::stepper::{distance, evolve_to, self_convergence, Integrator, SelfConvergence, TimeStepperSpec};
use crate::error::{invalid, Error, Result};
use crate::par::{self, Exec};
use crate::spectral::{PhysicalField, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardSpec {
    pub iterations: usize,
    /// Trapezoid intervals on `[0, T]`.
    pub intervals: usize,
    /// Stop once successive iterates differ by less than this, relative to `‖û(T)‖`.
    pub tolerance: f64,
    pub dealias_fraction: f64,
}

impl Default for PicardSpec {
    fn default() -> Self {
        PicardSpec {
            iterations: 50,
            intervals: 64,
            tolerance: 1e-13,
            dealias_fraction: 2.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardReport {
    pub t_final: f64,
    pub intervals: usize,
    /// `max_m ‖u^{k+1}(τ_m) - u^k(τ_m)‖` per iteration.
    pub distances: Vec<f64>,
    /// `‖u^k(T) - u_march(T)‖` for the starting guess and every iterate.
    pub discrepancies: Vec<f64>,
    pub converged: bool,
    /// Final discrepancy against the march with `dt = T / intervals`.
    pub discrepancy: f64,
    pub marching: SelfConvergence,
}

impl PicardReport {
    /// Final discrepancy over the marching self-convergence error estimate.
    pub fn agreement_ratio(&self) -> f64 {
        self.discrepancy / self.marching.estimate
    }
}

/// Iterates of the Duhamel map at the nodes `τ_m = mT/M`, starting from the
/// linear evolution `ψ(τ_m) φ̂`. The callback sees `(k, u^k(T))` for every iterate,
/// `k = 0` being the starting guess.
pub fn picard_iterate<F>(
    phi: &SpectralField,
    spec: &SemigroupSpec,
    t_final: f64,
    picard: &PicardSpec,
    mut observe: F,
) -> Result<(SpectralField, Vec<f64>, bool)>
where
    F: FnMut(usize, &SpectralField),
{
    if !(t_final > 0.0) {
        return Err(invalid("T", format!("must be positive, got {t_final}")));
    }
    if picard.intervals < 1 {
        return Err(invalid("intervals", "need at least one interval"));
    }
    let m_count = picard.intervals;
    let h = t_final / m_count as f64;
    let grid = phi.grid();
    let stepper = TimeStepperSpec::new(h, picard.dealias_fraction)?;
    let integrator = Integrator::new(grid, spec, &stepper);
    let lags: Vec<Vec<Complex64>> = (0..=m_count).map(|l| spec.values_on(grid, l as f64 * h)).collect();
    let n = grid.n_points();
    let free: Vec<SpectralField> = lags
        .iter()
        .map(|psi| {
            let mut u = phi.clone();
            u.scale_by(psi);
            u
        })
        .collect();

    let mut current = free.clone();
    observe(0, &current[m_count]);
    let mut distances = Vec::new();
    let mut converged = false;
    for k in 1..=picard.iterations {
        let nl: Vec<SpectralField> = par::map(Exec::default(), &current, |u| integrator.nonlinear_term(u));
        let next: Vec<SpectralField> = par::map_range(Exec::default(), m_count + 1, |m| {
            let mut acc = free[m].clone();
            if m == 0 {
                return acc;
            }
            let coeffs = acc.coefficients_mut();
            for j in 0..=m {
                let w = if j == 0 || j == m { 0.5 * h } else { h };
                let psi = &lags[m - j];
                let nj = nl[j].coefficients();
                for i in 0..n {
                    coeffs[i] += psi[i] * nj[i] * w;
                }
            }
            acc
        });
        let d = current
            .iter()
            .zip(&next)
            .map(|(a, b)| distance(a, b))
            .fold(0.0, f64::max);
        current = next;
        observe(k, &current[m_count]);
        let scale = current[m_count].l2_norm().max(f64::MIN_POSITIVE);
        if d <= picard.tolerance * scale {
            distances.push(d);
            converged = true;
            break;
        }
        if let Some(&previous) = distances.last() {
            if d > previous {
                return Err(Error::NoContraction { previous, current: d });
            }
        }
        distances.push(d);
    }
    let last = current.pop().expect("at least one node");
    Ok((last, distances, converged))
}

/// Picard solution at `t_small` compared with the march at `dt = t_small / intervals`.
pub fn picard_crosscheck(
    phi: &PhysicalField,
    spec: &SemigroupSpec,
    t_small: f64,
    picard: &PicardSpec,
) -> Result<(SpectralField, PicardReport)> {
    let phi_hat = phi.forward();
    let mut iterates = Vec::new();
    let (field, distances, converged) =
        picard_iterate(&phi_hat, spec, t_small, picard, |_, u| iterates.push(u.clone()))?;
    let stepper = TimeStepperSpec::new(t_small / picard.intervals as f64, picard.dealias_fraction)?;
    let marched = evolve_to(&phi_hat, spec, &stepper, t_small)?;
    let discrepancies = iterates.iter().map(|u| distance(u, &marched)).collect();
    let marching = self_convergence(&phi_hat, spec, &stepper, t_small)?;
    let discrepancy = distance(&field, &marched);
    Ok((
        field,
        PicardReport {
            t_final: t_small,
            intervals: picard.intervals,
            distances,
            discrepancies,
            converged,
            discrepancy,
            marching,
        },
    ))
}
