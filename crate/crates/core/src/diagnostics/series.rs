//! Conserved and monotone quantities along a run.
//!
//! On the line a solution satisfies `û(0,t) = φ̂(0)`, `d/dt‖u‖² =
//! -2‖D^{(1+a)/2}u‖²` and `d/dt ∫xu = ½‖u‖²`. On the periodic box the first
//! moment uses the sawtooth coordinate `x ∈ [-L, L)`, for which the discrete
//! right-hand side does not reproduce `½‖u‖²` exactly. The moment check is
//! therefore split in two series:
//!
//! * `moment_truncation = Σ x_j (∂_t u)_j dx - ½‖u‖²`, the box error of the
//!   identity itself, evaluated from the discrete right-hand side (for linear
//!   runs the identity reads `d/dt ∫xu = 0`);
//! * `moment_residual = ΔM/Δt - ½(F_n + F_{n+1})` with `F = Σ x ∂_t u dx`,
//!   the time-discretisation error of the run, which shrinks at the
//!   stepper's order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::norms::{first_moment, sobolev_norm_spectral, weighted_norm};
use crate::error::{invalid, Result};
use crate::evolution::{Integrator, SemigroupSpec, TimeStepperSpec};
use crate::spectral::SpectralField;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRequest {
    /// Sobolev indices to track.
    pub s_list: Vec<f64>,
    /// Weight exponents to track, each at every radius.
    pub r_list: Vec<f64>,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexedSeries {
    pub index: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSeries {
    pub r: f64,
    /// Truncation radius `R`.
    pub radius: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSeries {
    pub times: Vec<f64>,
    pub l2_norm: Vec<f64>,
    pub hs_norms: Vec<IndexedSeries>,
    pub weighted_norms: Vec<WeightedSeries>,
    /// `Re û(0, t)`.
    pub mean_mode: Vec<f64>,
    pub first_moment: Vec<f64>,
    /// `Σ x ∂_t u dx` from the discrete right-hand side.
    pub moment_flux: Vec<f64>,
    pub moment_truncation: Vec<f64>,
    /// One entry per interval `[t_n, t_{n+1}]`.
    pub moment_residual: Vec<f64>,
    /// `Δ‖u‖²/Δt + ‖D^{(1+a)/2}u‖²_n + ‖D^{(1+a)/2}u‖²_{n+1}`, one entry per interval.
    pub dissipation_residual: Vec<f64>,
}

impl DiagnosticsSeries {
    /// Largest `|û(0,t) - û(0,0)| / |û(0,0)|` (absolute when the mean vanishes).
    pub fn mean_drift(&self) -> f64 {
        let m0 = self.mean_mode.first().copied().unwrap_or(0.0);
        let scale = if m0 == 0.0 { 1.0 } else { m0.abs() };
        self.mean_mode.iter().map(|m| (m - m0).abs() / scale).fold(0.0, f64::max)
    }

    pub fn l2_non_increasing(&self) -> bool {
        self.l2_norm.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn max_moment_residual(&self) -> f64 {
        self.moment_residual.iter().map(|r| r.abs()).fold(0.0, f64::max)
    }

    pub fn max_moment_truncation(&self) -> f64 {
        self.moment_truncation.iter().map(|r| r.abs()).fold(0.0, f64::max)
    }
}

/// Incremental construction of a [`DiagnosticsSeries`] from the fields of a run.
pub struct SeriesBuilder {
    spec: SemigroupSpec,
    /// Nonlinear right-hand side; `None` for linear runs.
    stepper: Option<TimeStepperSpec>,
    integrator: Option<Integrator>,
    request: DiagnosticsRequest,
    series: DiagnosticsSeries,
    /// `‖D^{(1+a)/2}u‖²` at the last pushed time.
    last_dissipation: f64,
}

impl SeriesBuilder {
    /// `dealias_fraction` selects the nonlinear right-hand side used for the
    /// moment flux; `None` means the run is linear.
    pub fn new(spec: &SemigroupSpec, dealias_fraction: Option<f64>, request: &DiagnosticsRequest) -> Result<Self> {
        let stepper = dealias_fraction.map(|f| TimeStepperSpec::new(1.0, f)).transpose()?;
        let series = DiagnosticsSeries {
            times: Vec::new(),
            l2_norm: Vec::new(),
            hs_norms: request
                .s_list
                .iter()
                .map(|&s| IndexedSeries { index: s, values: Vec::new() })
                .collect(),
            weighted_norms: request
                .r_list
                .iter()
                .flat_map(|&r| {
                    request.radii.iter().map(move |&radius| WeightedSeries {
                        r,
                        radius,
                        values: Vec::new(),
                    })
                })
                .collect(),
            mean_mode: Vec::new(),
            first_moment: Vec::new(),
            moment_flux: Vec::new(),
            moment_truncation: Vec::new(),
            moment_residual: Vec::new(),
            dissipation_residual: Vec::new(),
        };
        Ok(SeriesBuilder {
            spec: *spec,
            stepper,
            integrator: None,
            request: request.clone(),
            series,
            last_dissipation: 0.0,
        })
    }

    pub fn push(&mut self, t: f64, u: &SpectralField) -> Result<()> {
        if let Some(&last) = self.series.times.last() {
            if !(t > last) {
                return Err(invalid("t", format!("times must increase strictly, got {t} after {last}")));
            }
        }
        let grid = u.grid();
        if let Some(st) = self.stepper {
            if self.integrator.as_ref().is_none_or(|i| i.grid() != grid) {
                self.integrator = Some(Integrator::new(grid, &self.spec, &st));
            }
        }

        // ∂_t û = (-iξ|ξ| - |ξ|^{1+a}) û + N(û)
        let mut rhs = u.clone();
        let generator: Vec<Complex64> = grid.frequencies().iter().map(|&xi| self.spec.generator(xi)).collect();
        rhs.scale_by(&generator);
        if let Some(integrator) = &self.integrator {
            rhs = rhs.add_scaled(&integrator.nonlinear_term(u), Complex64::new(1.0, 0.0))?;
        }
        let physical = u.inverse();
        let l2 = u.l2_norm();
        let moment = first_moment(&physical);
        let flux = first_moment(&rhs.inverse());
        let alpha = 1.0 + self.spec.a();
        let dissipation = u.weighted_l2_norm(|xi| xi.abs().powf(0.5 * alpha)).powi(2);

        let s = &mut self.series;
        if let (Some(&t0), Some(&m0), Some(&f0), Some(&n0)) =
            (s.times.last(), s.first_moment.last(), s.moment_flux.last(), s.l2_norm.last())
        {
            let dt = t - t0;
            s.moment_residual.push((moment - m0) / dt - 0.5 * (flux + f0));
            s.dissipation_residual
                .push((l2 * l2 - n0 * n0) / dt + dissipation + self.last_dissipation);
        }
        s.times.push(t);
        s.l2_norm.push(l2);
        for h in &mut s.hs_norms {
            h.values.push(sobolev_norm_spectral(u, h.index));
        }
        for w in &mut s.weighted_norms {
            w.values.push(weighted_norm(&physical, w.r, w.radius)?);
        }
        s.mean_mode.push(u.zero_mode().re);
        s.first_moment.push(moment);
        s.moment_flux.push(flux);
        let identity = if self.stepper.is_some() { 0.5 * l2 * l2 } else { 0.0 };
        s.moment_truncation.push(flux - identity);
        self.last_dissipation = dissipation;
        Ok(())
    }

    pub fn request(&self) -> &DiagnosticsRequest {
        &self.request
    }

    pub fn finish(self) -> DiagnosticsSeries {
        self.series
    }
}

/// Diagnostics of a recorded history of `(t, û)` snapshots.
pub fn conserved_quantities(
    history: &[(f64, SpectralField)],
    spec: &SemigroupSpec,
    dealias_fraction: Option<f64>,
    request: &DiagnosticsRequest,
) -> Result<DiagnosticsSeries> {
    let mut b = SeriesBuilder::new(spec, dealias_fraction, request)?;
    for (t, u) in history {
        b.push(*t, u)?;
    }
    Ok(b.finish())
}
