use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::semigroup::SemigroupSpec;
use crate::error::{invalid, Error, Result};
use crate::spectral::{Grid1D, PhysicalField, SpectralField};

/// The march aborts once `‖u‖_{H¹}` exceeds this multiple of its initial value.
pub const BLOW_UP_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeStepperSpec {
    dt: f64,
    dealias_fraction: f64,
}

impl TimeStepperSpec {
    pub fn new(dt: f64, dealias_fraction: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(invalid("dt", format!("must be positive, got {dt}")));
        }
        if !(dealias_fraction > 0.5 && dealias_fraction <= 1.0) {
            return Err(invalid(
                "dealias_fraction",
                format!("must lie in (1/2, 1], got {dealias_fraction}"),
            ));
        }
        Ok(TimeStepperSpec { dt, dealias_fraction })
    }

    /// Step `dt` with the 2/3 rule.
    pub fn with_dt(dt: f64) -> Result<Self> {
        Self::new(dt, 2.0 / 3.0)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    pub fn halved(&self) -> Self {
        TimeStepperSpec {
            dt: 0.5 * self.dt,
            ..*self
        }
    }

    /// Number of steps reaching `t_final`, which must be a whole multiple of `dt`.
    pub fn steps_to(&self, t_final: f64) -> Result<usize> {
        let steps = (t_final / self.dt).round();
        if !(t_final > 0.0) || (steps * self.dt - t_final).abs() > 1e-9 * t_final || steps < 1.0 {
            return Err(invalid(
                "T",
                format!("{t_final} is not a positive multiple of dt = {}", self.dt),
            ));
        }
        Ok(steps as usize)
    }
}

/// `1` on retained modes `|k| ≤ fraction · n/2`, `0` elsewhere.
pub fn dealias_mask(grid: &Grid1D, fraction: f64) -> Vec<f64> {
    let keep = (fraction * (grid.n_points() / 2) as f64).floor() as i64;
    (0..grid.n_points())
        .map(|i| if grid.wavenumber(i).abs() <= keep { 1.0 } else { 0.0 })
        .collect()
}

/// Exponential two-stage integrator with precomputed symbols for one grid.
///
/// ```text
/// û*      = ψ (û_n + dt N(û_n))
/// û_{n+1} = ψ û_n + dt/2 (ψ N(û_n) + N(û*))
/// N(û)    = -(iξ/2) (u²)^
/// ```
///
/// `u²` is formed from the dealiased field and the product is dealiased
/// again. `N` vanishes identically at `ξ = 0`, so the mean is carried by
/// `ψ(0) = 1` alone and is preserved exactly.
#[derive(Debug, Clone)]
pub struct Integrator {
    grid: Grid1D,
    spec: SemigroupSpec,
    stepper: TimeStepperSpec,
    psi: Vec<Complex64>,
    mask: Vec<f64>,
    flux: Vec<Complex64>,
}

impl Integrator {
    pub fn new(grid: &Grid1D, spec: &SemigroupSpec, stepper: &TimeStepperSpec) -> Self {
        let mask = dealias_mask(grid, stepper.dealias_fraction);
        let flux = grid
            .frequencies()
            .iter()
            .zip(&mask)
            .map(|(&xi, &m)| Complex64::new(0.0, -0.5 * xi * m))
            .collect();
        Integrator {
            grid: grid.clone(),
            spec: *spec,
            stepper: *stepper,
            psi: spec.values_on(grid, stepper.dt),
            mask,
            flux,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn spec(&self) -> &SemigroupSpec {
        &self.spec
    }

    pub fn stepper(&self) -> &TimeStepperSpec {
        &self.stepper
    }

    /// `N(û) = -(iξ/2) (u²)^`, dealiased.
    pub fn nonlinear_term(&self, u: &SpectralField) -> SpectralField {
        let mut v = u.clone();
        for (c, m) in v.coefficients_mut().iter_mut().zip(&self.mask) {
            *c *= m;
        }
        let squared: Vec<f64> = v.to_complex_samples().iter().map(|z| z.re * z.re).collect();
        let mut out = PhysicalField::new(&self.grid, squared)
            .expect("square of finite samples")
            .forward();
        out.scale_by(&self.flux);
        out
    }

    pub fn step(&self, u: &SpectralField) -> SpectralField {
        let dt = self.stepper.dt;
        let n0 = self.nonlinear_term(u);
        let mut star = u.add_scaled(&n0, Complex64::new(dt, 0.0)).expect("same grid");
        star.scale_by(&self.psi);
        let n1 = self.nonlinear_term(&star);
        let mut next = u.add_scaled(&n0, Complex64::new(0.5 * dt, 0.0)).expect("same grid");
        next.scale_by(&self.psi);
        next.add_scaled(&n1, Complex64::new(0.5 * dt, 0.0)).expect("same grid")
    }

    /// Take `steps` steps from `u0`, calling `observer(step, t, û)` on the
    /// initial field and after every step.
    pub fn march<F>(&self, u0: &SpectralField, steps: usize, mut observer: F) -> Result<SpectralField>
    where
        F: FnMut(usize, f64, &SpectralField),
    {
        u0.check_finite()?;
        if u0.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let h1 = |u: &SpectralField| u.weighted_l2_norm(|xi| (1.0 + xi * xi).sqrt());
        let limit = BLOW_UP_FACTOR * h1(u0);
        let mut u = u0.clone();
        observer(0, 0.0, &u);
        for k in 1..=steps {
            let next = self.step(&u);
            let last_valid_time = (k - 1) as f64 * self.stepper.dt;
            if next.check_finite().is_err() {
                return Err(Error::BlowUp {
                    last_valid_time,
                    guard: "non-finite coefficients".into(),
                });
            }
            if h1(&next) > limit {
                return Err(Error::BlowUp {
                    last_valid_time,
                    guard: format!("H1 norm above {BLOW_UP_FACTOR:e} x its initial value"),
                });
            }
            u = next;
            observer(k, k as f64 * self.stepper.dt, &u);
        }
        Ok(u)
    }
}

/// One step of the exponential two-stage scheme. For repeated steps build an
/// [`Integrator`] once instead.
pub fn nonlinear_step(u: &SpectralField, spec: &SemigroupSpec, stepper: &TimeStepperSpec) -> Result<SpectralField> {
    u.check_finite()?;
    let next = Integrator::new(u.grid(), spec, stepper).step(u);
    next.check_finite().map_err(|_| Error::BlowUp {
        last_valid_time: 0.0,
        guard: "non-finite coefficients".into(),
    })?;
    Ok(next)
}

/// March to `t_final` without observing intermediate steps.
pub fn evolve_to(phi: &SpectralField, spec: &SemigroupSpec, stepper: &TimeStepperSpec, t_final: f64) -> Result<SpectralField> {
    let steps = stepper.steps_to(t_final)?;
    Integrator::new(phi.grid(), spec, stepper).march(phi, steps, |_, _, _| {})
}

/// Richardson self-convergence from runs at `dt`, `dt/2` and `dt/4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfConvergence {
    pub dt: f64,
    pub t_final: f64,
    /// `‖u_dt - u_{dt/2}‖` and `‖u_{dt/2} - u_{dt/4}‖`.
    pub differences: [f64; 2],
    pub ratio: f64,
    pub order: f64,
    /// Error estimate for the `dt` run, `‖u_dt - u_{dt/2}‖ · 2^p/(2^p - 1)` with `p = 2`.
    pub estimate: f64,
}

pub fn self_convergence(
    phi: &SpectralField,
    spec: &SemigroupSpec,
    stepper: &TimeStepperSpec,
    t_final: f64,
) -> Result<SelfConvergence> {
    let coarse = evolve_to(phi, spec, stepper, t_final)?;
    let mid = evolve_to(phi, spec, &stepper.halved(), t_final)?;
    let fine = evolve_to(phi, spec, &stepper.halved().halved(), t_final)?;
    let d1 = distance(&coarse, &mid);
    let d2 = distance(&mid, &fine);
    let ratio = d1 / d2;
    Ok(SelfConvergence {
        dt: stepper.dt,
        t_final,
        differences: [d1, d2],
        ratio,
        order: ratio.log2(),
        estimate: d1 * 4.0 / 3.0,
    })
}

/// `‖u - v‖_{L²}` through Parseval.
pub fn distance(u: &SpectralField, v: &SpectralField) -> f64 {
    u.add_scaled(v, Complex64::new(-1.0, 0.0)).expect("same grid").l2_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn spec_validation() {
        assert!(TimeStepperSpec::new(0.0, 2.0 / 3.0).is_err());
        assert!(TimeStepperSpec::new(1e-3, 0.5).is_err());
        assert!(TimeStepperSpec::new(1e-3, 1.0).is_ok());
        let s = TimeStepperSpec::with_dt(1e-3).unwrap();
        assert_eq!(s.steps_to(1.0).unwrap(), 1000);
        assert!(s.steps_to(1.00051).is_err());
    }

    #[test]
    fn mask_keeps_two_thirds() {
        let g = Grid1D::new(12, PI).unwrap();
        let m = dealias_mask(&g, 2.0 / 3.0);
        let kept: Vec<i64> = (0..12).filter(|&i| m[i] == 1.0).map(|i| g.wavenumber(i)).collect();
        assert_eq!(kept, vec![-4, -3, -2, -1, 0, 1, 2, 3, 4]);
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let g = Grid1D::new(64, 8.0).unwrap();
        let spec = SemigroupSpec::new(0.5).unwrap();
        let st = TimeStepperSpec::with_dt(0.01).unwrap();
        let u = evolve_to(&SpectralField::zeros(&g), &spec, &st, 0.1).unwrap();
        assert!(u.coefficients().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn mean_is_preserved_bit_for_bit() {
        let g = Grid1D::new(128, 4.0 * PI).unwrap();
        let u0 = PhysicalField::from_fn(&g, |x| (-x * x).exp() + 0.3 * (-(x - 1.0).powi(2)).exp()).unwrap();
        let spec = SemigroupSpec::new(0.25).unwrap();
        let st = TimeStepperSpec::with_dt(0.01).unwrap();
        let u0 = u0.forward();
        let u1 = nonlinear_step(&u0, &spec, &st).unwrap();
        assert_eq!(u0.zero_mode(), u1.zero_mode());
    }
}
