//! Closed-form bounds for the dissipative factor `e^{-t|ξ|^{1+a}}`:
//!
//! * `sup_ξ |ξ|^{2λ} e^{-t|ξ|^{1+a}} = c(a,λ) t^{-2λ/(1+a)}` with
//!   `c(a,λ) = ((1+a)e/(2λ))^{-2λ/(1+a)}`;
//! * `‖|ξ|^σ e^{-t|ξ|^{1+a}}‖_{L²} = c_{σ,a} t^{-(2σ+1)/(2(1+a))}` with
//!   `c_{σ,a}² = ∫ |w|^{2σ} e^{-2|w|^{1+a}} dw`.
//!
//! The measured side never uses the closed form: sups come from a log-grid
//! search followed by golden-section refinement, norms from Gauss–Legendre
//! quadrature directly in `ξ`, and `c_{σ,a}` from double-exponential
//! quadrature of the `w` integral.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fit;
use crate::quadrature::{exp_sinh, geometric_breaks, GaussLegendre};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelBound {
    /// Parameter `λ`.
    Sup,
    /// Parameter `σ`.
    L2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelBoundRow {
    pub t: f64,
    pub measured: f64,
    pub closed_form: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelBoundReport {
    pub bound: KernelBound,
    pub a: f64,
    pub parameter: f64,
    pub rows: Vec<KernelBoundRow>,
    /// Log-log slope of the measured values against `t` (two or more times).
    pub fitted_exponent: Option<f64>,
    pub expected_exponent: f64,
}

impl KernelBoundReport {
    pub fn max_rel_err(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_err).fold(0.0, f64::max)
    }
}

fn check(a: f64, ts: &[f64]) -> Result<()> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(invalid("a", format!("must lie in (0, 1], got {a}")));
    }
    if ts.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(invalid("t", "times must be positive"));
    }
    Ok(())
}

fn report(
    bound: KernelBound,
    a: f64,
    parameter: f64,
    ts: &[f64],
    expected_exponent: f64,
    rows: Vec<KernelBoundRow>,
) -> KernelBoundReport {
    let fitted_exponent = if ts.len() >= 2 {
        let ys: Vec<f64> = rows.iter().map(|r| r.measured).collect();
        fit::power_law(ts, &ys).map(|l| l.slope)
    } else {
        None
    };
    KernelBoundReport {
        bound,
        a,
        parameter,
        rows,
        fitted_exponent,
        expected_exponent,
    }
}

/// `c(a,λ) t^{-2λ/(1+a)}`.
pub fn sup_closed_form(a: f64, lambda: f64, t: f64) -> f64 {
    let p = 2.0 * lambda / (1.0 + a);
    ((1.0 + a) * std::f64::consts::E / (2.0 * lambda)).powf(-p) * t.powf(-p)
}

/// Maximiser `ξ₀ = (2λ/((1+a)t))^{1/(1+a)}` of `|ξ|^{2λ} e^{-t|ξ|^{1+a}}`.
pub fn sup_maximizer(a: f64, lambda: f64, t: f64) -> f64 {
    (2.0 * lambda / ((1.0 + a) * t)).powf(1.0 / (1.0 + a))
}

/// `(sup value, argmax)` found without reference to the closed form.
pub fn sup_search(a: f64, lambda: f64, t: f64) -> (f64, f64) {
    // log of the objective in u = ln ξ; concave in u.
    let g = |u: f64| 2.0 * lambda * u - t * ((1.0 + a) * u).exp();
    let (lo, hi, count) = (-40.0, 40.0, 8001);
    let step = (hi - lo) / (count - 1) as f64;
    let best = (0..count)
        .map(|i| lo + step * i as f64)
        .map(|u| (u, g(u)))
        .fold((lo, f64::NEG_INFINITY), |m, p| if p.1 > m.1 { p } else { m });
    let (mut left, mut right) = (best.0 - step, best.0 + step);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = right - ratio * (right - left);
    let mut d = left + ratio * (right - left);
    let (mut gc, mut gd) = (g(c), g(d));
    while right - left > 1e-14 * (1.0 + best.0.abs()) {
        if gc > gd {
            right = d;
            d = c;
            gd = gc;
            c = right - ratio * (right - left);
            gc = g(c);
        } else {
            left = c;
            c = d;
            gc = gd;
            d = left + ratio * (right - left);
            gd = g(d);
        }
    }
    let u = 0.5 * (left + right);
    (g(u).exp(), u.exp())
}

pub fn verify_sup_bound(a: f64, lambda: f64, ts: &[f64]) -> Result<KernelBoundReport> {
    check(a, ts)?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(invalid("lambda", format!("must be positive, got {lambda}")));
    }
    let rows = ts
        .iter()
        .map(|&t| {
            let (measured, _) = sup_search(a, lambda, t);
            let closed_form = sup_closed_form(a, lambda, t);
            KernelBoundRow {
                t,
                measured,
                closed_form,
                rel_err: (measured - closed_form).abs() / closed_form,
            }
        })
        .collect();
    Ok(report(KernelBound::Sup, a, lambda, ts, -2.0 * lambda / (1.0 + a), rows))
}

/// `‖|ξ|^σ e^{-t|ξ|^{1+a}}‖_{L²(dξ)}` by Gauss–Legendre on a geometric mesh in `ξ`.
pub fn l2_kernel_norm(a: f64, sigma: f64, t: f64) -> f64 {
    let alpha = 1.0 + a;
    // e^{-2tξ^α} < e^{-800} beyond hi.
    let hi = (400.0 / t).powf(1.0 / alpha);
    let lo = hi * 1e-12;
    let gl = GaussLegendre::new(10);
    let breaks = geometric_breaks(lo, hi, 24);
    let body = gl.integrate_panels(&breaks, |xi| xi.powf(2.0 * sigma) * (-2.0 * t * xi.powf(alpha)).exp());
    let head = lo.powf(2.0 * sigma + 1.0) / (2.0 * sigma + 1.0);
    (2.0 * (body + head)).sqrt()
}

/// `c_{σ,a} = (∫ |w|^{2σ} e^{-2|w|^{1+a}} dw)^{1/2}`.
pub fn l2_constant(a: f64, sigma: f64) -> f64 {
    let half = exp_sinh(|w| w.powf(2.0 * sigma) * (-2.0 * w.powf(1.0 + a)).exp(), 1e-14);
    (2.0 * half).sqrt()
}

pub fn verify_l2_bound(a: f64, sigma: f64, ts: &[f64]) -> Result<KernelBoundReport> {
    check(a, ts)?;
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(invalid("sigma", format!("must be >= 0, got {sigma}")));
    }
    let exponent = -(2.0 * sigma + 1.0) / (2.0 * (1.0 + a));
    let c = l2_constant(a, sigma);
    let rows = ts
        .iter()
        .map(|&t| {
            let measured = l2_kernel_norm(a, sigma, t);
            let closed_form = c * t.powf(exponent);
            KernelBoundRow {
                t,
                measured,
                closed_form,
                rel_err: (measured - closed_form).abs() / closed_form,
            }
        })
        .collect();
    Ok(report(KernelBound::L2, a, sigma, ts, exponent, rows))
}
