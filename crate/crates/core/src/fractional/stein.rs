//! Stein derivative
//!
//! ```text
//! 𝒟^b f(x) = ( ∫ |f(x) - f(y)|² / |x - y|^{1+2b} dy )^{1/2},   0 < b < 1
//! ```
//!
//! evaluated by singular quadrature: on `|y - x| < h` the difference is
//! replaced by its local Taylor model through `r³` and integrated in closed
//! form; `h ≤ |y - x| ≤ Y` is covered by Gauss–Legendre
//! panels on a geometric mesh (refined further around any declared
//! breakpoints of `f`); beyond `Y` the function is taken to equal its far-field
//! values, which gives another closed form.

use crate::error::{invalid, Error, Result};
use crate::par::{self, Exec};
use crate::quadrature::{geometric_breaks, GaussLegendre};
use crate::spectral::PhysicalField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinQuadratureSpec {
    /// Half-width `h` of the neighbourhood handled by the local model.
    pub inner_halfwidth: f64,
    /// Cutoff `Y` of the numerically integrated region.
    pub outer_cutoff: f64,
    pub nodes_per_decade: usize,
}

impl SteinQuadratureSpec {
    pub fn new(inner_halfwidth: f64, outer_cutoff: f64, nodes_per_decade: usize) -> Result<Self> {
        if !(inner_halfwidth > 0.0) || !(outer_cutoff > inner_halfwidth) {
            return Err(invalid(
                "quadrature",
                format!("need 0 < h < Y, got h = {inner_halfwidth}, Y = {outer_cutoff}"),
            ));
        }
        if nodes_per_decade < 8 {
            return Err(invalid("nodes_per_decade", "must be at least 8"));
        }
        Ok(SteinQuadratureSpec {
            inner_halfwidth,
            outer_cutoff,
            nodes_per_decade,
        })
    }

    /// `h = 4·spacing`, `Y = half the sampled interval`, 32 panels per decade.
    pub fn defaults_for(f: &SampledFunction) -> Self {
        SteinQuadratureSpec {
            inner_halfwidth: 4.0 * f.spacing,
            outer_cutoff: 0.5 * f.span(),
            nodes_per_decade: 32,
        }
    }
}

/// Uniform samples `f(start + i·spacing)`, extended beyond the interval by
/// the edge values. Off-grid values use four-point Lagrange interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    start: f64,
    spacing: f64,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(start: f64, spacing: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 4 {
            return Err(invalid("values", "need at least 4 samples"));
        }
        if !(spacing > 0.0) {
            return Err(invalid("spacing", "must be positive"));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(SampledFunction {
            start,
            spacing,
            values,
        })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(start: f64, end: f64, count: usize, f: F) -> Result<Self> {
        let spacing = (end - start) / (count - 1) as f64;
        Self::new(
            start,
            spacing,
            (0..count).map(|i| f(start + i as f64 * spacing)).collect(),
        )
    }

    /// Samples of a grid field on `[-L, L)`.
    pub fn from_field(field: &PhysicalField) -> Self {
        let g = field.grid();
        SampledFunction {
            start: -g.half_length(),
            spacing: g.dx(),
            values: field.samples().to_vec(),
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.point(i)).collect()
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }

    pub fn end(&self) -> f64 {
        self.point(self.values.len() - 1)
    }

    pub fn span(&self) -> f64 {
        self.end() - self.start
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let s = (x - self.start) / self.spacing;
        if s <= 0.0 {
            return self.values[0];
        }
        if s >= (n - 1) as f64 {
            return self.values[n - 1];
        }
        let i = s.floor() as usize;
        let t = s - i as f64;
        if t == 0.0 {
            return self.values[i];
        }
        let i0 = i.clamp(1, n - 3) - 1;
        let t = s - i0 as f64;
        let v = &self.values[i0..i0 + 4];
        // Lagrange basis on nodes 0, 1, 2, 3
        let l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
        let l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
        let l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
        let l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
        l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3]
    }

    fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn max_deviation(&self, lo: f64, hi: f64, reference: f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let x = self.point(*i);
                x >= lo && x <= hi
            })
            .fold(0.0, |m, (_, v)| m.max((v - reference).abs()))
    }
}

/// Values of `𝒟^b f` together with an error bound for each value.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinProfile {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

impl SteinProfile {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }
}

/// A function known analytically, with its far-field values and the points
/// where it fails to be smooth.
pub struct AnalyticFunction<'a> {
    pub f: &'a (dyn Fn(f64) -> f64 + Sync),
    pub far_left: f64,
    pub far_right: f64,
    pub breakpoints: &'a [f64],
}

pub(crate) struct Quadrature {
    high: GaussLegendre,
    low: GaussLegendre,
}

impl Quadrature {
    pub(crate) fn new() -> Self {
        Quadrature {
            high: GaussLegendre::new(8),
            low: GaussLegendre::new(4),
        }
    }
}

/// One evaluation of `(𝒟^b f(x))²` and an error bound on that square.
#[allow(clippy::too_many_arguments)]
pub(crate) fn stein_square_at(
    quad: &Quadrature,
    f: &dyn Fn(f64) -> f64,
    x: f64,
    b: f64,
    h: f64,
    cutoff: f64,
    per_decade: usize,
    far: (f64, f64),
    breakpoints: &[f64],
) -> (f64, f64) {
    let fx = f(x);
    let kernel = 1.0 + 2.0 * b;

    // Local cubic model on |r| < h; odd powers of r integrate to zero.
    let d = 0.25 * h;
    let (fp, fm) = (f(x + d), f(x - d));
    let (fpp, fmm) = (f(x + 2.0 * d), f(x - 2.0 * d));
    let d1 = (8.0 * (fp - fm) - (fpp - fmm)) / (12.0 * d);
    let d2 = (fp - 2.0 * fx + fm) / (d * d);
    let d3 = (fpp - 2.0 * fp + 2.0 * fm - fmm) / (2.0 * d * d * d);
    let d4 = (fpp - 4.0 * fp + 6.0 * fx - 4.0 * fm + fmm) / (d * d * d * d);
    let c2 = d1 * d1;
    let c4 = 0.25 * d2 * d2 + d1 * d3 / 3.0;
    let c6 = d3 * d3 / 36.0 + d2 * d4 / 24.0;
    let moment = |p: f64| 2.0 * h.powf(p - 2.0 * b) / (p - 2.0 * b);
    let inner = c2 * moment(2.0) + c4 * moment(4.0);
    let inner_err = c6.abs() * moment(6.0);

    // Mesh in r on each side, merged with graded points around breakpoints.
    let base = geometric_breaks(h, cutoff, per_decade);
    let mut total = inner;
    let mut err = inner_err;
    for sign in [1.0, -1.0] {
        let mut breaks: Vec<f64> = base.clone();
        for &bp in breakpoints {
            let r_bp = sign * (bp - x);
            if r_bp <= h || r_bp >= cutoff {
                continue;
            }
            breaks.push(r_bp);
            let room = (r_bp - h).min(cutoff - r_bp).min(r_bp);
            let mut delta = room;
            while delta > room * 1e-12 {
                for cand in [r_bp - delta, r_bp + delta] {
                    if cand > h && cand < cutoff {
                        breaks.push(cand);
                    }
                }
                delta *= 0.75;
            }
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // Panels narrower than this would put nodes on top of a breakpoint.
        breaks.dedup_by(|next, kept| *next - *kept <= 1e-13 * *next);
        let integrand = |r: f64| {
            let diff = f(x + sign * r) - fx;
            diff * diff / r.powf(kernel)
        };
        for w in breaks.windows(2) {
            let hi = quad.high.integrate(w[0], w[1], integrand);
            let lo = quad.low.integrate(w[0], w[1], integrand);
            total += hi;
            err += (hi - lo).abs();
        }
    }

    // |r| > Y with f equal to its far-field value on each side.
    let tail = cutoff.powf(-2.0 * b) / (2.0 * b);
    total += ((fx - far.0).powi(2) + (fx - far.1).powi(2)) * tail;
    (total, err)
}

fn check_order(b: f64) -> Result<()> {
    if !(b > 0.0 && b < 1.0) {
        return Err(invalid("b", format!("order must lie in (0, 1), got {b}")));
    }
    Ok(())
}

fn value_and_error(square: f64, square_err: f64) -> (f64, f64) {
    let v = square.max(0.0).sqrt();
    let up = (square + square_err).max(0.0).sqrt();
    let down = (square - square_err).max(0.0).sqrt();
    (v, (up - v).max(v - down))
}

/// `𝒟^b f` at every sample point.
pub fn stein_derivative(
    f: &SampledFunction,
    b: f64,
    q: &SteinQuadratureSpec,
) -> Result<SteinProfile> {
    let points = f.points();
    stein_derivative_at(f, &points, b, q)
}

/// `𝒟^b f` at arbitrary points.
pub fn stein_derivative_at(
    f: &SampledFunction,
    points: &[f64],
    b: f64,
    q: &SteinQuadratureSpec,
) -> Result<SteinProfile> {
    check_order(b)?;
    if f.spacing > q.inner_halfwidth {
        return Err(invalid(
            "spacing",
            format!(
                "sample spacing {} is coarser than the inner half-width {}",
                f.spacing, q.inner_halfwidth
            ),
        ));
    }
    let quad = Quadrature::new();
    let far = (f.values[0], f.values[f.values.len() - 1]);
    let sup = f.sup_norm();
    let eval = |y: f64| f.eval(y);
    let results = par::map(Exec::default(), points, |&x| {
        let (sq, mut sq_err) = stein_square_at(
            &quad,
            &eval,
            x,
            b,
            q.inner_halfwidth,
            q.outer_cutoff,
            q.nodes_per_decade,
            far,
            &[],
        );
        // Samples beyond the cutoff that differ from the far-field values.
        let fx = f.eval(x);
        let tail = q.outer_cutoff.powf(-2.0 * b) / (2.0 * b);
        for (lo, hi, reference) in [
            (f.start, x - q.outer_cutoff, far.0),
            (x + q.outer_cutoff, f.end(), far.1),
        ] {
            if hi > lo {
                let dev = f.max_deviation(lo, hi, reference).min(2.0 * sup);
                let base = (fx - reference).abs();
                sq_err += ((base + dev).powi(2) - base * base) * tail;
            }
        }
        value_and_error(sq, sq_err)
    });
    let (values, errors) = results.into_iter().unzip();
    Ok(SteinProfile {
        points: points.to_vec(),
        values,
        errors,
    })
}

/// `𝒟^b f` for an analytic function at the given points.
///
/// Per point, `h` is an eighth of the distance from `x` to the nearest
/// breakpoint, capped at `10⁻³ (1 + |x|)`, and `Y = |x| + reach`.
pub fn stein_derivative_analytic(
    func: &AnalyticFunction<'_>,
    points: &[f64],
    b: f64,
    reach: f64,
    nodes_per_decade: usize,
) -> Result<SteinProfile> {
    check_order(b)?;
    if nodes_per_decade < 8 {
        return Err(invalid("nodes_per_decade", "must be at least 8"));
    }
    let quad = Quadrature::new();
    let f = |y: f64| (func.f)(y);
    let results = par::map(Exec::default(), points, |&x| {
        let gap = func
            .breakpoints
            .iter()
            .map(|bp| (bp - x).abs())
            .fold(f64::INFINITY, f64::min);
        let h = (gap / 8.0).min(1e-3 * (1.0 + x.abs())).max(1e-14);
        let cutoff = x.abs() + reach;
        let (sq, err) = stein_square_at(
            &quad,
            &f,
            x,
            b,
            h,
            cutoff,
            nodes_per_decade,
            (func.far_left, func.far_right),
            func.breakpoints,
        );
        value_and_error(sq, err)
    });
    let (values, errors) = results.into_iter().unzip();
    Ok(SteinProfile {
        points: points.to_vec(),
        values,
        errors,
    })
}

/// `‖𝒟^b f‖_{L²(ℝ)}` for samples of a function that vanishes outside the
/// sampled interval. The part of the norm from `x` outside the interval is
/// added in closed form, `∫ f(y)² ((end - y)^{-2b} + (y - start)^{-2b}) dy / 2b`.
pub fn stein_l2_norm(f: &SampledFunction, b: f64, q: &SteinQuadratureSpec) -> Result<f64> {
    let profile = stein_derivative(f, b, q)?;
    let interior = trapezoid_sq(&profile.values, f.spacing);
    let (a, e) = (f.start, f.end());
    let exterior: f64 = f
        .values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| {
            let y = f.point(i);
            if y <= a || y >= e {
                None
            } else {
                Some(v * v * ((e - y).powf(-2.0 * b) + (y - a).powf(-2.0 * b)))
            }
        })
        .sum::<f64>()
        * f.spacing
        / (2.0 * b);
    Ok((interior + exterior).sqrt())
}

pub(crate) fn trapezoid_sq(values: &[f64], dx: f64) -> f64 {
    let n = values.len();
    let s: f64 = values.iter().map(|v| v * v).sum();
    (s - 0.5 * (values[0].powi(2) + values[n - 1].powi(2))) * dx
}
