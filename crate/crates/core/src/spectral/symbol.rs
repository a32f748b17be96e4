use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::Grid1D;
use crate::error::{invalid, Error, Result};

type Rule = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A Fourier multiplier `m(ξ)` with an explicit value at `ξ = 0`.
///
/// Shipped symbols: `-i sgn ξ` (with `sgn 0 = 0`), `|ξ|^s` (with `|0|^0 = 1`
/// and `|0|^s = 0` for `s > 0`), `⟨ξ⟩^s` and `iξ`. Custom symbols without a
/// declared zero value are evaluated at `0` like any other frequency and are
/// rejected when the result is not finite.
#[derive(Clone)]
pub struct MultiplierSymbol {
    name: String,
    rule: Rule,
    at_zero: Option<Complex64>,
}

impl MultiplierSymbol {
    pub fn custom<F>(name: impl Into<String>, rule: F, at_zero: Option<Complex64>) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        MultiplierSymbol {
            name: name.into(),
            rule: Arc::new(rule),
            at_zero,
        }
    }

    pub fn identity() -> Self {
        Self::custom("1", |_| Complex64::new(1.0, 0.0), Some(Complex64::new(1.0, 0.0)))
    }

    pub fn hilbert() -> Self {
        Self::custom(
            "-i sgn",
            |xi| Complex64::new(0.0, -xi.signum()),
            Some(Complex64::new(0.0, 0.0)),
        )
    }

    pub fn frac_deriv(s: f64) -> Result<Self> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(invalid("s", format!("order must be >= 0, got {s}")));
        }
        let zero = if s == 0.0 { 1.0 } else { 0.0 };
        Ok(Self::custom(
            format!("|xi|^{s}"),
            move |xi| Complex64::new(xi.abs().powf(s), 0.0),
            Some(Complex64::new(zero, 0.0)),
        ))
    }

    pub fn bessel(s: f64) -> Self {
        Self::custom(
            format!("<xi>^{s}"),
            move |xi| Complex64::new((1.0 + xi * xi).powf(0.5 * s), 0.0),
            Some(Complex64::new(1.0, 0.0)),
        )
    }

    pub fn ddx() -> Self {
        Self::custom(
            "i xi",
            |xi| Complex64::new(0.0, xi),
            Some(Complex64::new(0.0, 0.0)),
        )
    }

    /// Pointwise product `m₁·m₂`.
    pub fn product(&self, other: &MultiplierSymbol) -> Self {
        let (a, b) = (self.rule.clone(), other.rule.clone());
        let at_zero = match (self.at_zero, other.at_zero) {
            (Some(x), Some(y)) => Some(x * y),
            _ => None,
        };
        let (za, zb) = (self.at_zero, other.at_zero);
        MultiplierSymbol {
            name: format!("({})*({})", self.name, other.name),
            rule: Arc::new(move |xi| {
                if xi == 0.0 {
                    za.unwrap_or_else(|| a(0.0)) * zb.unwrap_or_else(|| b(0.0))
                } else {
                    a(xi) * b(xi)
                }
            }),
            at_zero,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        match (xi == 0.0, self.at_zero) {
            (true, Some(v)) => v,
            _ => (self.rule)(xi),
        }
    }

    /// Values on every grid frequency, Nyquist entry replaced by its real part.
    pub fn values_on(&self, grid: &Grid1D) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(grid.n_points());
        for (i, &xi) in grid.frequencies().iter().enumerate() {
            let mut v = self.eval(xi);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::SingularSymbol { xi });
            }
            if i == 0 {
                v = Complex64::new(v.re, 0.0);
            }
            out.push(v);
        }
        Ok(out)
    }
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("name", &self.name)
            .field("at_zero", &self.at_zero)
            .finish()
    }
}
