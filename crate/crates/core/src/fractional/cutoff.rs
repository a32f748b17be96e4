/// Smooth even cutoff: `χ = 1` on `|ξ| ≤ 1`, `χ = 0` on `|ξ| ≥ 2`, and
/// `χ(ξ) = S(2 - |ξ|)` in between with the C^∞ step
/// `S(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)})`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CutoffFunction;

impl CutoffFunction {
    pub fn eval(&self, xi: f64) -> f64 {
        let r = xi.abs();
        if r <= 1.0 {
            1.0
        } else if r >= 2.0 {
            0.0
        } else {
            smooth_step(2.0 - r)
        }
    }

    pub fn derivative(&self, xi: f64) -> f64 {
        let r = xi.abs();
        if r <= 1.0 || r >= 2.0 {
            0.0
        } else {
            -smooth_step_derivative(2.0 - r) * xi.signum()
        }
    }

    /// `sup |χ'|`, sampled finely over the transition band.
    pub fn max_derivative(&self) -> f64 {
        (0..=20_000)
            .map(|i| self.derivative(1.0 + i as f64 / 20_000.0).abs())
            .fold(0.0, f64::max)
    }

    /// Breakpoints where `χ` changes formula.
    pub fn breakpoints(&self) -> [f64; 4] {
        [-2.0, -1.0, 1.0, 2.0]
    }
}

fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let p = (-1.0 / t).exp();
    let q = (-1.0 / (1.0 - t)).exp();
    p / (p + q)
}

fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let p = (-1.0 / t).exp();
    let q = (-1.0 / (1.0 - t)).exp();
    p * q * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t))) / ((p + q) * (p + q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_support_and_range() {
        let chi = CutoffFunction;
        for i in -3000..=3000 {
            let x = i as f64 / 1000.0;
            let v = chi.eval(x);
            assert!((0.0..=1.0).contains(&v));
            if x.abs() <= 1.0 {
                assert_eq!(v, 1.0);
            }
            if x.abs() >= 2.0 {
                assert_eq!(v, 0.0);
            }
            assert_eq!(v, chi.eval(-x));
        }
        assert!((chi.eval(1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let chi = CutoffFunction;
        for &x in &[1.1, 1.3, 1.5, 1.77, -1.4] {
            let h = 1e-6;
            let fd = (chi.eval(x + h) - chi.eval(x - h)) / (2.0 * h);
            assert!((fd - chi.derivative(x)).abs() < 1e-7, "{x}");
        }
        // S'(1/2) = 4·(1/4)·... = 2 at the midpoint of the band
        assert!((chi.max_derivative() - 2.0).abs() < 1e-6);
    }
}
