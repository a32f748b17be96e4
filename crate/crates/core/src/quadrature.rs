//! Quadrature rules: Gauss–Legendre panels on graded meshes and the
//! double-exponential (exp-sinh) rule for half-line integrals.

use std::f64::consts::{FRAC_PI_2, PI};

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let m = (order + 1) / 2;
        for i in 0..m {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut z = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, z);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[order - 1 - i] = z;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn rule_on(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| (mid + half * x, w * half))
            .collect()
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Sum of panel integrals over consecutive breakpoints.
    pub fn integrate_panels<F: FnMut(f64) -> f64>(&self, breaks: &[f64], mut f: F) -> f64 {
        breaks
            .windows(2)
            .map(|w| self.integrate(w[0], w[1], &mut f))
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Geometric breakpoints from `lo` to `hi` with `per_decade` panels per decade.
pub fn geometric_breaks(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && per_decade > 0);
    let decades = (hi / lo).log10();
    let panels = ((decades * per_decade as f64).ceil() as usize).max(1);
    let ratio = (hi / lo).powf(1.0 / panels as f64);
    let mut out = Vec::with_capacity(panels + 1);
    let mut x = lo;
    for _ in 0..panels {
        out.push(x);
        x *= ratio;
    }
    out.push(hi);
    out
}

/// Double-exponential quadrature of `f` over `(0, ∞)`.
///
/// Substitutes `x = exp(π/2 · sinh s)` and applies the trapezoid rule in `s`,
/// halving the step until two successive levels agree to `tol` (relative).
/// Tolerates algebraic endpoint singularities at the origin.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, tol: f64) -> f64 {
    let s_max = 4.5;
    let eval = |s: f64| -> f64 {
        let x = (FRAC_PI_2 * s.sinh()).exp();
        if x == 0.0 || !x.is_finite() {
            return 0.0;
        }
        let v = f(x) * x * FRAC_PI_2 * s.cosh();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= s_max {
        let s = k as f64 * h;
        sum += eval(s) + eval(-s);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= s_max {
            let s = k as f64 * h;
            sum += eval(s) + eval(-s);
            k += 2;
        }
        let next = sum * h;
        if (next - estimate).abs() <= tol * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}
