//! Inequality audits stated as boundedness and refinement stability of
//! computable ratios. No audit claims an optimal constant.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::commutator::commutator_ratio;
use super::cutoff::CutoffFunction;
use super::samples::{TrigPolynomial, WavePacketSum};
use super::stein::{stein_derivative, stein_l2_norm, trapezoid_sq, SampledFunction, SteinQuadratureSpec};
use crate::error::{invalid, Result};
use crate::par::{self, Exec};
use crate::spectral::{Grid1D, MultiplierSymbol, PhysicalField};

/// Maximum relative change of the worst-case ratio between the coarsest and
/// finest resolution for an audit to count as refinement-stable.
pub const REFINEMENT_TOLERANCE: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionStat {
    pub n_points: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub audit: String,
    pub parameters: BTreeMap<String, f64>,
    pub resolutions: Vec<ResolutionStat>,
    pub samples: usize,
    /// Samples whose denominator vanished.
    pub skipped: usize,
}

impl RatioReport {
    pub fn max_ratio(&self) -> f64 {
        self.resolutions.last().map_or(f64::NAN, |r| r.max_ratio)
    }

    /// `|max_fine - max_coarse| / max_coarse`.
    pub fn refinement_variation(&self) -> f64 {
        match (self.resolutions.first(), self.resolutions.last()) {
            (Some(a), Some(b)) if a.max_ratio > 0.0 => (b.max_ratio - a.max_ratio).abs() / a.max_ratio,
            _ => f64::NAN,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.resolutions
            .iter()
            .all(|r| r.max_ratio.is_finite() && r.min_ratio.is_finite())
            && self.refinement_variation() < REFINEMENT_TOLERANCE
    }
}

/// Box and resolutions shared by the grid-based audits.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditGrid {
    pub half_length: f64,
    pub resolutions: Vec<usize>,
    pub exec: Exec,
}

impl AuditGrid {
    pub fn new(half_length: f64, resolutions: Vec<usize>) -> Self {
        AuditGrid {
            half_length,
            resolutions,
            exec: Exec::default(),
        }
    }
}

fn collect<F>(
    audit: &str,
    parameters: &[(&str, f64)],
    grid: &AuditGrid,
    samples: usize,
    ratio_at: F,
) -> Result<RatioReport>
where
    F: Fn(&Grid1D, usize) -> Result<Option<f64>> + Sync + Send,
{
    let mut resolutions = Vec::new();
    let mut skipped = 0;
    for &n in &grid.resolutions {
        let g = Grid1D::new(n, grid.half_length)?;
        let ratios = par::map_range(grid.exec, samples, |i| ratio_at(&g, i));
        let mut max_ratio = f64::NEG_INFINITY;
        let mut min_ratio = f64::INFINITY;
        skipped = 0;
        for r in ratios {
            match r? {
                Some(v) => {
                    max_ratio = max_ratio.max(v);
                    min_ratio = min_ratio.min(v);
                }
                None => skipped += 1,
            }
        }
        resolutions.push(ResolutionStat {
            n_points: n,
            max_ratio,
            min_ratio,
        });
    }
    Ok(RatioReport {
        audit: audit.to_string(),
        parameters: parameters.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        resolutions,
        samples,
        skipped,
    })
}

/// `max ‖[D^γ; φ] f‖ / (‖φ‖_{H²} ‖f‖)` over band-limited pairs.
pub fn commutator_bound_audit(
    gamma: f64,
    pairs: &[(TrigPolynomial, TrigPolynomial)],
    grid: &AuditGrid,
) -> Result<RatioReport> {
    for &n in &grid.resolutions {
        let band = pairs
            .iter()
            .map(|(p, f)| p.max_mode() + f.max_mode())
            .max()
            .unwrap_or(0);
        if band as usize >= n / 2 {
            return Err(invalid(
                "resolutions",
                format!("n = {n} aliases products of modes up to {band}"),
            ));
        }
    }
    collect("commutator", &[("gamma", gamma)], grid, pairs.len(), |g, i| {
        let (p, f) = &pairs[i];
        commutator_ratio(gamma, &p.sample(g)?, &f.sample(g)?)
    })
}

fn weighted_norm(f: &PhysicalField, weight: impl Fn(f64) -> f64) -> f64 {
    let dx = f.grid().dx();
    f.grid()
        .positions()
        .iter()
        .zip(f.samples())
        .map(|(&x, &u)| {
            let w = weight(x);
            if w.is_finite() {
                w * w * u * u
            } else {
                0.0
            }
        })
        .sum::<f64>()
        .sqrt()
        * dx.sqrt()
}

/// `max ‖|x|^ν H f‖ / ‖|x|^ν f‖`. For `ν < 0` the node at `x = 0` is omitted.
pub fn weighted_hilbert_audit(nu: f64, samples: &[WavePacketSum], grid: &AuditGrid) -> Result<RatioReport> {
    if !(nu > -0.5 && nu < 0.5) {
        return Err(invalid("nu", format!("{nu} is outside (-1/2, 1/2)")));
    }
    collect("weighted-hilbert", &[("nu", nu)], grid, samples.len(), |g, i| {
        let f = samples[i].sample(g)?;
        Ok(weighted_hilbert_ratio(nu, &f))
    })
}

pub fn weighted_hilbert_ratio(nu: f64, f: &PhysicalField) -> Option<f64> {
    let hf = crate::spectral::hilbert(f);
    let w = |x: f64| x.abs().powf(nu);
    let denom = weighted_norm(f, w);
    if denom == 0.0 {
        None
    } else {
        Some(weighted_norm(&hf, w) / denom)
    }
}

/// `max ‖J^{βδ}(⟨x⟩^{(1-β)ν} f)‖ / (‖⟨x⟩^ν f‖^{1-β} ‖J^δ f‖^β)`.
pub fn interpolation_audit(
    beta: f64,
    delta: f64,
    nu: f64,
    samples: &[WavePacketSum],
    grid: &AuditGrid,
) -> Result<RatioReport> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid("beta", format!("must lie in (0, 1), got {beta}")));
    }
    if !(delta > 0.0) || !(nu > 0.0) {
        return Err(invalid("delta/nu", "must be positive"));
    }
    collect(
        "interpolation",
        &[("beta", beta), ("delta", delta), ("nu", nu)],
        grid,
        samples.len(),
        |g, i| {
            let f = samples[i].sample(g)?;
            Ok(interpolation_ratio(beta, delta, nu, &f))
        },
    )
}

pub fn interpolation_ratio(beta: f64, delta: f64, nu: f64, f: &PhysicalField) -> Option<f64> {
    let bracket = |x: f64, p: f64| (1.0 + x * x).powf(0.5 * p);
    let weighted = f.map(|x, u| bracket(x, (1.0 - beta) * nu) * u);
    let lhs = weighted
        .forward()
        .weighted_l2_norm(|xi| bracket(xi, beta * delta));
    let moment = weighted_norm(f, |x| bracket(x, nu));
    let smooth = f.forward().weighted_l2_norm(|xi| bracket(xi, delta));
    let denom = moment.powf(1.0 - beta) * smooth.powf(beta);
    if denom == 0.0 {
        None
    } else {
        Some(lhs / denom)
    }
}

/// `(‖f‖ + ‖𝒟^b f‖) / ‖J^b f‖` over the sample family; both the maximum and
/// the minimum are reported since the equivalence is two-sided.
pub fn equivalence_audit(b: f64, samples: &[WavePacketSum], grid: &AuditGrid) -> Result<RatioReport> {
    collect("stein-equivalence", &[("b", b)], grid, samples.len(), |g, i| {
        let f = samples[i].sample(g)?;
        let sampled = SampledFunction::from_field(&f);
        let q = SteinQuadratureSpec::defaults_for(&sampled);
        let stein = stein_l2_norm(&sampled, b, &q)?;
        let bessel = f.forward().weighted_l2_norm(|xi| (1.0 + xi * xi).powf(0.5 * b));
        Ok(if bessel == 0.0 {
            None
        } else {
            Some((f.l2_norm() + stein) / bessel)
        })
    })
}

/// `max_x 𝒟^b χ(x) / (‖χ‖_∞ + ‖χ'‖_∞)` for each sample count on `[-half_width, half_width]`.
pub fn leibniz_pointwise_audit(b: f64, half_width: f64, counts: &[usize]) -> Result<RatioReport> {
    let chi = CutoffFunction;
    let scale = 1.0 + chi.max_derivative();
    let mut resolutions = Vec::new();
    for &n in counts {
        let f = SampledFunction::from_fn(-half_width, half_width, n, |x| chi.eval(x))?;
        let q = SteinQuadratureSpec::defaults_for(&f);
        let p = stein_derivative(&f, b, &q)?;
        let max = p.values.iter().copied().fold(0.0, f64::max);
        let min = p.values.iter().copied().fold(f64::INFINITY, f64::min);
        resolutions.push(ResolutionStat {
            n_points: n,
            max_ratio: max / scale,
            min_ratio: min / scale,
        });
    }
    Ok(RatioReport {
        audit: "leibniz-pointwise".into(),
        parameters: [("b".to_string(), b)].into_iter().collect(),
        resolutions,
        samples: 1,
        skipped: 0,
    })
}

/// Closed-form ceiling for the pointwise Leibniz ratio:
/// `𝒟^b h(x)² ≤ ‖h'‖²_∞/(1-b) + 4‖h‖²_∞/b`, obtained by splitting at `|x-y| = 1`.
pub fn leibniz_ceiling(b: f64) -> f64 {
    (1.0 / (1.0 - b) + 4.0 / b).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityReport {
    pub b: f64,
    /// `(‖𝒟^b(fg)‖, ‖f𝒟^b g‖ + ‖g𝒟^b f‖)` per pair.
    pub pairs: Vec<(f64, f64)>,
    pub violations: usize,
    /// `min (rhs - lhs) / rhs`.
    pub min_margin: f64,
}

/// `‖𝒟^b(fg)‖₂ ≤ ‖f𝒟^b g‖₂ + ‖g𝒟^b f‖₂` on sampled pairs.
pub fn subadditivity_audit(
    b: f64,
    pairs: &[(WavePacketSum, WavePacketSum)],
    interval: (f64, f64),
    count: usize,
) -> Result<SubadditivityReport> {
    let rows = par::map(Exec::default(), pairs, |(f, g)| -> Result<(f64, f64)> {
        let fs = SampledFunction::from_fn(interval.0, interval.1, count, |x| f.eval(x))?;
        let gs = SampledFunction::from_fn(interval.0, interval.1, count, |x| g.eval(x))?;
        let fg = SampledFunction::from_fn(interval.0, interval.1, count, |x| f.eval(x) * g.eval(x))?;
        let q = SteinQuadratureSpec::defaults_for(&fs);
        let df = stein_derivative(&fs, b, &q)?.values;
        let dg = stein_derivative(&gs, b, &q)?.values;
        let dfg = stein_derivative(&fg, b, &q)?.values;
        let dx = fs.spacing();
        let lhs = trapezoid_sq(&dfg, dx).sqrt();
        let f_dg: Vec<f64> = fs.values().iter().zip(&dg).map(|(a, d)| a * d).collect();
        let g_df: Vec<f64> = gs.values().iter().zip(&df).map(|(a, d)| a * d).collect();
        let rhs = trapezoid_sq(&f_dg, dx).sqrt() + trapezoid_sq(&g_df, dx).sqrt();
        Ok((lhs, rhs))
    });
    let pairs = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let violations = pairs.iter().filter(|(l, r)| l > r).count();
    let min_margin = pairs
        .iter()
        .map(|(l, r)| (r - l) / r)
        .fold(f64::INFINITY, f64::min);
    Ok(SubadditivityReport {
        b,
        pairs,
        violations,
        min_margin,
    })
}

/// `‖D^b f‖` through the multiplier, for comparison with the Stein route.
pub fn homogeneous_norm(f: &PhysicalField, b: f64) -> Result<f64> {
    let m = MultiplierSymbol::frac_deriv(b)?;
    Ok(f.forward().apply(&m)?.l2_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional::samples::{random_wave_packets, PacketRanges};
    use std::f64::consts::PI;

    #[test]
    fn weighted_hilbert_unweighted_is_isometry_on_zero_mean() {
        let g = Grid1D::new(256, 6.0 * PI).unwrap();
        for s in random_wave_packets(11, 5, PacketRanges::default()) {
            let f = s.sample(&g).unwrap();
            let mut spec = f.forward();
            let z = g.zero_index();
            spec.coefficients_mut()[z] = Default::default();
            spec.coefficients_mut()[0] = Default::default();
            let f0 = spec.inverse();
            let r = weighted_hilbert_ratio(0.0, &f0).unwrap();
            assert!((r - 1.0).abs() < 1e-10, "{r}");
        }
    }

    #[test]
    fn weighted_hilbert_rejects_large_weight() {
        let grid = AuditGrid::new(10.0, vec![64]);
        let err = weighted_hilbert_audit(0.6, &[], &grid).unwrap_err();
        assert!(err.to_string().contains("outside (-1/2, 1/2)"), "{err}");
    }

    #[test]
    fn zero_sample_is_skipped() {
        let g = Grid1D::new(64, 10.0).unwrap();
        let f = PhysicalField::zeros(&g);
        assert_eq!(interpolation_ratio(0.5, 2.0, 2.0, &f), None);
    }

    #[test]
    fn interpolation_rejects_out_of_range() {
        let grid = AuditGrid::new(10.0, vec![64]);
        assert!(interpolation_audit(1.0, 2.0, 2.0, &[], &grid).is_err());
        assert!(interpolation_audit(0.5, 0.0, 2.0, &[], &grid).is_err());
    }

    #[test]
    fn report_stability_rules() {
        let mut r = RatioReport {
            audit: "x".into(),
            parameters: BTreeMap::new(),
            resolutions: vec![
                ResolutionStat { n_points: 1, max_ratio: 1.0, min_ratio: 0.5 },
                ResolutionStat { n_points: 2, max_ratio: 1.05, min_ratio: 0.5 },
            ],
            samples: 2,
            skipped: 0,
        };
        assert!(r.is_stable());
        r.resolutions[1].max_ratio = 1.2;
        assert!(!r.is_stable());
    }
}
