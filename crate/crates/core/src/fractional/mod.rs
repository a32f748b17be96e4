//! Fractional-calculus machinery: the Stein derivative and its asymptotics,
//! the `[D^γ; φ]` commutator, and ratio audits of the weighted Hilbert,
//! interpolation, Leibniz and Stein-equivalence inequalities.

mod asymptotics;
mod audits;
mod commutator;
mod cutoff;
pub mod samples;
mod stein;

pub use asymptotics::{
    cutoff_power, singular_profile_envelope, stein_asymptotics_probe, stein_of_cutoff_power,
    truncated_norms, AsymptoticsFitReport, Membership, MembershipReport, Parity, ProbeGrid, Regime,
    SteinAsymptoticsReport, DIVERGENCE_RATIO,
};
pub use audits::{
    commutator_bound_audit, equivalence_audit, homogeneous_norm, interpolation_audit,
    interpolation_ratio, leibniz_ceiling, leibniz_pointwise_audit, subadditivity_audit,
    weighted_hilbert_audit, weighted_hilbert_ratio, AuditGrid, RatioReport, ResolutionStat,
    SubadditivityReport, REFINEMENT_TOLERANCE,
};
pub use commutator::{commutator_apply, commutator_ratio, commutator_spectral};
pub use cutoff::CutoffFunction;
pub use stein::{
    stein_derivative, stein_derivative_analytic, stein_derivative_at, stein_l2_norm,
    AnalyticFunction, SampledFunction, SteinProfile, SteinQuadratureSpec,
};
