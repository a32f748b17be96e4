//! Norms, conserved quantities, tail exponents and decay-barrier scans.

mod barrier;
mod norms;
mod series;
mod tails;
mod weights;

pub use barrier::{classify_growth, decay_barrier_scan, BarrierVerdict, GrowthRow, GrowthTable, GROWTH_RATIO, SATURATION_TOLERANCE};
pub use norms::{first_moment, moment_norm, sobolev_norm, sobolev_norm_spectral, weighted_norm};
pub use series::{conserved_quantities, DiagnosticsRequest, DiagnosticsSeries, IndexedSeries, SeriesBuilder, WeightedSeries};
pub use tails::{tail_exponent_fit, TailFitReport, TailParity, TailWindow, NOISE_MARGIN};
pub use weights::{general_threshold, zero_mean_threshold, WeightClass, WeightSpec};
