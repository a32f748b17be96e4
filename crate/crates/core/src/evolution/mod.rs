//! Linear semigroup, kernel-bound verifiers and the nonlinear integrators for
//!
//! ```text
//! û_t = (-iξ|ξ| - |ξ|^{1+a}) û - (iξ/2) (u²)^
//! ```

mod data;
mod kernel;
mod picard;
mod semigroup;
mod smoothing;
mod stepper;

pub use data::InitialData;
pub use kernel::{
    l2_constant, l2_kernel_norm, sup_closed_form, sup_maximizer, sup_search, verify_l2_bound, verify_sup_bound,
    KernelBound, KernelBoundReport, KernelBoundRow,
};
pub use picard::{picard_crosscheck, picard_iterate, PicardReport, PicardSpec};
pub use semigroup::{linear_evolve, linear_evolve_spectral, SemigroupSpec};
pub use smoothing::{
    critical_profile, evolved_sobolev_norm, smoothing_rate_fit, SmoothingFit, ENDPOINT_MARGIN,
    OBSERVABLE_TAIL_FRACTION,
};
pub use stepper::{
    dealias_mask, distance, evolve_to, nonlinear_step, self_convergence, Integrator, SelfConvergence,
    TimeStepperSpec, BLOW_UP_FACTOR,
};
