//! Pseudo-spectral laboratory for the dissipative Benjamin–Ono equation
//!
//! ```text
//! u_t + H ∂²_x u + D^{1+a} u + u u_x = 0,   a ∈ (0, 1]
//! ```
//!
//! * [`spectral`]: periodic grid, continuous-convention DFT, multipliers.
//! * [`fractional`]: Stein derivative, commutator and weighted-norm audits.
//! * [`evolution`]: exact linear semigroup, kernel bounds, Duhamel integrators.
//! * [`diagnostics`]: norms, conserved quantities, tail fits, decay barriers.
//! * [`labcli`]: config-driven scenario runner and file formats.

pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod fit;
pub mod par;
pub mod quadrature;
pub mod fractional;
pub mod labcli;
pub mod spectral;

pub use error::{Error, Result};
