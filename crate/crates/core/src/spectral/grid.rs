use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic grid on `[-L, L)`.
///
/// Samples sit at `x_j = -L + j·dx`, `j = 0..n`. Frequencies are stored in
/// increasing order, `ξ_i = π k / L` with `k = i - n/2`, so index `n/2` is the
/// zero mode and index `0` is the unpaired Nyquist frequency `-π n / (2L)`.
#[derive(Clone)]
pub struct Grid1D {
    n_points: usize,
    half_length: f64,
    dx: f64,
    positions: Arc<[f64]>,
    frequencies: Arc<[f64]>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid1D {
    pub fn new(n_points: usize, half_length: f64) -> Result<Self> {
        if n_points % 2 != 0 {
            return Err(Error::InvalidGrid("n_points must be even".into()));
        }
        if n_points < 8 {
            return Err(Error::InvalidGrid("n_points must be at least 8".into()));
        }
        if !(half_length > 0.0) || !half_length.is_finite() {
            return Err(Error::InvalidGrid("half_length must be positive".into()));
        }
        let dx = 2.0 * half_length / n_points as f64;
        let positions: Arc<[f64]> = (0..n_points)
            .map(|j| -half_length + j as f64 * dx)
            .collect();
        let dxi = PI / half_length;
        let half = (n_points / 2) as i64;
        let frequencies: Arc<[f64]> = (0..n_points as i64)
            .map(|i| (i - half) as f64 * dxi)
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Grid1D {
            n_points,
            half_length,
            dx,
            positions,
            frequencies,
            forward: planner.plan_fft_forward(n_points),
            inverse: planner.plan_fft_inverse(n_points),
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Frequency spacing `π / L`.
    pub fn dxi(&self) -> f64 {
        PI / self.half_length
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Index of `ξ = 0` in [`Grid1D::frequencies`].
    pub fn zero_index(&self) -> usize {
        self.n_points / 2
    }

    /// Integer wavenumber `k` of monotone index `i`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        i as i64 - (self.n_points / 2) as i64
    }

    /// Position of wavenumber `k` in the FFT's native ordering.
    pub(crate) fn fft_slot(&self, i: usize) -> usize {
        let k = self.wavenumber(i);
        k.rem_euclid(self.n_points as i64) as usize
    }

    pub(crate) fn fft_forward(&self) -> &Arc<dyn Fft<f64>> {
        &self.forward
    }

    pub(crate) fn fft_inverse(&self) -> &Arc<dyn Fft<f64>> {
        &self.inverse
    }
}

impl PartialEq for Grid1D {
    fn eq(&self, other: &Self) -> bool {
        self.n_points == other.n_points && self.half_length.to_bits() == other.half_length.to_bits()
    }
}

impl fmt::Debug for Grid1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid1D")
            .field("n_points", &self.n_points)
            .field("half_length", &self.half_length)
            .field("dx", &self.dx)
            .finish()
    }
}
