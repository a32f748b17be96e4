use num_complex::Complex64;

use super::{Grid1D, MultiplierSymbol};
use crate::error::{Error, Result};

/// Real samples `u(x_j)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: Grid1D,
    samples: Vec<f64>,
}

/// Fourier coefficients `û(ξ_k)` in the grid's monotone frequency order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid1D,
    coefficients: Vec<Complex64>,
}

impl PhysicalField {
    pub fn new(grid: &Grid1D, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::GridMismatch);
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(PhysicalField {
            grid: grid.clone(),
            samples,
        })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: &Grid1D, f: F) -> Result<Self> {
        Self::new(grid, grid.positions().iter().map(|&x| f(x)).collect())
    }

    pub fn zeros(grid: &Grid1D) -> Self {
        PhysicalField {
            grid: grid.clone(),
            samples: vec![0.0; grid.n_points()],
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// `‖u‖_{L²}` by the rectangle rule (exact for the periodic trig interpolant).
    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|v| v * v).sum::<f64>() * self.grid.dx()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise product on the grid.
    pub fn mul(&self, other: &PhysicalField) -> Result<PhysicalField> {
        self.check_grid(&other.grid)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b)
            .collect();
        Ok(PhysicalField {
            grid: self.grid.clone(),
            samples,
        })
    }

    /// `self + scale·other`.
    pub fn add_scaled(&self, other: &PhysicalField, scale: f64) -> Result<PhysicalField> {
        self.check_grid(&other.grid)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(PhysicalField {
            grid: self.grid.clone(),
            samples,
        })
    }

    pub fn map<F: Fn(f64, f64) -> f64>(&self, f: F) -> PhysicalField {
        let samples = self
            .grid
            .positions()
            .iter()
            .zip(&self.samples)
            .map(|(&x, &u)| f(x, u))
            .collect();
        PhysicalField {
            grid: self.grid.clone(),
            samples,
        }
    }

    pub fn check_grid(&self, grid: &Grid1D) -> Result<()> {
        if &self.grid == grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Forward transform, `û(ξ_k) = dx Σ_j u(x_j) e^{-iξ_k x_j}`.
    pub fn forward(&self) -> SpectralField {
        let samples: Vec<Complex64> = self.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        SpectralField::from_complex_samples(&self.grid, samples)
    }
}

impl SpectralField {
    pub fn new(grid: &Grid1D, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.n_points() {
            return Err(Error::GridMismatch);
        }
        let out = SpectralField {
            grid: grid.clone(),
            coefficients,
        };
        out.check_finite()?;
        Ok(out)
    }

    /// Field given directly by its transform, `û(ξ_k) = f(ξ_k)`.
    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: &Grid1D, f: F) -> Result<Self> {
        Self::new(grid, grid.frequencies().iter().map(|&xi| f(xi)).collect())
    }

    pub fn zeros(grid: &Grid1D) -> Self {
        SpectralField {
            grid: grid.clone(),
            coefficients: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    /// Transform of complex samples. Used for fields that need not be real.
    pub fn from_complex_samples(grid: &Grid1D, samples: Vec<Complex64>) -> Self {
        assert_eq!(samples.len(), grid.n_points());
        let mut buf = samples;
        grid.fft_forward().process(&mut buf);
        let n = grid.n_points();
        let dx = grid.dx();
        let coefficients = (0..n)
            .map(|i| buf[grid.fft_slot(i)] * (dx * parity(grid.wavenumber(i))))
            .collect();
        SpectralField {
            grid: grid.clone(),
            coefficients,
        }
    }

    /// Complex samples `u(x_j) = (1/2L) Σ_k û_k e^{iξ_k x_j}`.
    pub fn to_complex_samples(&self) -> Vec<Complex64> {
        let grid = &self.grid;
        let n = grid.n_points();
        let scale = 1.0 / (2.0 * grid.half_length());
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (i, c) in self.coefficients.iter().enumerate() {
            buf[grid.fft_slot(i)] = c * (scale * parity(grid.wavenumber(i)));
        }
        grid.fft_inverse().process(&mut buf);
        buf
    }

    /// Inverse transform. The imaginary residue, which vanishes for
    /// Hermitian coefficient sets, is discarded.
    pub fn inverse(&self) -> PhysicalField {
        PhysicalField {
            grid: self.grid.clone(),
            samples: self.to_complex_samples().into_iter().map(|z| z.re).collect(),
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coefficients
    }

    pub fn check_finite(&self) -> Result<()> {
        match self
            .coefficients
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            Some(index) => Err(Error::NonFinite { index }),
            None => Ok(()),
        }
    }

    /// Coefficient at `ξ = 0`, i.e. `∫ u dx`.
    pub fn zero_mode(&self) -> Complex64 {
        self.coefficients[self.grid.zero_index()]
    }

    /// `‖u‖_{L²}` via Parseval, `((1/2π) Σ |û_k|² dξ)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.coefficients.iter().map(|c| c.norm_sqr()).sum();
        (sum / (2.0 * self.grid.half_length())).sqrt()
    }

    /// `((1/2π) Σ w(ξ_k)² |û_k|² dξ)^{1/2}` for a real frequency weight.
    pub fn weighted_l2_norm<W: Fn(f64) -> f64>(&self, weight: W) -> f64 {
        let sum: f64 = self
            .grid
            .frequencies()
            .iter()
            .zip(&self.coefficients)
            .map(|(&xi, c)| {
                let w = weight(xi);
                w * w * c.norm_sqr()
            })
            .sum();
        (sum / (2.0 * self.grid.half_length())).sqrt()
    }

    /// Largest Hermitian-symmetry defect `|û(-ξ) - conj(û(ξ))|` over the
    /// paired frequencies.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n_points();
        let z = self.grid.zero_index();
        (1..n / 2)
            .map(|k| (self.coefficients[z - k] - self.coefficients[z + k].conj()).norm())
            .fold(self.coefficients[z].im.abs(), f64::max)
    }

    /// Pointwise multiplication by a symbol.
    ///
    /// The unpaired Nyquist frequency has no conjugate partner, so it takes
    /// the real part of the symbol there; every other frequency gets `m(ξ)`.
    pub fn apply(&self, m: &MultiplierSymbol) -> Result<SpectralField> {
        let mut out = self.clone();
        out.apply_in_place(m)?;
        Ok(out)
    }

    pub fn apply_in_place(&mut self, m: &MultiplierSymbol) -> Result<()> {
        let values = m.values_on(&self.grid)?;
        for (c, v) in self.coefficients.iter_mut().zip(values) {
            *c *= v;
        }
        Ok(())
    }

    /// Multiply by precomputed symbol values (same order as the frequencies).
    pub fn scale_by(&mut self, values: &[Complex64]) {
        assert_eq!(values.len(), self.coefficients.len());
        for (c, v) in self.coefficients.iter_mut().zip(values) {
            *c *= v;
        }
    }

    pub fn add_scaled(&self, other: &SpectralField, scale: Complex64) -> Result<SpectralField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(SpectralField {
            grid: self.grid.clone(),
            coefficients,
        })
    }
}

fn parity(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}
