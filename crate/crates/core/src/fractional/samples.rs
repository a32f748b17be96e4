//! Random test-function families for the inequality audits.
//!
//! Every family is defined independently of any grid, so the same functions
//! can be sampled at several resolutions.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::Result;
use crate::spectral::{Grid1D, PhysicalField};

/// `Σ A e^{-(x-c)²/(2w²)} cos(κx + p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacketSum {
    pub packets: Vec<WavePacket>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacket {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl WavePacketSum {
    pub fn eval(&self, x: f64) -> f64 {
        self.packets
            .iter()
            .map(|p| {
                let z = (x - p.center) / p.width;
                p.amplitude * (-0.5 * z * z).exp() * (p.frequency * x + p.phase).cos()
            })
            .sum()
    }

    pub fn sample(&self, grid: &Grid1D) -> Result<PhysicalField> {
        PhysicalField::from_fn(grid, |x| self.eval(x))
    }
}

/// Ranges for [`random_wave_packets`].
#[derive(Debug, Clone, Copy)]
pub struct PacketRanges {
    pub max_terms: usize,
    pub max_center: f64,
    pub width: (f64, f64),
    pub max_frequency: f64,
}

impl Default for PacketRanges {
    fn default() -> Self {
        PacketRanges {
            max_terms: 3,
            max_center: 3.0,
            width: (0.5, 2.0),
            max_frequency: 3.0,
        }
    }
}

pub fn random_wave_packets(seed: u64, count: usize, ranges: PacketRanges) -> Vec<WavePacketSum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let terms = rng.gen_range(1..=ranges.max_terms);
            let packets = (0..terms)
                .map(|_| WavePacket {
                    amplitude: rng.gen_range(-1.0..1.0),
                    center: rng.gen_range(-ranges.max_center..ranges.max_center),
                    width: rng.gen_range(ranges.width.0..ranges.width.1),
                    frequency: rng.gen_range(0.0..ranges.max_frequency),
                    phase: rng.gen_range(0.0..2.0 * PI),
                })
                .collect();
            WavePacketSum { packets }
        })
        .collect()
}

/// Real trigonometric polynomial on the box `[-L, L)` with modes `1..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    pub half_length: f64,
    pub mean: f64,
    /// `(k, a_k, b_k)` for `a_k cos(πkx/L) + b_k sin(πkx/L)`.
    pub modes: Vec<(u32, f64, f64)>,
}

impl TrigPolynomial {
    pub fn eval(&self, x: f64) -> f64 {
        self.mean
            + self
                .modes
                .iter()
                .map(|&(k, a, b)| {
                    let arg = PI * k as f64 * x / self.half_length;
                    a * arg.cos() + b * arg.sin()
                })
                .sum::<f64>()
    }

    pub fn max_mode(&self) -> u32 {
        self.modes.iter().map(|m| m.0).max().unwrap_or(0)
    }

    pub fn sample(&self, grid: &Grid1D) -> Result<PhysicalField> {
        PhysicalField::from_fn(grid, |x| self.eval(x))
    }
}

/// Random band-limited fields: coefficients uniform in `[-1, 1]/k`.
pub fn random_trig_polynomials(
    seed: u64,
    count: usize,
    half_length: f64,
    max_mode: u32,
) -> Vec<TrigPolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| TrigPolynomial {
            half_length,
            mean: rng.gen_range(-1.0..1.0),
            modes: (1..=max_mode)
                .map(|k| {
                    let s = 1.0 / k as f64;
                    (k, s * rng.gen_range(-1.0..1.0), s * rng.gen_range(-1.0..1.0))
                })
                .collect(),
        })
        .collect()
}
