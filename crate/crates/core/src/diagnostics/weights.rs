use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// The pair `(s, r)` of `Z_{s,r} = H^s ∩ L²(⟨x⟩^{2r} dx)`, optionally
/// restricted to zero-mean data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub s: f64,
    pub r: f64,
    pub zero_mean_class: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightClass {
    AdmissibleGeneral,
    AdmissibleZeroMean,
    Barrier,
}

/// Weight exponent beyond which persistence fails for general data.
pub fn general_threshold(a: f64) -> f64 {
    1.5 + a
}

/// Weight exponent beyond which persistence fails for zero-mean data.
pub fn zero_mean_threshold(a: f64) -> f64 {
    2.5 + a
}

impl WeightSpec {
    pub fn new(s: f64, r: f64, zero_mean_class: bool) -> Result<Self> {
        if !(s >= 0.0) {
            return Err(invalid("s", format!("must be >= 0, got {s}")));
        }
        if !(r > 0.0) {
            return Err(invalid("r", format!("must be positive, got {r}")));
        }
        Ok(WeightSpec { s, r, zero_mean_class })
    }

    pub fn classify(&self, a: f64) -> Result<WeightClass> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(invalid("a", format!("must lie in (0, 1], got {a}")));
        }
        if self.s < self.r {
            return Err(invalid("s", format!("classification needs s >= r, got s = {} < r = {}", self.s, self.r)));
        }
        Ok(if self.r < general_threshold(a) {
            WeightClass::AdmissibleGeneral
        } else if self.zero_mean_class && self.r < zero_mean_threshold(a) {
            WeightClass::AdmissibleZeroMean
        } else {
            WeightClass::Barrier
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let a = 0.5;
        let c = |s, r, z| WeightSpec::new(s, r, z).unwrap().classify(a).unwrap();
        assert_eq!(c(2.0, 1.5, false), WeightClass::AdmissibleGeneral);
        assert_eq!(c(2.0, 2.0, false), WeightClass::Barrier);
        assert_eq!(c(3.0, 2.5, true), WeightClass::AdmissibleZeroMean);
        assert_eq!(c(3.0, 3.0, true), WeightClass::Barrier);
        assert!(WeightSpec::new(1.0, 2.0, false).unwrap().classify(a).is_err());
        assert!(WeightSpec::new(1.0, 0.0, false).is_err());
    }
}
