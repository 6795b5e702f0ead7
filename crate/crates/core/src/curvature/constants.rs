use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension-dependent exponents and areas for the boundary sphere Sⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub n: usize,
    /// `2/(n-1)`, the coefficient of the normal derivative.
    pub a_n: f64,
    /// Critical trace exponent `2n/(n-1)`.
    pub two_sharp: f64,
    /// Area of the unit Sⁿ.
    pub omega_n: f64,
}

impl Constants {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("dimension n = {n} must be at least 2")));
        }
        let nf = n as f64;
        Ok(Constants {
            n,
            a_n: 2.0 / (nf - 1.0),
            two_sharp: 2.0 * nf / (nf - 1.0),
            omega_n: sphere_area(n),
        })
    }

    /// The gridded case, S² = ∂B³.
    pub fn surface() -> Self {
        Constants { n: 2, a_n: 2.0, two_sharp: 4.0, omega_n: 4.0 * PI }
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Speed factor `(n-1)/4` of the flow.
    pub fn flow_rate(&self) -> f64 {
        (self.nf() - 1.0) / 4.0
    }
}

/// Area of the unit Sⁿ by the recursion `ω_n = 2π ω_{n-2} / (n-1)`.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI * sphere_area(n - 2) / (n as f64 - 1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_identities() {
        for n in 2..8 {
            let c = Constants::new(n).unwrap();
            let nf = n as f64;
            assert!((c.two_sharp - 1.0 - (nf + 1.0) / (nf - 1.0)).abs() < 1e-14);
            assert!((2.0 / c.two_sharp - (nf - 1.0) / nf).abs() < 1e-14);
        }
    }

    #[test]
    fn known_areas() {
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
        assert_eq!(Constants::new(2).unwrap(), Constants::surface());
        assert!(Constants::new(1).is_err());
    }
}
