use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("adiabatic exponent must satisfy gamma > 1, got {0}")]
    Gamma(f64),
    #[error("shear viscosity must satisfy mu > 0, got {0}")]
    Mu(f64),
    #[error("viscosities must satisfy lambda + 2 mu / n >= 0, got {0}")]
    Bulk(f64),
    #[error("heat conductivity must satisfy kappa > 0, got {0}")]
    Kappa(f64),
    #[error("dimension must be 2 or 3, got {0}")]
    Dimension(u32),
    #[error("gas constant must be positive, got {0}")]
    GasConstant(f64),
}

/// Physical constants of the polytropic, viscous, heat-conducting gas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidParams {
    pub gamma: f64,
    pub mu: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub n: u32,
    pub gas_constant: f64,
}

impl Default for FluidParams {
    fn default() -> Self {
        FluidParams { gamma: 1.4, mu: 0.1, lambda: 0.1, kappa: 0.1, n: 3, gas_constant: 1.0 }
    }
}

impl FluidParams {
    pub fn validate(&self) -> Result<(), Vec<ParamError>> {
        let mut errs = Vec::new();
        if !(self.gamma > 1.0) {
            errs.push(ParamError::Gamma(self.gamma));
        }
        if !(self.mu > 0.0) {
            errs.push(ParamError::Mu(self.mu));
        }
        if !(self.n == 2 || self.n == 3) {
            errs.push(ParamError::Dimension(self.n));
        } else {
            let bulk = self.lambda + 2.0 * self.mu / self.n as f64;
            // closed condition: the boundary value is admissible
            if !(bulk >= -1e-15 * self.mu.abs()) || bulk.is_nan() {
                errs.push(ParamError::Bulk(bulk));
            }
        }
        if !(self.kappa > 0.0) {
            errs.push(ParamError::Kappa(self.kappa));
        }
        if !(self.gas_constant > 0.0) {
            errs.push(ParamError::GasConstant(self.gas_constant));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn m(&self) -> f64 {
        self.n as f64 - 1.0
    }

    pub fn beta(&self) -> f64 {
        2.0 * self.mu + self.lambda
    }

    pub fn cv(&self) -> f64 {
        self.gas_constant / (self.gamma - 1.0)
    }

    /// Pressure closure `p = (gamma - 1) e / v`.
    #[inline]
    pub fn pressure(&self, v: f64, e: f64) -> f64 {
        (self.gamma - 1.0) * e / v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn physical_condition() {
        assert!(FluidParams::default().validate().is_ok());
        let p = FluidParams { gamma: 1.0, ..Default::default() };
        assert_eq!(p.validate().unwrap_err(), vec![ParamError::Gamma(1.0)]);
        let p = FluidParams { lambda: -2.0 * 0.1 / 3.0, ..Default::default() };
        assert!(p.validate().is_ok());
        let p = FluidParams { lambda: -0.1, ..Default::default() };
        assert!(p.validate().is_err());
        let p = FluidParams { kappa: 0.0, mu: 0.0, ..Default::default() };
        assert_eq!(p.validate().unwrap_err().len(), 2);
    }
}
