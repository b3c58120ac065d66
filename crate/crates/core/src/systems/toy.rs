//! Quadratic toy potential: flat dual structure, vanishing cubic form.
//!
//! Useful as a control case — the divergence is an exact (symmetric)
//! quadratic form, geodesics are straight lines, and every asymmetry
//! statistic should come out as zero.

use super::{DualState, State, ThermoSystem};
use crate::error::{Result, ThermoError};
use crate::tensor::{SymTensor2, SymTensor3};

#[derive(Debug, Clone, Copy)]
pub struct ToyQuadratic {
    /// Constant metric; must be positive definite.
    pub metric: SymTensor2,
}

impl ToyQuadratic {
    pub fn new(metric: SymTensor2) -> Result<Self> {
        if !(metric.c11 > 0.0 && metric.det() > 0.0) {
            return Err(ThermoError::domain(format!(
                "toy metric must be positive definite (got [{}, {}; {}, {}])",
                metric.c11, metric.c12, metric.c12, metric.c22
            )));
        }
        Ok(Self { metric })
    }

    pub fn isotropic(scale: f64) -> Result<Self> {
        Self::new(SymTensor2::new(scale, 0.0, scale))
    }
}

impl ThermoSystem for ToyQuadratic {
    fn name(&self) -> &'static str {
        "toy-quadratic"
    }

    fn validate(&self, state: &State) -> Result<()> {
        if state.temp.is_finite() && state.eta2.is_finite() {
            Ok(())
        } else {
            Err(ThermoError::domain("toy state must be finite"))
        }
    }

    fn potential(&self, state: &State) -> Result<f64> {
        self.validate(state)?;
        Ok(0.5 * self.metric.quad(state.eta()))
    }

    fn theta_of(&self, state: &State) -> Result<DualState> {
        self.validate(state)?;
        let [e1, e2] = state.eta();
        let th1 = self.metric.c11 * e1 + self.metric.c12 * e2;
        let th2 = self.metric.c12 * e1 + self.metric.c22 * e2;
        // Legendre: U = eta . theta - psi = 2 psi - psi = psi.
        Ok(DualState {
            entropy: th1,
            extensive: th2,
            energy: self.potential(state)?,
        })
    }

    fn entropy_of(&self, state: &State) -> Result<f64> {
        Ok(self.theta_of(state)?.entropy)
    }

    fn metric_eta(&self, _state: &State) -> Result<SymTensor2> {
        Ok(self.metric)
    }

    fn amari_chentsov_eta(&self, _state: &State) -> Result<SymTensor3> {
        Ok(SymTensor3::new(0.0, 0.0, 0.0, 0.0))
    }
}
