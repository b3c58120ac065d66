//! Catalog of thermodynamic systems.
//!
//! Each system exposes the analytic data the geometry layer needs in the
//! `eta` chart `(T, eta2)`: the dual (Legendre) coordinates, entropy, the
//! metric (Hessian of the convex potential), the Amari-Chentsov tensor
//! (third derivatives, negated), and the availability divergence to a target
//! state.

mod ideal_gas;
mod rigid;
mod toy;

pub use ideal_gas::ClassicalIdealGasTp;
pub use rigid::{RigidGas, Statistics};
pub use toy::ToyQuadratic;

use crate::error::{Result, ThermoError};
use crate::tensor::{SymTensor2, SymTensor3};

/// A point on the equilibrium manifold in the system's `eta` chart.
///
/// `eta2` is the negative pressure for the closed ideal gas and the chemical
/// potential for rigid (fixed-volume) gases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub temp: f64,
    pub eta2: f64,
}

impl State {
    pub fn new(temp: f64, eta2: f64) -> Self {
        Self { temp, eta2 }
    }

    pub fn eta(&self) -> [f64; 2] {
        [self.temp, self.eta2]
    }

    /// Pressure, valid for the `(T, -P)` chart.
    pub fn pressure(&self) -> f64 {
        -self.eta2
    }
}

/// Legendre-dual data of a state.
///
/// `entropy` and `extensive` are the affine coordinates conjugate to
/// `(T, eta2)` (the extensive one is the volume for the closed ideal gas and
/// the particle number for rigid gases); `energy` is the internal energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualState {
    pub entropy: f64,
    pub extensive: f64,
    pub energy: f64,
}

impl DualState {
    pub fn theta(&self) -> [f64; 2] {
        [self.entropy, self.extensive]
    }
}

/// Common surface of every catalog entry. All operations are pure and the
/// entries are immutable, so values are freely shared across threads.
pub trait ThermoSystem: Send + Sync {
    fn name(&self) -> &'static str;

    /// Checks the state against the system's chart invariants.
    fn validate(&self, state: &State) -> Result<()>;

    /// Convex potential `psi(eta)` (Legendre transform of the energy).
    fn potential(&self, state: &State) -> Result<f64>;

    /// Dual coordinates and internal energy.
    fn theta_of(&self, state: &State) -> Result<DualState>;

    /// Entropy, anchored so the system's reference state has S = 0.
    fn entropy_of(&self, state: &State) -> Result<f64>;

    /// Metric in the eta chart: `g^{ij} = d^2 psi / d eta_i d eta_j`.
    fn metric_eta(&self, state: &State) -> Result<SymTensor2>;

    /// Amari-Chentsov components in the eta chart:
    /// `C^{ijk} = -d^3 psi / d eta_i d eta_j d eta_k`.
    fn amari_chentsov_eta(&self, state: &State) -> Result<SymTensor3>;

    /// Availability divergence `D*_q(p) >= 0`, zero iff `p = q`.
    ///
    /// `psi(q)` always enters through the Legendre transform at `q`, so the
    /// identity `divergence(q, q) = 0` holds regardless of entropy anchoring.
    fn divergence(&self, p: &State, q: &State) -> Result<f64> {
        self.validate(p)?;
        self.validate(q)?;
        let tp = self.theta_of(p)?;
        let tq = self.theta_of(q)?;
        let psi_q = q.temp * tq.entropy + q.eta2 * tq.extensive - tq.energy;
        Ok(tp.energy + psi_q - q.temp * tp.entropy - q.eta2 * tp.extensive)
    }

    /// Inverse Legendre map: recover the eta chart point with the given dual
    /// coordinates `(S, theta2)`, starting from `guess`.
    fn eta_of_theta(&self, theta: [f64; 2], guess: &State) -> Result<State> {
        // Newton iteration on theta(eta) - target; the Jacobian is the metric.
        let mut eta = *guess;
        for _ in 0..60 {
            self.validate(&eta)?;
            let th = self.theta_of(&eta)?;
            let res = [th.entropy - theta[0], th.extensive - theta[1]];
            let g = self.metric_eta(&eta)?;
            let step = g.solve(res, 1e12)?;
            let next = State::new(eta.temp - step[0], eta.eta2 - step[1]);
            if next.temp <= 0.0 {
                return Err(ThermoError::Step(format!(
                    "inverse Legendre map left the chart (T = {})",
                    next.temp
                )));
            }
            let scale = eta.temp.abs().max(eta.eta2.abs());
            let moved = step[0].abs().max(step[1].abs());
            eta = next;
            if moved <= 1e-14 * scale {
                return Ok(eta);
            }
        }
        Err(ThermoError::Convergence(
            "inverse Legendre map did not converge".into(),
        ))
    }
}
