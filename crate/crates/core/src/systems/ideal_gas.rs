//! Closed ideal gas in the `(T, -P)` chart.

use super::{DualState, State, ThermoSystem};
use crate::error::{Result, ThermoError};
use crate::tensor::{SymTensor2, SymTensor3};

/// Closed ideal gas with equations of state `U = c N0 kB T`, `P V = N0 kB T`.
///
/// Entropy is anchored to zero at the reference state.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalIdealGasTp {
    /// Energy-equipartition constant (3/2 for a monoatomic gas).
    pub c: f64,
    /// Product `N0 kB`.
    pub n0kb: f64,
    /// State at which the entropy is anchored to zero.
    pub reference: State,
}

impl ClassicalIdealGasTp {
    pub fn new(c: f64, n0kb: f64, reference: State) -> Result<Self> {
        if !(c > 0.0) || !(n0kb > 0.0) {
            return Err(ThermoError::domain(format!(
                "ideal gas requires c > 0 and n0kb > 0 (got c={c}, n0kb={n0kb})"
            )));
        }
        let sys = Self { c, n0kb, reference };
        sys.validate(&reference)?;
        Ok(sys)
    }

    /// Monoatomic gas (`c = 3/2`).
    pub fn monoatomic(n0kb: f64, reference: State) -> Result<Self> {
        Self::new(1.5, n0kb, reference)
    }
}

impl ThermoSystem for ClassicalIdealGasTp {
    fn name(&self) -> &'static str {
        "ideal-gas-tp"
    }

    fn validate(&self, state: &State) -> Result<()> {
        if !state.temp.is_finite() || state.temp <= 0.0 {
            return Err(ThermoError::domain(format!(
                "ideal gas needs T > 0 (got {})",
                state.temp
            )));
        }
        if !state.eta2.is_finite() || state.eta2 >= 0.0 {
            return Err(ThermoError::domain(format!(
                "ideal gas needs eta2 = -P < 0 (got {})",
                state.eta2
            )));
        }
        Ok(())
    }

    fn potential(&self, state: &State) -> Result<f64> {
        // psi = T S - (c + 1) N0 kB T  (Legendre transform of the energy).
        Ok(state.temp * self.entropy_of(state)? - (self.c + 1.0) * self.n0kb * state.temp)
    }

    fn theta_of(&self, state: &State) -> Result<DualState> {
        self.validate(state)?;
        Ok(DualState {
            entropy: self.entropy_of(state)?,
            extensive: self.n0kb * state.temp / state.pressure(),
            energy: self.c * self.n0kb * state.temp,
        })
    }

    fn entropy_of(&self, state: &State) -> Result<f64> {
        self.validate(state)?;
        let q = &self.reference;
        Ok(self.n0kb
            * ((self.c + 1.0) * (state.temp / q.temp).ln()
                - (state.pressure() / q.pressure()).ln()))
    }

    fn metric_eta(&self, state: &State) -> Result<SymTensor2> {
        self.validate(state)?;
        let nk = self.n0kb;
        Ok(SymTensor2::new(
            (self.c + 1.0) * nk / state.temp,
            -nk / state.eta2,
            nk * state.temp / (state.eta2 * state.eta2),
        ))
    }

    fn amari_chentsov_eta(&self, state: &State) -> Result<SymTensor3> {
        self.validate(state)?;
        let nk = self.n0kb;
        let e2 = state.eta2;
        Ok(SymTensor3::new(
            (self.c + 1.0) * nk / (state.temp * state.temp),
            0.0,
            -nk / (e2 * e2),
            2.0 * nk * state.temp / (e2 * e2 * e2),
        ))
    }

    fn divergence(&self, p: &State, q: &State) -> Result<f64> {
        self.validate(p)?;
        self.validate(q)?;
        // Cancellation-free closed form: with x = T/Tq - 1, y = P/Pq - 1 and
        // w = (x - y)/(1 + y),
        //   D*_q = N0 kB Tq [ c (x - ln(1+x)) + (w - ln(1+w)) ],
        // a sum of two nonnegative convex terms.
        let x = (p.temp - q.temp) / q.temp;
        let y = (p.pressure() - q.pressure()) / q.pressure();
        let w = (x - y) / (1.0 + y);
        Ok(self.n0kb * q.temp * (self.c * (x - x.ln_1p()) + (w - w.ln_1p())))
    }

    fn eta_of_theta(&self, theta: [f64; 2], _guess: &State) -> Result<State> {
        // Closed-form inversion: S and V determine T and P directly.
        let q = &self.reference;
        let v_q = self.n0kb * q.temp / q.pressure();
        let v = theta[1];
        if !(v > 0.0) {
            return Err(ThermoError::Step(format!(
                "inverse Legendre map needs V > 0 (got {v})"
            )));
        }
        // S/(N0 kB) = (c+1) ln(T/Tq) - ln(P/Pq) and V/Vq = (T/Tq)/(P/Pq)
        // give c ln(T/Tq) = S/(N0 kB) - ln(V/Vq).
        let ln_t_ratio = (theta[0] / self.n0kb - (v / v_q).ln()) / self.c;
        let temp = q.temp * ln_t_ratio.exp();
        let pressure = self.n0kb * temp / v;
        Ok(State::new(temp, -pressure))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas() -> ClassicalIdealGasTp {
        ClassicalIdealGasTp::monoatomic(1.0, State::new(275.0, -1e5)).unwrap()
    }

    #[test]
    fn theta_direct_substitution() {
        let th = gas().theta_of(&State::new(275.0, -1e5)).unwrap();
        assert!((th.energy - 412.5).abs() < 1e-12);
        assert!((th.extensive - 2.75e-3).abs() < 1e-18);
        assert!(th.entropy.abs() < 1e-15);
    }

    #[test]
    fn entropy_values() {
        let sys = gas();
        assert_eq!(sys.entropy_of(&sys.reference).unwrap(), 0.0);
        let s = sys.entropy_of(&State::new(550.0, -1e5)).unwrap();
        assert!((s - 2.5 * 2.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn metric_closed_form() {
        let g = gas().metric_eta(&State::new(275.0, -1e5)).unwrap();
        assert!((g.c11 - 2.5 / 275.0).abs() < 1e-16);
        // dT dP coefficient of the quadratic form in (T, P) variables is
        // -2/P; in the (T, -P) chart the matrix entry is +1/P.
        assert!((g.c12 - 1e-5).abs() < 1e-18);
        assert!((-2.0 * g.c12 - -2e-5).abs() < 1e-18);
        assert!((g.c22 - 2.75e-8).abs() < 1e-20);
        let [lo, _] = g.eigenvalues();
        assert!(lo > 0.0);
    }

    #[test]
    fn amari_chentsov_constant_pressure_component() {
        let sys = ClassicalIdealGasTp::monoatomic(1.0, State::new(1.0, -1.0)).unwrap();
        let c = sys.amari_chentsov_eta(&State::new(1.0, -1.0)).unwrap();
        assert!((c.c111 - 2.5).abs() < 1e-14);
        assert_eq!(c.c112, 0.0);
    }

    #[test]
    fn divergence_examples() {
        let sys = gas();
        let q = State::new(275.0, -1e5);
        assert_eq!(sys.divergence(&q, &q).unwrap(), 0.0);
        // Isobaric reduction: 2.5 [100 - 275 ln(375/275)].
        let d = sys.divergence(&State::new(375.0, -1e5), &q).unwrap();
        let expect = 2.5 * (100.0 - 275.0 * (375.0_f64 / 275.0).ln());
        assert!((d - expect).abs() < 1e-12);
        assert!((d - 36.768_486_791_110_33).abs() < 1e-10);
    }

    #[test]
    fn divergence_agrees_with_definition() {
        // Stable closed form vs the literal Legendre-based definition.
        let sys = gas();
        let q = State::new(300.0, -1.3e5);
        for (t, p) in [(350.0, 1e5), (250.0, 2e5), (301.0, 1.31e5)] {
            let s = State::new(t, -p);
            let closed = sys.divergence(&s, &q).unwrap();
            let tp = sys.theta_of(&s).unwrap();
            let tq = sys.theta_of(&q).unwrap();
            let psi_q = q.temp * tq.entropy + q.eta2 * tq.extensive - tq.energy;
            let literal = tp.energy + psi_q - q.temp * tp.entropy - q.eta2 * tp.extensive;
            assert!(
                (closed - literal).abs() <= 1e-10 * closed.abs().max(1.0),
                "{closed} vs {literal}"
            );
        }
    }

    #[test]
    fn mpemba_pair_equidistant() {
        let sys = gas();
        let q = State::new(275.0, -1e5);
        let d1 = sys.divergence(&State::new(375.0, -1e5), &q).unwrap();
        let d2 = sys.divergence(&State::new(300.0, -189_487.5), &q).unwrap();
        assert!((d1 - d2).abs() / d1 < 1e-3);
    }

    #[test]
    fn inverse_legendre_roundtrip() {
        let sys = gas();
        let s = State::new(312.0, -1.7e5);
        let th = sys.theta_of(&s).unwrap();
        let back = sys.eta_of_theta(th.theta(), &sys.reference).unwrap();
        assert!((back.temp - s.temp).abs() < 1e-9);
        assert!((back.eta2 - s.eta2).abs() < 1e-6);
    }

    #[test]
    fn invalid_states_rejected() {
        let sys = gas();
        assert!(sys.validate(&State::new(-1.0, -1e5)).is_err());
        assert!(sys.validate(&State::new(275.0, 1e5)).is_err());
        assert!(sys.validate(&State::new(f64::NAN, -1e5)).is_err());
    }
}
