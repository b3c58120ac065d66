//! Gases in a rigid container, chart `(T, mu)`.
//!
//! Fermi-Dirac, Bose-Einstein and classical (Maxwell-Boltzmann) statistics
//! share one potential family,
//!
//! ```text
//!   psi(T, mu) = K T^(a+2) L(a+2),   K = kappa Gamma(a+1) kB^(a+2),
//! ```
//!
//! where `L(s)` is `-Li_s(-xi)` for fermions, `Li_s(xi)` for bosons and the
//! bare fugacity `xi = exp(mu / kB T)` in the classical limit. All three
//! satisfy `dL(s)/du = L(s-1)` with `u = mu / kB T`, so every derivative of
//! `psi` below holds verbatim for each statistics.

use super::{DualState, State, ThermoSystem};
use crate::error::{Result, ThermoError};
use crate::specfun::{gamma, polylog, EvalSettings, PolylogOrder};
use crate::tensor::{SymTensor2, SymTensor3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Fermion,
    Boson,
    /// Maxwell-Boltzmann limit: every polylogarithm replaced by its leading
    /// term, `L(s) = xi`.
    Classical,
}

/// Fugacity above which a fermion gas is usually considered degenerate; the
/// formulas stay valid, callers may want to surface a warning.
pub const FERMION_DEGENERACY_FUGACITY: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub struct RigidGas {
    pub statistics: Statistics,
    /// Density-of-states exponent (1/2 for a box).
    pub a: f64,
    pub kb: f64,
    /// `kappa Gamma(a+1) kB^(a+2)`: overall potential scale.
    coeff: f64,
    /// Optional entropy anchor; divergences are independent of it.
    pub reference: Option<State>,
    settings: EvalSettings,
}

impl RigidGas {
    /// Quantum gas with system constant `kappa` and exponent `a >= 1/2`.
    pub fn quantum(statistics: Statistics, kappa: f64, a: f64, kb: f64) -> Result<Self> {
        if statistics == Statistics::Classical {
            return Err(ThermoError::domain(
                "use RigidGas::classical for Maxwell-Boltzmann statistics",
            ));
        }
        if !(kappa > 0.0) || !(a >= 0.5) || !(kb > 0.0) {
            return Err(ThermoError::domain(format!(
                "rigid gas requires kappa > 0, a >= 1/2, kB > 0 (got {kappa}, {a}, {kb})"
            )));
        }
        Ok(Self {
            statistics,
            a,
            kb,
            coeff: kappa * gamma(a + 1.0)? * kb.powf(a + 2.0),
            reference: None,
            settings: EvalSettings::default(),
        })
    }

    /// Classical rigid gas with `U = prefactor c kB T^(c+1) xi` and
    /// `N = prefactor T^c xi`; maps onto the shared family via `a = c - 1`,
    /// `K = prefactor kB`.
    pub fn classical(c: f64, prefactor: f64, kb: f64) -> Result<Self> {
        if !(c > 0.0) || !(prefactor > 0.0) || !(kb > 0.0) {
            return Err(ThermoError::domain(format!(
                "classical rigid gas requires c > 0, prefactor > 0, kB > 0 (got {c}, {prefactor}, {kb})"
            )));
        }
        Ok(Self {
            statistics: Statistics::Classical,
            a: c - 1.0,
            kb,
            coeff: prefactor * kb,
            reference: None,
            settings: EvalSettings::default(),
        })
    }

    /// Classical counterpart of a quantum gas, with the matching prefactor.
    pub fn classical_counterpart(&self) -> Self {
        Self {
            statistics: Statistics::Classical,
            ..*self
        }
    }

    pub fn with_reference(mut self, reference: State) -> Result<Self> {
        self.validate(&reference)?;
        self.reference = Some(reference);
        Ok(self)
    }

    pub fn fugacity(&self, state: &State) -> f64 {
        (state.eta2 / (self.kb * state.temp)).exp()
    }

    /// True when a fermion gas is close enough to the quantum regime that
    /// asymmetry claims should be read with care.
    pub fn is_degenerate(&self, state: &State) -> bool {
        self.statistics == Statistics::Fermion
            && self.fugacity(state) > FERMION_DEGENERACY_FUGACITY
    }

    /// `L(s)` at the given state (see module docs).
    fn ell(&self, s: f64, state: &State) -> Result<f64> {
        let xi = self.fugacity(state);
        match self.statistics {
            Statistics::Classical => Ok(xi),
            Statistics::Boson => polylog(PolylogOrder::new(s)?, xi, self.settings),
            Statistics::Fermion => Ok(-polylog(PolylogOrder::new(s)?, -xi, self.settings)?),
        }
    }

    /// `L(a-1) ... L(a+2)` in one pass.
    fn ells(&self, state: &State) -> Result<[f64; 4]> {
        Ok([
            self.ell(self.a - 1.0, state)?,
            self.ell(self.a, state)?,
            self.ell(self.a + 1.0, state)?,
            self.ell(self.a + 2.0, state)?,
        ])
    }

    fn u_of(&self, state: &State) -> f64 {
        state.eta2 / (self.kb * state.temp)
    }

    /// Unanchored entropy `d psi / d T`.
    fn entropy_raw(&self, state: &State) -> Result<f64> {
        let a = self.a;
        let u = self.u_of(state);
        let l1 = self.ell(a + 1.0, state)?;
        let l2 = self.ell(a + 2.0, state)?;
        Ok(self.coeff * state.temp.powf(a + 1.0) * ((a + 2.0) * l2 - u * l1))
    }
}

impl ThermoSystem for RigidGas {
    fn name(&self) -> &'static str {
        match self.statistics {
            Statistics::Fermion => "fermion-rigid",
            Statistics::Boson => "boson-rigid",
            Statistics::Classical => "classical-rigid",
        }
    }

    fn validate(&self, state: &State) -> Result<()> {
        if !state.temp.is_finite() || state.temp <= 0.0 {
            return Err(ThermoError::domain(format!(
                "rigid gas needs T > 0 (got {})",
                state.temp
            )));
        }
        if !state.eta2.is_finite() || state.eta2 >= 0.0 {
            return Err(ThermoError::domain(format!(
                "rigid gas needs mu < 0 (got {})",
                state.eta2
            )));
        }
        Ok(())
    }

    fn potential(&self, state: &State) -> Result<f64> {
        self.validate(state)?;
        Ok(self.coeff * state.temp.powf(self.a + 2.0) * self.ell(self.a + 2.0, state)?)
    }

    fn theta_of(&self, state: &State) -> Result<DualState> {
        self.validate(state)?;
        let psi = self.potential(state)?;
        let number =
            self.coeff * state.temp.powf(self.a + 1.0) * self.ell(self.a + 1.0, state)? / self.kb;
        Ok(DualState {
            entropy: self.entropy_of(state)?,
            extensive: number,
            energy: (self.a + 1.0) * psi,
        })
    }

    fn entropy_of(&self, state: &State) -> Result<f64> {
        self.validate(state)?;
        let raw = self.entropy_raw(state)?;
        match &self.reference {
            Some(q) => Ok(raw - self.entropy_raw(q)?),
            None => Ok(raw),
        }
    }

    fn metric_eta(&self, state: &State) -> Result<SymTensor2> {
        self.validate(state)?;
        let a = self.a;
        let u = self.u_of(state);
        let [_, l0, l1, l2] = self.ells(state)?;
        let ta = state.temp.powf(a);
        let k = self.coeff;
        Ok(SymTensor2::new(
            k * ta * ((a + 1.0) * (a + 2.0) * l2 - 2.0 * (a + 1.0) * u * l1 + u * u * l0),
            k * ta * ((a + 1.0) * l1 - u * l0) / self.kb,
            k * ta * l0 / (self.kb * self.kb),
        ))
    }

    fn amari_chentsov_eta(&self, state: &State) -> Result<SymTensor3> {
        self.validate(state)?;
        let a = self.a;
        let u = self.u_of(state);
        let [lm1, l0, l1, l2] = self.ells(state)?;
        let t_pow = state.temp.powf(a - 1.0);
        let k = self.coeff;
        let kb = self.kb;
        Ok(SymTensor3::new(
            -k * t_pow
                * (a * (a + 1.0) * (a + 2.0) * l2 - 3.0 * a * (a + 1.0) * u * l1
                    + 3.0 * a * u * u * l0
                    - u * u * u * lm1),
            -k * t_pow * (a * (a + 1.0) * l1 - 2.0 * a * u * l0 + u * u * lm1) / kb,
            -k * t_pow * (a * l0 - u * lm1) / (kb * kb),
            -k * t_pow * lm1 / (kb * kb * kb),
        ))
    }

    // divergence and eta_of_theta use the trait defaults (Legendre at q,
    // Newton inversion with metric Jacobian).
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::ThermoSystem;

    fn boson() -> RigidGas {
        RigidGas::quantum(Statistics::Boson, 1.0, 0.5, 1.0).unwrap()
    }
    fn fermion() -> RigidGas {
        RigidGas::quantum(Statistics::Fermion, 1.0, 0.5, 1.0).unwrap()
    }

    /// Central finite differences of the potential, for oracle checks.
    fn psi_fd2(sys: &RigidGas, s: &State, h: f64) -> SymTensor2 {
        let p = |t: f64, m: f64| sys.potential(&State::new(t, m)).unwrap();
        let (t, m) = (s.temp, s.eta2);
        let tt = (p(t + h, m) - 2.0 * p(t, m) + p(t - h, m)) / (h * h);
        let mm = (p(t, m + h) - 2.0 * p(t, m) + p(t, m - h)) / (h * h);
        let tm = (p(t + h, m + h) - p(t + h, m - h) - p(t - h, m + h) + p(t - h, m - h))
            / (4.0 * h * h);
        SymTensor2::new(tt, tm, mm)
    }

    fn psi_fd3(sys: &RigidGas, s: &State, h: f64) -> SymTensor3 {
        let p = |dt: f64, dm: f64| {
            sys.potential(&State::new(s.temp + dt, s.eta2 + dm)).unwrap()
        };
        let ttt = (p(2.0 * h, 0.0) - 2.0 * p(h, 0.0) + 2.0 * p(-h, 0.0) - p(-2.0 * h, 0.0))
            / (2.0 * h * h * h);
        let mmm = (p(0.0, 2.0 * h) - 2.0 * p(0.0, h) + 2.0 * p(0.0, -h) - p(0.0, -2.0 * h))
            / (2.0 * h * h * h);
        let ttm = ((p(h, h) - 2.0 * p(0.0, h) + p(-h, h))
            - (p(h, -h) - 2.0 * p(0.0, -h) + p(-h, -h)))
            / (2.0 * h * h * h);
        let tmm = ((p(h, h) - 2.0 * p(h, 0.0) + p(h, -h))
            - (p(-h, h) - 2.0 * p(-h, 0.0) + p(-h, -h)))
            / (2.0 * h * h * h);
        SymTensor3::new(-ttt, -ttm, -tmm, -mmm)
    }

    #[test]
    fn small_fugacity_particle_number() {
        // N ~ kappa Gamma(3/2) T^(3/2) xi for xi -> 0.
        let sys = boson();
        let state = State::new(1000.0, -9000.0);
        let xi = sys.fugacity(&state);
        let n = sys.theta_of(&state).unwrap().extensive;
        let approx = crate::specfun::gamma(1.5).unwrap() * 1000.0_f64.powf(1.5) * xi;
        assert!((n - approx).abs() / approx < 1e-3);
    }

    #[test]
    fn metric_matches_finite_differences() {
        for sys in [boson(), fermion()] {
            let s = State::new(10.0, -5.0);
            let g = sys.metric_eta(&s).unwrap();
            let fd = psi_fd2(&sys, &s, 0.01);
            for (a, b) in [(g.c11, fd.c11), (g.c12, fd.c12), (g.c22, fd.c22)] {
                assert!((a - b).abs() / b.abs() < 1e-5, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn amari_chentsov_matches_finite_differences() {
        for sys in [boson(), fermion()] {
            let s = State::new(10.0, -5.0);
            let c = sys.amari_chentsov_eta(&s).unwrap();
            let fd = psi_fd3(&sys, &s, 0.04);
            for (a, b) in [
                (c.c111, fd.c111),
                (c.c112, fd.c112),
                (c.c122, fd.c122),
                (c.c222, fd.c222),
            ] {
                assert!((a - b).abs() / b.abs() < 1e-4, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn c111_negative_for_negative_mu() {
        for sys in [boson(), fermion(), RigidGas::classical(1.5, 1.0, 1.0).unwrap()] {
            for t in [0.5, 2.0, 10.0, 100.0] {
                for mu in [-0.5, -2.0, -5.0] {
                    let c = sys.amari_chentsov_eta(&State::new(t, mu)).unwrap();
                    assert!(c.c111 < 0.0, "{} T={t} mu={mu}", sys.name());
                }
            }
        }
    }

    #[test]
    fn entropy_change_matches_first_law_quadrature() {
        // dS = (1/T dU/dT - mu/T dN/dT) dT at constant mu; compare the
        // analytic Delta S against composite-midpoint quadrature.
        let sys = boson();
        let mu = -3.0;
        let (t0, t1) = (4.0, 6.0);
        let n_steps = 4000;
        let h = (t1 - t0) / n_steps as f64;
        let du_dn_dt = |t: f64| {
            let eps = 1e-5 * t;
            let up = sys.theta_of(&State::new(t + eps, mu)).unwrap();
            let dn = sys.theta_of(&State::new(t - eps, mu)).unwrap();
            let du = (up.energy - dn.energy) / (2.0 * eps);
            let dnum = (up.extensive - dn.extensive) / (2.0 * eps);
            (du, dnum)
        };
        let mut quad = 0.0;
        for i in 0..n_steps {
            let t = t0 + (i as f64 + 0.5) * h;
            let (du, dn) = du_dn_dt(t);
            quad += h * (du / t - mu * dn / t);
        }
        let ds = sys.entropy_of(&State::new(t1, mu)).unwrap()
            - sys.entropy_of(&State::new(t0, mu)).unwrap();
        assert!((ds - quad).abs() / ds.abs() < 1e-6, "{ds} vs {quad}");
    }

    #[test]
    fn anchored_entropy_vanishes_at_reference() {
        let q = State::new(5.0, -2.0);
        let sys = boson().with_reference(q).unwrap();
        assert_eq!(sys.entropy_of(&q).unwrap(), 0.0);
        // Divergence is anchor-independent.
        let p = State::new(7.0, -2.5);
        let d_anchored = sys.divergence(&p, &q).unwrap();
        let d_plain = boson().divergence(&p, &q).unwrap();
        assert!((d_anchored - d_plain).abs() < 1e-12 * d_plain.abs().max(1.0));
    }

    #[test]
    fn divergence_nonnegative_grid() {
        for sys in [boson(), fermion()] {
            let q = State::new(5.0, -2.0);
            for i in 0..20 {
                for j in 0..20 {
                    let p = State::new(
                        2.0 + 6.0 * i as f64 / 19.0,
                        -3.5 + 2.8 * j as f64 / 19.0,
                    );
                    let d = sys.divergence(&p, &q).unwrap();
                    let same = (p.temp - q.temp).abs() < 1e-12 && (p.eta2 - q.eta2).abs() < 1e-12;
                    if same {
                        assert!(d.abs() < 1e-10);
                    } else {
                        assert!(d > 0.0, "{} p=({}, {})", sys.name(), p.temp, p.eta2);
                    }
                }
            }
        }
    }

    #[test]
    fn classical_limit_as_fugacity_vanishes() {
        // At fixed mu < 0 the Maxwell-Boltzmann limit is xi -> 0; the ratio
        // of quantum to classical C^111 (matched prefactor) approaches 1
        // monotonically as T decreases.
        for sys in [boson(), fermion()] {
            let classical = sys.classical_counterpart();
            let mut prev_dev = f64::INFINITY;
            for t in [0.5, 0.25, 0.125] {
                let s = State::new(t, -1.0);
                let cq = sys.amari_chentsov_eta(&s).unwrap().c111;
                let cc = classical.amari_chentsov_eta(&s).unwrap().c111;
                let dev = (cq / cc - 1.0).abs();
                assert!(dev < prev_dev, "{}: dev {dev} at T={t}", sys.name());
                prev_dev = dev;
            }
            assert!(prev_dev < 0.01);
        }
    }

    #[test]
    fn degeneracy_flag() {
        let sys = fermion();
        assert!(sys.is_degenerate(&State::new(10.0, -0.5)));
        assert!(!sys.is_degenerate(&State::new(0.1, -0.5)));
        assert!(!boson().is_degenerate(&State::new(10.0, -0.5)));
    }

    #[test]
    fn inverse_legendre_roundtrip() {
        for sys in [boson(), fermion()] {
            let s = State::new(8.0, -3.0);
            let th = sys.theta_of(&s).unwrap();
            let guess = State::new(7.0, -3.2);
            let back = sys.eta_of_theta(th.theta(), &guess).unwrap();
            assert!((back.temp - s.temp).abs() < 1e-8);
            assert!((back.eta2 - s.eta2).abs() < 1e-8);
        }
    }
}
