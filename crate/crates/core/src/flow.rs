//! Relaxation dynamics: the cooling flow `eta_dot = -lambda (eta - eta_q)`
//! and its instrumented trajectories.
//!
//! The flow is affine in the `(T, eta2)` chart, so the undriven case has the
//! exact solution `eta(t) = eta_q + (eta_0 - eta_q) exp(-lambda t)`. The
//! theta-chart integrator solves the same flow in the conjugate coordinates
//! as an independent cross-check.

use crate::error::{Result, ThermoError};
use crate::geometry::{self, TangentVec};
use crate::systems::{State, ThermoSystem};

/// Undriven relaxation toward a fixed reservoir state.
#[derive(Debug, Clone, Copy)]
pub struct RelaxSpec {
    pub p0: State,
    pub q: State,
    pub lambda: f64,
    pub horizon: f64,
    pub steps: usize,
}

impl RelaxSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) {
            return Err(ThermoError::domain(format!(
                "relaxation rate must be positive (got {})",
                self.lambda
            )));
        }
        if !(self.horizon > 0.0) {
            return Err(ThermoError::domain(format!(
                "horizon must be positive (got {})",
                self.horizon
            )));
        }
        if self.steps < 2 {
            return Err(ThermoError::Grid(format!(
                "need at least 2 grid steps (got {})",
                self.steps
            )));
        }
        Ok(())
    }

    /// Exact state at time `t`.
    pub fn state_at(&self, t: f64) -> State {
        let f = (-self.lambda * t).exp();
        State::new(
            self.q.temp + (self.p0.temp - self.q.temp) * f,
            self.q.eta2 + (self.p0.eta2 - self.q.eta2) * f,
        )
    }

    /// Exact chart velocity at time `t`.
    pub fn velocity_at(&self, t: f64) -> TangentVec {
        let f = (-self.lambda * t).exp();
        [
            -self.lambda * (self.p0.temp - self.q.temp) * f,
            -self.lambda * (self.p0.eta2 - self.q.eta2) * f,
        ]
    }
}

/// Relaxation-rate schedule for driven protocols.
#[derive(Debug, Clone, Copy)]
pub enum RateSchedule {
    Constant(f64),
    /// `lambda(t) = base + amp sin(omega t)`; must stay positive.
    Sinusoidal { base: f64, amp: f64, omega: f64 },
}

impl RateSchedule {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            RateSchedule::Constant(l) => l,
            RateSchedule::Sinusoidal { base, amp, omega } => base + amp * (omega * t).sin(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            RateSchedule::Constant(l) => l > 0.0,
            RateSchedule::Sinusoidal { base, amp, .. } => base > amp.abs(),
        };
        if ok {
            Ok(())
        } else {
            Err(ThermoError::domain(
                "rate schedule must be strictly positive for all times",
            ))
        }
    }
}

/// Driven protocol: the reservoir target moves linearly in the chart from
/// `from` to `to` over `[0, horizon]`, dragging the system behind it.
#[derive(Debug, Clone, Copy)]
pub struct DrivenSpec {
    pub p0: State,
    pub from: State,
    pub to: State,
    pub rate: RateSchedule,
    pub horizon: f64,
    pub steps: usize,
}

impl DrivenSpec {
    pub fn validate(&self) -> Result<()> {
        self.rate.validate()?;
        if !(self.horizon > 0.0) {
            return Err(ThermoError::domain("driven protocol needs a positive horizon"));
        }
        if self.steps < 2 {
            return Err(ThermoError::Grid("need at least 2 grid steps".into()));
        }
        Ok(())
    }

    pub fn target_at(&self, t: f64) -> State {
        let s = (t / self.horizon).clamp(0.0, 1.0);
        State::new(
            self.from.temp + (self.to.temp - self.from.temp) * s,
            self.from.eta2 + (self.to.eta2 - self.from.eta2) * s,
        )
    }
}

#[derive(Debug, Clone)]
pub enum TrajectoryMeta {
    Undriven { spec: RelaxSpec, analytic: bool },
    Driven { spec: DrivenSpec },
}

/// Sampled trajectory with the per-sample observables used by reports,
/// figures and audits.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// Divergence to the (instantaneous) target.
    pub d_star: Vec<f64>,
    /// Squared metric speed of the flow at each sample.
    pub speed_sq: Vec<f64>,
    /// Cubic form contracted with the velocity at each sample.
    pub cubic: Vec<f64>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// Relaxation rate in force at sample `i`.
    pub fn rate_at(&self, i: usize) -> f64 {
        match &self.meta {
            TrajectoryMeta::Undriven { spec, .. } => spec.lambda,
            TrajectoryMeta::Driven { spec } => spec.rate.at(self.times[i]),
        }
    }

    /// Velocity of the flow at sample `i`, from the flow law (not finite
    /// differences).
    pub fn velocity(&self, i: usize) -> TangentVec {
        match &self.meta {
            TrajectoryMeta::Undriven { spec, .. } => {
                let s = &self.states[i];
                [
                    -spec.lambda * (s.temp - spec.q.temp),
                    -spec.lambda * (s.eta2 - spec.q.eta2),
                ]
            }
            TrajectoryMeta::Driven { spec } => {
                let s = &self.states[i];
                let t = self.times[i];
                let q = spec.target_at(t);
                let l = spec.rate.at(t);
                [-l * (s.temp - q.temp), -l * (s.eta2 - q.eta2)]
            }
        }
    }

    pub fn as_curve(&self) -> Result<geometry::Curve> {
        geometry::Curve::new(self.times.clone(), self.states.clone())
    }

    /// Max over interior samples of `|eta_dd + lambda eta_dot|_g` relative to
    /// `|lambda eta_dot|_g`; zero for an exact trajectory of the flow, so
    /// this certifies that the path is a reparametrised dual geodesic.
    pub fn pregeodesic_residual(&self, system: &dyn ThermoSystem) -> Result<f64> {
        let h = self.step();
        let mut worst: f64 = 0.0;
        let peak = self.speed_sq.iter().cloned().fold(0.0, f64::max);
        for i in 1..self.len() - 1 {
            // Skip the tail where the velocity has decayed into roundoff.
            if self.speed_sq[i] < 1e-5 * peak {
                continue;
            }
            let lambda = self.rate_at(i);
            let (a, b, c) = (&self.states[i - 1], &self.states[i], &self.states[i + 1]);
            let acc = [
                (c.temp - 2.0 * b.temp + a.temp) / (h * h),
                (c.eta2 - 2.0 * b.eta2 + a.eta2) / (h * h),
            ];
            let vel = self.velocity(i);
            let res = [acc[0] + lambda * vel[0], acc[1] + lambda * vel[1]];
            let g = system.metric_eta(b)?;
            let num = g.quad(res).max(0.0).sqrt();
            let den = lambda * g.quad(vel).max(0.0).sqrt();
            if den > 0.0 {
                worst = worst.max(num / den);
            }
        }
        Ok(worst)
    }
}

fn instrument(
    system: &dyn ThermoSystem,
    times: Vec<f64>,
    states: Vec<State>,
    meta: TrajectoryMeta,
) -> Result<Trajectory> {
    let mut traj = Trajectory {
        times,
        states,
        d_star: Vec::new(),
        speed_sq: Vec::new(),
        cubic: Vec::new(),
        meta,
    };
    let n = traj.len();
    traj.d_star.reserve(n);
    traj.speed_sq.reserve(n);
    traj.cubic.reserve(n);
    for i in 0..n {
        let s = traj.states[i];
        let target = match &traj.meta {
            TrajectoryMeta::Undriven { spec, .. } => spec.q,
            TrajectoryMeta::Driven { spec } => spec.target_at(traj.times[i]),
        };
        let v = traj.velocity(i);
        traj.d_star.push(system.divergence(&s, &target)?);
        traj.speed_sq.push(geometry::norm_sq(system, &s, v)?);
        traj.cubic.push(geometry::cubic_form(system, &s, v)?);
    }
    Ok(traj)
}

/// Undriven relaxation via the exact solution.
pub fn relax_analytic(system: &dyn ThermoSystem, spec: &RelaxSpec) -> Result<Trajectory> {
    spec.validate()?;
    system.validate(&spec.p0)?;
    system.validate(&spec.q)?;
    let h = spec.horizon / spec.steps as f64;
    let times: Vec<f64> = (0..=spec.steps).map(|i| i as f64 * h).collect();
    let states: Vec<State> = times.iter().map(|&t| spec.state_at(t)).collect();
    for s in &states {
        system.validate(s)?;
    }
    instrument(
        system,
        times,
        states,
        TrajectoryMeta::Undriven {
            spec: *spec,
            analytic: true,
        },
    )
}

/// Undriven relaxation integrated with RK4 in the *theta* chart.
///
/// The flow law lives in the eta chart; expressing it in theta requires the
/// chain rule `theta_dot = g(eta) eta_dot` and an inverse Legendre map per
/// stage. Deliberately the hard way round: agreement with `relax_analytic`
/// validates the metric, the inversion and the conjugate coordinates at once.
pub fn relax_ode_theta(system: &dyn ThermoSystem, spec: &RelaxSpec) -> Result<Trajectory> {
    spec.validate()?;
    system.validate(&spec.p0)?;
    system.validate(&spec.q)?;
    let h = spec.horizon / spec.steps as f64;
    let mut theta = system.theta_of(&spec.p0)?.theta();
    let mut guess = spec.p0;
    let mut times = Vec::with_capacity(spec.steps + 1);
    let mut states = Vec::with_capacity(spec.steps + 1);
    times.push(0.0);
    states.push(spec.p0);

    let rhs = |th: [f64; 2], guess: &State| -> Result<([f64; 2], State)> {
        let eta = system.eta_of_theta(th, guess)?;
        let v = [
            -spec.lambda * (eta.temp - spec.q.temp),
            -spec.lambda * (eta.eta2 - spec.q.eta2),
        ];
        let g = system.metric_eta(&eta)?;
        Ok((
            [
                g.c11 * v[0] + g.c12 * v[1],
                g.c12 * v[0] + g.c22 * v[1],
            ],
            eta,
        ))
    };

    for i in 0..spec.steps {
        let (k1, e1) = rhs(theta, &guess)?;
        let (k2, e2) = rhs(
            [theta[0] + 0.5 * h * k1[0], theta[1] + 0.5 * h * k1[1]],
            &e1,
        )?;
        let (k3, e3) = rhs(
            [theta[0] + 0.5 * h * k2[0], theta[1] + 0.5 * h * k2[1]],
            &e2,
        )?;
        let (k4, _) = rhs([theta[0] + h * k3[0], theta[1] + h * k3[1]], &e3)?;
        theta = [
            theta[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            theta[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        guess = system.eta_of_theta(theta, &guess)?;
        times.push((i + 1) as f64 * h);
        states.push(guess);
    }
    instrument(
        system,
        times,
        states,
        TrajectoryMeta::Undriven {
            spec: *spec,
            analytic: false,
        },
    )
}

/// Driven flow integrated with RK4 in the eta chart (the law is affine per
/// fixed target but the target moves, so no closed form is used).
pub fn driven_flow(system: &dyn ThermoSystem, spec: &DrivenSpec) -> Result<Trajectory> {
    spec.validate()?;
    system.validate(&spec.p0)?;
    system.validate(&spec.from)?;
    system.validate(&spec.to)?;
    let h = spec.horizon / spec.steps as f64;
    let mut eta = [spec.p0.temp, spec.p0.eta2];
    let mut times = Vec::with_capacity(spec.steps + 1);
    let mut states = Vec::with_capacity(spec.steps + 1);
    times.push(0.0);
    states.push(spec.p0);
    let rhs = |e: [f64; 2], t: f64| {
        let q = spec.target_at(t);
        let l = spec.rate.at(t);
        [-l * (e[0] - q.temp), -l * (e[1] - q.eta2)]
    };
    for i in 0..spec.steps {
        let t = i as f64 * h;
        let k1 = rhs(eta, t);
        let k2 = rhs([eta[0] + 0.5 * h * k1[0], eta[1] + 0.5 * h * k1[1]], t + 0.5 * h);
        let k3 = rhs([eta[0] + 0.5 * h * k2[0], eta[1] + 0.5 * h * k2[1]], t + 0.5 * h);
        let k4 = rhs([eta[0] + h * k3[0], eta[1] + h * k3[1]], t + h);
        eta = [
            eta[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            eta[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        let s = State::new(eta[0], eta[1]);
        system.validate(&s)?;
        times.push((i + 1) as f64 * h);
        states.push(s);
    }
    instrument(system, times, states, TrajectoryMeta::Driven { spec: *spec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{ClassicalIdealGasTp, ToyQuadratic};

    fn gas() -> ClassicalIdealGasTp {
        ClassicalIdealGasTp::new(1.5, 1.0, State::new(275.0, -1.0e5)).unwrap()
    }

    fn spec() -> RelaxSpec {
        RelaxSpec {
            p0: State::new(375.0, -1.0e5),
            q: State::new(275.0, -1.0e5),
            lambda: 1.0,
            horizon: 2.0,
            steps: 2000,
        }
    }

    #[test]
    fn theta_integrator_matches_exact_solution() {
        let sys = gas();
        let sp = spec();
        let exact = relax_analytic(&sys, &sp).unwrap();
        let ode = relax_ode_theta(&sys, &sp).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..exact.len() {
            worst = worst.max(
                (exact.states[i].temp - ode.states[i].temp).abs() / exact.states[i].temp,
            );
        }
        assert!(worst < 1e-6, "worst rel T error {worst}");
    }

    #[test]
    fn theta_integrator_is_fourth_order() {
        // Halving h should cut the endpoint error by about 16; run at coarse
        // steps so truncation dominates roundoff.
        let sys = gas();
        let mut sp = spec();
        sp.horizon = 1.0;
        let exact_end = sp.state_at(1.0).temp;
        let mut errs = Vec::new();
        for steps in [25, 50] {
            sp.steps = steps;
            let t = relax_ode_theta(&sys, &sp).unwrap();
            errs.push((t.states[t.len() - 1].temp - exact_end).abs());
        }
        let ratio = errs[0] / errs[1];
        assert!(ratio > 10.0 && ratio < 24.0, "convergence ratio {ratio}");
    }

    #[test]
    fn dissipation_identity_along_flow() {
        // -lambda dD/dt = |gamma_dot|^2 pointwise.
        let sys = gas();
        let sp = spec();
        let traj = relax_analytic(&sys, &sp).unwrap();
        let h = traj.step();
        let peak = traj.speed_sq.iter().cloned().fold(0.0, f64::max);
        for i in 1..traj.len() - 1 {
            if traj.speed_sq[i] < 1e-5 * peak {
                continue;
            }
            let dd = (traj.d_star[i + 1] - traj.d_star[i - 1]) / (2.0 * h);
            let lhs = -sp.lambda * dd;
            let rel = (lhs - traj.speed_sq[i]).abs() / traj.speed_sq[i];
            assert!(rel < 1e-5, "i={i} rel={rel}");
        }
    }

    #[test]
    fn second_dissipation_identity_along_flow() {
        // -lambda d2D/dt2 = -C(v,v,v) - 2 lambda |v|^2 pointwise.
        let sys = gas();
        let sp = spec();
        let traj = relax_analytic(&sys, &sp).unwrap();
        let h = traj.step();
        let peak = traj.speed_sq.iter().cloned().fold(0.0, f64::max);
        for i in 1..traj.len() - 1 {
            if traj.speed_sq[i] < 1e-3 * peak {
                continue;
            }
            let d2 = (traj.d_star[i + 1] - 2.0 * traj.d_star[i] + traj.d_star[i - 1]) / (h * h);
            let lhs = -sp.lambda * d2;
            let rhs = -traj.cubic[i] - 2.0 * sp.lambda * traj.speed_sq[i];
            let rel = (lhs - rhs).abs() / rhs.abs();
            assert!(rel < 1e-4, "i={i} rel={rel} lhs={lhs} rhs={rhs}");
        }
    }

    #[test]
    fn pregeodesic_residual_is_small() {
        let sys = gas();
        let traj = relax_analytic(&sys, &spec()).unwrap();
        let res = traj.pregeodesic_residual(&sys).unwrap();
        assert!(res < 1e-5, "residual {res}");
    }

    #[test]
    fn driven_flow_tracks_slow_target() {
        // Quasi-static limit: for lambda*tau >> 1 the state lags the target
        // by about |target velocity| / lambda.
        let sys = ToyQuadratic::isotropic(1.0).unwrap();
        let sp = DrivenSpec {
            p0: State::new(1.0, 0.0),
            from: State::new(1.0, 0.0),
            to: State::new(2.0, 0.0),
            rate: RateSchedule::Constant(50.0),
            horizon: 1.0,
            steps: 5000,
        };
        let traj = driven_flow(&sys, &sp).unwrap();
        let mid = traj.len() / 2;
        let target = sp.target_at(traj.times[mid]);
        let lag = target.temp - traj.states[mid].temp;
        let expect = 1.0 / 50.0; // dT_target/dt / lambda
        assert!((lag - expect).abs() < 0.1 * expect, "lag {lag} vs {expect}");
    }

    #[test]
    fn invalid_specs_rejected() {
        let sp = RelaxSpec {
            lambda: -1.0,
            ..spec()
        };
        assert!(relax_analytic(&gas(), &sp).is_err());
        let sp = RelaxSpec { steps: 1, ..spec() };
        assert!(matches!(
            relax_analytic(&gas(), &sp),
            Err(ThermoError::Grid(_))
        ));
    }
}
