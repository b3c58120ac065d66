//! Pointwise geometric quantities in the `(T, eta2)` chart.

use crate::error::{Result, ThermoError};
use crate::systems::{State, ThermoSystem};
use crate::tensor::{SymTensor2, SymTensor3};

/// Condition-number cutoff past which a metric solve is refused.
pub const METRIC_CONDITION_LIMIT: f64 = 1e12;

/// Tangent vector at a point, components in the `(T, eta2)` chart.
pub type TangentVec = [f64; 2];

/// Gradient of `p -> D(p, q)` at `p`, raised with the metric at `p`.
///
/// The lowered gradient in the `(T, eta2)` chart is `g(p) (eta_p - eta_q)`
/// exactly (a dually-flat identity), so the raised gradient is the plain
/// coordinate difference. The metric is still inspected: downstream uses
/// lower the result again, and a near-singular metric means the chart is
/// untrustworthy at `p`.
pub fn grad_divergence(
    system: &dyn ThermoSystem,
    p: &State,
    q: &State,
) -> Result<TangentVec> {
    let g = system.metric_eta(p)?;
    let cond = g.condition_number();
    if !(cond <= METRIC_CONDITION_LIMIT) {
        return Err(ThermoError::SingularMetric {
            cond,
            limit: METRIC_CONDITION_LIMIT,
        });
    }
    Ok([p.temp - q.temp, p.eta2 - q.eta2])
}

/// Squared metric norm of a tangent vector.
pub fn norm_sq(system: &dyn ThermoSystem, at: &State, v: TangentVec) -> Result<f64> {
    Ok(system.metric_eta(at)?.quad(v))
}

/// Amari-Chentsov cubic form contracted three times with `v`.
pub fn cubic_form(system: &dyn ThermoSystem, at: &State, v: TangentVec) -> Result<f64> {
    Ok(system.amari_chentsov_eta(at)?.cubic(v))
}

/// A sampled curve in the `(T, eta2)` chart.
#[derive(Debug, Clone)]
pub struct Curve {
    pub times: Vec<f64>,
    pub points: Vec<State>,
}

impl Curve {
    pub fn new(times: Vec<f64>, points: Vec<State>) -> Result<Self> {
        if times.len() != points.len() || times.len() < 2 {
            return Err(ThermoError::Grid(format!(
                "curve needs matching time/point samples, at least two (got {}/{})",
                times.len(),
                points.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ThermoError::Grid("curve times must strictly increase".into()));
        }
        Ok(Self { times, points })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Riemannian length: chord vectors measured in the metric at each
    /// segment midpoint. Refuses segments so long that the midpoint metric
    /// is not representative.
    pub fn length(&self, system: &dyn ThermoSystem, max_rel_step: f64) -> Result<f64> {
        let mut total = 0.0;
        for i in 0..self.len() - 1 {
            let a = &self.points[i];
            let b = &self.points[i + 1];
            let mid = State::new(0.5 * (a.temp + b.temp), 0.5 * (a.eta2 + b.eta2));
            let chord = [b.temp - a.temp, b.eta2 - a.eta2];
            let scale_t = mid.temp.abs().max(1e-300);
            let scale_e = mid.eta2.abs().max(1e-300);
            let rel = (chord[0] / scale_t).abs().max((chord[1] / scale_e).abs());
            if rel > max_rel_step {
                return Err(ThermoError::Resolution(format!(
                    "curve segment {i} spans relative step {rel:.3e} > {max_rel_step:.3e}; refine the grid"
                )));
            }
            let q2 = system.metric_eta(&mid)?.quad(chord);
            if q2 < 0.0 && q2 > -1e-14 {
                continue; // roundoff on a degenerate chord
            }
            if q2 < 0.0 {
                return Err(ThermoError::domain(format!(
                    "metric not positive along segment {i} (quad = {q2:.3e})"
                )));
            }
            total += q2.sqrt();
        }
        Ok(total)
    }
}

/// Metric contracted generic bilinear form of two tangent vectors.
pub fn metric_bilinear(
    system: &dyn ThermoSystem,
    at: &State,
    u: TangentVec,
    v: TangentVec,
) -> Result<f64> {
    Ok(system.metric_eta(at)?.bilin(u, v))
}

/// Guarded metric solve shared by flow integrators.
pub fn metric_solve(g: &SymTensor2, rhs: TangentVec) -> Result<TangentVec> {
    g.solve(rhs, METRIC_CONDITION_LIMIT)
}

/// Cubic tensor at a point, exposed for reporting.
pub fn cubic_tensor(system: &dyn ThermoSystem, at: &State) -> Result<SymTensor3> {
    system.amari_chentsov_eta(at)
}
