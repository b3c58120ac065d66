//! Relaxation asymmetry analysis: equidistant-state solvers, cubic-form
//! classification, critical-time detection and the speed/length bound
//! auditors.

use crate::error::{Result, ThermoError};
use crate::flow::{RelaxSpec, Trajectory, TrajectoryMeta};
use crate::geometry;
use crate::systems::{State, ThermoSystem};

/// Two initial states at equal divergence from the target.
#[derive(Debug, Clone, Copy)]
pub struct EquidistantPair {
    pub hot: State,
    pub cold: State,
    pub q: State,
    pub divergence_value: f64,
}

/// Bisection to relative tolerance 1e-12 on `f` over `[lo, hi]`; the
/// endpoints must straddle a sign change.
fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(ThermoError::Bracket(format!(
            "no sign change on [{lo}, {hi}] (f = {flo:.6e}, {fhi:.6e})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= 1e-12 * mid.abs().max(1e-12) {
            return Ok(mid);
        }
        let fmid = f(mid)?;
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Find the state on the one-parameter constraint `line` whose divergence
/// from `q` equals that of `given`, and pair the two up.
///
/// Divergence restricted to the line must be monotone over the bracket; a
/// level set in two dimensions is a curve, so callers pick the branch by
/// picking the line (isobar, iso-mu, ...).
pub fn solve_equidistant<F: Fn(f64) -> State>(
    system: &dyn ThermoSystem,
    q: &State,
    given: &State,
    line: F,
    bracket: (f64, f64),
) -> Result<EquidistantPair> {
    let d0 = system.divergence(given, q)?;
    if d0 <= 0.0 {
        return Err(ThermoError::domain(
            "given state coincides with the target; no equidistant partner",
        ));
    }
    let root = bisect(
        |x| Ok(system.divergence(&line(x), q)? - d0),
        bracket.0,
        bracket.1,
    )?;
    let other = line(root);
    let (hot, cold) = if given.temp >= other.temp {
        (*given, other)
    } else {
        (other, *given)
    };
    Ok(EquidistantPair {
        hot,
        cold,
        q: *q,
        divergence_value: d0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Faster {
    Traj1,
    Traj2,
    Inconclusive,
}

impl Faster {
    pub fn label(&self) -> &'static str {
        match self {
            Faster::Traj1 => "gamma1",
            Faster::Traj2 => "gamma2",
            Faster::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AsymmetryReport {
    /// All speed-matching times found in the horizon, refined by bisection.
    pub match_times: Vec<f64>,
    /// First speed-matching time, when one exists.
    pub t_star: Option<f64>,
    /// Second derivative of `Delta D* = D*(gamma2) - D*(gamma1)` at `t_star`.
    pub delta_dd: Option<f64>,
    /// Cubic forms `C(v, v, v)` of both flows at each matching time.
    pub cubic_1: Vec<f64>,
    pub cubic_2: Vec<f64>,
    pub faster: Faster,
    /// Interior extrema of the gridded `Delta D*` series, `(t, value)`.
    pub delta_d_extrema: Vec<(f64, f64)>,
}

/// Squared speed of an undriven flow at an arbitrary time, from the exact
/// solution (used to refine grid-detected crossings).
fn exact_speed_sq(system: &dyn ThermoSystem, spec: &RelaxSpec, t: f64) -> Result<f64> {
    let s = spec.state_at(t);
    let v = spec.velocity_at(t);
    geometry::norm_sq(system, &s, v)
}

fn undriven_spec(traj: &Trajectory) -> Result<RelaxSpec> {
    match &traj.meta {
        TrajectoryMeta::Undriven { spec, .. } => Ok(*spec),
        TrajectoryMeta::Driven { .. } => Err(ThermoError::domain(
            "asymmetry classification needs undriven trajectories",
        )),
    }
}

/// Theorem-2 style comparison of two relaxations toward the same target:
/// locate the speed-matching times, compare the cubic forms there, and label
/// the branch with the larger cubic form as the faster one.
pub fn classify_asymmetry(
    system: &dyn ThermoSystem,
    traj1: &Trajectory,
    traj2: &Trajectory,
) -> Result<AsymmetryReport> {
    let spec1 = undriven_spec(traj1)?;
    let spec2 = undriven_spec(traj2)?;
    if traj1.len() != traj2.len() || (traj1.step() - traj2.step()).abs() > 1e-15 {
        return Err(ThermoError::Grid(
            "trajectories must share the time grid".into(),
        ));
    }

    // Grid scan for sign changes of the speed difference, then bisection on
    // the exact speed functions.
    let mut match_times = Vec::new();
    let diff = |t: f64| -> Result<f64> {
        Ok(exact_speed_sq(system, &spec1, t)? - exact_speed_sq(system, &spec2, t)?)
    };
    for i in 0..traj1.len() - 1 {
        let a = traj1.speed_sq[i] - traj2.speed_sq[i];
        let b = traj1.speed_sq[i + 1] - traj2.speed_sq[i + 1];
        if a == 0.0 && i == 0 {
            continue; // identical starts are not a crossing
        }
        if a.signum() != b.signum() && a != 0.0 && b != 0.0 {
            match_times.push(bisect(&diff, traj1.times[i], traj1.times[i + 1])?);
        }
    }

    // Interior extrema of Delta D* (second-convention sign).
    let dd = |i: usize| traj2.d_star[i] - traj1.d_star[i];
    let mut delta_d_extrema = Vec::new();
    for i in 1..traj1.len() - 1 {
        let (l, m, r) = (dd(i - 1), dd(i), dd(i + 1));
        if (m - l).signum() != (r - m).signum() && (m - l) != 0.0 && (r - m) != 0.0 {
            delta_d_extrema.push((traj1.times[i], m));
        }
    }

    if match_times.is_empty() {
        let s0 = traj1.speed_sq[0] - traj2.speed_sq[0];
        let scale = traj1.speed_sq[0].max(traj2.speed_sq[0]);
        if scale > 0.0 && s0.abs() > 1e-10 * scale {
            return Err(ThermoError::Grid(
                "initial speeds differ but never match within the horizon".into(),
            ));
        }
        return Ok(AsymmetryReport {
            match_times,
            t_star: None,
            delta_dd: None,
            cubic_1: Vec::new(),
            cubic_2: Vec::new(),
            faster: Faster::Inconclusive,
            delta_d_extrema,
        });
    }

    let cubic_at = |spec: &RelaxSpec, t: f64| -> Result<f64> {
        let s = spec.state_at(t);
        let v = spec.velocity_at(t);
        geometry::cubic_form(system, &s, v)
    };
    let mut cubic_1 = Vec::new();
    let mut cubic_2 = Vec::new();
    let mut all_1 = true;
    let mut all_2 = true;
    for &t in &match_times {
        let c1 = cubic_at(&spec1, t)?;
        let c2 = cubic_at(&spec2, t)?;
        if c1 <= c2 {
            all_1 = false;
        }
        if c2 <= c1 {
            all_2 = false;
        }
        cubic_1.push(c1);
        cubic_2.push(c2);
    }
    let faster = if all_1 {
        Faster::Traj1
    } else if all_2 {
        Faster::Traj2
    } else {
        Faster::Inconclusive
    };

    let t_star = match_times[0];
    let h = traj1.step();
    let i = ((t_star / h).round() as usize).clamp(1, traj1.len() - 2);
    let delta_dd = (dd(i + 1) - 2.0 * dd(i) + dd(i - 1)) / (h * h);

    Ok(AsymmetryReport {
        match_times,
        t_star: Some(t_star),
        delta_dd: Some(delta_dd),
        cubic_1,
        cubic_2,
        faster,
        delta_d_extrema,
    })
}

/// For an isobaric pair of ideal-gas relaxations, check the critical-time
/// product identity `T+(t*) T-(t*) = T_q^2`; returns the relative defect.
pub fn isobaric_product_check(
    system: &dyn ThermoSystem,
    traj_hot: &Trajectory,
    traj_cold: &Trajectory,
) -> Result<f64> {
    let spec_h = undriven_spec(traj_hot)?;
    let spec_c = undriven_spec(traj_cold)?;
    let q = spec_h.q;
    for (spec, traj) in [(&spec_h, traj_hot), (&spec_c, traj_cold)] {
        if (spec.q.temp - q.temp).abs() > 0.0 || (spec.q.eta2 - q.eta2).abs() > 0.0 {
            return Err(ThermoError::domain("trajectories target different states"));
        }
        let isobaric = traj
            .states
            .iter()
            .all(|s| (s.eta2 - q.eta2).abs() <= 1e-9 * q.eta2.abs());
        if !isobaric {
            return Err(ThermoError::domain(
                "product identity applies to isobaric trajectories only",
            ));
        }
    }
    let report = classify_asymmetry(system, traj_hot, traj_cold)?;
    let t_star = report.t_star.ok_or_else(|| {
        ThermoError::Grid("no speed-matching time found within the horizon".into())
    })?;
    let th = spec_h.state_at(t_star).temp;
    let tc = spec_c.state_at(t_star).temp;
    Ok((th * tc - q.temp * q.temp).abs() / (q.temp * q.temp))
}

/// One row of a speed-bound audit.
#[derive(Debug, Clone, Copy)]
pub struct TurRow {
    pub tau: f64,
    pub delta_a: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Trapezoid partial integrals of `f` and `f^2`-style series over the grid
/// prefix ending at `upto` (inclusive).
fn trapezoid_prefix(times: &[f64], values: &[f64], upto: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..upto {
        acc += 0.5 * (times[i + 1] - times[i]) * (values[i] + values[i + 1]);
    }
    acc
}

/// Audit the speed/cost bound `delta A(tau) >= L^2 / (lambda tau)` along an
/// undriven trajectory, at each requested horizon.
///
/// Both sides are discretized with the *same* trapezoid weights over the
/// recorded speed series, so the discrete ratio obeys Cauchy-Schwarz exactly
/// and never dips below 1 through quadrature mismatch alone.
pub fn tur_audit(traj: &Trajectory, lambda: f64, tau_list: &[f64]) -> Result<Vec<TurRow>> {
    let spec = undriven_spec(traj)?;
    if (spec.lambda - lambda).abs() > 1e-12 * lambda {
        return Err(ThermoError::domain("lambda does not match the trajectory"));
    }
    // A step too coarse against the decay rate makes the quadrature lie
    // about the bound; refuse instead of reporting a false violation.
    if lambda * traj.step() > 0.2 {
        return Err(ThermoError::Resolution(format!(
            "grid step {} too coarse for rate {lambda}; refine the grid",
            traj.step()
        )));
    }
    let speed: Vec<f64> = traj.speed_sq.iter().map(|s| s.max(0.0).sqrt()).collect();
    let mut rows = Vec::with_capacity(tau_list.len());
    for &tau in tau_list {
        if !(tau > 0.0) {
            return Err(ThermoError::domain("audit horizons must be positive"));
        }
        let i = (tau / traj.step()).round() as usize;
        if i == 0 || i >= traj.len() {
            return Err(ThermoError::Grid(format!(
                "tau = {tau} does not land on the trajectory grid"
            )));
        }
        let tau_grid = traj.times[i];
        let delta_a = trapezoid_prefix(&traj.times, &traj.speed_sq, i) / lambda;
        let length = trapezoid_prefix(&traj.times, &speed, i);
        let bound = length * length / (lambda * tau_grid);
        rows.push(TurRow {
            tau: tau_grid,
            delta_a,
            bound,
            ratio: delta_a / bound,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy)]
pub struct HorseCarrotAudit {
    pub delta_a: f64,
    pub eps_bar: f64,
    pub length: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Audit the finite-time availability bound `delta A >= eps_bar L^2 / tau`
/// along a driven trajectory, with `eps_bar` the speed-weighted mean of the
/// instantaneous relaxation time `1/lambda(t)`.
pub fn horse_carrot_audit(traj: &Trajectory) -> Result<HorseCarrotAudit> {
    if matches!(traj.meta, TrajectoryMeta::Undriven { .. }) {
        // Constant-rate undriven flows reduce to the tau-version of the
        // bound; allow them through for the degenerate check.
    }
    let n = traj.len() - 1;
    let max_rate = (0..traj.len()).map(|i| traj.rate_at(i)).fold(0.0, f64::max);
    if max_rate * traj.step() > 0.2 {
        return Err(ThermoError::Resolution(format!(
            "grid step {} too coarse for peak rate {max_rate}; refine the grid",
            traj.step()
        )));
    }
    let speed: Vec<f64> = traj.speed_sq.iter().map(|s| s.max(0.0).sqrt()).collect();
    let weighted: Vec<f64> = (0..traj.len())
        .map(|i| traj.speed_sq[i] / traj.rate_at(i))
        .collect();
    let tau = traj.times[n];
    let delta_a = trapezoid_prefix(&traj.times, &weighted, n);
    let energy = trapezoid_prefix(&traj.times, &traj.speed_sq, n);
    let length = trapezoid_prefix(&traj.times, &speed, n);
    if energy <= 0.0 {
        return Ok(HorseCarrotAudit {
            delta_a: 0.0,
            eps_bar: 0.0,
            length: 0.0,
            bound: 0.0,
            ratio: 1.0,
        });
    }
    let eps_bar = delta_a / energy;
    let bound = eps_bar * length * length / tau;
    Ok(HorseCarrotAudit {
        delta_a,
        eps_bar,
        length,
        bound,
        ratio: delta_a / bound,
    })
}

/// Extract the level set `D*(., q) = level` on a rectangular chart window as
/// marching-squares segments. A sampler, not a solver: root-finding along an
/// explicit constraint line is `solve_equidistant`'s job.
pub fn level_set_segments(
    system: &dyn ThermoSystem,
    q: &State,
    level: f64,
    t_range: (f64, f64),
    e_range: (f64, f64),
    n: usize,
) -> Result<Vec<[State; 2]>> {
    if n < 2 {
        return Err(ThermoError::Grid("level-set grid needs n >= 2".into()));
    }
    let ht = (t_range.1 - t_range.0) / n as f64;
    let he = (e_range.1 - e_range.0) / n as f64;
    let mut field = vec![0.0; (n + 1) * (n + 1)];
    for i in 0..=n {
        for j in 0..=n {
            let s = State::new(t_range.0 + i as f64 * ht, e_range.0 + j as f64 * he);
            field[i * (n + 1) + j] = system.divergence(&s, q)? - level;
        }
    }
    let at = |i: usize, j: usize| field[i * (n + 1) + j];
    let point = |i: f64, j: f64| State::new(t_range.0 + i * ht, e_range.0 + j * he);
    let mut segments = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // Edge crossings of the cell, linearly interpolated.
            let corners = [
                (at(i, j), at(i + 1, j), (i, j), (1.0, 0.0)),
                (at(i + 1, j), at(i + 1, j + 1), (i + 1, j), (0.0, 1.0)),
                (at(i, j + 1), at(i + 1, j + 1), (i, j + 1), (1.0, 0.0)),
                (at(i, j), at(i, j + 1), (i, j), (0.0, 1.0)),
            ];
            let mut hits = Vec::new();
            for (a, b, (ci, cj), (di, dj)) in corners {
                if a.signum() != b.signum() && a != b {
                    let s = a / (a - b);
                    hits.push(point(ci as f64 + s * di, cj as f64 + s * dj));
                }
            }
            if hits.len() >= 2 {
                segments.push([hits[0], hits[1]]);
            }
        }
    }
    Ok(segments)
}

/// Mpemba-style scenario report.
#[derive(Debug, Clone)]
pub struct MpembaReport {
    pub t_star: f64,
    /// Asymmetry gap at `t_star` under the component bookkeeping used by the
    /// published contour figure (see `notes`).
    pub delta_a: f64,
    /// Same gap from the fully symmetric cubic tensor.
    pub delta_a_symmetric: f64,
    pub faster: Faster,
    pub times: Vec<f64>,
    /// `D*(gamma2) - D*(gamma1)` on the grid.
    pub delta_d: Vec<f64>,
    pub traj1: Trajectory,
    pub traj2: Trajectory,
    pub notes: Vec<String>,
}

/// Asymmetry density `A = -lambda^3 C(grad, grad, grad)` with the symmetric
/// cubic tensor; `grad` is the raised divergence gradient `eta - eta_q`.
pub fn asymmetry_density(
    system: &dyn ThermoSystem,
    state: &State,
    q: &State,
    lambda: f64,
) -> Result<f64> {
    let g = [state.temp - q.temp, state.eta2 - q.eta2];
    Ok(-lambda.powi(3) * geometry::cubic_form(system, state, g)?)
}

/// Cross-term bookkeeping variant of `asymmetry_density` for the closed
/// ideal gas in `(T, P)` components: the mixed `T P^2` and `P^3` terms enter
/// with multiplicity one and unsigned pressure powers. Kept because the
/// published contour values follow this tabulation, not the symmetric
/// contraction; the two agree in sign but not magnitude.
pub fn asymmetry_density_tp_variant(
    c: f64,
    n0kb: f64,
    state: &State,
    q: &State,
    lambda: f64,
) -> f64 {
    let (t, p) = (state.temp, -state.eta2);
    let (gt, gp) = (t - q.temp, p - (-q.eta2));
    -lambda.powi(3)
        * ((c + 1.0) * n0kb / (t * t) * gt.powi(3)
            + n0kb / (p * p) * gt * gp * gp
            + 2.0 * n0kb * t / (p * p * p) * gp.powi(3))
}

pub const MPEMBA_C: f64 = 1.5;
pub const MPEMBA_N0KB: f64 = 1.0;
pub const MPEMBA_LAMBDA: f64 = 1.0;
pub const MPEMBA_Q: State = State {
    temp: 275.0,
    eta2: -1.0e5,
};
pub const MPEMBA_P01: State = State {
    temp: 375.0,
    eta2: -1.0e5,
};
pub const MPEMBA_P02: State = State {
    temp: 300.0,
    eta2: -189_487.5,
};

/// The two-parameter scenario: a hotter/low-pressure start and a cooler
/// pressurized start at (nearly) equal divergence from the same reservoir.
/// The hotter branch relaxes faster even though it starts further away in
/// temperature.
pub fn mpemba_scenario(
    system: &dyn ThermoSystem,
    horizon: f64,
    steps: usize,
) -> Result<MpembaReport> {
    let mk = |p0: State| RelaxSpec {
        p0,
        q: MPEMBA_Q,
        lambda: MPEMBA_LAMBDA,
        horizon,
        steps,
    };
    let spec1 = mk(MPEMBA_P01);
    let spec2 = mk(MPEMBA_P02);
    let traj1 = crate::flow::relax_analytic(system, &spec1)?;
    let traj2 = crate::flow::relax_analytic(system, &spec2)?;
    let report = classify_asymmetry(system, &traj1, &traj2)?;
    let t_star = report.t_star.ok_or_else(|| {
        ThermoError::Grid("no speed-matching time in the scenario horizon".into())
    })?;

    let a_at = |spec: &RelaxSpec, variant: bool| -> Result<f64> {
        let s = spec.state_at(t_star);
        if variant {
            Ok(asymmetry_density_tp_variant(
                MPEMBA_C,
                MPEMBA_N0KB,
                &s,
                &MPEMBA_Q,
                MPEMBA_LAMBDA,
            ))
        } else {
            asymmetry_density(system, &s, &MPEMBA_Q, MPEMBA_LAMBDA)
        }
    };
    let delta_a = a_at(&spec1, true)? - a_at(&spec2, true)?;
    let delta_a_symmetric = a_at(&spec1, false)? - a_at(&spec2, false)?;

    let delta_d: Vec<f64> = (0..traj1.len())
        .map(|i| traj2.d_star[i] - traj1.d_star[i])
        .collect();

    Ok(MpembaReport {
        t_star,
        delta_a,
        delta_a_symmetric,
        faster: report.faster,
        times: traj1.times.clone(),
        delta_d,
        traj1,
        traj2,
        notes: vec![
            "delta_d follows the convention D*(gamma2) - D*(gamma1); it is positive throughout this scenario".into(),
            "delta_a uses the (T,P) cross-term bookkeeping variant; delta_a_symmetric is the symmetric-tensor value".into(),
        ],
    })
}

/// Best-effort sweep mirroring a by-hand pair tuning: fix `p01`, walk a
/// one-parameter family of candidate second starts, and report the
/// divergence gap and first speed-matching time for each. Not an optimizer.
pub fn tune_pair_sweep<F: Fn(f64) -> State>(
    system: &dyn ThermoSystem,
    q: &State,
    p01: &State,
    line: F,
    bracket: (f64, f64),
    samples: usize,
) -> Result<Vec<(f64, f64, Option<f64>)>> {
    if samples < 2 {
        return Err(ThermoError::Grid("sweep needs at least 2 samples".into()));
    }
    let d0 = system.divergence(p01, q)?;
    let mut rows = Vec::with_capacity(samples);
    for k in 0..samples {
        let x = bracket.0 + (bracket.1 - bracket.0) * k as f64 / (samples - 1) as f64;
        let p02 = line(x);
        let gap = system.divergence(&p02, q)? - d0;
        let mk = |p0: State| RelaxSpec {
            p0,
            q: *q,
            lambda: 1.0,
            horizon: 20.0,
            steps: 2000,
        };
        let t1 = crate::flow::relax_analytic(system, &mk(*p01))?;
        let t2 = crate::flow::relax_analytic(system, &mk(p02))?;
        let t_star = classify_asymmetry(system, &t1, &t2)
            .ok()
            .and_then(|r| r.t_star);
        rows.push((x, gap, t_star));
    }
    Ok(rows)
}
