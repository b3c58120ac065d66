//! Command implementations behind the `thermoflow` binary.

use serde_json::{json, Value};
use std::path::{Path, PathBuf};

use crate::analysis;
use crate::error::{Result, ThermoError};
use crate::flow::{self, RelaxSpec};
use crate::systems::{ClassicalIdealGasTp, RigidGas, State, Statistics, ThermoSystem};

use super::config::ScenarioConfig;
use super::report;

/// Options shared by all subcommands.
#[derive(Debug, Clone, Default)]
pub struct GlobalOpts {
    pub out: Option<PathBuf>,
    pub units: Option<String>,
    pub grid: Option<usize>,
    pub horizon: Option<f64>,
}

impl GlobalOpts {
    /// Output directory precedence: `THERMOFLOW_OUT` env, then `--out`,
    /// then the config's `[output] dir`, then the working directory.
    pub fn out_dir(&self, config_dir: Option<&str>) -> PathBuf {
        if let Ok(env) = std::env::var("THERMOFLOW_OUT") {
            if !env.is_empty() {
                return PathBuf::from(env);
            }
        }
        if let Some(out) = &self.out {
            return out.clone();
        }
        if let Some(dir) = config_dir {
            return PathBuf::from(dir);
        }
        PathBuf::from(".")
    }

    fn apply(&self, cfg: &mut ScenarioConfig) {
        if let Some(g) = self.grid {
            cfg.flow.grid_points = g;
        }
        if let Some(h) = self.horizon {
            cfg.flow.horizon = h;
        }
    }
}

fn base_report(cfg: &ScenarioConfig, config_text: &str, opts: &GlobalOpts, command: &str) -> Value {
    json!({
        "command": command,
        "config_sha256": report::config_hash(config_text),
        "scenario": {
            "system": cfg.system.kind,
            "target": { "temp": cfg.target.temp, "eta2": cfg.target.eta2 },
            "initial": { "temp": cfg.initial.temp, "eta2": cfg.initial.eta2 },
            "lambda": cfg.flow.lambda,
            "horizon": cfg.flow.horizon,
            "grid_points": cfg.flow.grid_points,
        },
        "units": opts.units.clone().unwrap_or_else(|| "si".into()),
        "tool_version": report::TOOL_VERSION,
    })
}

pub fn cmd_simulate(
    mut cfg: ScenarioConfig,
    config_text: &str,
    opts: &GlobalOpts,
) -> Result<PathBuf> {
    opts.apply(&mut cfg);
    let out = opts.out_dir(cfg.output.as_ref().and_then(|o| o.dir.as_deref()));
    let system = cfg.build_system()?;
    let spec = cfg.relax_spec(&cfg.initial);
    let traj = flow::relax_analytic(system.as_ref(), &spec)?;
    report::write_series(&out.join("series.csv"), &traj)?;

    let mut rep = base_report(&cfg, config_text, opts, "simulate");
    let obj = rep.as_object_mut().unwrap();
    obj.insert("series".into(), json!(["series.csv"]));
    obj.insert(
        "initial_divergence".into(),
        json!(system.divergence(&cfg.initial.clone().into(), &cfg.target.clone().into())?),
    );

    if let Some(init2) = cfg.initial2.clone() {
        let spec2 = cfg.relax_spec(&init2);
        let traj2 = flow::relax_analytic(system.as_ref(), &spec2)?;
        report::write_series(&out.join("series2.csv"), &traj2)?;
        obj.insert("series".into(), json!(["series.csv", "series2.csv"]));
        let cls = analysis::classify_asymmetry(system.as_ref(), &traj, &traj2)?;
        obj.insert("t_star".into(), json!(cls.t_star));
        obj.insert("faster".into(), json!(cls.faster.label()));
        obj.insert("delta_dd_at_t_star".into(), json!(cls.delta_dd));
        obj.insert(
            "notes".into(),
            json!([
                "delta_d convention: D_star(gamma2) - D_star(gamma1)",
            ]),
        );
        let _ = spec2;
    }
    report::write_json(&out.join("report.json"), &rep)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditMode {
    Tur,
    HorseCarrot,
}

/// Returns the process exit code: 0, or 1 when a bound is violated (which
/// would indicate a bug, not a physical possibility).
pub fn cmd_audit(
    mut cfg: ScenarioConfig,
    config_text: &str,
    mode: AuditMode,
    opts: &GlobalOpts,
) -> Result<i32> {
    opts.apply(&mut cfg);
    let out = opts.out_dir(cfg.output.as_ref().and_then(|o| o.dir.as_deref()));
    let system = cfg.build_system()?;
    let mut rep = base_report(&cfg, config_text, opts, "audit");
    let obj = rep.as_object_mut().unwrap();
    let violated;

    match mode {
        AuditMode::Tur => {
            let spec = cfg.relax_spec(&cfg.initial);
            let traj = flow::relax_analytic(system.as_ref(), &spec)?;
            let rows = analysis::tur_audit(&traj, cfg.flow.lambda, &cfg.tau_list())?;
            let table: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "tau": r.tau,
                        "delta_a": r.delta_a,
                        "bound": r.bound,
                        "ratio": r.ratio,
                    })
                })
                .collect();
            violated = rows.iter().any(|r| r.ratio < 1.0 - 1e-8);
            obj.insert("mode".into(), json!("tur"));
            obj.insert("table".into(), json!(table));
        }
        AuditMode::HorseCarrot => {
            let spec = cfg.driven_spec()?;
            let traj = flow::driven_flow(system.as_ref(), &spec)?;
            let a = analysis::horse_carrot_audit(&traj)?;
            violated = a.ratio < 1.0 - 1e-8;
            obj.insert("mode".into(), json!("horse-carrot"));
            obj.insert(
                "table".into(),
                json!([{
                    "tau": cfg.flow.horizon,
                    "delta_a": a.delta_a,
                    "eps_bar": a.eps_bar,
                    "length": a.length,
                    "bound": a.bound,
                    "ratio": a.ratio,
                }]),
            );
        }
    }
    obj.insert("violated".into(), json!(violated));
    report::write_json(&out.join("report.json"), &rep)?;
    Ok(if violated { 1 } else { 0 })
}

pub fn cmd_tensor(cfg: ScenarioConfig, config_text: &str, at: State, opts: &GlobalOpts) -> Result<String> {
    let system = cfg.build_system()?;
    let g = system.metric_eta(&at)?;
    let c = system.amari_chentsov_eta(&at)?;
    let mut rep = base_report(&cfg, config_text, opts, "tensor");
    let obj = rep.as_object_mut().unwrap();
    obj.insert("at".into(), json!({ "temp": at.temp, "eta2": at.eta2 }));
    obj.insert(
        "metric".into(),
        json!({ "g11": g.c11, "g12": g.c12, "g22": g.c22 }),
    );
    obj.insert(
        "cubic".into(),
        json!({ "c111": c.c111, "c112": c.c112, "c122": c.c122, "c222": c.c222 }),
    );
    Ok(report::to_json_string(&rep))
}

fn equidistant_relax_pair(
    system: &dyn ThermoSystem,
    q: State,
    hot_temp: f64,
    cold_bracket: (f64, f64),
    horizon: f64,
    steps: usize,
) -> Result<(flow::Trajectory, flow::Trajectory)> {
    let pair = analysis::solve_equidistant(
        system,
        &q,
        &State::new(hot_temp, q.eta2),
        |t| State::new(t, q.eta2),
        cold_bracket,
    )?;
    let mk = |p0: State| RelaxSpec {
        p0,
        q,
        lambda: 1.0,
        horizon,
        steps,
    };
    Ok((
        flow::relax_analytic(system, &mk(pair.hot))?,
        flow::relax_analytic(system, &mk(pair.cold))?,
    ))
}

/// Emit the plotting data behind the three figures (CSV only, no rendering).
pub fn cmd_reproduce(fig: &str, opts: &GlobalOpts) -> Result<PathBuf> {
    let out = opts.out_dir(None);
    let steps = opts.grid.unwrap_or(10_000);
    match fig {
        // Closed ideal gas on an isobar, reduced units: the divergence
        // profile in T and the gap series showing warming wins.
        "fig1" => {
            let q = State::new(1.0, -1.0);
            let sys = ClassicalIdealGasTp::new(1.5, 1.0, q)?;
            let horizon = opts.horizon.unwrap_or(20.0);
            report::write_csv(
                &out.join("fig1_divergence.csv"),
                "T,D_star",
                (0..=500).map(|k| {
                    let t = 0.3 + 2.2 * k as f64 / 500.0;
                    let d = sys.divergence(&State::new(t, -1.0), &q).unwrap_or(f64::NAN);
                    vec![t, d]
                }),
            )?;
            let (hot, cold) =
                equidistant_relax_pair(&sys, q, 1.5, (0.05, 0.999_999), horizon, steps)?;
            // gamma1 = warming branch; delta_d = D(gamma2) - D(gamma1) > 0.
            report::write_csv(
                &out.join("fig1_delta.csv"),
                "t,delta_d",
                (0..hot.len()).map(|i| vec![hot.times[i], hot.d_star[i] - cold.d_star[i]]),
            )?;
        }
        // Boson gas at fixed chemical potential, reduced units: cooling wins.
        "fig2" => {
            let q = State::new(1.0, -1.0);
            let sys = RigidGas::quantum(Statistics::Boson, 1.0, 0.5, 1.0)?;
            let horizon = opts.horizon.unwrap_or(20.0);
            report::write_csv(
                &out.join("fig2_divergence.csv"),
                "T,D_star",
                (0..=500).map(|k| {
                    let t = 0.3 + 2.2 * k as f64 / 500.0;
                    let d = sys.divergence(&State::new(t, -1.0), &q).unwrap_or(f64::NAN);
                    vec![t, d]
                }),
            )?;
            let (hot, cold) =
                equidistant_relax_pair(&sys, q, 1.4, (0.01, 0.999_999), horizon, steps)?;
            // gamma1 = cooling branch; delta_d > 0 means cooling wins.
            report::write_csv(
                &out.join("fig2_delta.csv"),
                "t,delta_d",
                (0..hot.len()).map(|i| vec![hot.times[i], cold.d_star[i] - hot.d_star[i]]),
            )?;
        }
        // Two-parameter scenario: asymmetry field over the chart window and
        // the three gap series at matched times.
        "fig3" => {
            let q = analysis::MPEMBA_Q;
            let sys = ClassicalIdealGasTp::new(analysis::MPEMBA_C, analysis::MPEMBA_N0KB, q)?;
            let horizon = opts.horizon.unwrap_or(20.0);
            let n = 100usize;
            report::write_csv(
                &out.join("fig3_field.csv"),
                "T,P,A",
                (0..=n).flat_map(|i| {
                    let t = 150.0 + 300.0 * i as f64 / n as f64;
                    (0..=n).map(move |j| {
                        let p = 0.4e5 + 2.1e5 * j as f64 / n as f64;
                        (t, p)
                    })
                })
                .map(|(t, p)| {
                    let a = analysis::asymmetry_density_tp_variant(
                        analysis::MPEMBA_C,
                        analysis::MPEMBA_N0KB,
                        &State::new(t, -p),
                        &q,
                        analysis::MPEMBA_LAMBDA,
                    );
                    vec![t, p, a]
                }),
            )?;
            let rep = analysis::mpemba_scenario(&sys, horizon, steps)?;
            let lam = analysis::MPEMBA_LAMBDA;
            report::write_csv(
                &out.join("fig3_delta.csv"),
                "t,delta_d,delta_speed_sq,delta_a",
                (0..rep.times.len()).map(|i| {
                    let t = rep.times[i];
                    let a1 = analysis::asymmetry_density_tp_variant(
                        analysis::MPEMBA_C,
                        analysis::MPEMBA_N0KB,
                        &rep.traj1.states[i],
                        &q,
                        lam,
                    );
                    let a2 = analysis::asymmetry_density_tp_variant(
                        analysis::MPEMBA_C,
                        analysis::MPEMBA_N0KB,
                        &rep.traj2.states[i],
                        &q,
                        lam,
                    );
                    vec![
                        t,
                        rep.delta_d[i],
                        (rep.traj1.speed_sq[i] - rep.traj2.speed_sq[i]) / (lam * lam),
                        (a1 - a2) / lam.powi(3),
                    ]
                }),
            )?;
            let summary = json!({
                "command": "reproduce",
                "delta_a_at_t_star": rep.delta_a,
                "delta_a_symmetric_at_t_star": rep.delta_a_symmetric,
                "faster": rep.faster.label(),
                "figure": "fig3",
                "notes": rep.notes,
                "t_star": rep.t_star,
                "tool_version": report::TOOL_VERSION,
            });
            report::write_json(&out.join("fig3_report.json"), &summary)?;
        }
        other => {
            return Err(ThermoError::domain(format!("unknown figure id `{other}`")));
        }
    }
    Ok(out)
}

/// Parse the `--at T,ETA2` argument.
pub fn parse_at(s: &str) -> std::result::Result<State, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected T,ETA2 (got `{s}`)"));
    }
    let temp: f64 = parts[0].trim().parse().map_err(|e| format!("bad T: {e}"))?;
    let eta2: f64 = parts[1].trim().parse().map_err(|e| format!("bad ETA2: {e}"))?;
    Ok(State::new(temp, eta2))
}

/// Map an error to the documented process exit code.
pub fn exit_code(err: &ThermoError) -> i32 {
    match err {
        ThermoError::Domain(_) => 3,
        _ => 4,
    }
}

pub fn load_config(path: &Path) -> std::result::Result<(ScenarioConfig, String), String> {
    ScenarioConfig::load(path)
}
