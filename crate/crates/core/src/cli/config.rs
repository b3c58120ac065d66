//! TOML scenario configuration. Field reference in `docs/config.md`.

use serde::Deserialize;
use std::path::Path;

use crate::error::{Result, ThermoError};
use crate::flow::{DrivenSpec, RateSchedule, RelaxSpec};
use crate::systems::{ClassicalIdealGasTp, RigidGas, State, Statistics, ThermoSystem, ToyQuadratic};
use crate::tensor::SymTensor2;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub temp: f64,
    pub eta2: f64,
}

impl From<StateConfig> for State {
    fn from(s: StateConfig) -> State {
        State::new(s.temp, s.eta2)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub kind: String,
    pub c: Option<f64>,
    pub n0kb: Option<f64>,
    pub kappa: Option<f64>,
    pub a: Option<f64>,
    pub prefactor: Option<f64>,
    pub kb: Option<f64>,
    /// Toy metric `[g11, g12, g22]`.
    pub metric: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub lambda: f64,
    pub horizon: f64,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
}

fn default_grid() -> usize {
    10_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum RateConfig {
    Constant { lambda: f64 },
    Sinusoidal { base: f64, amp: f64, omega: f64 },
}

impl From<&RateConfig> for RateSchedule {
    fn from(r: &RateConfig) -> RateSchedule {
        match *r {
            RateConfig::Constant { lambda } => RateSchedule::Constant(lambda),
            RateConfig::Sinusoidal { base, amp, omega } => {
                RateSchedule::Sinusoidal { base, amp, omega }
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    pub from: StateConfig,
    pub to: StateConfig,
    pub rate: RateConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    pub tau: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub system: SystemConfig,
    pub target: StateConfig,
    pub initial: StateConfig,
    pub initial2: Option<StateConfig>,
    pub flow: FlowConfig,
    pub drive: Option<DriveConfig>,
    pub audit: Option<AuditConfig>,
    pub output: Option<OutputConfig>,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> std::result::Result<(Self, String), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let cfg = Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok((cfg, text))
    }

    fn require(v: Option<f64>, field: &str, kind: &str) -> Result<f64> {
        v.ok_or_else(|| {
            ThermoError::domain(format!("system kind `{kind}` requires field `{field}`"))
        })
    }

    pub fn build_system(&self) -> Result<Box<dyn ThermoSystem>> {
        let s = &self.system;
        let kind = s.kind.as_str();
        let kb = s.kb.unwrap_or(1.0);
        Ok(match kind {
            "ideal-gas-tp" => Box::new(ClassicalIdealGasTp::new(
                Self::require(s.c, "c", kind)?,
                Self::require(s.n0kb, "n0kb", kind)?,
                self.target.clone().into(),
            )?),
            "boson-rigid" | "fermion-rigid" => {
                let stats = if kind == "boson-rigid" {
                    Statistics::Boson
                } else {
                    Statistics::Fermion
                };
                Box::new(RigidGas::quantum(
                    stats,
                    Self::require(s.kappa, "kappa", kind)?,
                    Self::require(s.a, "a", kind)?,
                    kb,
                )?)
            }
            "classical-rigid" => Box::new(RigidGas::classical(
                Self::require(s.c, "c", kind)?,
                Self::require(s.prefactor, "prefactor", kind)?,
                kb,
            )?),
            "toy-quadratic" => {
                let m = s.metric.ok_or_else(|| {
                    ThermoError::domain("system kind `toy-quadratic` requires field `metric`")
                })?;
                Box::new(ToyQuadratic::new(SymTensor2::new(m[0], m[1], m[2]))?)
            }
            other => {
                return Err(ThermoError::domain(format!(
                    "unknown system kind `{other}`"
                )))
            }
        })
    }

    pub fn relax_spec(&self, initial: &StateConfig) -> RelaxSpec {
        RelaxSpec {
            p0: initial.clone().into(),
            q: self.target.clone().into(),
            lambda: self.flow.lambda,
            horizon: self.flow.horizon,
            steps: self.flow.grid_points,
        }
    }

    pub fn driven_spec(&self) -> Result<DrivenSpec> {
        let drive = self.drive.as_ref().ok_or_else(|| {
            ThermoError::domain("this mode requires a [drive] block in the config")
        })?;
        Ok(DrivenSpec {
            p0: self.initial.clone().into(),
            from: drive.from.clone().into(),
            to: drive.to.clone().into(),
            rate: (&drive.rate).into(),
            horizon: self.flow.horizon,
            steps: self.flow.grid_points,
        })
    }

    pub fn tau_list(&self) -> Vec<f64> {
        match &self.audit {
            Some(a) => a.tau.clone(),
            None => [0.1, 1.0, 5.0, 19.99]
                .iter()
                .map(|t| t / self.flow.lambda)
                .collect(),
        }
    }
}
