//! Deterministic artifact output: JSON reports with sorted keys and CSV
//! series with shortest round-trip floats.

use serde_json::Value;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

use crate::error::{Result, ThermoError};
use crate::flow::Trajectory;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn config_hash(config_text: &str) -> String {
    let mut h = Sha256::new();
    h.update(config_text.as_bytes());
    format!("{:x}", h.finalize())
}

/// Serialize with sorted keys (serde_json's default map is ordered) and a
/// trailing newline; identical values give byte-identical files.
pub fn to_json_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json serialization");
    s.push('\n');
    s
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    write_bytes(path, to_json_string(value).as_bytes())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|e| ThermoError::domain(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut f = std::fs::File::create(path)
        .map_err(|e| ThermoError::domain(format!("cannot write {}: {e}", path.display())))?;
    f.write_all(bytes)
        .map_err(|e| ThermoError::domain(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// Shortest round-trip decimal form (Rust's float Display).
pub fn fmt(x: f64) -> String {
    format!("{x}")
}

pub fn write_csv(path: &Path, header: &str, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    write_bytes(path, out.as_bytes())
}

/// Standard per-trajectory series file.
pub fn write_series(path: &Path, traj: &Trajectory) -> Result<()> {
    write_csv(
        path,
        "t,T,eta2,D_star,speed_sq,cubic",
        (0..traj.len()).map(|i| {
            vec![
                traj.times[i],
                traj.states[i].temp,
                traj.states[i].eta2,
                traj.d_star[i],
                traj.speed_sq[i],
                traj.cubic[i],
            ]
        }),
    )
}
