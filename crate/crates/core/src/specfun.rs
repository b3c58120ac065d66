//! Real-argument special functions for quantum-gas equations of state.
//!
//! The polylogarithm is evaluated by its defining power series with Kahan
//! compensation; the physical inputs are fugacities with `|z| < 1`, where the
//! series converges for every order `s >= -1/2` in use. The Gamma function
//! uses the Lanczos approximation with the standard g = 7, n = 9 coefficient
//! set.

use crate::error::{Result, ThermoError};

/// Smallest polylogarithm order the catalog ever requests (`a - 1` with
/// `a >= 1/2`).
pub const MIN_POLYLOG_ORDER: f64 = -0.5;

/// Polylogarithm order, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolylogOrder(f64);

impl PolylogOrder {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s < MIN_POLYLOG_ORDER {
            return Err(ThermoError::domain(format!(
                "polylog order {s} outside [{MIN_POLYLOG_ORDER}, inf)"
            )));
        }
        Ok(Self(s))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

/// Truncation controls for series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EvalSettings {
    /// Relative tolerance on the truncated tail.
    pub tol: f64,
    /// Hard cap on the number of summed terms.
    pub max_terms: usize,
}

impl Default for EvalSettings {
    fn default() -> Self {
        // Close to roundoff: downstream finite-difference oracles divide
        // series values by h^2 or h^3 and amplify any slack in the tail.
        Self {
            tol: 1e-15,
            max_terms: 1_000_000,
        }
    }
}

impl EvalSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(ThermoError::domain(format!(
                "tolerance {} outside (0, 1)",
                self.tol
            )));
        }
        if self.max_terms == 0 {
            return Err(ThermoError::domain("max_terms must be >= 1"));
        }
        Ok(())
    }
}

/// `Li_s(z) = sum_{k>=1} z^k / k^s` for `|z| < 1`, `s >= -1/2`.
///
/// Stops once a geometric bound on the remaining tail drops below
/// `settings.tol` relative to the partial sum.
pub fn polylog(s: PolylogOrder, z: f64, settings: EvalSettings) -> Result<f64> {
    settings.validate()?;
    let s = s.get();
    if !z.is_finite() || z.abs() >= 1.0 {
        return Err(ThermoError::domain(format!(
            "polylog argument {z} outside (-1, 1)"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }

    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64; // Kahan compensation
    let mut zk = 1.0_f64;
    for k in 1..=settings.max_terms {
        zk *= z;
        let term = zk / (k as f64).powf(s);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;

        // Tail bound: successive |term| ratios are at most
        // |z| * ((k+1)/k)^max(0, -s), which is < 1 for |z| < 1 and k large
        // enough; sum the geometric majorant.
        let growth = if s < 0.0 {
            ((k as f64 + 1.0) / k as f64).powf(-s)
        } else {
            1.0
        };
        let ratio = z.abs() * growth;
        if ratio < 1.0 {
            let tail = term.abs() * ratio / (1.0 - ratio);
            if tail <= settings.tol * sum.abs().max(f64::MIN_POSITIVE) {
                return Ok(sum);
            }
        }
    }
    Err(ThermoError::Convergence(format!(
        "polylog(s={s}, z={z}) did not converge within {} terms",
        settings.max_terms
    )))
}

/// Convenience wrapper with default settings.
pub fn polylog_default(s: f64, z: f64) -> Result<f64> {
    polylog(PolylogOrder::new(s)?, z, EvalSettings::default())
}

// Lanczos coefficients, g = 7, n = 9 (Godfrey's set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for strictly positive real arguments.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(ThermoError::domain(format!(
            "gamma argument {x} must be positive"
        )));
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos argument in its accurate range.
        return Ok(std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x)?));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc)
}
