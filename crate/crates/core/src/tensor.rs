//! Symmetric rank-2 and rank-3 coefficient containers over a 2-d chart.

use crate::error::{Result, ThermoError};

/// Symmetric 2x2 tensor, stored as the three independent matrix entries.
///
/// Index 1 is the temperature direction, index 2 the second chart coordinate
/// (negative pressure or chemical potential).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTensor2 {
    pub c11: f64,
    pub c12: f64,
    pub c22: f64,
}

impl SymTensor2 {
    pub fn new(c11: f64, c12: f64, c22: f64) -> Self {
        Self { c11, c12, c22 }
    }

    /// Quadratic form `g(v, v)`.
    pub fn quad(&self, v: [f64; 2]) -> f64 {
        self.c11 * v[0] * v[0] + 2.0 * self.c12 * v[0] * v[1] + self.c22 * v[1] * v[1]
    }

    /// Bilinear form `g(u, v)`.
    pub fn bilin(&self, u: [f64; 2], v: [f64; 2]) -> f64 {
        self.c11 * u[0] * v[0] + self.c12 * (u[0] * v[1] + u[1] * v[0]) + self.c22 * u[1] * v[1]
    }

    pub fn det(&self) -> f64 {
        self.c11 * self.c22 - self.c12 * self.c12
    }

    /// Eigenvalues of the symmetric matrix, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * (self.c11 + self.c22);
        let half_diff = 0.5 * (self.c11 - self.c22);
        let radius = (half_diff * half_diff + self.c12 * self.c12).sqrt();
        [mean - radius, mean + radius]
    }

    /// Spectral condition number (|lambda|_max / |lambda|_min).
    pub fn condition_number(&self) -> f64 {
        let [lo, hi] = self.eigenvalues();
        let (amin, amax) = (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()));
        if amin == 0.0 {
            f64::INFINITY
        } else {
            amax / amin
        }
    }

    /// Solve `g x = rhs`, guarding against near-degenerate metrics.
    pub fn solve(&self, rhs: [f64; 2], cond_limit: f64) -> Result<[f64; 2]> {
        let cond = self.condition_number();
        if !cond.is_finite() || cond > cond_limit {
            return Err(ThermoError::SingularMetric {
                cond,
                limit: cond_limit,
            });
        }
        let det = self.det();
        Ok([
            (self.c22 * rhs[0] - self.c12 * rhs[1]) / det,
            (self.c11 * rhs[1] - self.c12 * rhs[0]) / det,
        ])
    }

    /// Matrix product `self * other`, returned row-major.
    pub fn mat_mul(&self, other: &SymTensor2) -> [[f64; 2]; 2] {
        let a = [[self.c11, self.c12], [self.c12, self.c22]];
        let b = [[other.c11, other.c12], [other.c12, other.c22]];
        let mut out = [[0.0; 2]; 2];
        for (i, row) in a.iter().enumerate() {
            for j in 0..2 {
                out[i][j] = row[0] * b[0][j] + row[1] * b[1][j];
            }
        }
        out
    }
}

/// Fully symmetric rank-3 tensor over the 2-d chart, stored as the four
/// independent components `C^{111}, C^{112}, C^{122}, C^{222}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTensor3 {
    pub c111: f64,
    pub c112: f64,
    pub c122: f64,
    pub c222: f64,
}

impl SymTensor3 {
    pub fn new(c111: f64, c112: f64, c122: f64, c222: f64) -> Self {
        Self {
            c111,
            c112,
            c122,
            c222,
        }
    }

    /// Component accessor for arbitrary index triples (0-based indices).
    pub fn component(&self, i: usize, j: usize, k: usize) -> f64 {
        match i + j + k {
            0 => self.c111,
            1 => self.c112,
            2 => self.c122,
            3 => self.c222,
            _ => unreachable!("indices must be 0 or 1"),
        }
    }

    /// Cubic form `C(v, v, v)` with the full symmetric contraction.
    pub fn cubic(&self, v: [f64; 2]) -> f64 {
        let [x, y] = v;
        self.c111 * x * x * x
            + 3.0 * self.c112 * x * x * y
            + 3.0 * self.c122 * x * y * y
            + self.c222 * y * y * y
    }
}
