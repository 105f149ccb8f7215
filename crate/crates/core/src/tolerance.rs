use serde::Serialize;

use crate::error::{Error, Result};

/// Numeric thresholds shared by the simulator, the spectral code and the
/// PST criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// A fidelity `≥ 1 - pst` counts as a hit.
    pub pst: f64,
    /// `‖U^τ Φ - γ Ψ‖` and `‖T_τ(P) e_x - γ e_y‖` bound.
    pub state: f64,
    /// Eigenvalues closer than this are one class (generic path).
    pub group: f64,
    /// `‖E_λ v‖` above this puts `λ` in the support of `v`.
    pub support: f64,
    /// Bound for `E_λ e_x = ±E_λ e_y` and for snapping `γ` to `±1`.
    pub sign: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { pst: 1e-9, state: 1e-8, group: 1e-9, support: 1e-9, sign: 1e-8 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("pst", self.pst),
            ("state", self.state),
            ("group", self.group),
            ("support", self.support),
            ("sign", self.sign),
        ];
        match all.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            Some((name, v)) => Err(Error::Refused(format!("tolerance {name} must be positive, got {v}"))),
            None => Ok(()),
        }
    }

    /// Smallest admissible gap between two eigenvalue clusters.
    pub fn required_gap(&self) -> f64 {
        (10.0 * self.group).max(1e-6)
    }
}
