//! Shared algebra of the relativistic force laws.
//!
//! For `L = −c²/Γ − U(x, y)` the Euler–Lagrange pair is linear in `(ẍ, ÿ)`;
//! separating it gives
//!
//! ```text
//! ẍ = (ẋẏ/Γc²)·∂ᵧU − ∂ₓU/(ΓΓₓ²)
//! ÿ = (ẋẏ/Γc²)·∂ₓU + ∂ᵧU/(ΓΓ_y²)
//! ```
//!
//! Every relativistic model in the catalogue is this template with its own
//! gradient terms. The flapping saddle prints independent prefactors on the
//! two brackets, hence the `coupling` and `restoring` scales.

use serde::{Deserialize, Serialize};

use crate::kinematics::{LorentzFactors, PhaseState, RelativityParams};

/// How the factor `Γ` enters the drive phase `2Γωt` of the time-dependent
/// relativistic models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DrivePhase {
    /// Phase `2Γωt` with `Γ` from the instantaneous velocity.
    #[default]
    Lorentz,
    /// Phase `2ωt`: `Γ → 1` in the phase only.
    Frozen,
}

impl DrivePhase {
    pub fn angle(self, omega: f64, t: f64, gamma: f64) -> f64 {
        match self {
            DrivePhase::Lorentz => 2.0 * gamma * omega * t,
            DrivePhase::Frozen => 2.0 * omega * t,
        }
    }
}

/// Gradient terms entering the template: `dx` multiplies `1/(ΓΓₓ²)` in `ẍ`
/// and the velocity coupling in `ÿ`; `dy` the other way round.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Gradient {
    pub dx: f64,
    pub dy: f64,
}

pub(crate) fn response(
    s: &PhaseState,
    f: &LorentzFactors,
    rel: RelativityParams,
    grad: Gradient,
    coupling: f64,
    restoring: f64,
) -> (f64, f64) {
    let c = rel.c();
    let e = s.vx * s.vy / (f.gamma * c * c);
    let ax = coupling * e * grad.dy - restoring * grad.dx / (f.gamma * f.gamma_x * f.gamma_x);
    let ay = coupling * e * grad.dx + restoring * grad.dy / (f.gamma * f.gamma_y * f.gamma_y);
    (ax, ay)
}

/// Kinetic part `−c²/Γ` of the relativistic Lagrangian.
pub(crate) fn kinetic_lagrangian(f: &LorentzFactors, rel: RelativityParams) -> f64 {
    -rel.c() * rel.c() / f.gamma
}
