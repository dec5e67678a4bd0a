use serde::{Deserialize, Serialize};

use super::relativistic::{response, DrivePhase, Gradient};
use crate::error::Result;
use crate::kinematics::{lorentz_factors, PhaseState, RelativityParams};

/// Saddle `½(x² − y²)` spun at angular frequency `ω`, with drive
/// strength `Λ` (`Λ = 2mgh₀/r₀²` for the mechanical trap).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotatingSaddleParams {
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub omega: f64,
}

/// `Λ/2·((x² − y²)cos φ + 2xy sin φ)` at drive angle `φ`.
pub fn rotating_saddle_potential(p: &RotatingSaddleParams, x: f64, y: f64, angle: f64) -> f64 {
    let (sin, cos) = angle.sin_cos();
    0.5 * p.lambda * ((x * x - y * y) * cos + 2.0 * x * y * sin)
}

fn gradient(p: &RotatingSaddleParams, x: f64, y: f64, angle: f64) -> Gradient {
    let (sin, cos) = angle.sin_cos();
    Gradient {
        dx: p.lambda * (cos * x + sin * y),
        dy: p.lambda * (-cos * y + sin * x),
    }
}

/// `ẍ + Λ(x cos 2ωt + y sin 2ωt) = 0`, `ÿ + Λ(y cos 2ωt − x sin 2ωt) = 0`.
pub fn accel_rotating_saddle(s: &PhaseState, p: &RotatingSaddleParams) -> (f64, f64) {
    let (sin, cos) = (2.0 * p.omega * s.t).sin_cos();
    (
        -p.lambda * (s.x * cos + s.y * sin),
        -p.lambda * (s.y * cos - s.x * sin),
    )
}

pub fn accel_rel_rotating_saddle(
    s: &PhaseState,
    p: &RotatingSaddleParams,
    rel: RelativityParams,
    phase: DrivePhase,
) -> Result<(f64, f64)> {
    let f = lorentz_factors(s, rel)?;
    let angle = phase.angle(p.omega, s.t, f.gamma);
    Ok(response(s, &f, rel, gradient(p, s.x, s.y, angle), 1.0, 1.0))
}
