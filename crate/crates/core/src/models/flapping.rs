use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::relativistic::{response, DrivePhase, Gradient};
use crate::error::Result;
use crate::kinematics::{lorentz_factors, PhaseState, RelativityParams};

/// Flapping / spinning saddle with polynomial shape functions `g` and `f`.
///
/// `amplitude` is the single drive amplitude used both as `A_RF` in the
/// Newtonian flapping pair and as `A` (printed `Λ` in the equations of
/// motion) in the relativistic spinning saddle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlappingParams {
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub omega: f64,
    pub g: Polynomial,
    pub f: Polynomial,
}

/// Time variable of the relativistic flapping equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlapTime {
    /// Plain time `t`.
    #[default]
    Physical,
    /// `τ = ωt`: the state's time and velocities are read as `τ` and
    /// `d/dτ`, and the restoring bracket is divided by `ω²`.
    Rescaled,
}

/// `𝒰 = A cos(ωt)·g(½(x² − y²))`.
pub fn flapping_potential(p: &FlappingParams, s: &PhaseState) -> f64 {
    p.amplitude * (p.omega * s.t).cos() * p.g.eval(0.5 * (s.x * s.x - s.y * s.y))
}

/// `Û = A(g(x² − y²)cos φ + 2f(xy) sin φ)` at drive angle `φ`.
pub fn spinning_saddle_potential(p: &FlappingParams, x: f64, y: f64, angle: f64) -> f64 {
    let (sin, cos) = angle.sin_cos();
    p.amplitude * (p.g.eval(x * x - y * y) * cos + 2.0 * p.f.eval(x * y) * sin)
}

/// `ẍ = −A cos(ωt)·x·g(½(x² − y²))`, `ÿ = −A cos(ωt)·y·g(½(x² − y²))`.
pub fn accel_flapping_newton(s: &PhaseState, p: &FlappingParams) -> (f64, f64) {
    let scale = -p.amplitude * (p.omega * s.t).cos() * p.g.eval(0.5 * (s.x * s.x - s.y * s.y));
    (scale * s.x, scale * s.y)
}

pub fn accel_rel_flap(
    s: &PhaseState,
    p: &FlappingParams,
    rel: RelativityParams,
    phase: DrivePhase,
    time: FlapTime,
) -> Result<(f64, f64)> {
    let f = lorentz_factors(s, rel)?;
    let angle = match time {
        FlapTime::Physical => phase.angle(p.omega, s.t, f.gamma),
        // 2Γωt with t = τ/ω.
        FlapTime::Rescaled => phase.angle(1.0, s.t, f.gamma),
    };
    let (sin, cos) = angle.sin_cos();
    let gp = p.g.derivative().eval(s.x * s.x - s.y * s.y);
    let fp = p.f.derivative().eval(s.x * s.y);
    let grad = Gradient {
        dx: s.x * gp * cos + s.y * fp * sin,
        dy: -s.y * gp * cos + s.x * fp * sin,
    };
    let restoring = match time {
        FlapTime::Physical => 1.0,
        FlapTime::Rescaled => (p.omega * p.omega).recip(),
    };
    Ok(response(s, &f, rel, grad, p.amplitude, restoring))
}
