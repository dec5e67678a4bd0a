use serde::{Deserialize, Serialize};

use super::relativistic::{response, DrivePhase, Gradient};
use crate::error::Result;
use crate::kinematics::{lorentz_factors, PhaseState, RelativityParams};

/// Coefficients of the cubic saddle `U₃ = ⅓(k₁·Re z³ + k₂·Im z³)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonkeySaddleParams {
    pub k1: f64,
    pub k2: f64,
}

/// Rotating monkey saddle: `k₁ = Λα₁ cos φ`, `k₂ = Λα₂ sin φ` with drive
/// angle `φ = 2Γωt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotatingMonkeyParams {
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub omega: f64,
}

impl RotatingMonkeyParams {
    pub fn coefficients_at(&self, angle: f64) -> MonkeySaddleParams {
        let (sin, cos) = angle.sin_cos();
        MonkeySaddleParams {
            k1: self.lambda * self.alpha1 * cos,
            k2: self.lambda * self.alpha2 * sin,
        }
    }
}

/// `x³ − 3xy² = Re z³`.
pub fn monkey_g2(x: f64, y: f64) -> f64 {
    x * x * x - 3.0 * x * y * y
}

/// `3x²y − y³ = Im z³`.
pub fn monkey_g2_rotated(x: f64, y: f64) -> f64 {
    3.0 * x * x * y - y * y * y
}

pub fn monkey_potential(p: &MonkeySaddleParams, x: f64, y: f64) -> f64 {
    (p.k1 * monkey_g2(x, y) + p.k2 * monkey_g2_rotated(x, y)) / 3.0
}

fn gradient(p: &MonkeySaddleParams, x: f64, y: f64) -> Gradient {
    let d = x * x - y * y;
    Gradient {
        dx: p.k1 * d + 2.0 * p.k2 * x * y,
        dy: -2.0 * p.k1 * x * y + p.k2 * d,
    }
}

/// `ẍ + k₁(x² − y²) + 2k₂xy = 0`, `ÿ + 2k₁xy − k₂(x² − y²) = 0`.
pub fn accel_monkey(s: &PhaseState, p: &MonkeySaddleParams) -> (f64, f64) {
    let g = gradient(p, s.x, s.y);
    (-g.dx, g.dy)
}

pub fn accel_rel_monkey(
    s: &PhaseState,
    p: &MonkeySaddleParams,
    rel: RelativityParams,
) -> Result<(f64, f64)> {
    let f = lorentz_factors(s, rel)?;
    Ok(response(s, &f, rel, gradient(p, s.x, s.y), 1.0, 1.0))
}

pub fn accel_rel_rotating_monkey(
    s: &PhaseState,
    p: &RotatingMonkeyParams,
    rel: RelativityParams,
    phase: DrivePhase,
) -> Result<(f64, f64)> {
    let f = lorentz_factors(s, rel)?;
    let k = p.coefficients_at(phase.angle(p.omega, s.t, f.gamma));
    Ok(response(s, &f, rel, gradient(&k, s.x, s.y), 1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let at = PhaseState::at_rest;
        let p = MonkeySaddleParams { k1: 1.0, k2: 0.0 };
        assert_eq!(accel_monkey(&at(0.0, 0.0), &p), (0.0, 0.0));
        assert_eq!(accel_monkey(&at(1.0, 0.0), &p), (-1.0, 0.0));
        let p = MonkeySaddleParams { k1: 1.0, k2: 1.0 };
        assert_eq!(accel_monkey(&at(1.0, 1.0), &p), (-2.0, -2.0));
        assert_eq!(monkey_potential(&p, 1.0, 1.0), 0.0);
    }

    #[test]
    fn relativistic_at_rest() {
        let rel = RelativityParams::unit();
        let p = MonkeySaddleParams { k1: 1.0, k2: 0.0 };
        assert_eq!(accel_rel_monkey(&PhaseState::at_rest(1.0, 0.0), &p, rel).unwrap(), (-1.0, 0.0));
        let moving = PhaseState::new(0.0, 0.0, 0.0, 0.3, 0.4);
        assert_eq!(accel_rel_monkey(&moving, &p, rel).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn rotating_monkey_starts_as_k1_only() {
        let p = RotatingMonkeyParams { lambda: 0.1, alpha1: 2.0, alpha2: 5.0, omega: 0.5 };
        let s = PhaseState::at_rest(0.3, -0.8);
        let rel = RelativityParams::unit();
        let a = accel_rel_rotating_monkey(&s, &p, rel, DrivePhase::Lorentz).unwrap();
        let b = accel_monkey(&s, &MonkeySaddleParams { k1: 0.2, k2: 0.0 });
        assert!((a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15);
    }
}
