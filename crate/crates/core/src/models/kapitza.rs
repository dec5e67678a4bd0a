use serde::{Deserialize, Serialize};

use super::relativistic::{response, Gradient};
use crate::error::Result;
use crate::kinematics::{lorentz_factors, PhaseState, RelativityParams};

/// Saddle stiffness `k` and nonconservative coupling `b` of
/// `U = ½k(x² − y²) + bxy`.
///
/// The rotating-shaft system `ẍ + ay + bx = 0, ÿ − ax + by = 0` is this
/// model with `k = b_shaft` and `b = a_shaft`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KapitzaParams {
    pub k: f64,
    pub b: f64,
}

/// Sign of the `y` equation of the non-relativistic Kapitza system.
///
/// The literature prints two versions. `Shaft` (`ÿ + ky − bx = 0`) follows
/// from the indefinite Lagrangian `½(ẋ² − ẏ²) − U`, is the zero-velocity
/// limit of the relativistic equations, is a genuine curl force, and
/// conserves both `H` and the Fradkin tensor. `Corollary`
/// (`ÿ − ky + bx = 0`) is the gradient flow of `U` with a positive kinetic
/// term; its `y` channel is an inverted oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KapitzaForm {
    #[default]
    Shaft,
    Corollary,
}

pub fn kapitza_potential(p: &KapitzaParams, x: f64, y: f64) -> f64 {
    0.5 * p.k * (x * x - y * y) + p.b * x * y
}

fn gradient(p: &KapitzaParams, x: f64, y: f64) -> Gradient {
    Gradient {
        dx: p.k * x + p.b * y,
        dy: -p.k * y + p.b * x,
    }
}

pub fn accel_kapitza(s: &PhaseState, p: &KapitzaParams, form: KapitzaForm) -> (f64, f64) {
    let ax = -p.k * s.x - p.b * s.y;
    let ay = match form {
        KapitzaForm::Shaft => -p.k * s.y + p.b * s.x,
        KapitzaForm::Corollary => p.k * s.y - p.b * s.x,
    };
    (ax, ay)
}

pub fn accel_rel_kapitza(
    s: &PhaseState,
    p: &KapitzaParams,
    rel: RelativityParams,
) -> Result<(f64, f64)> {
    let f = lorentz_factors(s, rel)?;
    Ok(response(s, &f, rel, gradient(p, s.x, s.y), 1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(x: f64, y: f64) -> PhaseState {
        PhaseState::at_rest(x, y)
    }

    #[test]
    fn corollary_form_examples() {
        let form = KapitzaForm::Corollary;
        assert_eq!(accel_kapitza(&at(1.0, 0.0), &KapitzaParams { k: 1.0, b: 0.0 }, form), (-1.0, 0.0));
        assert_eq!(accel_kapitza(&at(0.0, 1.0), &KapitzaParams { k: 1.0, b: 0.0 }, form), (0.0, 1.0));
        assert_eq!(accel_kapitza(&at(1.0, 1.0), &KapitzaParams { k: 2.0, b: 3.0 }, form), (-5.0, -1.0));
    }

    #[test]
    fn shaft_form_flips_the_y_equation() {
        let form = KapitzaForm::Shaft;
        assert_eq!(accel_kapitza(&at(1.0, 0.0), &KapitzaParams { k: 1.0, b: 0.0 }, form), (-1.0, 0.0));
        assert_eq!(accel_kapitza(&at(0.0, 1.0), &KapitzaParams { k: 1.0, b: 0.0 }, form), (0.0, -1.0));
        assert_eq!(accel_kapitza(&at(1.0, 1.0), &KapitzaParams { k: 2.0, b: 3.0 }, form), (-5.0, 1.0));
    }

    #[test]
    fn shaft_form_matches_rotating_shaft_labels() {
        // ẍ + a·y + b_s·x = 0, ÿ − a·x + b_s·y = 0 with k = b_s, b = a.
        let (a, b_s) = (0.7, -1.3);
        let s = at(0.4, -2.0);
        let (ax, ay) = accel_kapitza(&s, &KapitzaParams { k: b_s, b: a }, KapitzaForm::Shaft);
        assert!((ax + a * s.y + b_s * s.x).abs() < 1e-15);
        assert!((ay - a * s.x + b_s * s.y).abs() < 1e-15);
    }

    #[test]
    fn relativistic_at_origin_and_rest() {
        let rel = RelativityParams::unit();
        let p = KapitzaParams { k: 1.0, b: 0.0 };
        let moving = PhaseState::new(0.0, 0.0, 0.0, 0.5, -0.3);
        assert_eq!(accel_rel_kapitza(&moving, &p, rel).unwrap(), (0.0, 0.0));
        assert_eq!(accel_rel_kapitza(&at(1.0, 0.0), &p, rel).unwrap(), (-1.0, 0.0));
    }

    #[test]
    fn relativistic_satisfies_unseparated_euler_lagrange_pair() {
        // ẍ(1 + ẏ²/c²) − (ẋẏ/c²)ÿ = −(kx + by)/Γ³
        // ÿ(1 − ẋ²/c²) + (ẋẏ/c²)ẍ = (−ky + bx)/Γ³
        let rel = RelativityParams::new(1.3).unwrap();
        let p = KapitzaParams { k: 0.8, b: -0.45 };
        let s = PhaseState::new(0.0, 0.7, -0.2, 0.5, 0.9);
        let (ax, ay) = accel_rel_kapitza(&s, &p, rel).unwrap();
        let c2 = rel.c() * rel.c();
        let g = lorentz_factors(&s, rel).unwrap().gamma;
        let lhs_x = ax * (1.0 + s.vy * s.vy / c2) - s.vx * s.vy / c2 * ay;
        let lhs_y = ay * (1.0 - s.vx * s.vx / c2) + s.vx * s.vy / c2 * ax;
        assert!((lhs_x + (p.k * s.x + p.b * s.y) / g.powi(3)).abs() < 1e-14);
        assert!((lhs_y - (-p.k * s.y + p.b * s.x) / g.powi(3)).abs() < 1e-14);
    }
}
