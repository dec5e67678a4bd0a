//! Linear curl forces generated by a quadratic Hamiltonian
//! `H = ½αpₓ² + βpₓp_y + ½γp_y² + U(x, y)` with
//! `U = ½ax² + bxy + ½c y²`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralCurlParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_c: f64,
    pub a: f64,
    pub b: f64,
    pub c_pot: f64,
}

impl GeneralCurlParams {
    pub fn potential(&self, x: f64, y: f64) -> f64 {
        0.5 * self.a * x * x + self.b * x * y + 0.5 * self.c_pot * y * y
    }

    pub fn hamiltonian(&self, x: f64, y: f64, px: f64, py: f64) -> f64 {
        0.5 * self.alpha * px * px + self.beta * px * py + 0.5 * self.gamma_c * py * py
            + self.potential(x, y)
    }

    /// Force from the second half of Hamilton's equations.
    pub fn accel(&self, x: f64, y: f64) -> (f64, f64) {
        let ux = self.a * x + self.b * y;
        let uy = self.b * x + self.c_pot * y;
        (
            -self.alpha * ux - self.beta * uy,
            -self.beta * ux - self.gamma_c * uy,
        )
    }
}

/// The two curl components `((α − γ)·b, β·(c − a))`.
///
/// Their sum is the scalar curl `∂F_y/∂x − ∂F_x/∂y` of [`GeneralCurlParams::accel`].
pub fn curl_components(p: &GeneralCurlParams) -> (f64, f64) {
    ((p.alpha - p.gamma_c) * p.b, p.beta * (p.c_pot - p.a))
}
