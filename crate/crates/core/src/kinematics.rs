//! Phase-space state of the unit-mass particle and the pseudo-Lorentz
//! kinematics shared by every relativistic model.
//!
//! The relativistic kinetic term is built on the indefinite form
//! `ẋ² − ẏ²`, so the factor
//!
//! ```text
//! Γ  = (1 − ẋ²/c² + ẏ²/c²)^(−1/2)
//! Γₓ = (1 − ẋ²/c²)^(−1/2)
//! Γ_y = (1 + ẏ²/c²)^(−1/2)
//! ```
//!
//! stays real for any `ẏ` but breaks down as `|ẋ| → c`. Canonical momenta
//! carry the same sign split: `pₓ = ẋΓ`, `p_y = −ẏΓ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Time, planar position and planar velocity of a unit-mass particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

impl PhaseState {
    pub fn new(t: f64, x: f64, y: f64, vx: f64, vy: f64) -> Self {
        Self { t, x, y, vx, vy }
    }

    /// State at `t = 0` with zero velocity.
    pub fn at_rest(x: f64, y: f64) -> Self {
        Self::new(0.0, x, y, 0.0, 0.0)
    }

    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(&self) -> bool {
        [self.t, self.x, self.y, self.vx, self.vy]
            .iter()
            .all(|v| v.is_finite())
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFiniteState(format!("{self:?}")))
        }
    }
}

/// Light-speed constant of a relativistic model, in normalized units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativityParams {
    c: f64,
}

impl RelativityParams {
    pub fn new(c: f64) -> Result<Self> {
        if c.is_finite() && c > 0.0 {
            Ok(Self { c })
        } else {
            Err(Error::InvalidParameter(format!(
                "speed of light must be finite and positive, got {c}"
            )))
        }
    }

    /// `c = 1`, the default normalization.
    pub fn unit() -> Self {
        Self { c: 1.0 }
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// Which kinetic term the momentum maps use.
///
/// `NonRelativistic` is a separate regime rather than a very large `c`, so
/// the Newtonian maps are exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    NonRelativistic,
    Relativistic(RelativityParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzFactors {
    pub gamma: f64,
    pub gamma_x: f64,
    pub gamma_y: f64,
}

impl LorentzFactors {
    pub const UNIT: Self = Self {
        gamma: 1.0,
        gamma_x: 1.0,
        gamma_y: 1.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Momenta {
    pub px: f64,
    pub py: f64,
}

/// Evaluates `Γ`, `Γₓ` and `Γ_y` from the velocity of `state`.
///
/// Fails with [`Error::GammaUndefined`] when `1 − ẋ²/c² + ẏ²/c² ≤ 0` or
/// `1 − ẋ²/c² ≤ 0`.
pub fn lorentz_factors(state: &PhaseState, rel: RelativityParams) -> Result<LorentzFactors> {
    lorentz_factors_of(state.vx, state.vy, rel)
}

pub(crate) fn lorentz_factors_of(vx: f64, vy: f64, rel: RelativityParams) -> Result<LorentzFactors> {
    let c2 = rel.c * rel.c;
    let bx = vx * vx / c2;
    let by = vy * vy / c2;
    let full = 1.0 - bx + by;
    let along_x = 1.0 - bx;
    // NaN radicands fail these comparisons as well.
    if !(full > 0.0 && along_x > 0.0) {
        return Err(Error::GammaUndefined { vx, vy, c: rel.c });
    }
    Ok(LorentzFactors {
        gamma: full.sqrt().recip(),
        gamma_x: along_x.sqrt().recip(),
        gamma_y: (1.0 + by).sqrt().recip(),
    })
}

/// Canonical momenta `pₓ = ẋΓ`, `p_y = −ẏΓ` (`Γ = 1` in the Newtonian regime).
pub fn momenta_from_velocity(state: &PhaseState, regime: Regime) -> Result<Momenta> {
    let gamma = match regime {
        Regime::NonRelativistic => 1.0,
        Regime::Relativistic(rel) => lorentz_factors(state, rel)?.gamma,
    };
    Ok(Momenta {
        px: state.vx * gamma,
        py: -state.vy * gamma,
    })
}

/// Inverse of [`momenta_from_velocity`].
///
/// With `P = pₓ/c` and `Q = −p_y/c` the defining relations give
/// `Γ² = 1 + P² − Q²` directly, so no iteration is needed. A solution
/// exists iff that radicand is positive and `|p_y| < c`.
pub fn velocity_from_momenta(m: Momenta, regime: Regime) -> Result<(f64, f64)> {
    let rel = match regime {
        Regime::NonRelativistic => return Ok((m.px, -m.py)),
        Regime::Relativistic(rel) => rel,
    };
    let c = rel.c;
    let p = m.px / c;
    let q = -m.py / c;
    let gamma_sq = 1.0 + p * p - q * q;
    if !(gamma_sq > 0.0 && q.abs() < 1.0) {
        return Err(Error::NoInverse {
            px: m.px,
            py: m.py,
            c,
        });
    }
    let gamma = gamma_sq.sqrt();
    Ok((m.px / gamma, -m.py / gamma))
}
