//! Dimensionless units built from a reference frequency `ω_c` and the
//! light speed `c`: lengths scale by `ω_c/c`, velocities by `1/c`, times by
//! `ω_c`.

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizationScheme {
    pub omega_c: f64,
    pub c: f64,
}

/// What a number measures, which fixes its scale factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Position,
    Velocity,
    Acceleration,
    Time,
    Frequency,
    /// `Λ`, `k`, `b`, `A`: squared frequencies.
    Stiffness,
    /// `α₁`, `α₂` of the rotating monkey saddle.
    Alpha,
    /// `k₁`, `k₂` of the static monkey saddle.
    MonkeyCoefficient,
    /// Coefficient of `uⁱ` in a shape polynomial `g` or `f`.
    PolynomialCoefficient(u32),
    LightSpeed,
}

impl NormalizationScheme {
    pub const UNIT: Self = Self { omega_c: 1.0, c: 1.0 };

    pub fn new(omega_c: f64, c: f64) -> Result<Self> {
        let s = Self { omega_c, c };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_c > 0.0 && self.omega_c.is_finite()) {
            return Err(CliError::validation("normalization.omega_c", "must be positive"));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(CliError::validation("normalization.c", "must be positive"));
        }
        Ok(())
    }

    /// Multiplier taking a physical value of `q` to its dimensionless one.
    ///
    /// Polynomial coefficients scale as `βᵢ → βᵢ(ω_c/c)^{2i}`, taken as
    /// given rather than derived from the position scale. The monkey
    /// coefficients use `k → k·c/ω_c³` so that `k = Λα` stays consistent.
    pub fn factor(&self, q: Quantity) -> f64 {
        let (w, c) = (self.omega_c, self.c);
        match q {
            Quantity::Position => w / c,
            Quantity::Velocity => 1.0 / c,
            Quantity::Acceleration => 1.0 / (w * c),
            Quantity::Time => w,
            Quantity::Frequency => 1.0 / w,
            Quantity::Stiffness => 1.0 / (w * w),
            Quantity::Alpha => c / w,
            Quantity::MonkeyCoefficient => c / (w * w * w),
            Quantity::PolynomialCoefficient(i) => (w / c).powi(2 * i as i32),
            Quantity::LightSpeed => 1.0 / c,
        }
    }

    pub fn normalize(&self, value: f64, q: Quantity) -> f64 {
        value * self.factor(q)
    }

    pub fn denormalize(&self, value: f64, q: Quantity) -> f64 {
        value / self.factor(q)
    }
}

/// Scale of a named model parameter.
pub fn parameter_quantity(name: &str) -> Option<Quantity> {
    match name {
        "k" | "b" | "Lambda" | "A" => Some(Quantity::Stiffness),
        "omega" => Some(Quantity::Frequency),
        "alpha1" | "alpha2" => Some(Quantity::Alpha),
        "k1" | "k2" => Some(Quantity::MonkeyCoefficient),
        "c" => Some(Quantity::LightSpeed),
        _ => None,
    }
}
