//! The model catalogue.
//!
//! Each force law lives in its own submodule as free functions over plain
//! parameter records. [`ForceModel`] bundles one law with its parameters
//! (and `c` for the relativistic ones) and is what the integrator, the
//! invariant monitors and the Euler–Lagrange oracle consume.

mod curl;
mod flapping;
mod kapitza;
mod monkey;
mod poly;
mod relativistic;
mod saddle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{lorentz_factors, PhaseState, Regime, RelativityParams};

pub use curl::{curl_components, GeneralCurlParams};
pub use flapping::{
    accel_flapping_newton, accel_rel_flap, flapping_potential, spinning_saddle_potential,
    FlapTime, FlappingParams,
};
pub use kapitza::{accel_kapitza, accel_rel_kapitza, kapitza_potential, KapitzaForm, KapitzaParams};
pub use monkey::{
    accel_monkey, accel_rel_monkey, accel_rel_rotating_monkey, monkey_g2, monkey_g2_rotated,
    monkey_potential, MonkeySaddleParams, RotatingMonkeyParams,
};
pub use poly::Polynomial;
pub use relativistic::DrivePhase;
pub use saddle::{
    accel_rel_rotating_saddle, accel_rotating_saddle, rotating_saddle_potential,
    RotatingSaddleParams,
};

use relativistic::kinetic_lagrangian;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelId {
    Kapitza,
    RelKapitza,
    RotatingSaddle,
    RelRotatingSaddle,
    Monkey,
    RelMonkey,
    RelRotatingMonkey,
    FlappingNewton,
    RelFlap,
}

impl ModelId {
    pub const ALL: [ModelId; 9] = [
        ModelId::Kapitza,
        ModelId::RelKapitza,
        ModelId::RotatingSaddle,
        ModelId::RelRotatingSaddle,
        ModelId::Monkey,
        ModelId::RelMonkey,
        ModelId::RelRotatingMonkey,
        ModelId::FlappingNewton,
        ModelId::RelFlap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Kapitza => "kapitza",
            ModelId::RelKapitza => "rel_kapitza",
            ModelId::RotatingSaddle => "rotating_saddle",
            ModelId::RelRotatingSaddle => "rel_rotating_saddle",
            ModelId::Monkey => "monkey",
            ModelId::RelMonkey => "rel_monkey",
            ModelId::RelRotatingMonkey => "rel_rotating_monkey",
            ModelId::FlappingNewton => "flapping_newton",
            ModelId::RelFlap => "rel_flap",
        }
    }

    pub fn is_relativistic(self) -> bool {
        matches!(
            self,
            ModelId::RelKapitza
                | ModelId::RelRotatingSaddle
                | ModelId::RelMonkey
                | ModelId::RelRotatingMonkey
                | ModelId::RelFlap
        )
    }

    /// Scalar parameters the model needs. Polynomial shapes (`g`, `f`) are
    /// listed separately by [`ModelId::polynomial_params`].
    pub fn scalar_params(self) -> &'static [&'static str] {
        match self {
            ModelId::Kapitza | ModelId::RelKapitza => &["k", "b"],
            ModelId::RotatingSaddle | ModelId::RelRotatingSaddle => &["Lambda", "omega"],
            ModelId::Monkey | ModelId::RelMonkey => &["k1", "k2"],
            ModelId::RelRotatingMonkey => &["Lambda", "alpha1", "alpha2", "omega"],
            ModelId::FlappingNewton | ModelId::RelFlap => &["A", "omega"],
        }
    }

    pub fn polynomial_params(self) -> &'static [&'static str] {
        match self {
            ModelId::FlappingNewton => &["g"],
            ModelId::RelFlap => &["g", "f"],
            _ => &[],
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

/// One dynamical system: a force law together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ForceModel {
    Kapitza {
        params: KapitzaParams,
        form: KapitzaForm,
    },
    RelKapitza {
        params: KapitzaParams,
        rel: RelativityParams,
    },
    RotatingSaddle(RotatingSaddleParams),
    RelRotatingSaddle {
        params: RotatingSaddleParams,
        rel: RelativityParams,
        phase: DrivePhase,
    },
    Monkey(MonkeySaddleParams),
    RelMonkey {
        params: MonkeySaddleParams,
        rel: RelativityParams,
    },
    RelRotatingMonkey {
        params: RotatingMonkeyParams,
        rel: RelativityParams,
        phase: DrivePhase,
    },
    FlappingNewton(FlappingParams),
    RelFlap {
        params: FlappingParams,
        rel: RelativityParams,
        phase: DrivePhase,
        time: FlapTime,
    },
}

impl ForceModel {
    /// A model of kind `id` with every scalar parameter zero, shapes
    /// `g = f = 1`, and default options. Relativistic ids need `rel`,
    /// the others reject it.
    pub fn template(id: ModelId, rel: Option<RelativityParams>) -> Result<Self> {
        let rel = match (id.is_relativistic(), rel) {
            (true, Some(r)) => r,
            (true, None) => {
                return Err(Error::InvalidParameter(format!(
                    "model `{id}` needs the light speed c"
                )))
            }
            (false, Some(_)) => {
                return Err(Error::InvalidParameter(format!(
                    "model `{id}` is non-relativistic and takes no c"
                )))
            }
            (false, None) => RelativityParams::unit(),
        };
        let kap = KapitzaParams { k: 0.0, b: 0.0 };
        let saddle = RotatingSaddleParams { lambda: 0.0, omega: 0.0 };
        let monkey = MonkeySaddleParams { k1: 0.0, k2: 0.0 };
        let flap = FlappingParams {
            amplitude: 0.0,
            omega: 0.0,
            g: Polynomial::constant(1.0),
            f: Polynomial::constant(1.0),
        };
        let phase = DrivePhase::default();
        Ok(match id {
            ModelId::Kapitza => ForceModel::Kapitza { params: kap, form: KapitzaForm::default() },
            ModelId::RelKapitza => ForceModel::RelKapitza { params: kap, rel },
            ModelId::RotatingSaddle => ForceModel::RotatingSaddle(saddle),
            ModelId::RelRotatingSaddle => ForceModel::RelRotatingSaddle { params: saddle, rel, phase },
            ModelId::Monkey => ForceModel::Monkey(monkey),
            ModelId::RelMonkey => ForceModel::RelMonkey { params: monkey, rel },
            ModelId::RelRotatingMonkey => ForceModel::RelRotatingMonkey {
                params: RotatingMonkeyParams { lambda: 0.0, alpha1: 0.0, alpha2: 0.0, omega: 0.0 },
                rel,
                phase,
            },
            ModelId::FlappingNewton => ForceModel::FlappingNewton(flap),
            ModelId::RelFlap => ForceModel::RelFlap {
                params: flap,
                rel,
                phase,
                time: FlapTime::default(),
            },
        })
    }

    pub fn id(&self) -> ModelId {
        match self {
            ForceModel::Kapitza { .. } => ModelId::Kapitza,
            ForceModel::RelKapitza { .. } => ModelId::RelKapitza,
            ForceModel::RotatingSaddle(_) => ModelId::RotatingSaddle,
            ForceModel::RelRotatingSaddle { .. } => ModelId::RelRotatingSaddle,
            ForceModel::Monkey(_) => ModelId::Monkey,
            ForceModel::RelMonkey { .. } => ModelId::RelMonkey,
            ForceModel::RelRotatingMonkey { .. } => ModelId::RelRotatingMonkey,
            ForceModel::FlappingNewton(_) => ModelId::FlappingNewton,
            ForceModel::RelFlap { .. } => ModelId::RelFlap,
        }
    }

    pub fn relativity(&self) -> Option<RelativityParams> {
        match self {
            ForceModel::RelKapitza { rel, .. }
            | ForceModel::RelRotatingSaddle { rel, .. }
            | ForceModel::RelMonkey { rel, .. }
            | ForceModel::RelRotatingMonkey { rel, .. }
            | ForceModel::RelFlap { rel, .. } => Some(*rel),
            _ => None,
        }
    }

    pub fn regime(&self) -> Regime {
        self.relativity()
            .map_or(Regime::NonRelativistic, Regime::Relativistic)
    }

    /// True when the force has no explicit time dependence.
    pub fn is_autonomous(&self) -> bool {
        matches!(
            self,
            ForceModel::Kapitza { .. }
                | ForceModel::RelKapitza { .. }
                | ForceModel::Monkey(_)
                | ForceModel::RelMonkey { .. }
        )
    }

    /// Drive-phase convention, for the models that have one.
    pub fn drive_phase(&self) -> Option<DrivePhase> {
        match self {
            ForceModel::RelRotatingSaddle { phase, .. }
            | ForceModel::RelRotatingMonkey { phase, .. }
            | ForceModel::RelFlap { phase, .. } => Some(*phase),
            _ => None,
        }
    }

    /// Switches the drive phase of the time-dependent relativistic models.
    /// A no-op for the others.
    pub fn set_drive_phase(&mut self, new: DrivePhase) {
        match self {
            ForceModel::RelRotatingSaddle { phase, .. }
            | ForceModel::RelRotatingMonkey { phase, .. }
            | ForceModel::RelFlap { phase, .. } => *phase = new,
            _ => {}
        }
    }

    pub fn acceleration(&self, s: &PhaseState) -> Result<(f64, f64)> {
        match self {
            ForceModel::Kapitza { params, form } => Ok(accel_kapitza(s, params, *form)),
            ForceModel::RelKapitza { params, rel } => accel_rel_kapitza(s, params, *rel),
            ForceModel::RotatingSaddle(p) => Ok(accel_rotating_saddle(s, p)),
            ForceModel::RelRotatingSaddle { params, rel, phase } => {
                accel_rel_rotating_saddle(s, params, *rel, *phase)
            }
            ForceModel::Monkey(p) => Ok(accel_monkey(s, p)),
            ForceModel::RelMonkey { params, rel } => accel_rel_monkey(s, params, *rel),
            ForceModel::RelRotatingMonkey { params, rel, phase } => {
                accel_rel_rotating_monkey(s, params, *rel, *phase)
            }
            ForceModel::FlappingNewton(p) => Ok(accel_flapping_newton(s, p)),
            ForceModel::RelFlap { params, rel, phase, time } => {
                accel_rel_flap(s, params, *rel, *phase, *time)
            }
        }
    }

    /// Potential energy at `s`.
    ///
    /// The relativistic drive phase `2Γωt` depends on the velocity, so the
    /// potential of those models can fail with `GammaUndefined`.
    pub fn potential(&self, s: &PhaseState) -> Result<f64> {
        let gamma = || -> Result<f64> {
            match self.relativity() {
                Some(rel) => Ok(lorentz_factors(s, rel)?.gamma),
                None => Ok(1.0),
            }
        };
        Ok(match self {
            ForceModel::Kapitza { params, .. } | ForceModel::RelKapitza { params, .. } => {
                kapitza_potential(params, s.x, s.y)
            }
            ForceModel::RotatingSaddle(p) => {
                rotating_saddle_potential(p, s.x, s.y, 2.0 * p.omega * s.t)
            }
            ForceModel::RelRotatingSaddle { params, phase, .. } => {
                let angle = phase.angle(params.omega, s.t, gamma()?);
                rotating_saddle_potential(params, s.x, s.y, angle)
            }
            ForceModel::Monkey(p) | ForceModel::RelMonkey { params: p, .. } => {
                monkey_potential(p, s.x, s.y)
            }
            ForceModel::RelRotatingMonkey { params, phase, .. } => {
                let k = params.coefficients_at(phase.angle(params.omega, s.t, gamma()?));
                monkey_potential(&k, s.x, s.y)
            }
            ForceModel::FlappingNewton(p) => flapping_potential(p, s),
            ForceModel::RelFlap { params, phase, time, .. } => {
                let omega = match time {
                    FlapTime::Physical => params.omega,
                    FlapTime::Rescaled => 1.0,
                };
                let angle = phase.angle(omega, s.t, gamma()?);
                spinning_saddle_potential(params, s.x, s.y, angle)
            }
        })
    }

    /// Lagrangian at `s`, for the models that have one.
    ///
    /// Non-relativistic: `½(ẋ² − ẏ²) − U` (Kapitza in its shaft form and
    /// the rotating saddle). Relativistic: `−c²/Γ − U`, with the same drive
    /// phase convention as the force.
    pub fn lagrangian(&self, s: &PhaseState) -> Result<f64> {
        match self {
            ForceModel::Kapitza { form: KapitzaForm::Shaft, .. } | ForceModel::RotatingSaddle(_) => {
                Ok(0.5 * (s.vx * s.vx - s.vy * s.vy) - self.potential(s)?)
            }
            ForceModel::Kapitza { form: KapitzaForm::Corollary, .. }
            | ForceModel::Monkey(_)
            | ForceModel::FlappingNewton(_)
            | ForceModel::RelFlap { time: FlapTime::Rescaled, .. } => {
                Err(Error::NoLagrangian(self.id()))
            }
            _ => {
                let rel = self.relativity().expect("relativistic model");
                let f = lorentz_factors(s, rel)?;
                Ok(kinetic_lagrangian(&f, rel) - self.potential(s)?)
            }
        }
    }

    pub fn has_lagrangian(&self) -> bool {
        !matches!(
            self,
            ForceModel::Kapitza { form: KapitzaForm::Corollary, .. }
                | ForceModel::Monkey(_)
                | ForceModel::FlappingNewton(_)
                | ForceModel::RelFlap { time: FlapTime::Rescaled, .. }
        )
    }

    /// Sets one scalar parameter by name. Polynomial coefficients are
    /// addressed as `g0`, `g1`, … and `f0`, `f1`, …; setting a coefficient
    /// past the current degree pads with zeros. `c` changes the light speed
    /// of a relativistic model.
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} = {value} is not finite")));
        }
        if name == "omega" && value < 0.0 {
            return Err(Error::InvalidParameter(format!("omega must be ≥ 0, got {value}")));
        }
        let id = self.id();
        let unknown = || Error::UnknownParameter { name: name.to_string(), model: id };
        if name == "c" {
            let new = RelativityParams::new(value)?;
            return match self {
                ForceModel::RelKapitza { rel, .. }
                | ForceModel::RelRotatingSaddle { rel, .. }
                | ForceModel::RelMonkey { rel, .. }
                | ForceModel::RelRotatingMonkey { rel, .. }
                | ForceModel::RelFlap { rel, .. } => {
                    *rel = new;
                    Ok(())
                }
                _ => Err(unknown()),
            };
        }
        let slot: &mut f64 = match self {
            ForceModel::Kapitza { params, .. } | ForceModel::RelKapitza { params, .. } => {
                match name {
                    "k" => &mut params.k,
                    "b" => &mut params.b,
                    _ => return Err(unknown()),
                }
            }
            ForceModel::RotatingSaddle(p) | ForceModel::RelRotatingSaddle { params: p, .. } => {
                match name {
                    "Lambda" => &mut p.lambda,
                    "omega" => &mut p.omega,
                    _ => return Err(unknown()),
                }
            }
            ForceModel::Monkey(p) | ForceModel::RelMonkey { params: p, .. } => match name {
                "k1" => &mut p.k1,
                "k2" => &mut p.k2,
                _ => return Err(unknown()),
            },
            ForceModel::RelRotatingMonkey { params: p, .. } => match name {
                "Lambda" => &mut p.lambda,
                "alpha1" => &mut p.alpha1,
                "alpha2" => &mut p.alpha2,
                "omega" => &mut p.omega,
                _ => return Err(unknown()),
            },
            ForceModel::FlappingNewton(p) | ForceModel::RelFlap { params: p, .. } => {
                let has_f = id == ModelId::RelFlap;
                match name {
                    "A" => &mut p.amplitude,
                    "omega" => &mut p.omega,
                    _ => {
                        let (poly, index) = match name.split_at(1) {
                            ("g", rest) => (&mut p.g, rest),
                            ("f", rest) if has_f => (&mut p.f, rest),
                            _ => return Err(unknown()),
                        };
                        let i: usize = index.parse().map_err(|_| unknown())?;
                        let coeffs = poly.coeffs_mut();
                        if coeffs.len() <= i {
                            coeffs.resize(i + 1, 0.0);
                        }
                        &mut coeffs[i]
                    }
                }
            }
        };
        *slot = value;
        Ok(())
    }

    /// Replaces the `g` or `f` shape of a flapping model.
    pub fn set_polynomial(&mut self, name: &str, poly: Polynomial) -> Result<()> {
        let id = self.id();
        match (self, name) {
            (ForceModel::FlappingNewton(p) | ForceModel::RelFlap { params: p, .. }, "g") => p.g = poly,
            (ForceModel::RelFlap { params: p, .. }, "f") => p.f = poly,
            _ => return Err(Error::UnknownParameter { name: name.to_string(), model: id }),
        }
        Ok(())
    }

    /// Reads back a scalar parameter by the same names as [`set_param`](Self::set_param).
    pub fn param(&self, name: &str) -> Option<f64> {
        if name == "c" {
            return self.relativity().map(|r| r.c());
        }
        match self {
            ForceModel::Kapitza { params, .. } | ForceModel::RelKapitza { params, .. } => {
                match name {
                    "k" => Some(params.k),
                    "b" => Some(params.b),
                    _ => None,
                }
            }
            ForceModel::RotatingSaddle(p) | ForceModel::RelRotatingSaddle { params: p, .. } => {
                match name {
                    "Lambda" => Some(p.lambda),
                    "omega" => Some(p.omega),
                    _ => None,
                }
            }
            ForceModel::Monkey(p) | ForceModel::RelMonkey { params: p, .. } => match name {
                "k1" => Some(p.k1),
                "k2" => Some(p.k2),
                _ => None,
            },
            ForceModel::RelRotatingMonkey { params: p, .. } => match name {
                "Lambda" => Some(p.lambda),
                "alpha1" => Some(p.alpha1),
                "alpha2" => Some(p.alpha2),
                "omega" => Some(p.omega),
                _ => None,
            },
            ForceModel::FlappingNewton(p) | ForceModel::RelFlap { params: p, .. } => match name {
                "A" => Some(p.amplitude),
                "omega" => Some(p.omega),
                _ => {
                    let (poly, index) = match name.split_at(1) {
                        ("g", rest) => (&p.g, rest),
                        ("f", rest) => (&p.f, rest),
                        _ => return None,
                    };
                    let i: usize = index.parse().ok()?;
                    Some(poly.coeffs().get(i).copied().unwrap_or(0.0))
                }
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let omega = match self {
            ForceModel::RotatingSaddle(p) | ForceModel::RelRotatingSaddle { params: p, .. } => {
                Some(p.omega)
            }
            ForceModel::RelRotatingMonkey { params, .. } => Some(params.omega),
            ForceModel::FlappingNewton(p) | ForceModel::RelFlap { params: p, .. } => Some(p.omega),
            _ => None,
        };
        if let Some(w) = omega {
            if w < 0.0 {
                return Err(Error::InvalidParameter(format!("omega must be ≥ 0, got {w}")));
            }
        }
        if let ForceModel::RelFlap { params, time: FlapTime::Rescaled, .. } = self {
            if params.omega == 0.0 {
                return Err(Error::InvalidParameter(
                    "the rescaled-time flapping equations need omega > 0".into(),
                ));
            }
        }
        Ok(())
    }
}
