//! Scenario documents.
//!
//! A scenario is one JSON object:
//!
//! ```json
//! {
//!   "name": "demo",
//!   "model": "rel_kapitza",
//!   "params": { "k": 1.0, "b": 0.5 },
//!   "relativity": { "mode": "rel", "c": 1.0 },
//!   "ic": { "x": 0.5, "vy": 0.3 },
//!   "integrator": { "method": "rk54_adaptive", "rtol": 1e-10, "t_end": 50 },
//!   "trapping": { "r_escape": 10, "horizon": 200 },
//!   "outputs": { "dir": "out", "format": "csv" }
//! }
//! ```
//!
//! Only `model` and the model's parameters are required. Parameters may
//! also sit at the top level next to `model`. Unknown keys are rejected.

use std::path::PathBuf;

use curlforce::integrators::IntegratorConfig;
use curlforce::models::{DrivePhase, FlapTime, ForceModel, KapitzaForm, ModelId, Polynomial};
use curlforce::trapping::TrapCriteria;
use curlforce::{lorentz_factors, PhaseState, RelativityParams};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};
use crate::normalize::{parameter_quantity, NormalizationScheme, Quantity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub format: Format,
    /// Include the invariant columns and drifts.
    pub invariants: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            format: Format::Csv,
            invariants: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub model: ForceModel,
    pub ic: PhaseState,
    pub integrator: IntegratorConfig,
    pub trapping: TrapCriteria,
    pub outputs: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Rel,
    Nonrel,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelativity {
    mode: Mode,
    c: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawIc {
    t0: f64,
    x: f64,
    y: f64,
    vx: f64,
    vy: f64,
}

#[derive(Debug, Deserialize)]
struct RawScenario {
    name: Option<String>,
    model: String,
    #[serde(default)]
    params: Map<String, Value>,
    relativity: Option<RawRelativity>,
    #[serde(default)]
    ic: RawIc,
    #[serde(default)]
    integrator: IntegratorConfig,
    #[serde(default)]
    trapping: TrapCriteria,
    #[serde(default)]
    outputs: OutputSpec,
    normalization: Option<NormalizationScheme>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

const OPTION_KEYS: [&str; 3] = ["freeze_gamma_phase", "form", "tau_rescaled"];

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if !value.is_object() {
        return Err(CliError::validation("$", "a scenario must be a JSON object"));
    }
    let raw: RawScenario = serde_path_to_error::deserialize(value).map_err(|e| {
        let key = e.path().to_string();
        CliError::validation(key, e.into_inner().to_string())
    })?;
    build(raw)
}

fn build(raw: RawScenario) -> Result<Scenario> {
    let id: ModelId = raw
        .model
        .parse()
        .map_err(|e: curlforce::Error| CliError::validation("model", e.to_string()))?;
    let norm = raw.normalization.unwrap_or(NormalizationScheme::UNIT);
    norm.validate()?;

    let mut params = raw.params;
    for (key, value) in raw.extra {
        let known = id.scalar_params().contains(&key.as_str())
            || id.polynomial_params().contains(&key.as_str())
            || OPTION_KEYS.contains(&key.as_str());
        if !known {
            return Err(CliError::validation(key, "unknown key"));
        }
        if params.insert(key.clone(), value).is_some() {
            return Err(CliError::validation(key, "given both at top level and in `params`"));
        }
    }

    let rel = relativity(id, raw.relativity, &norm)?;
    let mut model = ForceModel::template(id, rel).map_err(|e| CliError::validation("model", e.to_string()))?;
    apply_params(&mut model, params, &norm)?;
    model
        .validate()
        .map_err(|e| CliError::validation("params", e.to_string()))?;

    let ic = PhaseState::new(
        norm.normalize(raw.ic.t0, Quantity::Time),
        norm.normalize(raw.ic.x, Quantity::Position),
        norm.normalize(raw.ic.y, Quantity::Position),
        norm.normalize(raw.ic.vx, Quantity::Velocity),
        norm.normalize(raw.ic.vy, Quantity::Velocity),
    );
    let sc = Scenario {
        name: raw.name.unwrap_or_else(|| "scenario".to_string()),
        model,
        ic,
        integrator: raw.integrator,
        trapping: raw.trapping,
        outputs: raw.outputs,
    };
    validate(&sc)?;
    Ok(sc)
}

/// Checks the cross-field constraints of an assembled scenario.
pub fn validate(sc: &Scenario) -> Result<()> {
    if sc.name.is_empty() || sc.name.contains(['/', '\\']) {
        return Err(CliError::validation("name", "must be a non-empty file stem"));
    }
    sc.ic
        .validate()
        .map_err(|e| CliError::validation("ic", e.to_string()))?;
    if let Some(rel) = sc.model.relativity() {
        lorentz_factors(&sc.ic, rel).map_err(|e| CliError::validation("ic", e.to_string()))?;
    }
    sc.integrator
        .validate(sc.ic.t)
        .map_err(|e| CliError::validation("integrator", e.to_string()))?;
    sc.trapping
        .validate()
        .map_err(|e| CliError::validation("trapping", e.to_string()))?;
    Ok(())
}

fn relativity(
    id: ModelId,
    raw: Option<RawRelativity>,
    norm: &NormalizationScheme,
) -> Result<Option<RelativityParams>> {
    match (id.is_relativistic(), raw) {
        (true, None) => Err(CliError::validation(
            "relativity.c",
            format!("missing; model `{id}` needs a relativity block with mode \"rel\" and c"),
        )),
        (true, Some(r)) => {
            if r.mode != Mode::Rel {
                return Err(CliError::validation(
                    "relativity.mode",
                    format!("model `{id}` is relativistic; mode must be \"rel\""),
                ));
            }
            let c = r.c.ok_or_else(|| {
                CliError::validation("relativity.c", format!("missing; model `{id}` needs c"))
            })?;
            let c = norm.normalize(c, Quantity::LightSpeed);
            RelativityParams::new(c)
                .map(Some)
                .map_err(|e| CliError::validation("relativity.c", e.to_string()))
        }
        (false, None) => Ok(None),
        (false, Some(r)) => {
            if r.mode != Mode::Nonrel {
                return Err(CliError::validation(
                    "relativity.mode",
                    format!("model `{id}` is non-relativistic; mode must be \"nonrel\""),
                ));
            }
            if r.c.is_some() {
                return Err(CliError::validation(
                    "relativity.c",
                    format!("model `{id}` is non-relativistic and takes no c"),
                ));
            }
            Ok(None)
        }
    }
}

fn apply_params(model: &mut ForceModel, mut params: Map<String, Value>, norm: &NormalizationScheme) -> Result<()> {
    let id = model.id();
    let key = |name: &str| format!("params.{name}");

    for &name in id.scalar_params() {
        let value = params
            .remove(name)
            .ok_or_else(|| CliError::validation(key(name), format!("missing; required by model `{id}`")))?;
        let v = value
            .as_f64()
            .ok_or_else(|| CliError::validation(key(name), "must be a number"))?;
        let q = parameter_quantity(name).expect("every scalar parameter has a scale");
        model
            .set_param(name, norm.normalize(v, q))
            .map_err(|e| CliError::validation(key(name), e.to_string()))?;
    }

    for &name in id.polynomial_params() {
        let value = params
            .remove(name)
            .ok_or_else(|| CliError::validation(key(name), format!("missing; required by model `{id}`")))?;
        let coeffs = value
            .as_array()
            .and_then(|a| a.iter().map(Value::as_f64).collect::<Option<Vec<f64>>>())
            .ok_or_else(|| CliError::validation(key(name), "must be an array of numbers"))?;
        let scaled = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| norm.normalize(*c, Quantity::PolynomialCoefficient(i as u32)))
            .collect();
        let poly = Polynomial::new(scaled).map_err(|e| CliError::validation(key(name), e.to_string()))?;
        model
            .set_polynomial(name, poly)
            .map_err(|e| CliError::validation(key(name), e.to_string()))?;
    }

    for (name, value) in params {
        match name.as_str() {
            "freeze_gamma_phase" if model.drive_phase().is_some() => {
                let freeze = value
                    .as_bool()
                    .ok_or_else(|| CliError::validation(key(&name), "must be true or false"))?;
                model.set_drive_phase(if freeze { DrivePhase::Frozen } else { DrivePhase::Lorentz });
            }
            "form" if id == ModelId::Kapitza => {
                let form: KapitzaForm = serde_json::from_value(value)
                    .map_err(|_| CliError::validation(key(&name), "must be \"shaft\" or \"corollary\""))?;
                if let ForceModel::Kapitza { form: f, .. } = model {
                    *f = form;
                }
            }
            "tau_rescaled" if id == ModelId::RelFlap => {
                let on = value
                    .as_bool()
                    .ok_or_else(|| CliError::validation(key(&name), "must be true or false"))?;
                if let ForceModel::RelFlap { time, .. } = model {
                    *time = if on { FlapTime::Rescaled } else { FlapTime::Physical };
                }
            }
            _ => {
                return Err(CliError::validation(
                    key(&name),
                    format!("unknown parameter for model `{id}`"),
                ))
            }
        }
    }
    Ok(())
}
