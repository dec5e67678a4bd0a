use thiserror::Error;

use crate::models::ModelId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A radicand of one of the pseudo-Lorentz factors is not positive.
    #[error("Lorentz factor undefined at vx={vx}, vy={vy} (c={c})")]
    GammaUndefined { vx: f64, vy: f64, c: f64 },

    #[error("no velocity reproduces momenta px={px}, py={py} (c={c})")]
    NoInverse { px: f64, py: f64, c: f64 },

    #[error("model `{0}` has no Lagrangian")]
    NoLagrangian(ModelId),

    #[error("{quantity} is not defined for model `{model}`")]
    NotApplicable { quantity: &'static str, model: ModelId },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown parameter `{name}` for model `{model}`")]
    UnknownParameter { name: String, model: ModelId },

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("state is not finite: {0}")]
    NonFiniteState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
