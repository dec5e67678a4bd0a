//! Curl-force dynamics in the plane.
//!
//! A curl force depends on position only yet has nonzero curl, so it has no
//! scalar potential in the usual sense. The systems here (the Kapitza
//! rotating-shaft equations, rotating and flapping saddles, the monkey
//! saddle) are nonetheless generated by Lagrangians with an indefinite
//! kinetic term `½(ẋ² − ẏ²)`, and by its relativistic analogue
//! `−c²/Γ` with `Γ = (1 − ẋ²/c² + ẏ²/c²)^(−1/2)`.
//!
//! ```
//! use curlforce::{integrate, IntegratorConfig, PhaseState};
//! use curlforce::models::{ForceModel, KapitzaForm, KapitzaParams};
//!
//! let model = ForceModel::Kapitza {
//!     params: KapitzaParams { k: 1.0, b: 0.0 },
//!     form: KapitzaForm::Shaft,
//! };
//! let traj = integrate(&model, &PhaseState::at_rest(1.0, 0.0), &IntegratorConfig::default())?;
//! let end = traj.last();
//! assert!((end.x - end.t.cos()).abs() < 1e-8);
//! # Ok::<(), curlforce::Error>(())
//! ```

pub mod error;
pub mod integrators;
pub mod invariants;
pub mod kinematics;
pub mod models;
pub mod trapping;

pub use error::{Error, Result};
pub use integrators::{integrate, step_rk4, IntegratorConfig, Method, Termination, Trajectory};
pub use kinematics::{
    lorentz_factors, momenta_from_velocity, velocity_from_momenta, LorentzFactors, Momenta,
    PhaseState, Regime, RelativityParams,
};
pub use models::{ForceModel, ModelId};
pub use trapping::{classify, Classification, TrapCriteria, TrapVerdict};

#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!(concat!("../../../book/src/", $path))]
            mod $name {}
        };
    }
    chapter!(intro, "intro.md");
    chapter!(kinematics, "kinematics.md");
    chapter!(models, "models.md");
    chapter!(integrators, "integrators.md");
    chapter!(invariants, "invariants.md");
    chapter!(trapping, "trapping.md");
}
