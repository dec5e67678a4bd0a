//! Conserved quantities and the Euler–Lagrange residual oracle.
//!
//! Momentum convention throughout: `pₓ = ẋ`, `p_y = −ẏ` in the Newtonian
//! regime and `pₓ = ẋΓ`, `p_y = −ẏΓ` in the relativistic one. The minus
//! sign on `p_y` comes from the indefinite kinetic term and is easy to drop.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::Trajectory;
use crate::kinematics::{lorentz_factors, PhaseState, RelativityParams};
use crate::models::{kapitza_potential, ForceModel, KapitzaParams};

/// Floor on the reference value in relative drifts.
pub const DRIFT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvariantKind {
    #[serde(rename = "H_nonrel")]
    HNonrel,
    #[serde(rename = "I_fradkin")]
    IFradkin,
    #[serde(rename = "H_eff_rel")]
    HEffRel,
    #[serde(rename = "E_legendre")]
    ELegendre,
}

impl InvariantKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InvariantKind::HNonrel => "H_nonrel",
            InvariantKind::IFradkin => "I_fradkin",
            InvariantKind::HEffRel => "H_eff_rel",
            InvariantKind::ELegendre => "E_legendre",
        }
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub name: InvariantKind,
    pub series: Vec<f64>,
    pub max_rel_drift: f64,
}

impl InvariantReport {
    pub fn new(name: InvariantKind, series: Vec<f64>) -> Self {
        let max_rel_drift = max_rel_drift(&series);
        Self { name, series, max_rel_drift }
    }
}

/// `max |v(t) − v(0)| / max(|v(0)|, 1e−12)`; zero for an empty series.
pub fn max_rel_drift(series: &[f64]) -> f64 {
    let Some(&v0) = series.first() else {
        return 0.0;
    };
    let scale = v0.abs().max(DRIFT_FLOOR);
    series
        .iter()
        .map(|v| (v - v0).abs() / scale)
        .fold(0.0, f64::max)
}

/// `H = ½(pₓ² − p_y²) + ½k(x² − y²) + bxy`.
pub fn hamiltonian_nonrel(s: &PhaseState, p: &KapitzaParams) -> f64 {
    let (px, py) = (s.vx, -s.vy);
    0.5 * (px * px - py * py) + kapitza_potential(p, s.x, s.y)
}

/// Fradkin tensor `I = pₓp_y + ½b(x² − y²) − kxy`.
pub fn fradkin_tensor(s: &PhaseState, p: &KapitzaParams) -> f64 {
    let (px, py) = (s.vx, -s.vy);
    px * py + 0.5 * p.b * (s.x * s.x - s.y * s.y) - p.k * s.x * s.y
}

/// `H = pₓ²/2Γ − p_y²/2Γ + U` with relativistic momenta. Diagnostic only:
/// it is not conserved along the relativistic Kapitza flow.
pub fn hamiltonian_eff_rel(s: &PhaseState, p: &KapitzaParams, rel: RelativityParams) -> Result<f64> {
    let g = lorentz_factors(s, rel)?.gamma;
    let (px, py) = (s.vx * g, -s.vy * g);
    Ok((px * px - py * py) / (2.0 * g) + kapitza_potential(p, s.x, s.y))
}

/// Legendre-transform energy `E = c²Γ + U` of `L = −c²/Γ − U`.
///
/// Only defined for the autonomous relativistic models, where it is
/// conserved.
pub fn energy_rel(s: &PhaseState, model: &ForceModel) -> Result<f64> {
    let rel = match model {
        ForceModel::RelKapitza { rel, .. } | ForceModel::RelMonkey { rel, .. } => *rel,
        _ => {
            return Err(Error::NotApplicable {
                quantity: "E_legendre",
                model: model.id(),
            })
        }
    };
    let g = lorentz_factors(s, rel)?.gamma;
    Ok(rel.c() * rel.c() * g + model.potential(s)?)
}

/// The invariants monitored for `model`, evaluated on every sample.
pub fn reports_for(model: &ForceModel, traj: &Trajectory) -> Result<Vec<InvariantReport>> {
    let series = |f: &dyn Fn(&PhaseState) -> Result<f64>| -> Result<Vec<f64>> {
        traj.samples.iter().map(f).collect()
    };
    let mut out = Vec::new();
    match model {
        ForceModel::Kapitza { params, .. } => {
            out.push(InvariantReport::new(
                InvariantKind::HNonrel,
                series(&|s| Ok(hamiltonian_nonrel(s, params)))?,
            ));
            out.push(InvariantReport::new(
                InvariantKind::IFradkin,
                series(&|s| Ok(fradkin_tensor(s, params)))?,
            ));
        }
        ForceModel::RelKapitza { params, rel } => {
            out.push(InvariantReport::new(
                InvariantKind::HEffRel,
                series(&|s| hamiltonian_eff_rel(s, params, *rel))?,
            ));
            out.push(InvariantReport::new(
                InvariantKind::ELegendre,
                series(&|s| energy_rel(s, model))?,
            ));
        }
        ForceModel::RelMonkey { .. } => {
            out.push(InvariantReport::new(
                InvariantKind::ELegendre,
                series(&|s| energy_rel(s, model))?,
            ));
        }
        _ => {}
    }
    Ok(out)
}

/// Fills [`Trajectory::invariants`].
pub fn annotate(model: &ForceModel, traj: &mut Trajectory) -> Result<()> {
    traj.invariants = reports_for(model, traj)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElOptions {
    /// Relative step for the partial derivatives of `L` in the state. The
    /// velocity step is scaled by `max(1, |v|)`.
    pub state_step: f64,
    /// The time derivative uses samples `i ± stride`, so its step is
    /// `stride` times the sample spacing.
    pub stride: usize,
}

impl Default for ElOptions {
    fn default() -> Self {
        Self { state_step: 1e-6, stride: 1 }
    }
}

/// Residual of `d/dt(∂L/∂q̇) − ∂L/∂q` along a trajectory.
///
/// Everything is finite differences: central in the state for the
/// partials, and a three-point (possibly non-uniform) stencil in time for
/// `d/dt`. Returns `(t, max(|r_x|, |r_y|))` per interior sample. Samples
/// whose two time gaps differ by more than a factor of two, or whose
/// perturbed states leave the Lorentz domain, are skipped.
pub fn el_residual(model: &ForceModel, traj: &Trajectory, opts: ElOptions) -> Result<Vec<(f64, f64)>> {
    if !model.has_lagrangian() {
        return Err(Error::NoLagrangian(model.id()));
    }
    let m = opts.stride.max(1);
    let n = traj.samples.len();
    if n < 2 * m + 1 {
        return Ok(Vec::new());
    }

    // ∂L/∂ẋ, ∂L/∂ẏ, ∂L/∂x, ∂L/∂y at every sample.
    let partials: Vec<Option<[f64; 4]>> = traj
        .samples
        .iter()
        .map(|s| lagrangian_partials(model, s, opts.state_step))
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(n - 2 * m);
    for i in m..n - m {
        let (Some(lo), Some(mid), Some(hi)) = (partials[i - m], partials[i], partials[i + m]) else {
            continue;
        };
        let t0 = traj.samples[i].t;
        let h1 = t0 - traj.samples[i - m].t;
        let h2 = traj.samples[i + m].t - t0;
        if h1.max(h2) > 2.0 * h1.min(h2) {
            continue;
        }
        let w_lo = -h2 / (h1 * (h1 + h2));
        let w_mid = (h2 - h1) / (h1 * h2);
        let w_hi = h1 / (h2 * (h1 + h2));
        let ddt = |k: usize| w_lo * lo[k] + w_mid * mid[k] + w_hi * hi[k];
        let rx = ddt(0) - mid[2];
        let ry = ddt(1) - mid[3];
        out.push((t0, rx.abs().max(ry.abs())));
    }
    Ok(out)
}

fn lagrangian_partials(model: &ForceModel, s: &PhaseState, step: f64) -> Result<Option<[f64; 4]>> {
    let dv = step * s.vx.abs().max(s.vy.abs()).max(1.0);
    let dq = step * s.x.abs().max(s.y.abs()).max(1.0);
    let central = |plus: PhaseState, minus: PhaseState, h: f64| -> Result<Option<f64>> {
        match (model.lagrangian(&plus), model.lagrangian(&minus)) {
            (Ok(a), Ok(b)) => Ok(Some((a - b) / (2.0 * h))),
            (Err(Error::GammaUndefined { .. }), _) | (_, Err(Error::GammaUndefined { .. })) => Ok(None),
            (Err(e), _) | (_, Err(e)) => Err(e),
        }
    };
    let shifted = |dx: f64, dy: f64, dvx: f64, dvy: f64| PhaseState {
        x: s.x + dx,
        y: s.y + dy,
        vx: s.vx + dvx,
        vy: s.vy + dvy,
        ..*s
    };
    let parts = [
        central(shifted(0.0, 0.0, dv, 0.0), shifted(0.0, 0.0, -dv, 0.0), dv)?,
        central(shifted(0.0, 0.0, 0.0, dv), shifted(0.0, 0.0, 0.0, -dv), dv)?,
        central(shifted(dq, 0.0, 0.0, 0.0), shifted(-dq, 0.0, 0.0, 0.0), dq)?,
        central(shifted(0.0, dq, 0.0, 0.0), shifted(0.0, -dq, 0.0, 0.0), dq)?,
    ];
    Ok(match parts {
        [Some(a), Some(b), Some(c), Some(d)] => Some([a, b, c, d]),
        _ => None,
    })
}

/// Largest residual, or zero when no sample qualified.
pub fn max_residual(series: &[(f64, f64)]) -> f64 {
    series.iter().map(|(_, r)| *r).fold(0.0, f64::max)
}
