//! Explicit Runge–Kutta time stepping for the first-order system
//! `(ẋ, ẏ, v̇ₓ, v̇_y) = (vₓ, v_y, aₓ, a_y)`.
//!
//! Two engines: classical fixed-step RK4 and the Dormand–Prince 5(4)
//! embedded pair with error-per-step control. Both evaluate the force at
//! the stage times `t + cᵢh`, which the rotating and flapping models need
//! for full order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::InvariantReport;
use crate::kinematics::{lorentz_factors, LorentzFactors, PhaseState};
use crate::models::ForceModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[serde(alias = "rk4")]
    Rk4Fixed,
    #[default]
    #[serde(alias = "rk54")]
    Rk54Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for RK4, initial step for the adaptive pair.
    pub dt: f64,
    pub rtol: f64,
    pub atol: f64,
    pub t_end: f64,
    /// Upper bound on attempted steps, rejected ones included.
    pub max_steps: u64,
    /// Keep every n-th accepted step.
    pub sample_every: u64,
    /// Adaptive only: sample on the uniform grid `t₀ + i·Δ` instead of at
    /// accepted steps. Steps are shortened to land on grid points, so no
    /// interpolation is involved.
    pub sample_interval: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk54Adaptive,
            dt: 1e-3,
            rtol: 1e-10,
            atol: 1e-12,
            t_end: 10.0,
            max_steps: 50_000_000,
            sample_every: 1,
            sample_interval: None,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self, t0: f64) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return bad(format!("rtol and atol must be positive, got {} and {}", self.rtol, self.atol));
        }
        if !(self.t_end.is_finite() && self.t_end > t0) {
            return bad(format!("t_end = {} must exceed t0 = {t0}", self.t_end));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be at least 1".into());
        }
        if self.sample_every == 0 {
            return bad("sample_every must be at least 1".into());
        }
        if let Some(dt) = self.sample_interval {
            if self.method == Method::Rk4Fixed {
                return bad("sample_interval applies to the adaptive method only; use sample_every".into());
            }
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("sample_interval must be positive, got {dt}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// The state went non-finite or the adaptive step collapsed.
    StepFailure,
    /// A stage velocity left the domain of the Lorentz factors.
    GammaUndefined,
    MaxSteps,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<PhaseState>,
    /// Per-sample `Γ`, `Γₓ`, `Γ_y` for relativistic models.
    pub lorentz: Option<Vec<LorentzFactors>>,
    /// Filled by [`crate::invariants::annotate`].
    pub invariants: Vec<InvariantReport>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn first(&self) -> &PhaseState {
        &self.samples[0]
    }

    pub fn last(&self) -> &PhaseState {
        self.samples.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    pub fn invariant(&self, name: crate::invariants::InvariantKind) -> Option<&InvariantReport> {
        self.invariants.iter().find(|r| r.name == name)
    }
}

type Vec4 = [f64; 4];

fn state_at(t: f64, y: &Vec4) -> PhaseState {
    PhaseState::new(t, y[0], y[1], y[2], y[3])
}

fn derivative(model: &ForceModel, t: f64, y: &Vec4) -> Result<Vec4> {
    let (ax, ay) = model.acceleration(&state_at(t, y))?;
    Ok([y[2], y[3], ax, ay])
}

fn axpy(y: &Vec4, h: f64, terms: &[(f64, &Vec4)]) -> Vec4 {
    let mut out = *y;
    for (w, k) in terms {
        for i in 0..4 {
            out[i] += h * w * k[i];
        }
    }
    out
}

fn rk4_increment(model: &ForceModel, t: f64, y: &Vec4, h: f64, k1: &Vec4) -> Result<Vec4> {
    let k2 = derivative(model, t + 0.5 * h, &axpy(y, h, &[(0.5, k1)]))?;
    let k3 = derivative(model, t + 0.5 * h, &axpy(y, h, &[(0.5, &k2)]))?;
    let k4 = derivative(model, t + h, &axpy(y, h, &[(1.0, &k3)]))?;
    Ok(axpy(
        y,
        h,
        &[(1.0 / 6.0, k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)],
    ))
}

/// One classical RK4 step of length `dt`.
pub fn step_rk4(model: &ForceModel, s: &PhaseState, dt: f64) -> Result<PhaseState> {
    let y = [s.x, s.y, s.vx, s.vy];
    let k1 = derivative(model, s.t, &y)?;
    let next = rk4_increment(model, s.t, &y, dt, &k1)?;
    Ok(state_at(s.t + dt, &next))
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
/// Fifth-order weights, also the last stage row (FSAL).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

struct DopriStep {
    y: Vec4,
    k_last: Vec4,
    err: f64,
}

fn dopri_step(
    model: &ForceModel,
    t: f64,
    y: &Vec4,
    k1: &Vec4,
    h: f64,
    cfg: &IntegratorConfig,
) -> Result<DopriStep> {
    let stage = |i: usize, row: &[f64], ks: &[Vec4]| -> Result<Vec4> {
        let terms: Vec<(f64, &Vec4)> = row.iter().copied().zip(ks.iter()).collect();
        derivative(model, t + C[i] * h, &axpy(y, h, &terms))
    };
    let mut ks: Vec<Vec4> = Vec::with_capacity(7);
    ks.push(*k1);
    for (i, row) in [&A2[..], &A3[..], &A4[..], &A5[..], &A6[..]].into_iter().enumerate() {
        let k = stage(i + 1, row, &ks)?;
        ks.push(k);
    }
    let terms: Vec<(f64, &Vec4)> = B5.iter().copied().zip(ks.iter()).collect();
    let y_new = axpy(y, h, &terms);
    let k7 = derivative(model, t + h, &y_new)?;
    ks.push(k7);

    let mut sum = 0.0;
    for i in 0..4 {
        let e: f64 = (0..7).map(|j| (B5[j] - B4[j]) * ks[j][i]).sum::<f64>() * h;
        let scale = cfg.atol + cfg.rtol * y[i].abs().max(y_new[i].abs());
        sum += (e / scale).powi(2);
    }
    Ok(DopriStep {
        y: y_new,
        k_last: k7,
        err: (sum / 4.0).sqrt(),
    })
}

struct Recorder {
    samples: Vec<PhaseState>,
}

impl Recorder {
    fn push(&mut self, s: PhaseState) {
        if self.samples.last().is_none_or(|last| s.t > last.t) {
            self.samples.push(s);
        }
    }
}

/// Integrates `model` from `s0` to `cfg.t_end`.
///
/// Failures along the way (a stage velocity outside the Lorentz domain, a
/// collapsed step, the step budget) end the run early and are reported in
/// [`Trajectory::termination`]; the samples up to that point are kept.
/// Invalid inputs are errors, including an initial velocity for which the
/// Lorentz factors are undefined.
pub fn integrate(model: &ForceModel, s0: &PhaseState, cfg: &IntegratorConfig) -> Result<Trajectory> {
    s0.validate()?;
    cfg.validate(s0.t)?;
    model.validate()?;

    // An initial velocity outside the Lorentz domain is an input error.
    let k1 = derivative(model, s0.t, &[s0.x, s0.y, s0.vx, s0.vy])?;
    let mut rec = Recorder { samples: vec![*s0] };
    let termination = match cfg.method {
        Method::Rk4Fixed => run_rk4(model, s0, k1, cfg, &mut rec),
        Method::Rk54Adaptive => run_dopri(model, s0, k1, cfg, &mut rec),
    };

    let lorentz = match model.relativity() {
        Some(rel) => Some(
            rec.samples
                .iter()
                .map(|s| lorentz_factors(s, rel))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(Trajectory {
        samples: rec.samples,
        lorentz,
        invariants: Vec::new(),
        termination,
    })
}

fn fixed_step_count(t0: f64, t_end: f64, dt: f64) -> u64 {
    let n = (t_end - t0) / dt;
    let rounded = n.round();
    if (n - rounded).abs() <= 1e-9 * rounded.max(1.0) {
        rounded as u64
    } else {
        n.ceil() as u64
    }
}

fn run_rk4(
    model: &ForceModel,
    s0: &PhaseState,
    mut k1: Vec4,
    cfg: &IntegratorConfig,
    rec: &mut Recorder,
) -> Termination {
    let n = fixed_step_count(s0.t, cfg.t_end, cfg.dt);
    let mut y = [s0.x, s0.y, s0.vx, s0.vy];
    let mut t = s0.t;
    for i in 1..=n {
        if i > cfg.max_steps {
            rec.push(state_at(t, &y));
            return Termination::MaxSteps;
        }
        let t_next = if i == n { cfg.t_end } else { s0.t + i as f64 * cfg.dt };
        let step = rk4_increment(model, t, &y, t_next - t, &k1)
            .and_then(|y_new| Ok((y_new, derivative(model, t_next, &y_new)?)));
        match step {
            Ok((y_new, k)) if y_new.iter().all(|v| v.is_finite()) => {
                y = y_new;
                k1 = k;
                t = t_next;
            }
            Ok(_) => {
                rec.push(state_at(t, &y));
                return Termination::StepFailure;
            }
            Err(e) => {
                rec.push(state_at(t, &y));
                return match e {
                    Error::GammaUndefined { .. } => Termination::GammaUndefined,
                    _ => Termination::StepFailure,
                };
            }
        }
        if i % cfg.sample_every == 0 {
            rec.push(state_at(t, &y));
        }
    }
    rec.push(state_at(t, &y));
    Termination::Completed
}

fn run_dopri(
    model: &ForceModel,
    s0: &PhaseState,
    mut k1: Vec4,
    cfg: &IntegratorConfig,
    rec: &mut Recorder,
) -> Termination {
    let mut y = [s0.x, s0.y, s0.vx, s0.vy];
    let mut t = s0.t;
    let mut h = cfg.dt.min(cfg.t_end - t);
    let mut attempts = 0u64;
    let mut accepted = 0u64;
    let mut next_grid = 1u64;
    let grid_time = |i: u64| cfg.sample_interval.map(|dt| s0.t + i as f64 * dt);

    let termination = loop {
        if t >= cfg.t_end {
            break Termination::Completed;
        }
        if attempts >= cfg.max_steps {
            break Termination::MaxSteps;
        }
        attempts += 1;

        let mut target = cfg.t_end;
        let mut on_grid = false;
        if let Some(tg) = grid_time(next_grid) {
            if tg < target {
                target = tg;
                on_grid = true;
            }
        }
        let clipped = t + h >= target;
        let h_try = if clipped { target - t } else { h };
        let h_min = 1e-14 * t.abs().max(1.0);

        match dopri_step(model, t, &y, &k1, h_try, cfg) {
            Ok(step) if step.err <= 1.0 && step.y.iter().all(|v| v.is_finite()) => {
                let factor = if step.err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * step.err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                t = if clipped { target } else { t + h_try };
                y = step.y;
                k1 = step.k_last;
                accepted += 1;
                // A step shortened only to land on a sample time says
                // nothing about the right step size.
                h = if clipped { h.max(h_try * factor) } else { h_try * factor };
                if cfg.sample_interval.is_some() {
                    if clipped && on_grid {
                        rec.push(state_at(t, &y));
                        next_grid += 1;
                    }
                } else if accepted.is_multiple_of(cfg.sample_every) {
                    rec.push(state_at(t, &y));
                }
            }
            Ok(step) => {
                let factor = if step.err.is_finite() {
                    (SAFETY * step.err.powf(-0.2)).clamp(MIN_FACTOR, 1.0)
                } else {
                    MIN_FACTOR
                };
                h = h_try * factor;
                if h < h_min {
                    break Termination::StepFailure;
                }
            }
            Err(Error::GammaUndefined { .. }) => {
                h = h_try * 0.5;
                if h < h_min {
                    break Termination::GammaUndefined;
                }
            }
            Err(_) => break Termination::StepFailure,
        }
    };
    rec.push(state_at(t, &y));
    termination
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{KapitzaForm, KapitzaParams};

    fn oscillator() -> ForceModel {
        ForceModel::Kapitza {
            params: KapitzaParams { k: 1.0, b: 0.0 },
            form: KapitzaForm::Shaft,
        }
    }

    #[test]
    fn rk4_single_step_on_cosine() {
        let s = step_rk4(&oscillator(), &PhaseState::at_rest(1.0, 0.0), 0.1).unwrap();
        assert!((s.x - 0.1f64.cos()).abs() <= 1e-7);
        assert_eq!(s.t, 0.1);
    }

    #[test]
    fn origin_stays_put() {
        let s = step_rk4(&oscillator(), &PhaseState::at_rest(0.0, 0.0), 0.1).unwrap();
        assert_eq!((s.x, s.y, s.vx, s.vy), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn rk4_sample_count() {
        let cfg = IntegratorConfig {
            method: Method::Rk4Fixed,
            dt: 1e-3,
            t_end: 1.0,
            ..Default::default()
        };
        let traj = integrate(&oscillator(), &PhaseState::at_rest(1.0, 0.0), &cfg).unwrap();
        assert_eq!(traj.len(), 1001);
        assert_eq!(traj.last().t, 1.0);
        assert_eq!(traj.termination, Termination::Completed);
    }

    #[test]
    fn adaptive_matches_cosine() {
        let cfg = IntegratorConfig { t_end: 10.0, ..Default::default() };
        let traj = integrate(&oscillator(), &PhaseState::at_rest(1.0, 0.0), &cfg).unwrap();
        let worst = traj
            .samples
            .iter()
            .map(|s| (s.x - s.t.cos()).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8, "max error {worst}");
        assert_eq!(traj.last().t, 10.0);
    }

    #[test]
    fn adaptive_grid_sampling_hits_grid() {
        let cfg = IntegratorConfig {
            t_end: 2.0,
            sample_interval: Some(0.25),
            ..Default::default()
        };
        let traj = integrate(&oscillator(), &PhaseState::at_rest(1.0, 0.0), &cfg).unwrap();
        let times: Vec<f64> = traj.times().collect();
        assert_eq!(times.len(), 9);
        for (i, t) in times.iter().enumerate() {
            assert!((t - 0.25 * i as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn inverted_channel_is_cosh() {
        let cfg = IntegratorConfig { t_end: 5.0, ..Default::default() };
        let eps = 1e-3;
        let s0 = PhaseState::at_rest(0.0, eps);
        let traj = integrate(&oscillator(), &s0, &cfg).unwrap();
        // The shaft form makes the y channel a plain oscillator; cosh
        // growth needs the corollary sign.
        assert!(traj.samples.iter().all(|s| (s.y - eps * s.t.cos()).abs() <= 1e-6 * eps));

        let corollary = ForceModel::Kapitza {
            params: KapitzaParams { k: 1.0, b: 0.0 },
            form: KapitzaForm::Corollary,
        };
        let traj = integrate(&corollary, &s0, &cfg).unwrap();
        for s in &traj.samples {
            let exact = eps * s.t.cosh();
            assert!((s.y - exact).abs() <= 1e-6 * exact, "t={} y={} exact={exact}", s.t, s.y);
        }
    }

    #[test]
    fn invalid_configs() {
        let s0 = PhaseState::at_rest(1.0, 0.0);
        let bad = [
            IntegratorConfig { dt: 0.0, ..Default::default() },
            IntegratorConfig { rtol: -1.0, ..Default::default() },
            IntegratorConfig { t_end: 0.0, ..Default::default() },
            IntegratorConfig { max_steps: 0, ..Default::default() },
            IntegratorConfig {
                method: Method::Rk4Fixed,
                sample_interval: Some(0.1),
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(matches!(integrate(&oscillator(), &s0, &cfg), Err(Error::InvalidConfig(_))));
        }
        let nan = PhaseState::at_rest(f64::NAN, 0.0);
        assert!(integrate(&oscillator(), &nan, &IntegratorConfig::default()).is_err());
    }

    #[test]
    fn max_steps_truncates() {
        let cfg = IntegratorConfig {
            method: Method::Rk4Fixed,
            dt: 0.01,
            t_end: 1.0,
            max_steps: 10,
            ..Default::default()
        };
        let traj = integrate(&oscillator(), &PhaseState::at_rest(1.0, 0.0), &cfg).unwrap();
        assert_eq!(traj.termination, Termination::MaxSteps);
        assert!((traj.last().t - 0.1).abs() < 1e-12);
    }
}
