//! The self-check suite run by `curlforce check`.
//!
//! Each check integrates or samples a model, compares against a known
//! property and reports a one-line detail. Checks are independent and
//! deterministic; random probes use a fixed seed.

use std::time::{Duration, Instant};

use curlforce::integrators::Termination;
use curlforce::invariants::{annotate, el_residual, energy_rel, max_residual, ElOptions, InvariantKind};
use curlforce::models::*;
use curlforce::trapping::{classify, two_horizon, Classification, TrapCriteria};
use curlforce::{integrate, IntegratorConfig, Method, PhaseState, RelativityParams, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::presets;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type CheckFn = fn() -> (bool, String);

/// `(id, name, time budget in seconds, body)`.
const CHECKS: [(u8, &str, f64, CheckFn); 9] = [
    (1, "Euler-Lagrange residual of the relativistic models", 10.0, euler_lagrange),
    (2, "H and Fradkin invariant of the Kapitza system", 5.0, kapitza_integrals),
    (3, "relativistic energy of rel_kapitza", 5.0, relativistic_energy),
    (4, "non-relativistic limit scales as c^-2", 5.0, newtonian_limit),
    (5, "integrator order and accuracy", 5.0, integrator_order),
    (6, "zero-velocity reduction", 1.0, zero_velocity),
    (7, "phase-volume preservation", 1.0, phase_volume),
    (8, "fig1 trapping classification", 10.0, fig1_classification),
    (9, "inverted-channel escape time", 1.0, escape_time),
];

pub fn ids() -> impl Iterator<Item = u8> {
    CHECKS.iter().map(|c| c.0)
}

/// Runs check `id`; a run over its time budget fails.
pub fn run_check(id: u8) -> Option<CheckOutcome> {
    let &(id, name, budget, body) = CHECKS.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (ok, mut detail) = body();
    let elapsed = start.elapsed();
    let in_budget = elapsed.as_secs_f64() < budget;
    if !in_budget {
        detail.push_str(&format!("; over the {budget} s budget"));
    }
    Some(CheckOutcome {
        id,
        name,
        passed: ok && in_budget,
        detail,
        elapsed,
    })
}

pub fn run_all() -> Vec<CheckOutcome> {
    ids().filter_map(run_check).collect()
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x00c0_ffee)
}

fn gridded(t_end: f64, dt: f64) -> IntegratorConfig {
    IntegratorConfig {
        t_end,
        sample_interval: Some(dt),
        ..Default::default()
    }
}

fn shaft(k: f64, b: f64) -> ForceModel {
    ForceModel::Kapitza {
        params: KapitzaParams { k, b },
        form: KapitzaForm::Shaft,
    }
}

/// The relativistic models at the parameters used by the presets, plus
/// rel_kapitza and rel_monkey which have no preset of their own.
fn relativistic_models(phase: DrivePhase) -> Vec<ForceModel> {
    let rel = RelativityParams::unit();
    let mut models = vec![
        ForceModel::RelKapitza {
            params: KapitzaParams { k: 1.0, b: 0.5 },
            rel,
        },
        ForceModel::RelMonkey {
            params: MonkeySaddleParams { k1: 0.1, k2: 0.1 },
            rel,
        },
    ];
    for name in ["fig1_nonrel", "fig2_nonrel", "fig3_nonrel"] {
        let mut m = presets::load(name).expect("presets parse").model;
        m.set_drive_phase(phase);
        models.push(m);
    }
    models
}

fn launch_states() -> [(&'static str, PhaseState); 2] {
    let ic = |name| presets::load(name).expect("presets parse").ic;
    [("slow", ic("fig1_nonrel")), ("fast", ic("fig1_rel"))]
}

fn el_max(model: &ForceModel, ic: &PhaseState) -> Result<(f64, Trajectory), curlforce::Error> {
    let traj = integrate(model, ic, &gridded(10.0, 1e-3))?;
    let r = max_residual(&el_residual(model, &traj, ElOptions::default())?);
    Ok((r, traj))
}

fn euler_lagrange() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for model in relativistic_models(DrivePhase::Lorentz) {
        for (label, ic) in launch_states() {
            match el_max(&model, &ic) {
                Ok((r, traj)) => {
                    ok &= r <= 1e-4;
                    let cut = if traj.termination == Termination::Completed {
                        String::new()
                    } else {
                        format!(" to t={:.2}", traj.last().t)
                    };
                    parts.push(format!("{}/{label} {r:.1e}{cut}", model.id()));
                }
                Err(e) => {
                    ok = false;
                    parts.push(format!("{}/{label} error: {e}", model.id()));
                }
            }
        }
    }
    // Diagnostic only: the same residual with the drive phase read as 2ωt.
    let frozen: Vec<String> = relativistic_models(DrivePhase::Frozen)
        .into_iter()
        .filter(|m| m.drive_phase().is_some())
        .flat_map(|m| {
            launch_states().map(|(label, ic)| match el_max(&m, &ic) {
                Ok((r, _)) => format!("{}/{label} {r:.1e}", m.id()),
                Err(e) => format!("{}/{label} error: {e}", m.id()),
            })
        })
        .collect();
    (
        ok,
        format!("max residual (limit 1e-4): {}; frozen-phase: {}", parts.join(", "), frozen.join(", ")),
    )
}

fn kapitza_integrals() -> (bool, String) {
    let model = shaft(1.0, 0.5);
    let cfg = IntegratorConfig {
        t_end: 100.0,
        ..Default::default()
    };
    let outcome = integrate(&model, &PhaseState::at_rest(1.0, 0.1), &cfg).and_then(|mut traj| {
        annotate(&model, &mut traj)?;
        Ok(traj)
    });
    let traj = match outcome {
        Ok(t) => t,
        Err(e) => return (false, e.to_string()),
    };
    let h = traj.invariant(InvariantKind::HNonrel).map_or(f64::INFINITY, |r| r.max_rel_drift);
    let i = traj.invariant(InvariantKind::IFradkin).map_or(f64::INFINITY, |r| r.max_rel_drift);
    let rmax = traj.samples.iter().map(PhaseState::radius).fold(0.0, f64::max);
    (
        h <= 1e-8 && i <= 1e-8 && traj.termination == Termination::Completed,
        format!(
            "drift H {h:.1e}, I {i:.1e} (limit 1e-8) to t={:.0}; max radius {rmax:.1e}",
            traj.last().t
        ),
    )
}

fn relativistic_energy() -> (bool, String) {
    let model = ForceModel::RelKapitza {
        params: KapitzaParams { k: 1.0, b: 0.5 },
        rel: RelativityParams::unit(),
    };
    let dt = 1e-3;
    let outcome = integrate(&model, &PhaseState::new(0.0, 0.5, 0.0, 0.0, 0.3), &gridded(100.0, dt))
        .and_then(|traj| {
            let e: Vec<f64> = traj
                .samples
                .iter()
                .map(|s| energy_rel(s, &model))
                .collect::<Result<_, _>>()?;
            Ok((traj, e))
        });
    let (traj, e) = match outcome {
        Ok(v) => v,
        Err(err) => return (false, err.to_string()),
    };
    let drift = curlforce::invariants::max_rel_drift(&e);
    let rate = e
        .windows(3)
        .zip(traj.samples.windows(3))
        .map(|(w, s)| ((w[2] - w[0]) / (s[2].t - s[0].t)).abs())
        .fold(0.0, f64::max);
    let t_final = traj.last().t;
    let covered = traj.termination == Termination::Completed;
    (
        drift <= 1e-8 && rate <= 1e-6 && covered,
        format!(
            "E drift {drift:.1e} (limit 1e-8), max |dE/dt| {rate:.1e} (limit 1e-6), over [0, {t_final:.2}] of [0, 100]; termination {:?}",
            traj.termination
        ),
    )
}

fn newtonian_limit() -> (bool, String) {
    let ic = PhaseState::new(0.0, 0.1, 0.0, 0.01, 0.005);
    let cfg = gridded(10.0, 0.01);
    let reference = match integrate(&shaft(1.0, 0.5), &ic, &cfg) {
        Ok(t) => t,
        Err(e) => return (false, e.to_string()),
    };
    let err = |c: f64| -> Result<f64, curlforce::Error> {
        let model = ForceModel::RelKapitza {
            params: KapitzaParams { k: 1.0, b: 0.5 },
            rel: RelativityParams::new(c)?,
        };
        let traj = integrate(&model, &ic, &cfg)?;
        Ok(traj
            .samples
            .iter()
            .zip(&reference.samples)
            .map(|(a, b)| (a.x - b.x).hypot(a.y - b.y))
            .fold(0.0, f64::max))
    };
    match (err(10.0), err(20.0)) {
        (Ok(e10), Ok(e20)) => {
            let ratio = e10 / e20;
            (
                (3.5..=4.5).contains(&ratio),
                format!("err(c=10) {e10:.3e}, err(c=20) {e20:.3e}, ratio {ratio:.3} (want 3.5..4.5)"),
            )
        }
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    }
}

fn cosine_error(cfg: &IntegratorConfig) -> Result<f64, curlforce::Error> {
    let traj = integrate(&shaft(1.0, 0.0), &PhaseState::at_rest(1.0, 0.0), cfg)?;
    Ok(traj.samples.iter().map(|s| (s.x - s.t.cos()).abs()).fold(0.0, f64::max))
}

fn integrator_order() -> (bool, String) {
    let dts: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];
    let errs: Result<Vec<f64>, _> = dts
        .iter()
        .map(|&dt| {
            cosine_error(&IntegratorConfig {
                method: Method::Rk4Fixed,
                dt,
                t_end: 10.0,
                ..Default::default()
            })
        })
        .collect();
    let adaptive = cosine_error(&IntegratorConfig {
        rtol: 1e-10,
        t_end: 10.0,
        ..Default::default()
    });
    let (errs, adaptive) = match (errs, adaptive) {
        (Ok(e), Ok(a)) => (e, a),
        (Err(e), _) | (_, Err(e)) => return (false, e.to_string()),
    };
    let slope = fit_slope(&dts.map(f64::ln), &errs.iter().map(|e| e.ln()).collect::<Vec<_>>());
    (
        (slope - 4.0).abs() <= 0.2 && adaptive <= 1e-8,
        format!("rk4 slope {slope:.3} (want 4 +- 0.2); rk54 max error {adaptive:.1e} (limit 1e-8)"),
    )
}

/// Least-squares slope of `ys` against `xs`.
fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// The Newtonian force each relativistic model must give at rest.
fn rest_limit(model: &ForceModel, s: &PhaseState) -> (f64, f64) {
    match model {
        ForceModel::RelKapitza { params, .. } => accel_kapitza(s, params, KapitzaForm::Shaft),
        ForceModel::RelRotatingSaddle { params, .. } => accel_rotating_saddle(s, params),
        ForceModel::RelMonkey { params, .. } => accel_monkey(s, params),
        ForceModel::RelRotatingMonkey { params, .. } => {
            accel_monkey(s, &params.coefficients_at(2.0 * params.omega * s.t))
        }
        ForceModel::RelFlap { params, .. } => {
            let (sin, cos) = (2.0 * params.omega * s.t).sin_cos();
            let gp = params.g.derivative().eval(s.x * s.x - s.y * s.y);
            let fp = params.f.derivative().eval(s.x * s.y);
            (-(s.x * gp * cos + s.y * fp * sin), -s.y * gp * cos + s.x * fp * sin)
        }
        other => other.acceleration(s).expect("Newtonian models never fail"),
    }
}

fn random_point(r: &mut ChaCha8Rng) -> PhaseState {
    PhaseState::new(
        r.gen_range(0.0..20.0),
        r.gen_range(-2.0..2.0),
        r.gen_range(-2.0..2.0),
        r.gen_range(-0.7..0.7),
        r.gen_range(-2.0..2.0),
    )
}

fn zero_velocity() -> (bool, String) {
    let mut r = rng();
    let mut worst: f64 = 0.0;
    for model in relativistic_models(DrivePhase::Lorentz) {
        for _ in 0..100 {
            let s = PhaseState {
                vx: 0.0,
                vy: 0.0,
                ..random_point(&mut r)
            };
            let Ok((ax, ay)) = model.acceleration(&s) else {
                return (false, format!("{} failed at rest", model.id()));
            };
            let (ex, ey) = rest_limit(&model, &s);
            worst = worst.max((ax - ex).abs()).max((ay - ey).abs());
        }
    }
    (worst <= 1e-12, format!("max deviation {worst:.1e} over 5 models x 100 points (limit 1e-12)"))
}

/// Divergence of `(ẋ, ẏ, aₓ, a_y)` over `(x, y, ẋ, ẏ)`. Position
/// derivatives of the velocity rows vanish identically.
fn phase_divergence(model: &ForceModel, s: &PhaseState) -> f64 {
    let h = 1e-6;
    let a = |vx: f64, vy: f64| {
        model
            .acceleration(&PhaseState { vx, vy, ..*s })
            .expect("Newtonian models never fail")
    };
    let dax = (a(s.vx + h, s.vy).0 - a(s.vx - h, s.vy).0) / (2.0 * h);
    let day = (a(s.vx, s.vy + h).1 - a(s.vx, s.vy - h).1) / (2.0 * h);
    dax + day
}

fn phase_volume() -> (bool, String) {
    let shape = Polynomial::new(vec![1.0, 1.0, 1.0]).expect("finite coefficients");
    let models = [
        shaft(1.0, 0.5),
        ForceModel::RotatingSaddle(RotatingSaddleParams { lambda: 0.1, omega: 0.5 }),
        ForceModel::Monkey(MonkeySaddleParams { k1: 0.1, k2: 0.1 }),
        ForceModel::FlappingNewton(FlappingParams {
            amplitude: 0.1,
            omega: 0.5,
            g: shape.clone(),
            f: shape,
        }),
    ];
    let mut r = rng();
    let mut worst: f64 = 0.0;
    for model in &models {
        for _ in 0..100 {
            worst = worst.max(phase_divergence(model, &random_point(&mut r)).abs());
        }
    }
    (worst <= 1e-8, format!("max |div| {worst:.1e} over 4 models x 100 points (limit 1e-8)"))
}

fn fig1_classification() -> (bool, String) {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, want_short, want_long) in [
        ("fig1_nonrel", Some(Classification::Trapped), None),
        ("fig1_rel", None, Some(Classification::Escaped)),
    ] {
        let sc = presets::load(name).expect("presets parse");
        let traj = match integrate(&sc.model, &sc.ic, &sc.integrator) {
            Ok(t) => t,
            Err(e) => return (false, format!("{name}: {e}")),
        };
        let (short, long) = two_horizon(&traj, &sc.trapping);
        ok &= want_short.is_none_or(|w| short.classification == w);
        ok &= want_long.is_none_or(|w| long.classification == w);
        let xmax = traj.samples.iter().map(|s| s.x.abs()).fold(0.0, f64::max);
        let vxmax = traj.samples.iter().map(|s| s.vx.abs()).fold(0.0, f64::max);
        parts.push(format!(
            "{name}: h20 {:?}, h200 {:?}, max r {:.3}, max |x| {xmax:.3}, max |vx| {vxmax:.3}, termination {:?} at t={:.2}",
            short.classification,
            long.classification,
            long.max_radius,
            traj.termination,
            traj.last().t
        ));
    }
    (ok, parts.join("; "))
}

fn escape_time() -> (bool, String) {
    let model = ForceModel::Kapitza {
        params: KapitzaParams { k: 1.0, b: 0.0 },
        form: KapitzaForm::Corollary,
    };
    let traj = match integrate(&model, &PhaseState::at_rest(0.0, 1e-3), &gridded(20.0, 1e-3)) {
        Ok(t) => t,
        Err(e) => return (false, e.to_string()),
    };
    let v = classify(&traj, &TrapCriteria::default());
    let expected = 1e4f64.acosh();
    match v.escape_time {
        Some(t) => (
            (t - expected).abs() <= 0.1,
            format!("escape at t={t:.4}, closed form {expected:.4}"),
        ),
        None => (false, format!("no escape ({:?})", v.classification)),
    }
}
