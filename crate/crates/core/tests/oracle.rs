//! The Euler–Lagrange residual oracle against integrated trajectories.

use curlforce::invariants::{el_residual, max_residual, ElOptions};
use curlforce::models::*;
use curlforce::{integrate, IntegratorConfig, PhaseState, RelativityParams, Trajectory};

fn dense(t_end: f64) -> IntegratorConfig {
    IntegratorConfig { t_end, rtol: 1e-10, sample_interval: Some(1e-3), ..Default::default() }
}

fn rel_kapitza() -> ForceModel {
    ForceModel::RelKapitza { params: KapitzaParams { k: 1.0, b: 0.5 }, rel: RelativityParams::unit() }
}

fn residual(model: &ForceModel, traj: &Trajectory, stride: usize) -> f64 {
    max_residual(&el_residual(model, traj, ElOptions { stride, ..Default::default() }).unwrap())
}

#[test]
fn relativistic_kapitza_satisfies_its_lagrangian() {
    let model = rel_kapitza();
    let traj = integrate(&model, &PhaseState::new(0.0, 1.0, 0.0, 0.5, 0.5), &dense(2.0)).unwrap();
    assert!(residual(&model, &traj, 1) <= 1e-4);
}

#[test]
fn relativistic_monkey_satisfies_its_lagrangian() {
    let model = ForceModel::RelMonkey {
        params: MonkeySaddleParams { k1: 1.0, k2: 2.0 },
        rel: RelativityParams::unit(),
    };
    let traj = integrate(&model, &PhaseState::new(0.0, 1.0, 1.0, 0.3, 0.4), &dense(0.5)).unwrap();
    assert!(residual(&model, &traj, 1) <= 1e-4);
}

#[test]
fn frozen_phase_rotating_models_satisfy_their_lagrangians() {
    let rel = RelativityParams::unit();
    let models = [
        ForceModel::RelRotatingSaddle {
            params: RotatingSaddleParams { lambda: 0.1, omega: 0.5 },
            rel,
            phase: DrivePhase::Frozen,
        },
        ForceModel::RelRotatingMonkey {
            params: RotatingMonkeyParams { lambda: 0.1, alpha1: 1.0, alpha2: 1.0, omega: 0.5 },
            rel,
            phase: DrivePhase::Frozen,
        },
    ];
    for model in models {
        let traj = integrate(&model, &PhaseState::new(0.0, 0.0, 0.0, 0.5, 0.5), &dense(3.0)).unwrap();
        let r = residual(&model, &traj, 1);
        assert!(r <= 1e-4, "{}: {r}", model.id());
    }
}

#[test]
fn corrupted_trajectory_is_detected() {
    let model = rel_kapitza();
    let mut traj = integrate(&model, &PhaseState::new(0.0, 1.0, 0.0, 0.5, 0.5), &dense(1.0)).unwrap();
    let clean = residual(&model, &traj, 1);
    for s in traj.samples.iter_mut().skip(1) {
        s.x += 1e-3;
    }
    let dirty = residual(&model, &traj, 1);
    assert!(dirty >= 10.0 * clean, "clean {clean}, dirty {dirty}");
}

#[test]
fn residual_is_second_order_in_time_step() {
    // Exact solution x = cos t of the shaft form, so only the stencil error
    // remains: doubling the step should multiply the residual by about 4.
    let model = ForceModel::Kapitza { params: KapitzaParams { k: 1.0, b: 0.0 }, form: KapitzaForm::Shaft };
    let samples = (0..=400)
        .map(|i| {
            let t = i as f64 * 0.01;
            PhaseState::new(t, t.cos(), 0.0, -t.sin(), 0.0)
        })
        .collect();
    let traj = Trajectory {
        samples,
        lorentz: None,
        invariants: Vec::new(),
        termination: curlforce::Termination::Completed,
    };
    let ratio = residual(&model, &traj, 2) / residual(&model, &traj, 1);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}
