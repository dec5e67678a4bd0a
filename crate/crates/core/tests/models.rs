use curlforce::models::*;
use curlforce::{PhaseState, RelativityParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed)
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

fn quadratic_shapes() -> (Polynomial, Polynomial) {
    (
        Polynomial::new(vec![1.0, 0.7, -0.3]).unwrap(),
        Polynomial::new(vec![0.5, -1.1, 0.4]).unwrap(),
    )
}

fn relativistic_catalogue(rel: RelativityParams, phase: DrivePhase) -> Vec<ForceModel> {
    let (g, f) = quadratic_shapes();
    vec![
        ForceModel::RelKapitza { params: KapitzaParams { k: 1.3, b: -0.4 }, rel },
        ForceModel::RelRotatingSaddle {
            params: RotatingSaddleParams { lambda: 0.8, omega: 0.6 },
            rel,
            phase,
        },
        ForceModel::RelMonkey { params: MonkeySaddleParams { k1: 0.9, k2: -1.7 }, rel },
        ForceModel::RelRotatingMonkey {
            params: RotatingMonkeyParams { lambda: 0.5, alpha1: 1.2, alpha2: -0.8, omega: 0.45 },
            rel,
            phase,
        },
        ForceModel::RelFlap {
            params: FlappingParams { amplitude: 0.3, omega: 0.7, g, f },
            rel,
            phase,
            time: FlapTime::Physical,
        },
    ]
}

/// The force each relativistic model must reduce to when the particle is at rest.
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
            (
                -(s.x * gp * cos + s.y * fp * sin),
                -s.y * gp * cos + s.x * fp * sin,
            )
        }
        _ => unreachable!(),
    }
}

#[test]
fn zero_velocity_reduction() {
    let mut r = rng();
    for phase in [DrivePhase::Lorentz, DrivePhase::Frozen] {
        for model in relativistic_catalogue(RelativityParams::new(1.7).unwrap(), phase) {
            for _ in 0..100 {
                let s = PhaseState { vx: 0.0, vy: 0.0, ..random_point(&mut r) };
                let (ax, ay) = model.acceleration(&s).unwrap();
                let (ex, ey) = rest_limit(&model, &s);
                assert!(
                    (ax - ex).abs() <= 1e-12 && (ay - ey).abs() <= 1e-12,
                    "{}: ({ax}, {ay}) vs ({ex}, {ey}) at {s:?}",
                    model.id()
                );
            }
        }
    }
}

fn newtonian_catalogue() -> Vec<ForceModel> {
    let (g, f) = quadratic_shapes();
    vec![
        ForceModel::Kapitza { params: KapitzaParams { k: 1.3, b: -0.4 }, form: KapitzaForm::Shaft },
        ForceModel::Kapitza { params: KapitzaParams { k: 1.3, b: -0.4 }, form: KapitzaForm::Corollary },
        ForceModel::RotatingSaddle(RotatingSaddleParams { lambda: 0.8, omega: 0.6 }),
        ForceModel::Monkey(MonkeySaddleParams { k1: 0.9, k2: -1.7 }),
        ForceModel::FlappingNewton(FlappingParams { amplitude: 0.3, omega: 0.7, g, f }),
    ]
}

#[test]
fn origin_is_a_fixed_point() {
    let mut r = rng();
    let mut all = newtonian_catalogue();
    all.extend(relativistic_catalogue(RelativityParams::unit(), DrivePhase::Lorentz));
    for model in all {
        for _ in 0..100 {
            let s = PhaseState { x: 0.0, y: 0.0, ..random_point(&mut r) };
            assert_eq!(model.acceleration(&s).unwrap(), (0.0, 0.0), "{}", model.id());
        }
    }
}

/// Divergence of (vx, vy, ax, ay) over (x, y, vx, vy).
fn phase_divergence(model: &ForceModel, s: &PhaseState) -> f64 {
    let h = 1e-6;
    let a = |vx: f64, vy: f64| model.acceleration(&PhaseState { vx, vy, ..*s }).unwrap();
    let dax = (a(s.vx + h, s.vy).0 - a(s.vx - h, s.vy).0) / (2.0 * h);
    let day = (a(s.vx, s.vy + h).1 - a(s.vx, s.vy - h).1) / (2.0 * h);
    // ∂ẋ/∂x = ∂ẏ/∂y = 0 identically.
    dax + day
}

#[test]
fn newtonian_flows_preserve_phase_volume() {
    let mut r = rng();
    for model in newtonian_catalogue() {
        for _ in 0..100 {
            let div = phase_divergence(&model, &random_point(&mut r));
            assert!(div.abs() <= 1e-8, "{}: divergence {div}", model.id());
        }
    }
}

#[test]
fn relativistic_flows_are_not_divergence_free() {
    // The velocity coupling compresses phase space; this pins down that
    // the divergence probe can see it.
    let model = &relativistic_catalogue(RelativityParams::unit(), DrivePhase::Frozen)[0];
    let s = PhaseState::new(0.0, 0.8, -0.3, 0.4, 0.6);
    assert!(phase_divergence(model, &s).abs() > 1e-3);
}

#[test]
fn monkey_saddle_modulus_identity() {
    let mut r = rng();
    for _ in 0..1000 {
        let (x, y): (f64, f64) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let lhs = monkey_g2(x, y).powi(2) + monkey_g2_rotated(x, y).powi(2);
        let rhs = (x * x + y * y).powi(3);
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }
}

#[test]
fn curl_components_sum_to_finite_difference_curl() {
    let mut r = rng();
    for _ in 0..20 {
        let p = GeneralCurlParams {
            alpha: r.gen_range(-2.0..2.0),
            beta: r.gen_range(-2.0..2.0),
            gamma_c: r.gen_range(-2.0..2.0),
            a: r.gen_range(-2.0..2.0),
            b: r.gen_range(-2.0..2.0),
            c_pot: r.gen_range(-2.0..2.0),
        };
        let (ci, cj) = curl_components(&p);
        assert_eq!(ci, (p.alpha - p.gamma_c) * p.b);
        assert_eq!(cj, p.beta * (p.c_pot - p.a));

        let (x, y) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let h = 1e-5;
        let dfy_dx = (p.accel(x + h, y).1 - p.accel(x - h, y).1) / (2.0 * h);
        let dfx_dy = (p.accel(x, y + h).0 - p.accel(x, y - h).0) / (2.0 * h);
        assert!((dfy_dx - dfx_dy - (ci + cj)).abs() < 1e-8);
    }
}

#[test]
fn kapitza_hamiltonian_is_the_general_form_with_opposite_kinetic_signs() {
    // α = 1 = −γ, β = 0, U = ½k(x² − y²) + bxy gives the shaft form.
    let (k, b) = (0.7, 1.9);
    let general = GeneralCurlParams { alpha: 1.0, beta: 0.0, gamma_c: -1.0, a: k, b, c_pot: -k };
    let s = PhaseState::at_rest(0.3, -1.2);
    let (gx, gy) = general.accel(s.x, s.y);
    let (ax, ay) = accel_kapitza(&s, &KapitzaParams { k, b }, KapitzaForm::Shaft);
    assert!((gx - ax).abs() < 1e-15 && (gy - ay).abs() < 1e-15);
}

#[test]
fn rel_acceleration_fails_past_light_speed() {
    for model in relativistic_catalogue(RelativityParams::unit(), DrivePhase::Lorentz) {
        let s = PhaseState::new(0.0, 0.3, 0.2, 1.2, 0.1);
        assert!(matches!(
            model.acceleration(&s),
            Err(curlforce::Error::GammaUndefined { .. })
        ));
    }
}
