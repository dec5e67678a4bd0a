use curlforce::{
    lorentz_factors, momenta_from_velocity, velocity_from_momenta, Momenta, PhaseState, Regime,
    RelativityParams,
};
use proptest::prelude::*;

fn moving(vx: f64, vy: f64) -> PhaseState {
    PhaseState::new(0.0, 0.0, 0.0, vx, vy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn velocity_momentum_round_trip(
        vx in -0.999f64..0.999,
        vy in -3.0f64..3.0,
        c in 0.5f64..4.0,
    ) {
        let rel = RelativityParams::new(c).unwrap();
        let s = moving(vx * c, vy * c);
        let regime = Regime::Relativistic(rel);
        let m = momenta_from_velocity(&s, regime).unwrap();
        let (vx2, vy2) = velocity_from_momenta(m, regime).unwrap();
        let back = momenta_from_velocity(&moving(vx2, vy2), regime).unwrap();
        let scale = m.px.abs().max(m.py.abs()).max(1e-300);
        prop_assert!((back.px - m.px).abs() <= 1e-12 * scale);
        prop_assert!((back.py - m.py).abs() <= 1e-12 * scale);
        prop_assert!((vx2 - s.vx).abs() <= 1e-12 * s.vx.abs().max(s.vy.abs()).max(1e-300));
    }

    #[test]
    fn factor_bounds(vx in -0.999f64..0.999, vy in -10.0f64..10.0) {
        let f = lorentz_factors(&moving(vx, vy), RelativityParams::unit()).unwrap();
        prop_assert!(f.gamma > 0.0);
        prop_assert!(f.gamma_x >= 1.0);
        prop_assert!(f.gamma_y > 0.0 && f.gamma_y <= 1.0);
    }

    #[test]
    fn newtonian_maps_are_exact(vx in -1e3f64..1e3, vy in -1e3f64..1e3) {
        let m = momenta_from_velocity(&moving(vx, vy), Regime::NonRelativistic).unwrap();
        prop_assert_eq!(m, Momenta { px: vx, py: -vy });
        prop_assert_eq!(velocity_from_momenta(m, Regime::NonRelativistic).unwrap(), (vx, vy));
    }
}

#[test]
fn gamma_x_increases_with_speed() {
    let rel = RelativityParams::unit();
    let grid: Vec<f64> = (0..200).map(|i| i as f64 * 0.995 / 199.0).collect();
    for w in grid.windows(2) {
        let a = lorentz_factors(&moving(w[0], 0.3), rel).unwrap().gamma_x;
        let b = lorentz_factors(&moving(w[1], 0.3), rel).unwrap().gamma_x;
        assert!(b > a);
        let a = lorentz_factors(&moving(-w[0], 0.3), rel).unwrap().gamma_x;
        let b = lorentz_factors(&moving(-w[1], 0.3), rel).unwrap().gamma_x;
        assert!(b > a);
    }
}

#[test]
fn gamma_y_decreases_with_speed() {
    let rel = RelativityParams::unit();
    let grid: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
    for w in grid.windows(2) {
        let a = lorentz_factors(&moving(0.2, w[0]), rel).unwrap().gamma_y;
        let b = lorentz_factors(&moving(0.2, w[1]), rel).unwrap().gamma_y;
        assert!(b < a);
    }
}

#[test]
fn gamma_tends_to_one_at_rest() {
    let rel = RelativityParams::unit();
    for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
        let f = lorentz_factors(&moving(eps, -eps / 2.0), rel).unwrap();
        assert!((f.gamma - 1.0).abs() < eps);
        assert!((f.gamma_x - 1.0).abs() < eps);
        assert!((f.gamma_y - 1.0).abs() < eps);
    }
}

#[test]
fn round_trip_example() {
    let regime = Regime::Relativistic(RelativityParams::unit());
    let m = Momenta { px: 0.3, py: -0.4 };
    let (vx, vy) = velocity_from_momenta(m, regime).unwrap();
    let back = momenta_from_velocity(&moving(vx, vy), regime).unwrap();
    assert!((back.px - 0.3).abs() < 1e-15 && (back.py + 0.4).abs() < 1e-15);
}
