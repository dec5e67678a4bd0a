//! Trapped-versus-escaped classification and parameter sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::{integrate, IntegratorConfig, Termination, Trajectory};
use crate::kinematics::PhaseState;
use crate::models::ForceModel;

/// Horizons of the short/long verdict pair.
pub const SHORT_HORIZON: f64 = 20.0;
pub const LONG_HORIZON: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrapCriteria {
    pub r_escape: f64,
    pub horizon: f64,
    /// A trajectory that never leaves this radius is trapped outright.
    pub r_floor: f64,
}

impl Default for TrapCriteria {
    fn default() -> Self {
        Self {
            r_escape: 10.0,
            horizon: LONG_HORIZON,
            r_floor: 0.0,
        }
    }
}

impl TrapCriteria {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_floor >= 0.0 && self.r_escape > self.r_floor && self.r_escape.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need r_escape > r_floor ≥ 0, got r_escape={} r_floor={}",
                self.r_escape, self.r_floor
            )));
        }
        if self.horizon.is_nan() || self.horizon <= 0.0 {
            return Err(Error::InvalidConfig(format!("horizon must be positive, got {}", self.horizon)));
        }
        Ok(())
    }

    pub fn with_horizon(self, horizon: f64) -> Self {
        Self { horizon, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Trapped,
    Escaped,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapVerdict {
    pub classification: Classification,
    pub escape_time: Option<f64>,
    pub max_radius: f64,
    pub final_radius: f64,
}

/// Classifies the part of `traj` with `t − t₀ ≤ horizon`.
///
/// Escaped at the first sample beyond `r_escape`. Otherwise Trapped when
/// the window covers the whole horizon (or the orbit never leaves
/// `r_floor`), and Undecided when the run stopped short of the horizon.
/// Radius statistics cover the same window.
pub fn classify(traj: &Trajectory, crit: &TrapCriteria) -> TrapVerdict {
    let t0 = traj.first().t;
    let end = t0 + crit.horizon;
    // Absorb rounding in grid times such as t0 + 20000·0.01.
    let slack = 1e-9 * end.abs().max(1.0);
    let window: Vec<&PhaseState> = traj.samples.iter().take_while(|s| s.t <= end + slack).collect();

    let mut max_radius: f64 = 0.0;
    let mut final_radius = 0.0;
    for s in &window {
        let r = s.radius();
        max_radius = max_radius.max(r);
        final_radius = r;
        if r > crit.r_escape {
            return TrapVerdict {
                classification: Classification::Escaped,
                escape_time: Some(s.t),
                max_radius,
                final_radius,
            };
        }
    }
    let covered = window.last().is_some_and(|s| s.t >= end - slack);
    let classification = if max_radius <= crit.r_floor || covered {
        Classification::Trapped
    } else {
        Classification::Undecided
    };
    TrapVerdict {
        classification,
        escape_time: None,
        max_radius,
        final_radius,
    }
}

/// Verdicts over the short and long horizons, from one trajectory.
pub fn two_horizon(traj: &Trajectory, crit: &TrapCriteria) -> (TrapVerdict, TrapVerdict) {
    (
        classify(traj, &crit.with_horizon(SHORT_HORIZON)),
        classify(traj, &crit.with_horizon(LONG_HORIZON)),
    )
}

/// Cartesian product of named parameter values, first axis slowest.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParamGrid {
    axes: Vec<(String, Vec<f64>)>,
}

impl ParamGrid {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn axis(mut self, name: impl Into<String>, values: Vec<f64>) -> Self {
        self.axes.push((name.into(), values));
        self
    }

    /// `count` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(self, name: impl Into<String>, start: f64, stop: f64, count: usize) -> Self {
        let values = match count {
            0 => Vec::new(),
            1 => vec![start],
            n => (0..n)
                .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                .collect(),
        };
        self.axis(name, values)
    }

    pub fn points(&self) -> Vec<Vec<(String, f64)>> {
        let mut points = vec![Vec::new()];
        for (name, values) in &self.axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push((name.clone(), *v));
                        q
                    })
                })
                .collect();
        }
        if self.axes.is_empty() {
            Vec::new()
        } else {
            points
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub params: Vec<(String, f64)>,
    pub verdict: TrapVerdict,
    pub termination: Option<Termination>,
    /// Set when the grid point could not be run at all.
    pub error: Option<String>,
}

/// Integrates and classifies every grid point, in parallel. Rows come back
/// in grid order; a failing point yields an Undecided row carrying the
/// error instead of aborting the sweep.
pub fn sweep(
    template: &ForceModel,
    grid: &ParamGrid,
    ic: &PhaseState,
    cfg: &IntegratorConfig,
    crit: &TrapCriteria,
) -> Result<Vec<SweepRow>> {
    let points = grid.points();
    if points.is_empty() {
        return Err(Error::InvalidConfig("parameter grid is empty".into()));
    }
    crit.validate()?;
    Ok(points
        .into_par_iter()
        .map(|params| run_point(template, params, ic, cfg, crit))
        .collect())
}

fn run_point(
    template: &ForceModel,
    params: Vec<(String, f64)>,
    ic: &PhaseState,
    cfg: &IntegratorConfig,
    crit: &TrapCriteria,
) -> SweepRow {
    let outcome = (|| {
        let mut model = template.clone();
        for (name, value) in &params {
            model.set_param(name, *value)?;
        }
        model.validate()?;
        integrate(&model, ic, cfg)
    })();
    match outcome {
        Ok(traj) => SweepRow {
            params,
            verdict: classify(&traj, crit),
            termination: Some(traj.termination),
            error: None,
        },
        Err(e) => SweepRow {
            params,
            verdict: TrapVerdict {
                classification: Classification::Undecided,
                escape_time: None,
                max_radius: ic.radius(),
                final_radius: ic.radius(),
            },
            termination: None,
            error: Some(e.to_string()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(points: &[(f64, f64, f64)], termination: Termination) -> Trajectory {
        Trajectory {
            samples: points.iter().map(|&(t, x, y)| PhaseState::new(t, x, y, 0.0, 0.0)).collect(),
            lorentz: None,
            invariants: Vec::new(),
            termination,
        }
    }

    #[test]
    fn resting_at_origin_is_trapped() {
        let tr = traj(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)], Termination::Completed);
        let v = classify(&tr, &TrapCriteria::default());
        assert_eq!(v.classification, Classification::Trapped);
        assert_eq!(v.max_radius, 0.0);
    }

    #[test]
    fn first_crossing_is_escape_time() {
        let tr = traj(
            &[(0.0, 1.0, 0.0), (1.0, 8.0, 0.0), (2.0, 11.0, 0.0), (3.0, 30.0, 0.0)],
            Termination::Completed,
        );
        let v = classify(&tr, &TrapCriteria::default());
        assert_eq!(v.classification, Classification::Escaped);
        assert_eq!(v.escape_time, Some(2.0));
    }

    #[test]
    fn early_stop_inside_is_undecided() {
        let tr = traj(&[(0.0, 1.0, 0.0), (5.0, 2.0, 0.0)], Termination::GammaUndefined);
        let v = classify(&tr, &TrapCriteria::default());
        assert_eq!(v.classification, Classification::Undecided);
        let short = classify(&tr, &TrapCriteria::default().with_horizon(5.0));
        assert_eq!(short.classification, Classification::Trapped);
    }

    #[test]
    fn window_ignores_later_escape() {
        let tr = traj(&[(0.0, 1.0, 0.0), (20.0, 1.0, 0.0), (30.0, 50.0, 0.0)], Termination::Completed);
        let (short, long) = two_horizon(&tr, &TrapCriteria::default());
        assert_eq!(short.classification, Classification::Trapped);
        assert_eq!(long.classification, Classification::Escaped);
    }

    #[test]
    fn grid_is_cartesian_in_order() {
        let g = ParamGrid::new().axis("a", vec![1.0, 2.0]).axis("b", vec![3.0, 4.0, 5.0]);
        let pts = g.points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![("a".to_string(), 1.0), ("b".to_string(), 3.0)]);
        assert_eq!(pts[5], vec![("a".to_string(), 2.0), ("b".to_string(), 5.0)]);
        assert_eq!(ParamGrid::new().linspace("x", 0.0, 1.0, 3).points().len(), 3);
    }

    #[test]
    fn criteria_validation() {
        assert!(TrapCriteria { r_escape: 1.0, horizon: 1.0, r_floor: 2.0 }.validate().is_err());
        assert!(TrapCriteria { horizon: 0.0, ..Default::default() }.validate().is_err());
        assert!(TrapCriteria::default().validate().is_ok());
    }
}
