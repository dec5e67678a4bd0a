//! Running scenarios and sweeps, and writing their artifacts.

use std::collections::BTreeMap;
use std::path::PathBuf;

use curlforce::integrators::Termination;
use curlforce::invariants::{annotate, el_residual, max_residual, ElOptions};
use curlforce::models::DrivePhase;
use curlforce::trapping::{classify, sweep, two_horizon, ParamGrid, SweepRow, TrapVerdict};
use curlforce::{integrate, ModelId, Trajectory};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::output::{render, rows, write_atomic};
use crate::scenario::{validate, Format, Scenario};

/// Command-line adjustments applied on top of a scenario document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub rtol: Option<f64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub freeze_gamma_phase: bool,
    pub horizon: Option<f64>,
    pub r_escape: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, sc: &mut Scenario) -> Result<()> {
        if let Some(dir) = &self.out_dir {
            sc.outputs.dir = dir.clone();
        }
        if let Some(f) = self.format {
            sc.outputs.format = f;
        }
        if let Some(v) = self.rtol {
            sc.integrator.rtol = v;
        }
        if let Some(v) = self.dt {
            sc.integrator.dt = v;
        }
        if let Some(v) = self.t_end {
            sc.integrator.t_end = v;
        }
        if let Some(v) = self.horizon {
            sc.trapping.horizon = v;
        }
        if let Some(v) = self.r_escape {
            sc.trapping.r_escape = v;
        }
        if self.freeze_gamma_phase {
            if sc.model.drive_phase().is_none() {
                return Err(CliError::validation(
                    "--freeze-gamma-phase",
                    format!("model `{}` has no Lorentz-dilated drive phase", sc.model.id()),
                ));
            }
            sc.model.set_drive_phase(DrivePhase::Frozen);
        }
        validate(sc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub model: ModelId,
    pub termination: Termination,
    pub t_final: f64,
    pub samples: usize,
    pub verdict_h20: TrapVerdict,
    pub verdict_h200: TrapVerdict,
    /// Verdict at the scenario's own horizon.
    pub verdict: TrapVerdict,
    pub escape_time: Option<f64>,
    pub max_radius: f64,
    pub invariant_drifts: BTreeMap<String, f64>,
    /// `None` when the model has no Lagrangian.
    pub el_residual_max: Option<f64>,
}

/// Integrates a scenario and summarizes it, without touching the disk.
pub fn simulate(sc: &Scenario) -> Result<(Trajectory, Summary)> {
    let mut traj = integrate(&sc.model, &sc.ic, &sc.integrator)?;
    if sc.outputs.invariants {
        annotate(&sc.model, &mut traj)?;
    }
    let (verdict_h20, verdict_h200) = two_horizon(&traj, &sc.trapping);
    let verdict = classify(&traj, &sc.trapping);
    let el_residual_max = if sc.model.has_lagrangian() {
        Some(max_residual(&el_residual(&sc.model, &traj, ElOptions::default())?))
    } else {
        None
    };
    let summary = Summary {
        scenario: sc.name.clone(),
        model: sc.model.id(),
        termination: traj.termination,
        t_final: traj.last().t,
        samples: traj.len(),
        verdict_h20,
        verdict_h200,
        verdict,
        escape_time: verdict.escape_time,
        max_radius: verdict.max_radius,
        invariant_drifts: traj
            .invariants
            .iter()
            .map(|r| (r.name.to_string(), r.max_rel_drift))
            .collect(),
        el_residual_max,
    };
    Ok((traj, summary))
}

#[derive(Debug)]
pub struct RunArtifacts {
    pub trajectory: Trajectory,
    pub summary: Summary,
    pub trajectory_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Runs a scenario and writes `<name>.<csv|jsonl>` and `<name>.summary.json`
/// into the output directory.
pub fn run_scenario(sc: &Scenario) -> Result<RunArtifacts> {
    let (trajectory, summary) = simulate(sc)?;
    let dir = &sc.outputs.dir;
    let trajectory_path = dir.join(format!("{}.{}", sc.name, sc.outputs.format.extension()));
    let summary_path = dir.join(format!("{}.summary.json", sc.name));
    let data = render(&rows(&sc.model, &trajectory, sc.outputs.invariants), sc.outputs.format);
    write_atomic(&trajectory_path, &data)?;
    let mut json = serde_json::to_string_pretty(&summary).expect("summaries always serialize");
    json.push('\n');
    write_atomic(&summary_path, &json)?;
    Ok(RunArtifacts {
        trajectory,
        summary,
        trajectory_path,
        summary_path,
    })
}

/// One `--vary key=start:stop:count` axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Vary {
    pub key: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl std::str::FromStr for Vary {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::validation("--vary", format!("expected key=start:stop:count, got `{s}`"));
        let (key, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(bad());
        };
        let start: f64 = start.trim().parse().map_err(|_| bad())?;
        let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        if key.trim().is_empty() || count == 0 || !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        Ok(Vary {
            key: key.trim().to_string(),
            start,
            stop,
            count,
        })
    }
}

/// Sweeps the scenario over the given axes and writes `<name>.sweep.csv`.
pub fn run_sweep(sc: &Scenario, axes: &[Vary]) -> Result<(Vec<SweepRow>, PathBuf)> {
    if axes.is_empty() {
        return Err(CliError::validation("--vary", "at least one axis is required"));
    }
    let mut grid = ParamGrid::new();
    for axis in axes {
        // Reject unknown keys up front rather than as failed rows.
        sc.model
            .clone()
            .set_param(&axis.key, axis.start)
            .map_err(|e| CliError::validation(format!("--vary {}", axis.key), e.to_string()))?;
        grid = grid.linspace(axis.key.clone(), axis.start, axis.stop, axis.count);
    }
    let table = sweep(&sc.model, &grid, &sc.ic, &sc.integrator, &sc.trapping)?;
    let path = sc.outputs.dir.join(format!("{}.sweep.csv", sc.name));
    write_atomic(&path, &sweep_csv(axes, &table))?;
    Ok((table, path))
}

fn sweep_csv(axes: &[Vary], table: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = axes.iter().map(|a| a.key.as_str()).collect();
    header.extend(["classification", "escape_time", "max_radius", "final_radius", "termination", "error"]);
    w.write_record(&header).expect("writing to memory cannot fail");
    for row in table {
        let mut fields: Vec<String> = row.params.iter().map(|(_, v)| format!("{v:.16e}")).collect();
        let v = &row.verdict;
        fields.push(format!("{:?}", v.classification));
        fields.push(v.escape_time.map(|t| format!("{t:.16e}")).unwrap_or_default());
        fields.push(format!("{:.16e}", v.max_radius));
        fields.push(format!("{:.16e}", v.final_radius));
        fields.push(row.termination.map(termination_name).unwrap_or_default());
        fields.push(row.error.clone().unwrap_or_default());
        w.write_record(&fields).expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory cannot fail")).expect("UTF-8 fields")
}

fn termination_name(t: Termination) -> String {
    match serde_json::to_value(t) {
        Ok(serde_json::Value::String(s)) => s,
        _ => unreachable!("terminations serialize as strings"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    #[test]
    fn vary_parsing() {
        let v: Vary = "omega=0.1:1.0:10".parse().unwrap();
        assert_eq!(v, Vary { key: "omega".into(), start: 0.1, stop: 1.0, count: 10 });
        for bad in ["omega", "omega=1:2", "omega=a:2:3", "omega=1:2:0", "=1:2:3"] {
            assert!(bad.parse::<Vary>().is_err(), "{bad}");
        }
    }

    #[test]
    fn overrides_apply_and_revalidate() {
        let mut sc = parse_scenario(r#"{"model": "rotating_saddle", "Lambda": 1, "omega": 2}"#).unwrap();
        let o = Overrides { t_end: Some(3.0), r_escape: Some(5.0), ..Default::default() };
        o.apply(&mut sc).unwrap();
        assert_eq!((sc.integrator.t_end, sc.trapping.r_escape), (3.0, 5.0));
        let freeze = Overrides { freeze_gamma_phase: true, ..Default::default() };
        assert!(freeze.apply(&mut sc).is_err());
        let bad = Overrides { t_end: Some(-1.0), ..Default::default() };
        assert!(matches!(bad.apply(&mut sc), Err(CliError::Validation { .. })));
    }

    #[test]
    fn summary_of_a_kapitza_run() {
        let sc = parse_scenario(
            r#"{"model": "kapitza", "k": 1, "b": 0.5, "ic": {"x": 1, "y": 0.1},
                "integrator": {"t_end": 5, "sample_interval": 0.01}}"#,
        )
        .unwrap();
        let (traj, s) = simulate(&sc).unwrap();
        assert_eq!(s.samples, traj.len());
        assert_eq!(s.termination, Termination::Completed);
        assert!(s.invariant_drifts["H_nonrel"] < 1e-8);
        assert!(s.invariant_drifts.contains_key("I_fradkin"));
        assert!(s.el_residual_max.unwrap() < 1e-4);
    }

    #[test]
    fn sweep_csv_quotes_errors() {
        let axes = ["c=1:1:1".parse::<Vary>().unwrap()];
        let row = SweepRow {
            params: vec![("c".into(), -1.0)],
            verdict: TrapVerdict {
                classification: curlforce::Classification::Undecided,
                escape_time: None,
                max_radius: 0.0,
                final_radius: 0.0,
            },
            termination: None,
            error: Some("bad c, \"negative\"".into()),
        };
        let text = sweep_csv(&axes, &[row]);
        assert!(text.ends_with(",\"bad c, \"\"negative\"\"\"\n"), "{text}");
        assert_eq!(termination_name(Termination::GammaUndefined), "gamma_undefined");
    }
}
