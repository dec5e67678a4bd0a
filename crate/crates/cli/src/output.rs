//! Trajectory files.
//!
//! CSV uses a fixed header and `{:.16e}` numbers: 17 significant digits,
//! `.` as decimal separator, so every value parses back to the same bits.
//! Columns a model does not define are left empty. JSONL writes one object
//! per sample with `null` in those places.

use std::fs;
use std::path::Path;

use curlforce::invariants::{energy_rel, fradkin_tensor, hamiltonian_eff_rel, hamiltonian_nonrel};
use curlforce::{ForceModel, Trajectory};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::scenario::Format;

pub const CSV_HEADER: &str = "t,x,y,vx,vy,gamma,gamma_x,gamma_y,H,I,E,r";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub gamma: Option<f64>,
    pub gamma_x: Option<f64>,
    pub gamma_y: Option<f64>,
    /// `H_nonrel` for kapitza, the effective relativistic `H` for rel_kapitza.
    #[serde(rename = "H")]
    pub h: Option<f64>,
    #[serde(rename = "I")]
    pub i: Option<f64>,
    #[serde(rename = "E")]
    pub e: Option<f64>,
    pub r: f64,
}

/// One row per sample. Invariant columns stay empty unless `invariants`.
pub fn rows(model: &ForceModel, traj: &Trajectory, invariants: bool) -> Vec<OutputRow> {
    traj.samples
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let lf = traj.lorentz.as_ref().map(|l| l[k]);
            let (mut h, mut i, mut e) = (None, None, None);
            if invariants {
                match model {
                    ForceModel::Kapitza { params, .. } => {
                        h = Some(hamiltonian_nonrel(s, params));
                        i = Some(fradkin_tensor(s, params));
                    }
                    ForceModel::RelKapitza { params, rel } => {
                        h = hamiltonian_eff_rel(s, params, *rel).ok();
                        e = energy_rel(s, model).ok();
                    }
                    ForceModel::RelMonkey { .. } => e = energy_rel(s, model).ok(),
                    _ => {}
                }
            }
            OutputRow {
                t: s.t,
                x: s.x,
                y: s.y,
                vx: s.vx,
                vy: s.vy,
                gamma: lf.map(|l| l.gamma),
                gamma_x: lf.map(|l| l.gamma_x),
                gamma_y: lf.map(|l| l.gamma_y),
                h,
                i,
                e,
                r: s.radius(),
            }
        })
        .collect()
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn to_csv(rows: &[OutputRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::with_capacity(32 + rows.len() * 200));
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    w.write_record(&header).expect("writing to memory cannot fail");
    for row in rows {
        let fields = [
            num(row.t),
            num(row.x),
            num(row.y),
            num(row.vx),
            num(row.vy),
            opt(row.gamma),
            opt(row.gamma_x),
            opt(row.gamma_y),
            opt(row.h),
            opt(row.i),
            opt(row.e),
            num(row.r),
        ];
        w.write_record(&fields).expect("writing to memory cannot fail");
    }
    let bytes = w.into_inner().expect("flushing to memory cannot fail");
    String::from_utf8(bytes).expect("numbers are ASCII")
}

pub fn to_jsonl(rows: &[OutputRow]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("rows always serialize"));
        out.push('\n');
    }
    out
}

pub fn render(rows: &[OutputRow], format: Format) -> String {
    match format {
        Format::Csv => to_csv(rows),
        Format::Jsonl => to_jsonl(rows),
    }
}

/// Parses a file produced by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<OutputRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::validation("csv", e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(CliError::validation("csv", "unexpected header"));
    }
    reader
        .deserialize()
        .map(|row| {
            row.map_err(|e| CliError::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                column: 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Writes `contents` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    fs::write(tmp, contents).map_err(|e| CliError::io(tmp, e))?;
    fs::rename(tmp, path).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64) -> OutputRow {
        OutputRow {
            t,
            x: 0.1,
            y: -1.0 / 3.0,
            vx: 1e-300,
            vy: f64::MIN_POSITIVE,
            gamma: Some(1.25),
            gamma_x: None,
            gamma_y: Some(std::f64::consts::PI),
            h: None,
            i: Some(-0.0),
            e: None,
            r: 2.0f64.sqrt(),
        }
    }

    #[test]
    fn csv_round_trips_bitwise() {
        let rows = vec![row(0.0), row(0.01)];
        let text = to_csv(&rows);
        assert!(text.starts_with("t,x,y,vx,vy,gamma,gamma_x,gamma_y,H,I,E,r\n"));
        let back = parse_csv(&text).unwrap();
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.y.to_bits(), b.y.to_bits());
            assert_eq!(a.i.unwrap().to_bits(), b.i.unwrap().to_bits());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn empty_columns_stay_empty() {
        let line = to_csv(&[row(1.0)]).lines().nth(1).unwrap().to_string();
        let fields: Vec<_> = line.split(',').collect();
        assert_eq!(fields.len(), 12);
        assert_eq!(fields[6], "");
        assert_eq!(fields[8], "");
        assert_eq!(fields[0], "1.0000000000000000e0");
    }

    #[test]
    fn jsonl_uses_null() {
        let text = to_jsonl(&[row(0.0)]);
        let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
        assert!(v["gamma_x"].is_null());
        assert_eq!(v["gamma"], 1.25);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("a.csv");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
