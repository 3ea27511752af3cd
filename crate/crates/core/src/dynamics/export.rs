//! Trajectory export as JSON lines and CSV.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Diagnostics, TrajectoryRecord};
use crate::geometry::ManifoldPoint;

/// One recorded time of a trajectory, as written to JSONL.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLine {
    pub t: f64,
    pub points: Vec<ManifoldPoint>,
    pub weights: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl TrajectoryRecord {
    pub fn lines(&self) -> impl Iterator<Item = TrajectoryLine> + '_ {
        self.times
            .iter()
            .zip(&self.measures)
            .zip(&self.diagnostics)
            .map(|((&t, rho), d)| TrajectoryLine {
                t,
                points: rho.points().to_vec(),
                weights: rho.weights().to_vec(),
                diagnostics: *d,
            })
    }

    /// One JSON object per recorded time.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for line in self.lines() {
            out.push_str(&serde_json::to_string(&line).expect("trajectory lines serialize"));
            out.push('\n');
        }
        out
    }

    /// Rows `t, particle_id, x0, x1, ..., speed`.
    pub fn to_csv(&self) -> String {
        let dim = self.reference.dim();
        let mut out = String::from("t,particle_id");
        for k in 0..dim {
            let _ = write!(out, ",x{k}");
        }
        out.push_str(",speed\n");
        for ((t, rho), speeds) in self.times.iter().zip(&self.measures).zip(&self.speeds) {
            for (i, (p, s)) in rho.points().iter().zip(speeds).enumerate() {
                let _ = write!(out, "{t:.16e},{i}");
                for c in &p.coords {
                    let _ = write!(out, ",{c:.16e}");
                }
                let _ = writeln!(out, ",{s:.16e}");
            }
        }
        out
    }
}

/// Parses JSONL written by [`TrajectoryRecord::to_jsonl`].
pub fn parse_jsonl(s: &str) -> Result<Vec<TrajectoryLine>, serde_json::Error> {
    s.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
