//! Empirical probability measures, push-forward, and the exact intrinsic
//! 1-Wasserstein distance.

mod assignment;
mod simplex;
pub mod oracle;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Manifold, ManifoldPoint};

/// Tolerance on `sum(weights) = 1`.
pub const MASS_TOL: f64 = 1e-12;

/// A finite weighted sum of Diracs with total mass one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct EmpiricalMeasure {
    points: Vec<ManifoldPoint>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMeasure {
    points: Vec<ManifoldPoint>,
    weights: Vec<f64>,
}

impl TryFrom<RawMeasure> for EmpiricalMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        EmpiricalMeasure::new(raw.points, raw.weights)
    }
}

impl EmpiricalMeasure {
    pub fn new(points: Vec<ManifoldPoint>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMeasure("a measure needs at least one point".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidMeasure(format!("weight {w} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        let dim = points[0].dim();
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::InvalidMeasure("points of mixed dimension".into()));
        }
        Ok(EmpiricalMeasure { points, weights })
    }

    /// Equal weights `1/N`.
    pub fn uniform(points: Vec<ManifoldPoint>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn dirac(p: ManifoldPoint) -> Self {
        EmpiricalMeasure {
            points: vec![p],
            weights: vec![1.0],
        }
    }

    pub fn points(&self) -> &[ManifoldPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same weights, new locations.
    pub fn with_points(&self, points: Vec<ManifoldPoint>) -> Result<Self> {
        if points.len() != self.len() {
            return Err(Error::InvalidMeasure(format!(
                "expected {} points, got {}",
                self.len(),
                points.len()
            )));
        }
        Ok(EmpiricalMeasure {
            points,
            weights: self.weights.clone(),
        })
    }

    /// Checks every point against the invariants of `m`.
    pub fn validate_on(&self, m: &Manifold) -> Result<()> {
        self.points.iter().try_for_each(|p| m.validate_point(p))
    }

    /// Whether all weights equal `1/N` exactly.
    pub fn is_uniform(&self) -> bool {
        let w = 1.0 / self.len() as f64;
        self.weights.iter().all(|x| *x == w)
    }

    /// `∫ f dρ`.
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&ManifoldPoint) -> Result<f64>,
    {
        let mut acc = 0.0;
        for (p, w) in self.points.iter().zip(&self.weights) {
            acc += w * f(p)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measures always serialize")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// `Ψ#ρ`: moves every atom through `map`, keeping its weight.
pub fn push_forward<F>(rho: &EmpiricalMeasure, map: F) -> Result<EmpiricalMeasure>
where
    F: Fn(&ManifoldPoint) -> Result<ManifoldPoint>,
{
    let points = rho.points.iter().map(map).collect::<Result<Vec<_>>>()?;
    rho.with_points(points)
}

/// `max_i d(p, x_i)`.
pub fn support_radius(m: &Manifold, rho: &EmpiricalMeasure, p: &ManifoldPoint) -> Result<f64> {
    rho.points
        .iter()
        .try_fold(0.0f64, |acc, x| Ok(acc.max(m.distance(p, x)?)))
}

/// Largest pairwise distance between atoms.
pub fn diameter(m: &Manifold, points: &[ManifoldPoint]) -> Result<f64> {
    let mut best = 0.0f64;
    for (k, x) in points.iter().enumerate() {
        for y in &points[k + 1..] {
            best = best.max(m.distance(x, y)?);
        }
    }
    Ok(best)
}

// ---- Wasserstein-1 ------------------------------------------------------

/// One cell of a transport plan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingEntry {
    pub i: usize,
    pub j: usize,
    pub mass: f64,
    pub distance: f64,
}

/// A feasible coupling between two empirical measures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingPlan {
    pub entries: Vec<CouplingEntry>,
    pub cost: f64,
}

impl CouplingPlan {
    /// Row sums (mass leaving each source atom).
    pub fn row_sums(&self, n: usize) -> Vec<f64> {
        let mut s = vec![0.0; n];
        for e in &self.entries {
            s[e.i] += e.mass;
        }
        s
    }

    /// Column sums (mass arriving at each target atom).
    pub fn col_sums(&self, n: usize) -> Vec<f64> {
        let mut s = vec![0.0; n];
        for e in &self.entries {
            s[e.j] += e.mass;
        }
        s
    }

    /// CSV with header `i,j,mass,distance`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,mass,distance\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{:.16e},{:.16e}", e.i, e.j, e.mass, e.distance);
        }
        out
    }
}

/// Which exact solver produced a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    /// Square instance with uniform weights: shortest augmenting paths.
    Assignment,
    /// General weights: network simplex.
    NetworkSimplex,
}

/// Dense cost matrix `d(x_i, y_j)`, row-major; rows are built in parallel.
pub fn cost_matrix(m: &Manifold, xs: &[ManifoldPoint], ys: &[ManifoldPoint]) -> Result<Vec<f64>> {
    let rows: Vec<Vec<f64>> = xs
        .par_iter()
        .map(|x| ys.iter().map(|y| m.distance(x, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.concat())
}

/// Exact `W_1(ρ, σ)` with intrinsic ground cost, and an optimal coupling.
pub fn w1_distance(
    m: &Manifold,
    rho: &EmpiricalMeasure,
    sigma: &EmpiricalMeasure,
) -> Result<(f64, CouplingPlan)> {
    let solver = if rho.len() == sigma.len() && rho.is_uniform() && sigma.is_uniform() {
        Solver::Assignment
    } else {
        Solver::NetworkSimplex
    };
    w1_distance_with(m, rho, sigma, solver)
}

/// As [`w1_distance`], forcing a particular solver. The assignment solver
/// requires equal sizes and uniform weights.
pub fn w1_distance_with(
    m: &Manifold,
    rho: &EmpiricalMeasure,
    sigma: &EmpiricalMeasure,
    solver: Solver,
) -> Result<(f64, CouplingPlan)> {
    let (nr, ns) = (rho.len(), sigma.len());
    let cost = cost_matrix(m, &rho.points, &sigma.points)?;
    let entries: Vec<CouplingEntry> = match solver {
        Solver::Assignment => {
            if nr != ns || !rho.is_uniform() || !sigma.is_uniform() {
                return Err(Error::InvalidMeasure(
                    "assignment solver needs equal sizes and uniform weights".into(),
                ));
            }
            assignment::solve(&cost, nr)
                .into_iter()
                .enumerate()
                .map(|(i, j)| CouplingEntry {
                    i,
                    j,
                    mass: rho.weights[i],
                    distance: cost[i * ns + j],
                })
                .collect()
        }
        Solver::NetworkSimplex => simplex::solve(&rho.weights, &sigma.weights, &cost)
            .flows
            .into_iter()
            .map(|(i, j, mass)| CouplingEntry {
                i,
                j,
                mass,
                distance: cost[i * ns + j],
            })
            .collect(),
    };
    let total = entries.iter().map(|e| e.mass * e.distance).sum::<f64>().max(0.0);
    Ok((
        total,
        CouplingPlan {
            entries,
            cost: total,
        },
    ))
}

/// `W_1` at each common time of two measure-valued curves.
pub fn w1_profile(
    m: &Manifold,
    times_a: &[f64],
    a: &[EmpiricalMeasure],
    times_b: &[f64],
    b: &[EmpiricalMeasure],
) -> Result<Vec<f64>> {
    if times_a.len() != a.len() || times_b.len() != b.len() {
        return Err(Error::GridMismatch("one measure per time is required".into()));
    }
    if times_a.len() != times_b.len() {
        return Err(Error::GridMismatch(format!(
            "{} vs {} recorded times",
            times_a.len(),
            times_b.len()
        )));
    }
    for (s, t) in times_a.iter().zip(times_b) {
        if (s - t).abs() > 1e-12 * s.abs().max(1.0) {
            return Err(Error::GridMismatch(format!("time {s} vs {t}")));
        }
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| w1_distance(m, x, y).map(|(d, _)| d))
        .collect()
}

/// `sup_t W_1(ρ_t, σ_t)` over a shared time grid.
pub fn w1_sup(
    m: &Manifold,
    times_a: &[f64],
    a: &[EmpiricalMeasure],
    times_b: &[f64],
    b: &[EmpiricalMeasure],
) -> Result<f64> {
    Ok(w1_profile(m, times_a, a, times_b, b)?
        .into_iter()
        .fold(0.0, f64::max))
}
