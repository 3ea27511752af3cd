//! Interaction velocity field, geodesic integrators, the self-consistent
//! particle evolution and the Picard map.

mod export;
mod ode;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Manifold, ManifoldPoint, TangentVector};
use crate::measures::{self, EmpiricalMeasure};
use crate::potentials::{self, PotentialConstants, PotentialProfile};

pub use export::{parse_jsonl, TrajectoryLine};

/// Time integrator for the flow map.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    GeodesicEuler,
    #[default]
    GeodesicRk4,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::GeodesicEuler => "geodesic-euler",
            Scheme::GeodesicRk4 => "geodesic-rk4",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geodesic-euler" | "euler" => Ok(Scheme::GeodesicEuler),
            "geodesic-rk4" | "rk4" => Ok(Scheme::GeodesicRk4),
            other => Err(Error::InvalidConfig(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Time stepping parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    pub dt: f64,
    pub t_final: f64,
    pub scheme: Scheme,
    /// Record every this many steps; the final time is always recorded.
    pub record_every: usize,
    /// Diameter guard margin as a fraction of the initial support diameter.
    pub diameter_margin: f64,
    /// Reference point for the support radius; first particle when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_point: Option<ManifoldPoint>,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            dt: 1e-3,
            t_final: 1.0,
            scheme: Scheme::GeodesicRk4,
            record_every: 1,
            diameter_margin: 0.1,
            reference_point: None,
        }
    }
}

impl FlowConfig {
    pub fn new(dt: f64, t_final: f64, scheme: Scheme) -> Self {
        FlowConfig {
            dt,
            t_final,
            scheme,
            ..FlowConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_final = {} must be positive",
                self.t_final
            )));
        }
        if self.dt > self.t_final {
            return Err(Error::InvalidConfig(format!(
                "dt = {} exceeds t_final = {}",
                self.dt, self.t_final
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig("record_every must be at least 1".into()));
        }
        if !(self.diameter_margin >= 0.0 && self.diameter_margin.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "diameter_margin = {} must be nonnegative",
                self.diameter_margin
            )));
        }
        Ok(())
    }

    /// Number of steps; the last one is shortened so the grid ends exactly at
    /// `t_final`.
    pub fn steps(&self) -> usize {
        let r = self.t_final / self.dt;
        let n = r.round();
        if (r - n).abs() <= 1e-9 * r.max(1.0) {
            n as usize
        } else {
            r.ceil() as usize
        }
    }

    /// Time after `k` steps.
    pub fn time(&self, k: usize) -> f64 {
        if k >= self.steps() {
            self.t_final
        } else {
            k as f64 * self.dt
        }
    }

    fn is_recorded(&self, k: usize) -> bool {
        k % self.record_every == 0 || k == self.steps()
    }

    /// The recorded time grid.
    pub fn recorded_times(&self) -> Vec<f64> {
        (0..=self.steps())
            .filter(|&k| self.is_recorded(k))
            .map(|k| self.time(k))
            .collect()
    }
}

/// Per-time diagnostics of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub support_radius: f64,
    pub max_pairwise_distance: f64,
    pub velocity_sup_norm: f64,
}

/// Recorded measures along a discrete flow. All measures share the weights
/// of the initial measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub measures: Vec<EmpiricalMeasure>,
    pub diagnostics: Vec<Diagnostics>,
    /// Particle speeds at each recorded time.
    pub speeds: Vec<Vec<f64>>,
    /// Reference point of the support radius.
    pub reference: ManifoldPoint,
}

impl TrajectoryRecord {
    /// The curve `t -> rho0` on the recorded grid of `config`.
    pub fn constant(m: &Manifold, rho0: &EmpiricalMeasure, config: &FlowConfig) -> Result<Self> {
        config.validate()?;
        let reference = reference_point(m, rho0, config)?;
        let diag = Diagnostics {
            support_radius: measures::support_radius(m, rho0, &reference)?,
            max_pairwise_distance: measures::diameter(m, rho0.points())?,
            velocity_sup_norm: 0.0,
        };
        let times = config.recorded_times();
        let n = times.len();
        Ok(TrajectoryRecord {
            times,
            measures: vec![rho0.clone(); n],
            diagnostics: vec![diag; n],
            speeds: vec![vec![0.0; rho0.len()]; n],
            reference,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_measure(&self) -> &EmpiricalMeasure {
        self.measures.last().expect("trajectories are never empty")
    }

    /// Index of the recorded time nearest to `t`; ties go to the earlier
    /// time.
    pub fn nearest_index(&self, t: f64) -> usize {
        let k = self.times.partition_point(|&s| s < t);
        if k == 0 {
            return 0;
        }
        if k == self.times.len() {
            return k - 1;
        }
        let (a, b) = (self.times[k - 1], self.times[k]);
        let tie = 1e-12 * b.abs().max(1.0);
        if (t - a) <= (b - t) + tie {
            k - 1
        } else {
            k
        }
    }

    /// `sup_t W_1` against another trajectory on the same grid.
    pub fn w1_sup(&self, m: &Manifold, other: &TrajectoryRecord) -> Result<f64> {
        measures::w1_sup(m, &self.times, &self.measures, &other.times, &other.measures)
    }

    /// `W_1` at every recorded time against another trajectory.
    pub fn w1_profile(&self, m: &Manifold, other: &TrajectoryRecord) -> Result<Vec<f64>> {
        measures::w1_profile(m, &self.times, &self.measures, &other.times, &other.measures)
    }
}

// ---- velocity fields ----------------------------------------------------

/// `v[rho](x) = sum_j w_j 2 g'(d(x, y_j)^2) log_x y_j`, summed in particle
/// order.
pub fn velocity(
    m: &Manifold,
    profile: &PotentialProfile,
    rho: &EmpiricalMeasure,
    x: &ManifoldPoint,
) -> Result<TangentVector> {
    let mut acc = TangentVector::zero(x);
    for (y, w) in rho.points().iter().zip(rho.weights()) {
        let log = m.log(x, y)?;
        if log.is_zero() {
            continue;
        }
        let d2 = m.inner(&log, &log)?;
        acc = acc.add_scaled(2.0 * w * profile.g_prime(d2), &log);
    }
    Ok(acc)
}

/// `v[rho]` at every point of `xs`, evaluated in parallel.
pub fn velocities(
    m: &Manifold,
    profile: &PotentialProfile,
    rho: &EmpiricalMeasure,
    xs: &[ManifoldPoint],
) -> Result<Vec<TangentVector>> {
    xs.par_iter().map(|x| velocity(m, profile, rho, x)).collect()
}

/// A time-dependent velocity field evaluated on a whole particle
/// configuration at once, so that interaction fields can see every staged
/// particle.
pub trait ParticleField: Sync {
    fn eval(&self, m: &Manifold, t: f64, points: &[ManifoldPoint]) -> Result<Vec<TangentVector>>;
}

/// A field given pointwise by a closure `(t, x) -> X_t(x)`.
pub struct PointField<F>(pub F);

impl<F> ParticleField for PointField<F>
where
    F: Fn(f64, &ManifoldPoint) -> Result<TangentVector> + Sync,
{
    fn eval(&self, _m: &Manifold, t: f64, points: &[ManifoldPoint]) -> Result<Vec<TangentVector>> {
        points.par_iter().map(|x| (self.0)(t, x)).collect()
    }
}

/// The self-consistent interaction field: particles attract each other
/// with the given weights.
pub struct InteractionField<'a> {
    pub profile: &'a PotentialProfile,
    pub weights: &'a [f64],
}

impl ParticleField for InteractionField<'_> {
    fn eval(&self, m: &Manifold, _t: f64, points: &[ManifoldPoint]) -> Result<Vec<TangentVector>> {
        let rho = EmpiricalMeasure::new(points.to_vec(), self.weights.to_vec())?;
        velocities(m, self.profile, &rho, points)
    }
}

/// The field `v[sigma_t]` induced by a frozen trajectory, read at the
/// nearest recorded time.
pub struct FrozenField<'a> {
    pub profile: &'a PotentialProfile,
    pub frozen: &'a TrajectoryRecord,
}

impl ParticleField for FrozenField<'_> {
    fn eval(&self, m: &Manifold, t: f64, points: &[ManifoldPoint]) -> Result<Vec<TangentVector>> {
        let sigma = &self.frozen.measures[self.frozen.nearest_index(t)];
        velocities(m, self.profile, sigma, points)
    }
}

// ---- integrators --------------------------------------------------------

/// One step of the flow of `field` from time `t` to `t + dt`. Weights are
/// unchanged.
pub fn flow_step(
    m: &Manifold,
    field: &dyn ParticleField,
    rho: &EmpiricalMeasure,
    t: f64,
    dt: f64,
    scheme: Scheme,
) -> Result<EmpiricalMeasure> {
    let k1 = field.eval(m, t, rho.points())?;
    let points = advance(m, field, rho.points(), k1, t, dt, scheme)?;
    rho.with_points(points)
}

/// Step with the base-point velocities `k1` already evaluated.
fn advance(
    m: &Manifold,
    field: &dyn ParticleField,
    xs: &[ManifoldPoint],
    k1: Vec<TangentVector>,
    t: f64,
    dt: f64,
    scheme: Scheme,
) -> Result<Vec<ManifoldPoint>> {
    let shoot = |ks: &[TangentVector], h: f64| -> Result<Vec<ManifoldPoint>> {
        ks.par_iter().map(|k| m.exp(&k.scaled(h))).collect()
    };
    match scheme {
        Scheme::GeodesicEuler => shoot(&k1, dt),
        Scheme::GeodesicRk4 => {
            // evaluate at the staged configuration, transport back to the base
            let stage = |ks: &[TangentVector], h: f64, ts: f64| -> Result<Vec<TangentVector>> {
                let staged = shoot(ks, h)?;
                let vs = field.eval(m, ts, &staged)?;
                vs.par_iter()
                    .zip(xs)
                    .map(|(v, x)| m.transport(v, x))
                    .collect()
            };
            let k2 = stage(&k1, 0.5 * dt, t + 0.5 * dt)?;
            let k3 = stage(&k2, 0.5 * dt, t + 0.5 * dt)?;
            let k4 = stage(&k3, dt, t + dt)?;
            let combined: Vec<TangentVector> = (0..xs.len())
                .map(|i| {
                    k1[i]
                        .add_scaled(2.0, &k2[i])
                        .add_scaled(2.0, &k3[i])
                        .add_scaled(1.0, &k4[i])
                        .scaled(1.0 / 6.0)
                })
                .collect();
            shoot(&combined, dt)
        }
    }
}

/// Integrates `field` from `rho0` over the grid of `config`, recording
/// diagnostics. With `guard` set, aborts when the support diameter plus the
/// margin reaches the curvature limit.
pub fn integrate(
    m: &Manifold,
    field: &dyn ParticleField,
    rho0: &EmpiricalMeasure,
    config: &FlowConfig,
    guard: bool,
) -> Result<TrajectoryRecord> {
    config.validate()?;
    rho0.validate_on(m)?;
    let reference = reference_point(m, rho0, config)?;
    let diam0 = measures::diameter(m, rho0.points())?;
    let margin = config.diameter_margin * diam0;
    let limit = potentials::hessian_diameter_limit(m.curvature_upper());
    let guarded = guard && limit.is_finite();
    let check = |time: f64, diameter: f64| -> Result<()> {
        if guarded && diameter + margin >= limit {
            return Err(Error::DiameterViolation {
                time,
                diameter,
                margin,
                limit,
            });
        }
        Ok(())
    };
    check(0.0, diam0)?;

    let n = config.steps();
    let mut rec = TrajectoryRecord {
        times: Vec::new(),
        measures: Vec::new(),
        diagnostics: Vec::new(),
        speeds: Vec::new(),
        reference,
    };
    let mut rho = rho0.clone();
    let mut diameter = diam0;
    for k in 0..=n {
        let t = config.time(k);
        let vs = field.eval(m, t, rho.points())?;
        if config.is_recorded(k) {
            let speeds: Vec<f64> = vs.iter().map(|v| m.norm(v)).collect();
            rec.diagnostics.push(Diagnostics {
                support_radius: measures::support_radius(m, &rho, &rec.reference)?,
                max_pairwise_distance: diameter,
                velocity_sup_norm: speeds.iter().copied().fold(0.0, f64::max),
            });
            rec.speeds.push(speeds);
            rec.times.push(t);
            rec.measures.push(rho.clone());
        }
        if k == n {
            break;
        }
        let h = config.time(k + 1) - t;
        let points = advance(m, field, rho.points(), vs, t, h, config.scheme)?;
        rho = rho.with_points(points)?;
        diameter = measures::diameter(m, rho.points())?;
        check(config.time(k + 1), diameter)?;
    }
    Ok(rec)
}

fn reference_point(m: &Manifold, rho0: &EmpiricalMeasure, config: &FlowConfig) -> Result<ManifoldPoint> {
    let p = config
        .reference_point
        .clone()
        .unwrap_or_else(|| rho0.points()[0].clone());
    m.validate_point(&p)?;
    Ok(p)
}

/// Self-consistent particle evolution `rho_t = Psi^t # rho0`, where the
/// field at each stage is the interaction field of the current particles.
pub fn simulate(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    config: &FlowConfig,
) -> Result<TrajectoryRecord> {
    let field = InteractionField {
        profile,
        weights: rho0.weights(),
    };
    integrate(m, &field, rho0, config, true)
}

/// The Picard map: pushes `rho0` forward along the field induced by the
/// frozen trajectory.
pub fn picard_map(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    frozen: &TrajectoryRecord,
    config: &FlowConfig,
) -> Result<TrajectoryRecord> {
    config.validate()?;
    let grid = config.recorded_times();
    if grid.len() != frozen.times.len()
        || grid
            .iter()
            .zip(&frozen.times)
            .any(|(a, b)| (a - b).abs() > 1e-12 * a.abs().max(1.0))
    {
        return Err(Error::GridMismatch(
            "frozen trajectory is not recorded on the configured grid".into(),
        ));
    }
    if frozen.measures.iter().any(|s| s.weights() != rho0.weights()) {
        return Err(Error::GridMismatch(
            "frozen trajectory weights differ from the initial measure".into(),
        ));
    }
    let field = FrozenField { profile, frozen };
    integrate(m, &field, rho0, config, false)
}

/// Diameter `Δ` of the region the flow is expected to stay in: the initial
/// support diameter enlarged by the configured margin.
pub fn flow_diameter(m: &Manifold, rho0: &EmpiricalMeasure, config: &FlowConfig) -> Result<f64> {
    let d = measures::diameter(m, rho0.points())?;
    Ok((d * (1.0 + config.diameter_margin)).max(1e-12))
}

/// Constants for the Picard contraction of `rho0` under `config`.
pub fn picard_constants(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    config: &FlowConfig,
) -> Result<PotentialConstants> {
    let delta = flow_diameter(m, rho0, config)?;
    potentials::profile_constants(
        profile,
        delta,
        m.curvature_lower(),
        m.curvature_upper(),
        potentials::DEFAULT_EPSILON,
    )
}

/// Fixed point of the Picard map by iteration from the constant curve.
/// Returns the last iterate and the sequence `sup_t W_1(sigma^{k+1},
/// sigma^k)`.
pub fn picard_solve(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    config: &FlowConfig,
    tol: f64,
    max_iter: usize,
) -> Result<(TrajectoryRecord, Vec<f64>)> {
    let constants = picard_constants(m, profile, rho0, config)?;
    picard_solve_with(m, profile, rho0, config, &constants, tol, max_iter)
}

/// As [`picard_solve`] with explicit constants.
pub fn picard_solve_with(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    config: &FlowConfig,
    constants: &PotentialConstants,
    tol: f64,
    max_iter: usize,
) -> Result<(TrajectoryRecord, Vec<f64>)> {
    let factor = constants.contraction_factor(config.t_final);
    if !(factor < 1.0) {
        return Err(Error::NoContraction { factor });
    }
    let mut sigma = TrajectoryRecord::constant(m, rho0, config)?;
    let mut dists = Vec::new();
    for _ in 0..max_iter {
        let next = picard_map(m, profile, rho0, &sigma, config)?;
        let d = next.w1_sup(m, &sigma)?;
        dists.push(d);
        sigma = next;
        if d < tol {
            return Ok((sigma, dists));
        }
    }
    Err(Error::MaxIterExceeded {
        iterations: max_iter,
        last: dists.last().copied().unwrap_or(f64::NAN),
    })
}

/// Distance at time `t` between two equal masses starting `d0` apart, from
/// `d' = -2 g'(d^2) d`.
pub fn two_body_exact(profile: &PotentialProfile, d0: f64, t: f64) -> f64 {
    if t == 0.0 {
        return d0;
    }
    if profile.name() == "quadratic" {
        return d0 * (-t).exp();
    }
    ode::integrate(|d| -2.0 * profile.g_prime(d * d) * d, d0, t, 1e-10)
}
