//! Sampled numerical certificates for the geometric and dynamical
//! inequalities behind well-posedness. Every check returns a
//! [`CheckReport`]; violations are reported, not thrown.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dynamics::{self, FlowConfig, ParticleField};
use crate::error::{Error, Result};
use crate::geometry::{BallSampling, Manifold, ManifoldPoint, TangentVector};
use crate::measures::{self, EmpiricalMeasure};
use crate::potentials::{self, PotentialConstants, PotentialProfile};

/// Tolerance of identities and inequalities checked at sampled points.
pub const ROUND_OFF_TOL: f64 = 1e-9;
/// Tolerance of checks that go through finite-difference Hessians.
pub const FD_TOL: f64 = 1e-3;
/// Tolerance of the base-point Lipschitz bound of `log`.
pub const D2_LIPSCHITZ_TOL: f64 = 1e-6;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub manifold: String,
    pub samples: usize,
    /// Smallest `bound - value` over all samples; negative means violation.
    pub worst_margin: f64,
    /// Inputs at which the worst margin occurred.
    pub worst_case: Value,
    pub passed: bool,
    pub seed: u64,
    pub tolerance: f64,
    /// Check-specific summary numbers.
    pub metrics: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} on {}: samples={} worst_margin={:.3e} tol={:.1e} seed={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check_name,
            self.manifold,
            self.samples,
            self.worst_margin,
            self.tolerance,
            self.seed
        )
    }
}

/// Running minimum of margins.
struct Tracker {
    name: &'static str,
    manifold: String,
    seed: u64,
    tolerance: f64,
    samples: usize,
    worst: f64,
    case: Value,
    metrics: BTreeMap<String, f64>,
}

impl Tracker {
    fn new(name: &'static str, m: &Manifold, seed: u64, tolerance: f64) -> Self {
        Tracker {
            name,
            manifold: m.to_string(),
            seed,
            tolerance,
            samples: 0,
            worst: f64::INFINITY,
            case: Value::Null,
            metrics: BTreeMap::new(),
        }
    }

    fn observe(&mut self, margin: f64, case: impl FnOnce() -> Value) {
        self.samples += 1;
        // NaN margins are violations
        if margin < self.worst || margin.is_nan() && !self.worst.is_nan() {
            self.worst = margin;
            self.case = case();
        }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.into(), value);
    }

    fn finish(self) -> CheckReport {
        let worst = if self.samples == 0 { 0.0 } else { self.worst };
        CheckReport {
            check_name: self.name.into(),
            manifold: self.manifold,
            samples: self.samples,
            worst_margin: worst,
            worst_case: self.case,
            passed: worst >= -self.tolerance,
            seed: self.seed,
            tolerance: self.tolerance,
            metrics: self.metrics,
        }
    }
}

fn pt(p: &ManifoldPoint) -> Value {
    json!(p.coords)
}

fn tv(v: &TangentVector) -> Value {
    json!({"base": v.base.coords, "comps": v.comps})
}

/// Default sampling radius for identity checks.
pub fn default_radius(m: &Manifold) -> f64 {
    match m {
        Manifold::Euclidean(_) => 2.0,
        Manifold::Sphere => std::f64::consts::FRAC_PI_4,
        Manifold::Hyperbolic => 1.0,
    }
}

/// A uniform-weight measure of `n` seeded points in the ball of `radius`
/// about the origin.
pub fn sample_measure(m: &Manifold, radius: f64, n: usize, seed: u64) -> Result<EmpiricalMeasure> {
    let pts = m.sample_in_ball(&m.origin(), radius, n, seed, BallSampling::VolumeWeighted)?;
    EmpiricalMeasure::uniform(pts)
}

// ---- geometric identities -----------------------------------------------

/// Isometry and invertibility of parallel transport, `Π_yx log_y x =
/// -log_x y`, and the `exp`/`log` round trip, on seeded samples in the
/// default ball.
pub fn check_transport_identities(m: &Manifold, samples: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tr = Tracker::new("transport_identities", m, seed, ROUND_OFF_TOL);
    let o = m.origin();
    let r = default_radius(m);
    for _ in 0..samples {
        let x = m.random_point_in_ball(&o, r, &mut rng)?;
        let y = m.random_point_in_ball(&o, r, &mut rng)?;
        let v = m.random_tangent(&x, 1.0, &mut rng)?;
        let pv = m.transport(&v, &y)?;
        let back = m.transport(&pv, &x)?;
        let lxy = m.log(&x, &y)?;
        let lyx = m.log(&y, &x)?;
        let d = m.distance(&x, &y)?;
        let residuals = [
            (m.norm(&pv) - m.norm(&v)).abs(),
            m.norm(&back.sub(&v)),
            m.norm(&m.transport(&lyx, &x)?.add_scaled(1.0, &lxy)),
            m.distance(&m.exp(&lxy)?, &y)?,
            (m.norm(&lxy) - d).abs(),
        ];
        let worst = residuals.iter().copied().fold(0.0, f64::max);
        tr.observe(-worst, || json!({"x": pt(&x), "y": pt(&y), "v": tv(&v), "residuals": residuals}));
    }
    Ok(tr.finish())
}

fn require_hessian_diameter(m: &Manifold, delta: f64) -> Result<()> {
    let limit = potentials::hessian_diameter_limit(m.curvature_upper());
    if delta >= limit {
        return Err(Error::DiameterTooLarge { delta, limit });
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidConfig(format!("diameter {delta} must be positive")));
    }
    Ok(())
}

/// Unit tangent at `x` orthogonal to `w` (2-dimensional manifolds), or any
/// unit tangent when `w` vanishes.
fn orthogonal_unit(m: &Manifold, w: &TangentVector) -> Result<TangentVector> {
    let basis = m.tangent_basis(&w.base)?;
    let n = m.norm(w);
    if n == 0.0 {
        return Ok(basis[0].clone());
    }
    let u = w.scaled(1.0 / n);
    let e = &basis[0];
    let mut p = e.add_scaled(-m.inner(e, &u)?, &u);
    if m.norm(&p) < 0.5 {
        let e = &basis[1];
        p = e.add_scaled(-m.inner(e, &u)?, &u);
    }
    Ok(p.scaled(1.0 / m.norm(&p)))
}

/// Two-sided comparison bound on `<Hess d_z^2(x) v, v>` for unit `v` and
/// `x, z` in a ball of diameter `delta`, plus the base-point Lipschitz bound
/// of `log` with `L` from the curvature.
pub fn check_hessian_bounds(m: &Manifold, samples: usize, delta: f64, seed: u64) -> Result<CheckReport> {
    let l = potentials::hessian_bound(m.curvature_lower().min(0.0), delta);
    check_hessian_bounds_with(m, samples, delta, l, seed)
}

/// As [`check_hessian_bounds`] with an explicit constant `L`.
pub fn check_hessian_bounds_with(
    m: &Manifold,
    samples: usize,
    delta: f64,
    l: f64,
    seed: u64,
) -> Result<CheckReport> {
    require_hessian_diameter(m, delta)?;
    let (lambda, mu) = (m.curvature_lower().min(0.0), m.curvature_upper().max(0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tr = Tracker::new("hessian_bounds", m, seed, FD_TOL);
    let o = m.origin();
    let r = 0.5 * delta;
    let (mut lower_gap, mut upper_gap) = (0.0f64, 0.0f64);
    let mut worst_lower = (f64::INFINITY, 0.0);
    for _ in 0..samples {
        let x = m.random_point_in_ball(&o, r, &mut rng)?;
        let y = m.random_point_in_ball(&o, r, &mut rng)?;
        let z = m.random_point_in_ball(&o, r, &mut rng)?;
        let v = m.random_unit_tangent(&x, &mut rng)?;
        let d = m.distance(&x, &z)?;
        let lower = 2.0 * potentials::s_cot(mu.sqrt() * d);
        let upper = 2.0 * potentials::s_coth((-lambda).sqrt() * d);
        let q = m.hessian_d2_quadform(&x, &z, &v)?;
        let margin = (q - lower).min(upper - q);
        tr.observe(margin, || json!({"x": pt(&x), "z": pt(&z), "v": tv(&v), "quadform": q, "lower": lower, "upper": upper}));
        if q - lower < worst_lower.0 {
            worst_lower = (q - lower, d);
        }

        // orthogonal directions attain the bound of the curvature sign
        let w = orthogonal_unit(m, &m.log(&x, &z)?)?;
        let qw = m.hessian_d2_quadform(&x, &z, &w)?;
        if mu > 0.0 {
            lower_gap = lower_gap.max((qw - lower).abs());
        }
        if lambda < 0.0 {
            upper_gap = upper_gap.max((qw - upper).abs());
        }
        if mu == 0.0 && lambda == 0.0 {
            lower_gap = lower_gap.max((qw - 2.0).abs());
            upper_gap = upper_gap.max((qw - 2.0).abs());
        }

        let lhs = m.norm(&m.log(&x, &z)?.sub(&m.transport(&m.log(&y, &z)?, &x)?));
        let bound = 0.5 * l * m.distance(&x, &y)?;
        tr.observe(bound - lhs, || json!({"x": pt(&x), "y": pt(&y), "z": pt(&z), "lhs": lhs, "bound": bound}));
    }
    tr.metric("L", l);
    tr.metric("lower_attainment_gap", lower_gap);
    tr.metric("upper_attainment_gap", upper_gap);
    tr.metric("worst_lower_margin_distance", worst_lower.1);
    Ok(tr.finish())
}

/// `|log_x z - Π_yx log_y z| <= (L/2) d(x, y)` on seeded triples in a ball of
/// diameter `delta`, with `L` from the curvature.
pub fn check_d2_lipschitz(m: &Manifold, samples: usize, delta: f64, seed: u64) -> Result<CheckReport> {
    let l = potentials::hessian_bound(m.curvature_lower().min(0.0), delta);
    check_d2_lipschitz_with(m, samples, delta, l, seed)
}

/// As [`check_d2_lipschitz`] with an explicit constant `L`.
pub fn check_d2_lipschitz_with(
    m: &Manifold,
    samples: usize,
    delta: f64,
    l: f64,
    seed: u64,
) -> Result<CheckReport> {
    require_hessian_diameter(m, delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tr = Tracker::new("d2_lipschitz", m, seed, D2_LIPSCHITZ_TOL);
    let o = m.origin();
    let r = 0.5 * delta;
    let mut tightest = 0.0f64;
    for _ in 0..samples {
        let x = m.random_point_in_ball(&o, r, &mut rng)?;
        let y = m.random_point_in_ball(&o, r, &mut rng)?;
        let z = m.random_point_in_ball(&o, r, &mut rng)?;
        let lhs = m.norm(&m.log(&x, &z)?.sub(&m.transport(&m.log(&y, &z)?, &x)?));
        let d = m.distance(&x, &y)?;
        let bound = 0.5 * l * d;
        if d > 0.0 {
            tightest = tightest.max(lhs / bound);
        }
        tr.observe(bound - lhs, || json!({"x": pt(&x), "y": pt(&y), "z": pt(&z), "lhs": lhs, "bound": bound}));
    }
    tr.metric("L", l);
    tr.metric("tightest_ratio", tightest);
    Ok(tr.finish())
}

/// `|log_x z - log_x y| <= ℓ d(y, z)` on seeded triples in a ball of
/// diameter `delta`, with `ℓ = (π - ε)/sin(π - ε)` when `μ > 0`.
pub fn check_log_lipschitz_second_arg(
    m: &Manifold,
    samples: usize,
    delta: f64,
    epsilon: f64,
    seed: u64,
) -> Result<CheckReport> {
    let mu = m.curvature_upper().max(0.0);
    if mu > 0.0 {
        let limit = (std::f64::consts::PI - epsilon) / mu.sqrt();
        if delta > limit {
            return Err(Error::DiameterTooLarge { delta, limit });
        }
    }
    let ell = potentials::log_lipschitz_constant(mu, epsilon);
    check_log_lipschitz_second_arg_with(m, samples, delta, ell, seed)
}

/// As [`check_log_lipschitz_second_arg`] with an explicit constant `ℓ`.
pub fn check_log_lipschitz_second_arg_with(
    m: &Manifold,
    samples: usize,
    delta: f64,
    ell: f64,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tr = Tracker::new("log_lipschitz_second_arg", m, seed, ROUND_OFF_TOL);
    let o = m.origin();
    // strictly inside the convexity radius so that geodesics are unique
    let r = (0.5 * delta).min(0.999 * m.convexity_radius());
    let mut tightest = 0.0f64;
    for _ in 0..samples {
        let x = m.random_point_in_ball(&o, r, &mut rng)?;
        let y = m.random_point_in_ball(&o, r, &mut rng)?;
        let z = m.random_point_in_ball(&o, r, &mut rng)?;
        let lhs = m.norm(&m.log(&x, &z)?.sub(&m.log(&x, &y)?));
        let d = m.distance(&y, &z)?;
        let bound = ell * d;
        if d > 0.0 {
            tightest = tightest.max(lhs / d);
        }
        tr.observe(bound - lhs, || json!({"x": pt(&x), "y": pt(&y), "z": pt(&z), "lhs": lhs, "bound": bound}));
    }
    tr.metric("ell", ell);
    tr.metric("tightest_ratio", tightest);
    Ok(tr.finish())
}

// ---- flows ----------------------------------------------------------------

/// The time-independent field `v[ρ]` of a fixed measure.
pub struct MeasureField<'a> {
    pub profile: &'a PotentialProfile,
    pub measure: &'a EmpiricalMeasure,
}

impl ParticleField for MeasureField<'_> {
    fn eval(&self, m: &Manifold, _t: f64, points: &[ManifoldPoint]) -> Result<Vec<TangentVector>> {
        dynamics::velocities(m, self.profile, self.measure, points)
    }
}

/// `base + Π_{p x} w`: a field shifted by the parallel transport of a fixed
/// vector `w` at `p`. The shift has norm `|w|` everywhere.
pub struct ShiftedField<F> {
    pub base: F,
    pub shift: TangentVector,
}

impl<F: ParticleField> ParticleField for ShiftedField<F> {
    fn eval(&self, m: &Manifold, t: f64, points: &[ManifoldPoint]) -> Result<Vec<TangentVector>> {
        let vs = self.base.eval(m, t, points)?;
        vs.into_iter()
            .zip(points)
            .map(|(v, x)| Ok(v.add_scaled(1.0, &m.transport(&self.shift, x)?)))
            .collect()
    }
}

/// Distance between the flows of `field_x` and `field_y` from each start
/// point, against `(e^{L t} - 1)/L · sup_diff · (1 + 5 dt)`. `lipschitz` is
/// the Lipschitz constant of `field_x` and `sup_diff` bounds
/// `|X - Y|` on the region the flows visit.
#[allow(clippy::too_many_arguments)]
pub fn check_gronwall_flow_bound(
    m: &Manifold,
    field_x: &dyn ParticleField,
    field_y: &dyn ParticleField,
    starts: &[ManifoldPoint],
    lipschitz: f64,
    sup_diff: f64,
    config: &FlowConfig,
    seed: u64,
) -> Result<CheckReport> {
    let rho = EmpiricalMeasure::uniform(starts.to_vec())?;
    let a = dynamics::integrate(m, field_x, &rho, config, false)?;
    let b = dynamics::integrate(m, field_y, &rho, config, false)?;
    let slack = 1.0 + 5.0 * config.dt;
    let mut tr = Tracker::new("gronwall_flow_bound", m, seed, 0.0);
    let mut tightest = 0.0f64;
    for ((t, ra), rb) in a.times.iter().zip(&a.measures).zip(&b.measures) {
        let bound = potentials::gronwall_factor(lipschitz, *t) * sup_diff;
        for (i, (p, q)) in ra.points().iter().zip(rb.points()).enumerate() {
            let d = m.distance(p, q)?;
            if bound > 0.0 {
                tightest = tightest.max(d / bound);
            }
            tr.observe(bound * slack - d, || json!({"t": t, "start": i, "distance": d, "bound": bound}));
        }
    }
    tr.metric("L", lipschitz);
    tr.metric("sup_diff", sup_diff);
    tr.metric("tightest_ratio", tightest);
    Ok(tr.finish())
}

/// Constants on the region spanned by a set of measures: `Δ` is their joint
/// support diameter enlarged by `margin` (a fraction).
pub fn region_constants(
    m: &Manifold,
    profile: &PotentialProfile,
    supports: &[&EmpiricalMeasure],
    margin: f64,
) -> Result<PotentialConstants> {
    let pts: Vec<ManifoldPoint> = supports.iter().flat_map(|r| r.points().iter().cloned()).collect();
    let delta = (measures::diameter(m, &pts)? * (1.0 + margin)).max(1e-12);
    potentials::profile_constants(
        profile,
        delta,
        m.curvature_lower().min(0.0),
        m.curvature_upper().max(0.0),
        potentials::DEFAULT_EPSILON,
    )
}

/// `W_1(ρ_t, σ_t) <= e^{(L̄ + Λ) t} W_1(ρ_0, σ_0)` at every recorded time,
/// with slack `1 + 10 dt`.
pub fn check_stability(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    sigma0: &EmpiricalMeasure,
    config: &FlowConfig,
    seed: u64,
) -> Result<CheckReport> {
    let c = region_constants(m, profile, &[rho0, sigma0], config.diameter_margin)?;
    check_stability_with(m, profile, rho0, sigma0, config, &c, seed)
}

/// As [`check_stability`] with explicit constants.
pub fn check_stability_with(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    sigma0: &EmpiricalMeasure,
    config: &FlowConfig,
    constants: &PotentialConstants,
    seed: u64,
) -> Result<CheckReport> {
    let a = dynamics::simulate(m, profile, rho0, config)?;
    let b = dynamics::simulate(m, profile, sigma0, config)?;
    let w = a.w1_profile(m, &b)?;
    let rate = constants.lbar + constants.lambda;
    let slack = 1.0 + 10.0 * config.dt;
    let mut tr = Tracker::new("stability", m, seed, 0.0);
    let mut tightest = 0.0f64;
    for (t, wt) in a.times.iter().zip(&w) {
        let bound = (rate * t).exp() * w[0];
        if bound > 0.0 {
            tightest = tightest.max(wt / bound);
        }
        tr.observe(bound * slack - wt, || json!({"t": t, "w1": wt, "bound": bound}));
    }
    tr.metric("rate", rate);
    tr.metric("w1_initial", w[0]);
    tr.metric("w1_final", *w.last().unwrap_or(&0.0));
    tr.metric("tightest_ratio", tightest);
    Ok(tr.finish())
}

/// Largest horizon with `C(T) Λ <= target` for the measure `rho0`.
pub fn contraction_horizon(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    config: &FlowConfig,
    target: f64,
) -> Result<f64> {
    Ok(dynamics::picard_constants(m, profile, rho0, config)?.horizon_for_factor(target))
}

/// Successive Picard iterates contract with ratio at most `C(T) Λ (1 + 10
/// dt)`, `T = config.t_final`.
pub fn check_contraction(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    config: &FlowConfig,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<CheckReport> {
    let c = dynamics::picard_constants(m, profile, rho0, config)?;
    check_contraction_with(m, profile, rho0, config, &c, tol, max_iter, seed)
}

/// As [`check_contraction`] with explicit constants.
#[allow(clippy::too_many_arguments)]
pub fn check_contraction_with(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    config: &FlowConfig,
    constants: &PotentialConstants,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<CheckReport> {
    let (fixed, dists) = dynamics::picard_solve_with(m, profile, rho0, config, constants, tol, max_iter)?;
    let factor = constants.contraction_factor(config.t_final);
    let bound = factor * (1.0 + 10.0 * config.dt);
    let mut tr = Tracker::new("contraction", m, seed, 0.0);
    let mut max_ratio = 0.0f64;
    for (k, w) in dists.windows(2).enumerate() {
        if w[0] > 0.0 {
            max_ratio = max_ratio.max(w[1] / w[0]);
        }
        tr.observe(bound * w[0] - w[1], || json!({"iteration": k + 1, "previous": w[0], "next": w[1]}));
    }
    // least-squares slope of log distance against iteration
    let logs: Vec<(f64, f64)> = dists
        .iter()
        .enumerate()
        .filter(|(_, d)| **d > 0.0)
        .map(|(k, d)| (k as f64, d.ln()))
        .collect();
    if logs.len() >= 2 {
        let n = logs.len() as f64;
        let (sx, sy) = logs.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / n, sy / n);
        let (num, den) = logs
            .iter()
            .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
        tr.metric("fitted_ratio", (num / den).exp());
    }
    let sol = dynamics::simulate(m, profile, rho0, config)?;
    tr.metric("contraction_factor", factor);
    tr.metric("iterations", dists.len() as f64);
    tr.metric("max_ratio", max_ratio);
    tr.metric("fixed_point_vs_simulate", fixed.w1_sup(m, &sol)?);
    Ok(tr.finish())
}

/// For attractive profiles the support radius about the reference point
/// does not grow beyond `10 dt · sup|v|`, and two-particle distances are
/// nonincreasing.
pub fn check_support_containment(
    m: &Manifold,
    profile: &PotentialProfile,
    rho0: &EmpiricalMeasure,
    config: &FlowConfig,
    seed: u64,
) -> Result<CheckReport> {
    if !profile.is_attractive() {
        return Err(Error::NotAttractive(profile.name().into()));
    }
    let rec = dynamics::simulate(m, profile, rho0, config)?;
    let vmax = rec.diagnostics.iter().map(|d| d.velocity_sup_norm).fold(0.0, f64::max);
    let slack = 10.0 * config.dt * vmax;
    let r0 = rec.diagnostics[0].support_radius;
    let mut tr = Tracker::new("support_containment", m, seed, 1e-12);
    let mut growth = 0.0f64;
    for (k, (t, d)) in rec.times.iter().zip(&rec.diagnostics).enumerate() {
        tr.observe(r0 + slack - d.support_radius, || json!({"t": t, "radius": d.support_radius, "initial": r0}));
        if k > 0 {
            let prev = &rec.diagnostics[k - 1];
            growth = growth.max(d.support_radius - prev.support_radius);
            tr.observe(prev.support_radius + slack - d.support_radius, || {
                json!({"t": t, "radius": d.support_radius, "previous": prev.support_radius})
            });
            if rho0.len() == 2 {
                let (a, b) = (prev.max_pairwise_distance, d.max_pairwise_distance);
                tr.observe(a - b, || json!({"t": t, "distance": b, "previous": a}));
            }
        }
    }
    tr.metric("initial_radius", r0);
    tr.metric("final_radius", rec.diagnostics.last().map_or(0.0, |d| d.support_radius));
    tr.metric("max_step_growth", growth);
    tr.metric("slack", slack);
    Ok(tr.finish())
}
