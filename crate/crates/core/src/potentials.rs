//! Interaction potentials `K(x, y) = g(d(x, y)^2)`, their intrinsic
//! gradients, and the analytic constants consumed by the well-posedness
//! estimates.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Manifold, ManifoldPoint, TangentVector};

/// Default number of grid points used when `g'` constants are estimated.
pub const DEFAULT_GRID_SIZE: usize = 10_000;

/// Default `ε` for the second-argument Lipschitz constant `ℓ`.
pub const DEFAULT_EPSILON: f64 = PI / 2.0;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Quadratic,
    Power(f64),
    BoundedAttractive,
    Constant,
    Custom {
        g: ScalarFn,
        g_prime: ScalarFn,
        is_attractive: bool,
        a_gprime: Option<f64>,
    },
}

/// A radial profile `g` with derivative `g'`.
#[derive(Clone)]
pub struct PotentialProfile {
    name: String,
    kind: Kind,
}

impl fmt::Debug for PotentialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialProfile")
            .field("name", &self.name)
            .field("is_attractive", &self.is_attractive())
            .field("a_gprime", &self.a_gprime())
            .finish()
    }
}

impl PotentialProfile {
    /// `g(s) = s / 2`, so that `-grad K_y(x) = log_x y`.
    pub fn quadratic() -> Self {
        PotentialProfile {
            name: "quadratic".into(),
            kind: Kind::Quadratic,
        }
    }

    /// `g(s) = s^(p/2) / p`, i.e. `K = d^p / p`, for `p >= 2`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 2.0 && p.is_finite()) {
            return Err(Error::InvalidProfile(format!("power exponent {p} must be >= 2")));
        }
        Ok(PotentialProfile {
            name: format!("power:{p}"),
            kind: Kind::Power(p),
        })
    }

    /// `g(s) = sqrt(1 + s) - 1`, so `g'(s) = 1 / (2 sqrt(1 + s))`.
    pub fn bounded_attractive() -> Self {
        PotentialProfile {
            name: "bounded-attractive".into(),
            kind: Kind::BoundedAttractive,
        }
    }

    /// `g ≡ 0`: no interaction.
    pub fn constant() -> Self {
        PotentialProfile {
            name: "constant".into(),
            kind: Kind::Constant,
        }
    }

    /// A user-supplied profile. Its `g'` constants are always estimated on a
    /// grid.
    pub fn custom<G, D>(
        name: &str,
        g: G,
        g_prime: D,
        is_attractive: bool,
        a_gprime: Option<f64>,
    ) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PotentialProfile {
            name: name.into(),
            kind: Kind::Custom {
                g: Arc::new(g),
                g_prime: Arc::new(g_prime),
                is_attractive,
                a_gprime,
            },
        }
    }

    /// Resolves a built-in profile by name and parameter list.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let expect = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidProfile(format!(
                    "profile `{name}` takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name {
            "quadratic" => expect(0).map(|_| Self::quadratic()),
            "power" => {
                expect(1)?;
                Self::power(params[0])
            }
            "bounded-attractive" => expect(0).map(|_| Self::bounded_attractive()),
            "constant" => expect(0).map(|_| Self::constant()),
            other => Err(Error::InvalidProfile(format!("unknown profile `{other}`"))),
        }
    }

    /// Parses `name` or `name:p1,p2,...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let params = rest
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidProfile(format!("bad parameter `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_name(name.trim(), &params)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn g(&self, s: f64) -> f64 {
        match &self.kind {
            Kind::Quadratic => s / 2.0,
            Kind::Power(p) => s.powf(p / 2.0) / p,
            Kind::BoundedAttractive => (1.0 + s).sqrt() - 1.0,
            Kind::Constant => 0.0,
            Kind::Custom { g, .. } => g(s),
        }
    }

    pub fn g_prime(&self, s: f64) -> f64 {
        match &self.kind {
            Kind::Quadratic => 0.5,
            Kind::Power(p) => {
                if *p == 2.0 {
                    0.5
                } else {
                    s.powf(p / 2.0 - 1.0) / 2.0
                }
            }
            Kind::BoundedAttractive => 0.5 / (1.0 + s).sqrt(),
            Kind::Constant => 0.0,
            Kind::Custom { g_prime, .. } => g_prime(s),
        }
    }

    /// Whether `g' >= 0`, i.e. the potential is purely attractive.
    pub fn is_attractive(&self) -> bool {
        match &self.kind {
            Kind::Custom { is_attractive, .. } => *is_attractive,
            _ => true,
        }
    }

    /// Global constant `A_g'` when the profile is globally Lipschitz in the
    /// sense `|g'(r^2) r - g'(s^2) s| <= A |r - s|`.
    pub fn a_gprime(&self) -> Option<f64> {
        match &self.kind {
            Kind::Quadratic | Kind::BoundedAttractive => Some(0.5),
            Kind::Power(p) if *p == 2.0 => Some(0.5),
            Kind::Power(_) => None,
            Kind::Constant => Some(0.0),
            Kind::Custom { a_gprime, .. } => *a_gprime,
        }
    }

    /// Closed-form `(sup |g'|, Lip g')` on `[0, delta^2]`, when known.
    pub fn exact_gprime_constants(&self, delta: f64) -> Option<(f64, f64)> {
        match &self.kind {
            Kind::Quadratic => Some((0.5, 0.0)),
            Kind::Power(p) => {
                let c = delta.powf(p - 2.0) / 2.0;
                let l = if *p == 2.0 {
                    0.0
                } else if *p >= 4.0 {
                    (p / 2.0 - 1.0) / 2.0 * delta.powf(p - 4.0)
                } else {
                    // g'' blows up at 0: g' is only Hölder there
                    f64::INFINITY
                };
                Some((c, l))
            }
            Kind::BoundedAttractive => Some((0.5, 0.25)),
            Kind::Constant => Some((0.0, 0.0)),
            Kind::Custom { .. } => None,
        }
    }

    /// Checks the profile's declared invariants on a grid of `grid_size`
    /// points over `[0, s_max]`: `g' >= 0` for attractive profiles and the
    /// first (Lipschitz) bound of the global hypothesis when `A_g'` is
    /// declared.
    pub fn validate(&self, s_max: f64, grid_size: usize) -> Result<()> {
        let n = grid_size.max(2);
        if self.is_attractive() {
            for k in 0..n {
                let s = s_max * k as f64 / (n - 1) as f64;
                let gp = self.g_prime(s);
                if gp < 0.0 {
                    return Err(Error::InvalidProfile(format!(
                        "`{}` is declared attractive but g'({s}) = {gp}",
                        self.name
                    )));
                }
            }
        }
        if self.a_gprime().is_some() {
            let report = check_kglob(self, 0.0, s_max.sqrt(), n)?;
            if report.lipschitz_violation > KGLOB_TOL {
                return Err(Error::InvalidProfile(format!(
                    "`{}` violates its declared A_g' by {}",
                    self.name, report.lipschitz_violation
                )));
            }
        }
        Ok(())
    }
}

// ---- kernel and gradient ------------------------------------------------

/// `K(x, y) = g(d(x, y)^2)`.
pub fn eval_k(
    profile: &PotentialProfile,
    m: &Manifold,
    x: &ManifoldPoint,
    y: &ManifoldPoint,
) -> Result<f64> {
    let d = m.distance(x, y)?;
    Ok(profile.g(d * d))
}

/// Intrinsic gradient of `K_y = K(., y)` at `x`: `-2 g'(d^2) log_x y`.
pub fn grad_k(
    profile: &PotentialProfile,
    m: &Manifold,
    x: &ManifoldPoint,
    y: &ManifoldPoint,
) -> Result<TangentVector> {
    let log = m.log(x, y)?;
    if log.is_zero() {
        return Ok(log);
    }
    let d2 = m.inner(&log, &log)?;
    Ok(log.scaled(-2.0 * profile.g_prime(d2)))
}

// ---- constants ----------------------------------------------------------

/// Constants of the local well-posedness theory on a set of diameter
/// `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialConstants {
    /// Diameter bound Δ.
    pub delta: f64,
    /// `sup |g'|` on `[0, Δ²]`.
    pub c_gprime: f64,
    /// Lipschitz constant of `g'` on `[0, Δ²]`.
    pub l_gprime: f64,
    /// Bound on the Hessian of `d_z^2`.
    #[serde(rename = "L")]
    pub l: f64,
    /// Lipschitz constant of `log_x` in its argument.
    pub ell: f64,
    /// Lipschitz constant (via parallel transport) of the velocity field.
    pub lbar: f64,
    /// Lipschitz constant of the velocity field with respect to `W_1`.
    pub lambda: f64,
    pub epsilon: f64,
    /// Grid size used for the `g'` constants; 0 when closed forms were used.
    pub grid_size: usize,
}

impl PotentialConstants {
    /// `C(t) = (e^{L̄ t} - 1) / L̄`, with limit `t` as `L̄ -> 0`.
    pub fn gronwall_factor(&self, t: f64) -> f64 {
        gronwall_factor(self.lbar, t)
    }

    /// `C(T) Λ`, the contraction factor of the Picard map on `[0, T)`.
    pub fn contraction_factor(&self, t: f64) -> f64 {
        self.gronwall_factor(t) * self.lambda
    }

    /// The horizon `T` at which `C(T) Λ` equals `target`.
    pub fn horizon_for_factor(&self, target: f64) -> f64 {
        if self.lambda == 0.0 {
            return f64::INFINITY;
        }
        let ratio = target / self.lambda;
        if self.lbar == 0.0 {
            ratio
        } else {
            (ratio * self.lbar).ln_1p() / self.lbar
        }
    }

    /// Overrides one named constant; used to exercise failure paths.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "L" => &mut self.l,
            "ell" => &mut self.ell,
            "Lbar" | "lbar" => &mut self.lbar,
            "Lambda" | "lambda" => &mut self.lambda,
            "c_gprime" => &mut self.c_gprime,
            "l_gprime" => &mut self.l_gprime,
            other => return Err(Error::InvalidConfig(format!("unknown constant `{other}`"))),
        };
        *slot = value;
        Ok(())
    }
}

/// `(e^{L t} - 1) / L`, continuous at `L = 0`.
pub fn gronwall_factor(l: f64, t: f64) -> f64 {
    if l == 0.0 {
        t
    } else {
        (l * t).exp_m1() / l
    }
}

/// Hessian bound `L = 2 sqrt(-λ) Δ coth(sqrt(-λ) Δ)`, equal to 2 when λ = 0.
pub fn hessian_bound(lambda: f64, delta: f64) -> f64 {
    let a = (-lambda).max(0.0).sqrt() * delta;
    2.0 * s_coth(a)
}

/// `ℓ = (π - ε) / sin(π - ε)` when μ > 0, else 1.
pub fn log_lipschitz_constant(mu: f64, epsilon: f64) -> f64 {
    if mu > 0.0 {
        (PI - epsilon) / (PI - epsilon).sin()
    } else {
        1.0
    }
}

/// `a coth(a)`, continuous at 0.
pub(crate) fn s_coth(a: f64) -> f64 {
    if a.abs() < 1e-8 {
        1.0 + a * a / 3.0
    } else {
        a / a.tanh()
    }
}

/// `a cot(a)`, continuous at 0.
pub(crate) fn s_cot(a: f64) -> f64 {
    if a.abs() < 1e-8 {
        1.0 - a * a / 3.0
    } else {
        a / a.tan()
    }
}

/// Largest admissible diameter for the Hessian bound when μ > 0.
pub fn hessian_diameter_limit(mu: f64) -> f64 {
    if mu > 0.0 {
        PI / (2.0 * mu.sqrt())
    } else {
        f64::INFINITY
    }
}

/// Constants on a set of diameter `delta` for a manifold with curvature in
/// `[lambda, mu]`, with the default grid for non-closed-form profiles.
pub fn profile_constants(
    profile: &PotentialProfile,
    delta: f64,
    lambda: f64,
    mu: f64,
    epsilon: f64,
) -> Result<PotentialConstants> {
    profile_constants_with_grid(profile, delta, lambda, mu, epsilon, DEFAULT_GRID_SIZE)
}

/// As [`profile_constants`], with an explicit estimation grid size.
pub fn profile_constants_with_grid(
    profile: &PotentialProfile,
    delta: f64,
    lambda: f64,
    mu: f64,
    epsilon: f64,
    grid_size: usize,
) -> Result<PotentialConstants> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidConfig(format!("diameter {delta} must be positive")));
    }
    if !(epsilon > 0.0 && epsilon < PI) {
        return Err(Error::InvalidConfig(format!("epsilon {epsilon} must lie in (0, pi)")));
    }
    if mu > 0.0 {
        let limit = hessian_diameter_limit(mu);
        if delta >= limit {
            return Err(Error::DiameterTooLarge { delta, limit });
        }
        let limit = (PI - epsilon) / mu.sqrt();
        if delta > limit {
            return Err(Error::DiameterTooLarge { delta, limit });
        }
    }
    let (c_gprime, l_gprime, used_grid) = match profile.exact_gprime_constants(delta) {
        Some((c, l)) => (c, l, 0),
        None => {
            let (c, l) = estimate_gprime_constants(profile, delta * delta, grid_size);
            (c, l, grid_size)
        }
    };
    let l = hessian_bound(lambda, delta);
    let ell = log_lipschitz_constant(mu, epsilon);
    let d2 = delta * delta;
    Ok(PotentialConstants {
        delta,
        c_gprime,
        l_gprime,
        l,
        ell,
        lbar: c_gprime * l + 4.0 * d2 * l_gprime,
        lambda: 2.0 * c_gprime * ell + 4.0 * l_gprime * d2,
        epsilon,
        grid_size: used_grid,
    })
}

/// Grid estimates of `sup |g'|` and `Lip g'` on `[0, s_max]`.
///
/// The Lipschitz estimate is the largest secant slope over adjacent grid
/// nodes and over short probes of width `1e-7 * max(1, s_max)` on either
/// side of every node; each secant is a lower bound on the true constant.
pub fn estimate_gprime_constants(profile: &PotentialProfile, s_max: f64, grid_size: usize) -> (f64, f64) {
    let n = grid_size.max(2);
    let node = |k: usize| s_max * k as f64 / (n - 1) as f64;
    let probe = 1e-7 * s_max.max(1.0);
    let slope = |a: f64, b: f64| {
        if b > a {
            (profile.g_prime(b) - profile.g_prime(a)).abs() / (b - a)
        } else {
            0.0
        }
    };
    let mut c: f64 = 0.0;
    let mut l: f64 = 0.0;
    for k in 0..n {
        let s = node(k);
        c = c.max(profile.g_prime(s).abs());
        if k + 1 < n {
            l = l.max(slope(s, node(k + 1)));
        }
        l = l.max(slope(s, (s + probe).min(s_max)));
        l = l.max(slope((s - probe).max(0.0), s));
    }
    (c, l)
}

// ---- global hypothesis --------------------------------------------------

/// Tolerance for [`KglobReport::passed`].
pub const KGLOB_TOL: f64 = 1e-9;

/// Worst violations of the global hypothesis on a radial grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KglobReport {
    pub profile: String,
    pub a_gprime: f64,
    pub lambda: f64,
    pub grid_max: f64,
    pub grid_size: usize,
    /// `sup |g'(r²) r - g'(s²) s| / |r - s| - A`.
    pub lipschitz_violation: f64,
    /// `sup |g'(r²)| r - A`; only checked when λ < 0.
    pub bound_violation: Option<f64>,
    /// `sup |g'(r²) - g'(s²)| s / (2 A |r - s|) - 1`, or the unnormalized
    /// quotient when A = 0.
    pub remark_violation: f64,
}

impl KglobReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.lipschitz_violation <= tol
            && self.bound_violation.is_none_or(|v| v <= tol)
            && self.remark_violation <= tol
    }
}

/// Checks the global hypothesis for curvature lower bound `lambda` on the
/// radial grid `r_k = grid_max * k / (grid_size - 1)`.
///
/// The Lipschitz quotient is maximized over adjacent nodes, which bounds the
/// quotient over all pairs. The remark bound has no such reduction and is
/// checked over all pairs.
pub fn check_kglob(
    profile: &PotentialProfile,
    lambda: f64,
    grid_max: f64,
    grid_size: usize,
) -> Result<KglobReport> {
    let a = profile
        .a_gprime()
        .ok_or_else(|| Error::MissingGlobalConstant(profile.name().to_string()))?;
    let n = grid_size.max(2);
    let r: Vec<f64> = (0..n).map(|k| grid_max * k as f64 / (n - 1) as f64).collect();
    let gp: Vec<f64> = r.iter().map(|&x| profile.g_prime(x * x)).collect();
    let f: Vec<f64> = r.iter().zip(&gp).map(|(x, g)| g * x).collect();

    let lipschitz = r
        .windows(2)
        .zip(f.windows(2))
        .map(|(rw, fw)| (fw[1] - fw[0]).abs() / (rw[1] - rw[0]))
        .fold(f64::NEG_INFINITY, f64::max);

    let bound_violation = (lambda < 0.0).then(|| {
        r.iter()
            .zip(&gp)
            .map(|(x, g)| g.abs() * x - a)
            .fold(f64::NEG_INFINITY, f64::max)
    });

    let mut remark = f64::NEG_INFINITY;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let q = (gp[i] - gp[j]).abs() * r[j] / (r[i] - r[j]).abs();
            let v = if a > 0.0 { q / (2.0 * a) - 1.0 } else { q };
            remark = remark.max(v);
        }
    }

    Ok(KglobReport {
        profile: profile.name().to_string(),
        a_gprime: a,
        lambda,
        grid_max,
        grid_size: n,
        lipschitz_violation: lipschitz - a,
        bound_violation,
        remark_violation: remark,
    })
}
