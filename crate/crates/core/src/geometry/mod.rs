//! Chart-free Riemannian kernels for Euclidean space, the unit 2-sphere and
//! the hyperbolic plane.
//!
//! Points and tangent vectors live in embedded coordinates: plain vectors for
//! `Euclidean(n)`, unit vectors of R^3 for the sphere and the upper sheet of
//! the hyperboloid `x3^2 - x1^2 - x2^2 = 1` for the hyperbolic plane. Every
//! operation that produces a point renormalizes it onto the constraint
//! surface, and every operation that produces a tangent vector projects it
//! back onto the tangent space of its base point.
//!
//! All kernels are closed-form. On the sphere, pairs closer than
//! [`ANTIPODAL_GUARD`] to the cut locus are rejected.

mod linalg;
mod sampling;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use linalg::{cross, dot, lincomb, minkowski, norm, scale, sub};

pub use sampling::{BallSampling, SampleSpec};

/// Distance to the cut locus below which sphere pairs are rejected.
pub const ANTIPODAL_GUARD: f64 = 1e-6;

/// Tolerance for the manifold and tangency invariants of inputs.
pub const INVARIANT_TOL: f64 = 1e-10;

/// A point in the ambient representation of its manifold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ManifoldPoint {
    pub coords: Vec<f64>,
}

impl ManifoldPoint {
    /// Wraps raw coordinates without validation; see [`Manifold::point`].
    pub fn new(coords: Vec<f64>) -> Self {
        ManifoldPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl From<Vec<f64>> for ManifoldPoint {
    fn from(coords: Vec<f64>) -> Self {
        ManifoldPoint::new(coords)
    }
}

/// A tangent vector together with its base point.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub base: ManifoldPoint,
    pub comps: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: ManifoldPoint, comps: Vec<f64>) -> Self {
        TangentVector { base, comps }
    }

    pub fn zero(base: &ManifoldPoint) -> Self {
        TangentVector {
            comps: vec![0.0; base.dim()],
            base: base.clone(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        TangentVector {
            base: self.base.clone(),
            comps: scale(&self.comps, s),
        }
    }

    /// `self + s * other`; both vectors must share a base point.
    pub fn add_scaled(&self, s: f64, other: &TangentVector) -> Self {
        debug_assert_eq!(self.base, other.base, "tangent vectors at different points");
        TangentVector {
            base: self.base.clone(),
            comps: lincomb(1.0, &self.comps, s, &other.comps),
        }
    }

    pub fn sub(&self, other: &TangentVector) -> Self {
        self.add_scaled(-1.0, other)
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1.0)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| *c == 0.0)
    }
}

/// The three concrete manifolds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    Euclidean(usize),
    Sphere,
    Hyperbolic,
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::Euclidean(n) => write!(f, "euclidean:{n}"),
            Manifold::Sphere => write!(f, "sphere"),
            Manifold::Hyperbolic => write!(f, "hyperbolic"),
        }
    }
}

impl FromStr for Manifold {
    type Err = String;

    /// Accepts `euclidean:N` (or `euclidean`, meaning N = 2), `sphere` and
    /// `hyperbolic`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, param) = match lower.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (lower.as_str(), None),
        };
        match (name, param) {
            ("euclidean", None) => Ok(Manifold::Euclidean(2)),
            ("euclidean", Some(p)) => match p.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(Manifold::Euclidean(n)),
                _ => Err(format!("invalid euclidean dimension `{p}`")),
            },
            ("sphere", None) => Ok(Manifold::Sphere),
            ("hyperbolic", None) => Ok(Manifold::Hyperbolic),
            _ => Err(format!("unknown manifold `{s}`")),
        }
    }
}

impl Manifold {
    /// Length of the ambient coordinate vector.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Manifold::Euclidean(n) => *n,
            Manifold::Sphere | Manifold::Hyperbolic => 3,
        }
    }

    /// Intrinsic dimension.
    pub fn dim(&self) -> usize {
        match self {
            Manifold::Euclidean(n) => *n,
            Manifold::Sphere | Manifold::Hyperbolic => 2,
        }
    }

    /// Lower sectional curvature bound (λ ≤ 0).
    pub fn curvature_lower(&self) -> f64 {
        match self {
            Manifold::Hyperbolic => -1.0,
            _ => 0.0,
        }
    }

    /// Upper sectional curvature bound (μ ≥ 0).
    pub fn curvature_upper(&self) -> f64 {
        match self {
            Manifold::Sphere => 1.0,
            _ => 0.0,
        }
    }

    pub fn injectivity_radius(&self) -> f64 {
        match self {
            Manifold::Sphere => PI,
            _ => f64::INFINITY,
        }
    }

    pub fn convexity_radius(&self) -> f64 {
        match self {
            Manifold::Sphere => PI / 2.0,
            _ => f64::INFINITY,
        }
    }

    /// The natural origin: zero for Euclidean space, the north pole for the
    /// sphere and the vertex `(0, 0, 1)` of the hyperboloid.
    pub fn origin(&self) -> ManifoldPoint {
        let mut c = vec![0.0; self.ambient_dim()];
        if !matches!(self, Manifold::Euclidean(_)) {
            c[2] = 1.0;
        }
        ManifoldPoint::new(c)
    }

    // ---- validation and projection -------------------------------------

    fn check_len(&self, len: usize) -> Result<()> {
        let expected = self.ambient_dim();
        if len != expected {
            return Err(Error::DimensionMismatch { expected, got: len });
        }
        Ok(())
    }

    /// Checks the manifold invariants of `p`.
    pub fn validate_point(&self, p: &ManifoldPoint) -> Result<()> {
        self.check_len(p.dim())?;
        let c = &p.coords;
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::OffManifold(format!("non-finite coordinates {c:?}")));
        }
        match self {
            Manifold::Euclidean(_) => Ok(()),
            Manifold::Sphere => {
                let dev = (norm(c) - 1.0).abs();
                if dev > INVARIANT_TOL {
                    return Err(Error::OffManifold(format!(
                        "sphere point {c:?} has |norm - 1| = {dev:e}"
                    )));
                }
                Ok(())
            }
            Manifold::Hyperbolic => {
                let dev = (-minkowski(c, c) - 1.0).abs();
                // absolute tolerance near the vertex, relative far out on the sheet
                if c[2] <= 0.0 || dev > INVARIANT_TOL * c[2].powi(2).max(1.0) {
                    return Err(Error::OffManifold(format!(
                        "hyperboloid point {c:?} has constraint defect {dev:e}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Validates and wraps raw coordinates.
    pub fn point(&self, coords: Vec<f64>) -> Result<ManifoldPoint> {
        let p = ManifoldPoint::new(coords);
        self.validate_point(&p)?;
        Ok(p)
    }

    /// Renormalizes ambient coordinates onto the constraint surface.
    pub fn project(&self, coords: Vec<f64>) -> Result<ManifoldPoint> {
        self.check_len(coords.len())?;
        let coords = match self {
            Manifold::Euclidean(_) => coords,
            Manifold::Sphere => {
                let n = norm(&coords);
                if n == 0.0 || !n.is_finite() {
                    return Err(Error::OffManifold(format!(
                        "cannot project {coords:?} onto the sphere"
                    )));
                }
                scale(&coords, 1.0 / n)
            }
            Manifold::Hyperbolic => {
                let (a, b) = (coords[0], coords[1]);
                vec![a, b, (1.0 + a * a + b * b).sqrt()]
            }
        };
        self.point(coords)
    }

    /// Orthogonal projection of an ambient vector onto `T_x M`.
    pub fn project_tangent(&self, x: &ManifoldPoint, w: Vec<f64>) -> TangentVector {
        let comps = match self {
            Manifold::Euclidean(_) => w,
            Manifold::Sphere => {
                let s = dot(&x.coords, &w);
                lincomb(1.0, &w, -s, &x.coords)
            }
            Manifold::Hyperbolic => {
                let s = minkowski(&x.coords, &w);
                lincomb(1.0, &w, s, &x.coords)
            }
        };
        TangentVector::new(x.clone(), comps)
    }

    /// Checks the tangency invariant of `v` at its base point.
    pub fn validate_tangent(&self, v: &TangentVector) -> Result<()> {
        self.check_len(v.comps.len())?;
        self.check_len(v.base.dim())?;
        if v.comps.iter().any(|c| !c.is_finite()) {
            return Err(Error::OffManifold(format!(
                "non-finite tangent components {:?}",
                v.comps
            )));
        }
        let defect = match self {
            Manifold::Euclidean(_) => 0.0,
            Manifold::Sphere => dot(&v.base.coords, &v.comps).abs(),
            Manifold::Hyperbolic => minkowski(&v.base.coords, &v.comps).abs(),
        };
        let scale = norm(&v.comps).max(1.0) * norm(&v.base.coords).max(1.0);
        if defect > INVARIANT_TOL * scale {
            return Err(Error::OffManifold(format!(
                "vector {:?} is not tangent at {:?} (defect {defect:e})",
                v.comps, v.base.coords
            )));
        }
        Ok(())
    }

    /// Validates and wraps a tangent vector.
    pub fn tangent(&self, base: &ManifoldPoint, comps: Vec<f64>) -> Result<TangentVector> {
        let v = TangentVector::new(base.clone(), comps);
        self.validate_tangent(&v)?;
        Ok(v)
    }

    // ---- metric ---------------------------------------------------------

    /// Riemannian inner product of two vectors at the same base point.
    pub fn inner(&self, u: &TangentVector, v: &TangentVector) -> Result<f64> {
        self.check_len(u.comps.len())?;
        self.check_len(v.comps.len())?;
        if u.base != v.base {
            return Err(Error::OffManifold(
                "inner product of vectors at different base points".into(),
            ));
        }
        Ok(self.raw_inner(&u.comps, &v.comps))
    }

    fn raw_inner(&self, u: &[f64], v: &[f64]) -> f64 {
        match self {
            Manifold::Hyperbolic => minkowski(u, v),
            _ => dot(u, v),
        }
    }

    pub fn norm(&self, v: &TangentVector) -> f64 {
        self.raw_inner(&v.comps, &v.comps).max(0.0).sqrt()
    }

    /// Geodesic distance.
    pub fn distance(&self, x: &ManifoldPoint, y: &ManifoldPoint) -> Result<f64> {
        self.validate_point(x)?;
        self.validate_point(y)?;
        self.distance_unchecked(x, y)
    }

    fn distance_unchecked(&self, x: &ManifoldPoint, y: &ManifoldPoint) -> Result<f64> {
        let (a, b) = (&x.coords, &y.coords);
        match self {
            Manifold::Euclidean(_) => Ok(norm(&sub(a, b))),
            Manifold::Sphere => {
                let d = norm(&cross(a, b)).atan2(dot(a, b));
                if d >= PI - ANTIPODAL_GUARD {
                    return Err(Error::AntipodalPair { distance: d });
                }
                Ok(d)
            }
            Manifold::Hyperbolic => {
                // 2 asinh(|x - y|_L / 2) stays accurate for nearby points
                let diff = sub(a, b);
                let chord = minkowski(&diff, &diff).max(0.0).sqrt();
                Ok(2.0 * (chord / 2.0).asinh())
            }
        }
    }

    // ---- exponential and logarithm -------------------------------------

    /// Largest admissible tangent norm for [`Manifold::exp`].
    pub fn exp_limit(&self) -> f64 {
        match self {
            Manifold::Sphere => PI - ANTIPODAL_GUARD,
            _ => f64::INFINITY,
        }
    }

    /// Exponential map at the base point of `v`.
    pub fn exp(&self, v: &TangentVector) -> Result<ManifoldPoint> {
        self.validate_point(&v.base)?;
        self.validate_tangent(v)?;
        let x = &v.base.coords;
        match self {
            Manifold::Euclidean(_) => Ok(ManifoldPoint::new(lincomb(1.0, x, 1.0, &v.comps))),
            Manifold::Sphere => {
                let theta = norm(&v.comps);
                if theta >= self.exp_limit() {
                    return Err(Error::ExceedsInjectivity {
                        norm: theta,
                        limit: self.exp_limit(),
                    });
                }
                if theta == 0.0 {
                    return Ok(v.base.clone());
                }
                self.project(lincomb(theta.cos(), x, theta.sin() / theta, &v.comps))
            }
            Manifold::Hyperbolic => {
                let theta = self.norm(v);
                if theta == 0.0 {
                    return Ok(v.base.clone());
                }
                self.project(lincomb(theta.cosh(), x, theta.sinh() / theta, &v.comps))
            }
        }
    }

    /// Logarithm map: the initial velocity of the minimizing geodesic from
    /// `x` to `y` over unit time.
    pub fn log(&self, x: &ManifoldPoint, y: &ManifoldPoint) -> Result<TangentVector> {
        let d = self.distance(x, y)?;
        let (a, b) = (&x.coords, &y.coords);
        match self {
            Manifold::Euclidean(_) => Ok(TangentVector::new(x.clone(), sub(b, a))),
            Manifold::Sphere => {
                let u = lincomb(1.0, b, -dot(a, b), a);
                Ok(self.rescale_direction(x, u, d))
            }
            Manifold::Hyperbolic => {
                let u = lincomb(1.0, b, minkowski(a, b), a);
                Ok(self.rescale_direction(x, u, d))
            }
        }
    }

    /// Projects `u` onto `T_x M` and rescales it to length `d`.
    fn rescale_direction(&self, x: &ManifoldPoint, u: Vec<f64>, d: f64) -> TangentVector {
        let u = self.project_tangent(x, u);
        let n = self.norm(&u);
        if d == 0.0 || n == 0.0 {
            return TangentVector::zero(x);
        }
        u.scaled(d / n)
    }

    /// Point at parameter `s` on the minimizing geodesic from `x` to `y`.
    pub fn geodesic(&self, x: &ManifoldPoint, y: &ManifoldPoint, s: f64) -> Result<ManifoldPoint> {
        let v = self.log(x, y)?;
        self.exp(&v.scaled(s))
    }

    // ---- parallel transport --------------------------------------------

    /// Parallel transport of `v` along the minimizing geodesic from its base
    /// point to `y`.
    pub fn transport(&self, v: &TangentVector, y: &ManifoldPoint) -> Result<TangentVector> {
        self.validate_tangent(v)?;
        // distance also validates both points and applies the antipodal guard
        self.distance(&v.base, y)?;
        let (a, b) = (&v.base.coords, &y.coords);
        let comps = match self {
            Manifold::Euclidean(_) => v.comps.clone(),
            Manifold::Sphere => {
                let coef = dot(b, &v.comps) / (1.0 + dot(a, b));
                let sum = lincomb(1.0, a, 1.0, b);
                lincomb(1.0, &v.comps, -coef, &sum)
            }
            Manifold::Hyperbolic => {
                let coef = minkowski(b, &v.comps) / (1.0 - minkowski(a, b));
                let sum = lincomb(1.0, a, 1.0, b);
                lincomb(1.0, &v.comps, coef, &sum)
            }
        };
        Ok(self.project_tangent(y, comps))
    }

    // ---- covariant derivatives -----------------------------------------

    /// Covariant derivative of the vector field `field` at the base point of
    /// `v` in direction `v`, by finite differences along the geodesic with
    /// initial velocity `v`. Values of the field at the displaced points are
    /// transported back to the base point before differencing.
    pub fn covariant_fd<F>(
        &self,
        field: F,
        v: &TangentVector,
        h: f64,
        scheme: FiniteDifference,
    ) -> Result<TangentVector>
    where
        F: Fn(&ManifoldPoint) -> Result<TangentVector>,
    {
        let x = &v.base;
        let pulled_back = |step: f64| -> Result<TangentVector> {
            let p = self.exp(&v.scaled(step))?;
            let value = field(&p)?;
            self.transport(&value, x)
        };
        let forward = pulled_back(h)?;
        if scheme == FiniteDifference::Central {
            if let Ok(backward) = pulled_back(-h) {
                return Ok(forward.sub(&backward).scaled(0.5 / h));
            }
        }
        let here = field(x)?;
        Ok(forward.sub(&here).scaled(1.0 / h))
    }

    /// `<Hess d_z^2(x)[v], v>`, computed as `-2 <D_v log_.(z), v>` with a
    /// central covariant difference.
    pub fn hessian_d2_quadform(
        &self,
        x: &ManifoldPoint,
        z: &ManifoldPoint,
        v: &TangentVector,
    ) -> Result<f64> {
        if &v.base != x {
            return Err(Error::OffManifold("direction is not based at x".into()));
        }
        let h = default_fd_step(self.norm(v));
        let d = self.covariant_fd(|p| self.log(p, z), v, h, FiniteDifference::Central)?;
        Ok(-2.0 * self.inner(&d, v)?)
    }

    // ---- tangent frames -------------------------------------------------

    /// An orthonormal basis of `T_x M`.
    pub fn tangent_basis(&self, x: &ManifoldPoint) -> Result<Vec<TangentVector>> {
        self.validate_point(x)?;
        let c = &x.coords;
        match self {
            Manifold::Euclidean(n) => Ok((0..*n)
                .map(|i| {
                    let mut e = vec![0.0; *n];
                    e[i] = 1.0;
                    TangentVector::new(x.clone(), e)
                })
                .collect()),
            Manifold::Sphere => {
                let k = (0..3)
                    .min_by(|&i, &j| c[i].abs().total_cmp(&c[j].abs()))
                    .unwrap_or(0);
                let mut e = vec![0.0; 3];
                e[k] = 1.0;
                let e1 = self.project_tangent(x, e);
                let e1 = e1.scaled(1.0 / self.norm(&e1));
                let e2 = cross(c, &e1.comps).to_vec();
                Ok(vec![e1, self.project_tangent(x, e2)])
            }
            Manifold::Hyperbolic => {
                let e1 = self.project_tangent(x, vec![1.0, 0.0, 0.0]);
                let e1 = e1.scaled(1.0 / self.norm(&e1));
                let w = self.project_tangent(x, vec![0.0, 1.0, 0.0]);
                let w = w.add_scaled(-self.raw_inner(&w.comps, &e1.comps), &e1);
                let e2 = w.scaled(1.0 / self.norm(&w));
                Ok(vec![e1, e2])
            }
        }
    }
}

/// Finite-difference stencil for [`Manifold::covariant_fd`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteDifference {
    Forward,
    /// Central difference, falling back to a forward difference when the
    /// opposite geodesic point is not admissible.
    Central,
}

/// Step `cbrt(eps) / max(1, |v|)`.
pub fn default_fd_step(v_norm: f64) -> f64 {
    f64::EPSILON.cbrt() / v_norm.max(1.0)
}
