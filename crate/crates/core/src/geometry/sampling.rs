//! Seeded sampling of points in geodesic balls and of tangent vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Manifold, ManifoldPoint, TangentVector};
use crate::error::{Error, Result};

/// Radial law used by [`Manifold::sample_in_ball`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallSampling {
    /// Radius drawn with density proportional to the radial factor of the
    /// volume element, so points are uniform with respect to volume.
    #[default]
    VolumeWeighted,
    /// Radius drawn uniformly on `[0, radius)`.
    UniformRadius,
}

/// A seeded sample of `count` points in a geodesic ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub center: ManifoldPoint,
    pub radius: f64,
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub mode: BallSampling,
}

impl Manifold {
    /// Draws `count` points at distance `< radius` from `center`.
    ///
    /// The direction is uniform on the unit tangent sphere at `center`; the
    /// radius follows `mode`. Deterministic for a fixed seed.
    pub fn sample_in_ball(
        &self,
        center: &ManifoldPoint,
        radius: f64,
        count: usize,
        seed: u64,
        mode: BallSampling,
    ) -> Result<Vec<ManifoldPoint>> {
        self.validate_point(center)?;
        let limit = self.convexity_radius();
        if !(radius >= 0.0 && radius < limit) {
            return Err(Error::RadiusTooLarge { radius, limit });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let u: f64 = rng.random();
                let r = match mode {
                    BallSampling::UniformRadius => u * radius,
                    BallSampling::VolumeWeighted => self.radial_quantile(u, radius),
                };
                let dir = self.random_unit_tangent(center, &mut rng)?;
                self.exp(&dir.scaled(r))
            })
            .collect()
    }

    /// Inverse CDF of the radial law proportional to the volume element.
    fn radial_quantile(&self, u: f64, radius: f64) -> f64 {
        let r = match self {
            Manifold::Euclidean(n) => radius * u.powf(1.0 / *n as f64),
            // density sin r on [0, R)
            Manifold::Sphere => (1.0 - u * (1.0 - radius.cos())).acos(),
            // density sinh r on [0, R)
            Manifold::Hyperbolic => (1.0 + u * (radius.cosh() - 1.0)).acosh(),
        };
        r.min(radius)
    }

    /// A unit tangent vector at `x`, uniform on the unit tangent sphere.
    pub fn random_unit_tangent<R: Rng>(&self, x: &ManifoldPoint, rng: &mut R) -> Result<TangentVector> {
        let basis = self.tangent_basis(x)?;
        let weights: Vec<f64> = loop {
            let w: Vec<f64> = (0..basis.len()).map(|_| rng.sample(StandardNormal)).collect();
            let n = w.iter().map(|a| a * a).sum::<f64>().sqrt();
            if n > 1e-12 {
                break w.into_iter().map(|a| a / n).collect();
            }
        };
        let mut v = TangentVector::zero(x);
        for (w, e) in weights.iter().zip(&basis) {
            v = v.add_scaled(*w, e);
        }
        Ok(v)
    }

    /// A tangent vector at `x` with uniform direction and norm uniform on
    /// `[0, max_norm)`.
    pub fn random_tangent<R: Rng>(
        &self,
        x: &ManifoldPoint,
        max_norm: f64,
        rng: &mut R,
    ) -> Result<TangentVector> {
        let r: f64 = rng.random::<f64>() * max_norm;
        Ok(self.random_unit_tangent(x, rng)?.scaled(r))
    }

    /// A single point in the ball, drawn from an existing generator.
    pub fn random_point_in_ball<R: Rng>(
        &self,
        center: &ManifoldPoint,
        radius: f64,
        rng: &mut R,
    ) -> Result<ManifoldPoint> {
        let u: f64 = rng.random();
        let r = self.radial_quantile(u, radius);
        let dir = self.random_unit_tangent(center, rng)?;
        self.exp(&dir.scaled(r))
    }
}
