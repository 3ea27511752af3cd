//! Run configuration read from a TOML file.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use manifold_agg::geometry::BallSampling;
use manifold_agg::{EmpiricalMeasure, FlowConfig, Manifold, ManifoldPoint, PotentialProfile};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CHECKS: [&str; 8] = [
    "transport_identities",
    "hessian_bounds",
    "d2_lipschitz",
    "log_lipschitz_second_arg",
    "gronwall_flow_bound",
    "stability",
    "contraction",
    "support_containment",
];

/// Everything a run needs; every field has an explicit default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `euclidean:N`, `sphere` or `hyperbolic`.
    pub manifold: String,
    /// `quadratic`, `power:P`, `bounded-attractive` or `constant`.
    pub potential: String,
    pub seed: u64,
    /// Worker threads; 0 lets the runtime decide.
    pub threads: usize,
    pub output: PathBuf,
    pub checks: Vec<String>,
    pub initial: InitialSpec,
    pub flow: FlowConfig,
    pub verify: VerifySettings,
}

/// Initial measure: explicit `points` (with optional `weights`, uniform
/// otherwise), or `count` points sampled in the ball of `radius` about
/// `center`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<ManifoldPoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<ManifoldPoint>,
    pub radius: f64,
    pub count: usize,
    /// Sampling seed; the run seed when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub mode: BallSampling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySettings {
    /// Samples per pointwise check.
    pub samples: usize,
    /// Diameter of the sampling region of the geometric checks; a
    /// per-manifold default when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub epsilon: f64,
    /// Norm of the field shift and of the initial-data perturbation.
    pub perturbation: f64,
    /// The contraction check shortens the horizon so that `C(T) Λ` does not
    /// exceed this value.
    pub contraction_target: f64,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            manifold: "euclidean:2".into(),
            potential: "quadratic".into(),
            seed: 0,
            threads: 0,
            output: PathBuf::from("out"),
            checks: CHECKS.iter().map(|s| s.to_string()).collect(),
            initial: InitialSpec::default(),
            flow: FlowConfig::default(),
            verify: VerifySettings::default(),
        }
    }
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec {
            points: None,
            weights: None,
            center: None,
            radius: 0.5,
            count: 10,
            seed: None,
            mode: BallSampling::VolumeWeighted,
        }
    }
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            samples: 500,
            delta: None,
            epsilon: PI / 2.0,
            perturbation: 0.01,
            contraction_target: 0.9,
            picard_tol: 1e-8,
            picard_max_iter: 100,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("configs serialize")
    }

    pub fn manifold(&self) -> Result<Manifold, CliError> {
        self.manifold.parse().map_err(CliError::Config)
    }

    pub fn profile(&self) -> Result<PotentialProfile, CliError> {
        Ok(PotentialProfile::parse(&self.potential)?)
    }

    /// Checks that every reference resolves and the initial measure is
    /// valid; returns the resolved pieces.
    pub fn resolve(&self) -> Result<(Manifold, PotentialProfile, EmpiricalMeasure), CliError> {
        let m = self.manifold()?;
        let profile = self.profile()?;
        for c in &self.checks {
            if !CHECKS.contains(&c.as_str()) {
                return Err(CliError::Config(format!("unknown check `{c}`")));
            }
        }
        self.flow.validate()?;
        let rho0 = self.initial_measure(&m)?;
        Ok((m, profile, rho0))
    }

    fn initial_measure(&self, m: &Manifold) -> Result<EmpiricalMeasure, CliError> {
        let init = &self.initial;
        let rho = match &init.points {
            Some(points) => match &init.weights {
                Some(w) => EmpiricalMeasure::new(points.clone(), w.clone())?,
                None => EmpiricalMeasure::uniform(points.clone())?,
            },
            None => {
                if init.weights.is_some() {
                    return Err(CliError::Config("initial.weights given without initial.points".into()));
                }
                let center = init.center.clone().unwrap_or_else(|| m.origin());
                let seed = init.seed.unwrap_or(self.seed);
                let points = m.sample_in_ball(&center, init.radius, init.count, seed, init.mode)?;
                EmpiricalMeasure::uniform(points)?
            }
        };
        rho.validate_on(m)?;
        Ok(rho)
    }
}

/// Default diameter of the sampling region of the geometric checks.
pub fn default_delta(m: &Manifold) -> f64 {
    match m {
        Manifold::Sphere => PI / 3.0,
        _ => 2.0,
    }
}
