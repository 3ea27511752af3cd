//! Particle simulation of the intrinsic aggregation equation
//! `d/dt rho - div(rho grad(K * rho)) = 0` on Euclidean space, the 2-sphere
//! and the hyperbolic plane, together with numerical certificates for the
//! Lipschitz, Hessian-comparison, contraction and stability estimates that
//! make the equation well posed.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod measures;
pub mod potentials;
pub mod verify;

pub use dynamics::{FlowConfig, Scheme, TrajectoryRecord};
pub use error::{Error, Result};
pub use geometry::{BallSampling, FiniteDifference, Manifold, ManifoldPoint, TangentVector};
pub use measures::{CouplingPlan, EmpiricalMeasure};
pub use potentials::{PotentialConstants, PotentialProfile};
pub use verify::CheckReport;
