//! Interference, outage and transmission capacity of wireless networks whose
//! transmitters form a Neyman-Scott (Poisson cluster) process, together with
//! a Monte Carlo simulator used to check every analytic result.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod montecarlo;
pub mod network;
pub mod pgfl;
pub mod quadrature;
pub mod rng;
pub mod special;

pub use channel::{FadingModel, PathLoss, PathLossKind};
pub use error::{Error, Result};
pub use geometry::{ClusterModel, CountLaw, Point, PointPattern, Scattering, Window};

pub use montecarlo::{EmpiricalDistribution, McEstimate, SimSpec};
pub use network::NetworkConfig;
pub use pgfl::{Kernel, QuadratureSpec};
