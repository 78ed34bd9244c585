//! Reference networks shared by the benchmarks.

use clusternet::{ClusterModel, FadingModel, NetworkConfig, PathLoss};

/// Thomas clusters (1 parent per unit area, 5 daughters, sigma = 0.25),
/// singular path loss with alpha = 4, Rayleigh fading, T = 1, R = 0.5.
pub fn thomas() -> NetworkConfig {
    NetworkConfig::new(
        ClusterModel::thomas(1.0, 5.0, 0.25),
        PathLoss::singular(4.0),
        FadingModel::rayleigh(1.0),
        1.0,
        0.5,
    )
}

/// Matern clusters of radius 0.25 with bounded path loss, otherwise as [`thomas`].
pub fn matern() -> NetworkConfig {
    NetworkConfig::new(
        ClusterModel::matern(1.0, 5.0, 0.25),
        PathLoss::bounded(4.0),
        FadingModel::rayleigh(1.0),
        1.0,
        0.5,
    )
}
