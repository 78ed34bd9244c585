//! Analytic performance metrics of clustered networks.

pub mod capacity;
pub mod gain;
pub mod interference;
pub mod success;

pub use capacity::{
    constrained_capacity, poisson_capacity, spread_spectrum_compare, transmission_capacity,
    unconstrained_capacity_search, CapacityResult, ConstrainedCapacity, SpreadSpectrum,
    UnconstrainedSearch,
};
pub use gain::{
    clustering_gain, gain_monotonicity_check, lambda_star, ClusteringGain, GainSlope,
    MonotonicityLedger,
};
pub use interference::{
    ccdf_bounds, ds_cdma_outage_scaling, mean_interference_thomas, tail_constants, varphi,
    CcdfBoundPair, MeanInterference,
};
pub use success::{
    beta, beta_fixed, beta_integral, beta_summary, bounds_from_summary, poisson_success,
    poisson_success_generic, success_bounds, success_kernel, success_probability,
    success_probability_fixed, success_probability_nakagami, BetaSummary, SuccessBounds,
    SuccessProbability, MAX_NAKAGAMI_SHAPE,
};
