//! Vietoris–Rips persistence in degrees 0 and 1 over Z/2, used to check
//! the fundamental group of sampled subset spaces numerically.

mod cloud;
mod rips;

pub use cloud::{maxmin_subsample, sample_ran, MetricCloud};
pub use rips::{
    long_lived_h1_count, pairs_to_json, persistence_table, rips_persistence_h1,
    rips_persistence_with_budget, simplex_budget, PersistencePair, BUDGET_ENV,
    DEFAULT_SIMPLEX_BUDGET,
};
