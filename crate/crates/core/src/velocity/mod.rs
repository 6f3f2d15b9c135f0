//! Discrete velocity space: grid, distributions, Maxwellians and entropy.

mod distribution;
mod entropy;
mod grid;
mod maxwellian;

pub use distribution::{Distribution, FORMAT_VERSION, MAGIC};
pub use entropy::{entropy_production, entropy_production_with, h_functional, h_single, safe_ln, EntropyProduction, LOG_FLOOR};
pub use grid::{VelocityGrid, DEFAULT_RADIUS, MIN_NODES};
pub use maxwellian::{
    fit_discrete_maxwellian, maxwellian_continuous, maxwellian_discrete, moments, MaxwellianFit, MaxwellianKind,
    DEGENERATE_DENSITY, MAX_NEWTON_ITERATIONS, NEWTON_TOLERANCE,
};
