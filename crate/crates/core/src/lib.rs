//! Two-species BGK gas-mixture model.
//!
//! The crate is layered bottom-up:
//!
//! * [`params`] holds the mixture coefficients, their admissibility bounds and
//!   the closed-form interspecies moments.
//! * [`velocity`] discretises velocity space and provides moments,
//!   Maxwellians and the H functional.
//! * [`bgk`] assembles the collision operators, [`relax`] integrates the
//!   space-homogeneous system and [`transport`] adds 1D free streaming.
//! * [`twofluid`] covers the macroscopic exchange terms, the plasma limit
//!   systems and a small ideal-MHD solver.
//! * [`config`] and [`verify`] back the command-line front-end.

pub mod bgk;
pub mod config;
pub mod error;
pub mod params;
pub mod reduce;
pub mod relax;
pub mod transport;
pub mod twofluid;
pub mod vector;
pub mod velocity;
pub mod verify;

pub use error::{Error, Result};
pub use params::{MixtureParams, MomentPair, SpeciesMoments};
pub use vector::Vec3;
