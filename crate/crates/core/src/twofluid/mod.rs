//! Macroscopic layer: exchange fluxes, the nondimensional ion-electron
//! moment system, its MHD limit systems and a 1D ideal-MHD solver.

mod fluxes;
mod limits;
mod mhd;
mod scaling;

pub use fluxes::{exchange_fluxes, flux_consistency_with, kinetic_flux_consistency, ExchangeFluxes, FluxConsistency};
pub use limits::{
    induction_identity_check, limit_residual, observed_orders, refinement_study, AdvectedLayer, FieldSample,
    InductionCheck, LimitResidual, LimitSystem, ManufacturedSolution, SampledFields, TrigField, TrigMode,
    UniformState, STENCIL_POINTS,
};
pub use mhd::{mhd_step, MhdCell, MhdState, MhdTotals, Primitive, GAS_GAMMA, MHD_CFL_LIMIT};
pub use scaling::{
    dimensionless_constants, twofluid_source_terms, CollisionRates, DimensionlessConstants, ScaleWarning, Scales,
    SourceTerms, SCALE_CONSISTENCY_TOLERANCE,
};
