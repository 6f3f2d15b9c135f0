use thiserror::Error;

use crate::params::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` is not finite ({value})")]
    NonFinite { name: &'static str, value: f64 },

    #[error("invalid mixture parameters:\n{0}")]
    InvalidParams(ValidationReport),

    #[error("unknown preset `{0}` (expected gross-krook, hamel, plasma or aap)")]
    UnknownPreset(String),

    #[error("number density {n:e} is below the degenerate threshold")]
    DegenerateDensity { n: f64 },

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("cannot build a velocity grid from an empty species list")]
    EmptyMoments,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(
        "moment-matched Maxwellian did not converge after {iterations} Newton iterations \
         (residual {residual:e}); the velocity grid is too coarse for this temperature"
    )]
    NonResolvableMaxwellian { iterations: usize, residual: f64 },

    #[error("time step {dt} exceeds the stability bound {bound}")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("CFL number {courant:.4} exceeds the limit {limit}")]
    CflViolation { courant: f64, limit: f64 },

    #[error("MHD step failed in cell {cell}: {reason}")]
    MhdStepFailure { cell: usize, reason: String },

    #[error("grid with {cells} points is too coarse for a {stencil}-point stencil")]
    GridTooCoarse { cells: usize, stencil: usize },

    #[error("scale `{name}` must be positive and finite, got {value}")]
    InvalidScale { name: &'static str, value: f64 },

    /// `line` is 1-based; 0 refers to the file as a whole.
    #[error("{}", config_message(*line, message))]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn config_message(line: usize, message: &str) -> String {
    if line == 0 {
        format!("config: {message}")
    } else {
        format!("config line {line}: {message}")
    }
}

impl Error {
    pub fn config(line: usize, message: impl Into<String>) -> Self {
        Error::Config {
            line,
            message: message.into(),
        }
    }
}
