//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A pressure (or its liquid transform) left the admissible domain.
    #[error("pressure {p} outside the equation-of-state domain")]
    Domain { p: f64 },

    #[error("wave of family {family} with size {sigma} is not a shock")]
    NotAShock { family: u8, sigma: f64 },

    #[error("wave of family {family} with size {sigma} is not a rarefaction")]
    NotARarefaction { family: u8, sigma: f64 },

    #[error("zero-size wave has no type")]
    ZeroSizeWave,

    #[error("root finder did not converge: {0}")]
    NoConvergence(String),

    #[error("no sign change of the Riemann function on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("inadmissible scenario: {0}")]
    InadmissibleScenario(String),

    #[error("event cap of {cap} exceeded at t = {t} with {fronts} live fronts")]
    EventCapExceeded { cap: u64, t: f64, fronts: usize },

    #[error("time {t} outside [0, {t_end}]")]
    OutOfRange { t: f64, t_end: f64 },

    #[error("trace at z = {0} was not recorded")]
    MissingTrace(f64),

    #[error("no snapshot was recorded at t = {0}")]
    MissingSnapshot(f64),

    #[error("infeasible Glimm constants: {0}")]
    InfeasibleConstants(String),

    #[error("CFL number {0} exceeds 0.5")]
    CflViolation(f64),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
}
