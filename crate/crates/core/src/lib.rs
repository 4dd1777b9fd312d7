//! Wave-front tracking for a one-dimensional compressible liquid slab
//! surrounded by gas, written in Lagrangian mass coordinates, together with
//! the rigid-piston model obtained as the liquid becomes incompressible.

pub mod eos;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod fronttracker;
pub mod glimm;
pub mod laxwaves;
pub mod limits;
pub mod oracle;
mod quadrature;
pub mod riemann;
pub mod scenario;

pub use eos::{GammaLaw, LiquidEos, Medium};
pub use error::{Error, Result};
pub use field::{Field, TimeSeries};
pub use fronttracker::{RunOptions, Tracker, Trajectory};
pub use laxwaves::{State, WaveFamily, WaveKind};
pub use scenario::{InitialProfile, Jump, Region, Scenario};
