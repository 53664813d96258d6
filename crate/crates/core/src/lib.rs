//! Full counting statistics of photons leaking from a driven dissipative
//! Dicke cavity, in the thermodynamic limit of many atoms.

pub mod bogoliubov;
pub mod error;
pub mod integrate;
pub mod jet;
pub mod model;
pub mod oracle;
pub mod prep_dynamics;
pub mod scalar;
pub mod statistics;

pub use error::{Error, Result};
pub use scalar::Real;
