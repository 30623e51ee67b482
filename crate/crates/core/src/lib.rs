//! Exactly solvable oscillator and Coulomb radial problems in flat and curved
//! space, their position-dependent-mass rereadings, and a numerical
//! Sturm-Liouville oracle that checks every closed form.

pub mod cli;
pub mod duality;
pub mod error;
pub mod jet;
pub mod models;
pub mod oracle;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
