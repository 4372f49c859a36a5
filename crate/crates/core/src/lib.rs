//! Quantum-correlation monogamy toolkit for three-party states: concurrence,
//! entanglement of formation, quantum discord, monogamy scores, the
//! generalized geometric measure and Mermin–Klyshko Bell values, plus the
//! scan drivers that sweep them over parametrized state families.

pub mod bell;
pub mod error;
pub mod exec;
pub mod measures;
pub mod monogamy;
pub mod multient;
pub mod optimize;
pub mod qcore;
pub mod scan;
pub mod states;

pub use error::{Error, Result};
pub use exec::Execution;
