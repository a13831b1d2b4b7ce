//! Relative Fisher information of the classical discrete orthogonal
//! polynomials (Charlier, Meixner, Kravchuk, Hahn) with respect to their
//! weights.
//!
//! Every quantity is computed under one of two backends: exact rationals, or
//! arbitrary-precision binary floats. Four independent evaluation routes are
//! provided in [`fisher`] (lattice sum, summation by parts, connection
//! expansion, closed hypergeometric form), with [`asymptotics`] for the
//! limiting regimes, [`sweep`] for figure grids and [`verify`] for the
//! invariant suites.

pub mod asymptotics;
pub mod error;
pub mod families;
pub mod fisher;
pub mod numerics;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
