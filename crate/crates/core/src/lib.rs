//! Joint TDMA scheduling and trajectory design for a UAV aerial base station.
//!
//! The UAV flies a closed path at fixed altitude over a cyclic period and
//! serves one ground user per slot. [`optimizer::bcd_solve`] maximizes the
//! minimum per-user average rate by alternating between a scheduling LP
//! ([`lp`]) and a convex trajectory step built from a concave rate lower
//! bound ([`sca`]).

pub mod baselines;
pub mod channel;
pub mod error;
pub mod lp;
pub mod optimizer;
pub mod sca;
pub mod scenario;
pub mod scheme;

pub use error::{Error, Result};
