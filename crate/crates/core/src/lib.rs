//! Search for line-transitive, point-imprimitive 2-(v,k,1) designs via
//! starter blocks under a prescribed permutation group.
//!
//! The pipeline: build the group ([`group`]), tabulate its orbits on point
//! pairs, derive per-orbit targets ([`orbit_condition`]) and intercept vectors
//! ([`dd`]), run the backtracking search ([`search`]), then develop and check
//! any starter block found ([`design`]). [`singer`] builds the Desarguesian
//! planes used as a known-positive control.

pub mod dd;
pub mod design;
pub mod error;
pub mod group;
pub mod orbit_condition;
pub mod search;
pub mod singer;

pub use error::{Error, Result};
