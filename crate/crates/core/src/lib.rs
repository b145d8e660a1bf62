//! Models for relativistic and quantum experiments run across ground-to-space
//! optical links: clock-rate offsets along orbits, link budgets, Bell tests,
//! single-photon and two-photon interferometry, teleportation tomography and
//! gravitational decoherence.

// `!(x > 0.0)` style guards are used so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bellstats;
pub mod cowsim;
pub mod decoherence;
mod error;
pub mod homsim;
pub mod linkbudget;
pub mod montecarlo;
pub mod optimize;
pub mod physcore;
pub mod relorbit;
pub mod teleportsim;

pub use error::{Error, Result};
