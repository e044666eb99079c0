//! Two-spin MAS NMR simulation of C7-type double-quantum recoupling
//! sequences and stochastic/deterministic searches over their parameters.
//!
//! * [`spin`]: density-matrix propagation for one crystallite.
//! * [`sequence`]: C7(2,1) and the relaxed seven-parameter C7 family.
//! * [`experiment`]: powder-averaged double-quantum filtration efficiency.
//! * [`optim`]: bit-string genetic algorithm and the comparison baselines.
//! * [`harness`]: configuration files, landscape scans and study drivers.

pub mod experiment;
pub mod harness;
pub mod optim;
pub mod sequence;
pub mod spin;

mod error;

pub use error::Error;
