//! Powder-averaged double-quantum filtration (DQF) experiments.
//!
//! Excitation by n_C blocks of the relaxed C7 sequence starting at t = 0,
//! ideal selection of ±2 coherences, reconversion by the same blocks with all
//! phases advanced by 90° starting where excitation ended (the rotor phase is
//! not reset), then detection of the initial operator. Efficiency is
//! normalized so that the initial state scores 1.

mod dqf;
mod powder;
pub mod reference;

pub use dqf::{
    buildup_curve, dqf_efficiency, experiment_events, fwhm, offset_profile, BuildupPoint, DqfResult, Experiment,
    Fwhm, Magnetization, SimConfig,
};
pub use powder::{zcw_alpha_beta, Powder, PowderKind, PowderSpec};
