//! Single-crystallite spin-pair dynamics under MAS.
//!
//! Basis: Zeeman product states `{|αα⟩, |αβ⟩, |βα⟩, |ββ⟩}`. The Hamiltonian
//! is written in the r.f. rotating frame with the secular homonuclear
//! dipolar term; a positive frequency offset rotates positively about +z.

mod grid;
pub mod linalg;
pub mod operators;
mod propagate;
mod system;

pub use grid::{CrystalliteEngine, RotorGrid};
pub use linalg::Mat4;
pub use propagate::{
    coherence_filter, expectation, hamiltonian, propagate_sequence, step_propagator, DensityMatrix, Propagator,
    HERMITIAN_TOL,
};
pub use system::{
    interaction_frequencies, magic_angle, wigner_d2, CrystalliteCoefficients, CsaTensor, Euler,
    InteractionFrequencies, Orientation, RotorModulation, SpinSystem,
};
