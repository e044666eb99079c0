//! Hamiltonian assembly, step propagators and the reference time-ordered
//! propagation of a pulse sequence for one crystallite.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::linalg::{expm_hermitian, Mat4};
use super::operators::{coherence_order, dipolar_secular, f_x, f_y, i_z, Spin};
use super::system::{CrystalliteCoefficients, InteractionFrequencies, Orientation, SpinSystem};
use crate::sequence::PulseSequence;
use crate::Error;

/// Hermiticity tolerance (relative to ‖H‖_F) accepted by [`step_propagator`].
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(pub Mat4);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Propagator(pub Mat4);

impl DensityMatrix {
    /// U ρ U†
    pub fn evolve(&self, u: &Propagator) -> DensityMatrix {
        DensityMatrix((u.0 * self.0).mul_adjoint(&u.0))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }
}

impl Propagator {
    pub fn identity() -> Self {
        Propagator(Mat4::identity())
    }

    /// `later · self`: apply `self` first, then `later`.
    pub fn then(&self, later: &Propagator) -> Propagator {
        Propagator(later.0 * self.0)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.0.unitarity_defect()
    }
}

/// Full rotating-frame Hamiltonian (rad/s) for the given instantaneous
/// interaction coefficients and r.f. field (amplitude in Hz, phase in rad).
pub fn hamiltonian(coeffs: &InteractionFrequencies, rf_amp: f64, rf_phase: f64) -> Mat4 {
    let w_rf = TAU * rf_amp;
    let h = i_z(Spin::One).scale(coeffs.cs1)
        + i_z(Spin::Two).scale(coeffs.cs2)
        + dipolar_secular().scale(coeffs.dipolar)
        + f_x().scale(w_rf * rf_phase.cos())
        + f_y().scale(w_rf * rf_phase.sin());
    // Exact Hermitian symmetrization.
    let mut out = h;
    for r in 0..4 {
        out.0[r][r] = Complex64::new(h.0[r][r].re, 0.0);
        for c in (r + 1)..4 {
            out.0[c][r] = out.0[r][c].conj();
        }
    }
    out
}

/// The x-phase Hamiltonian as an explicit real symmetric matrix.
#[inline]
pub(crate) fn hamiltonian_x_real(f: &InteractionFrequencies, rf_amp: f64) -> [[f64; 4]; 4] {
    let sum = 0.5 * (f.cs1 + f.cs2);
    let diff = 0.5 * (f.cs1 - f.cs2);
    let d = 0.5 * f.dipolar;
    let r = 0.5 * TAU * rf_amp;
    [
        [sum + d, r, r, 0.0],
        [r, diff - d, -d, r],
        [r, -d, -diff - d, r],
        [0.0, r, r, -sum + d],
    ]
}

/// exp(−i H dt) by Hermitian eigendecomposition.
pub fn step_propagator(h: &Mat4, dt: f64) -> Result<Propagator, Error> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidInput(format!("step duration must be positive, got {dt}")));
    }
    let scale = h.frobenius_norm().max(1.0);
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::Numerical(format!("Hamiltonian is not Hermitian (‖H − H†‖ = {defect:e})")));
    }
    Ok(Propagator(expm_hermitian(h, dt)))
}

/// One piece of the time axis after splitting an interval at every multiple
/// of the grid step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Segment {
    pub mid: f64,
    pub duration: f64,
    /// Absolute cell index when the segment covers a whole grid cell.
    pub full_cell: Option<u64>,
}

/// Splits `[t0, t1)` at the global grid points `k · step` (anchored at t = 0).
pub(crate) fn grid_segments(t0: f64, t1: f64, step: f64) -> impl Iterator<Item = Segment> {
    let first = (t0 / step).floor() as u64;
    let last = (t1 / step).floor() as u64;
    let mut k = first;
    let mut done = t1 <= t0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cell_start = k as f64 * step;
        let cell_end = (k + 1) as f64 * step;
        let start = if k == first { t0 } else { cell_start };
        let end = if k == last { t1 } else { cell_end };
        let seg = if k != first && k != last {
            Segment { mid: (k as f64 + 0.5) * step, duration: step, full_cell: Some(k) }
        } else {
            Segment { mid: 0.5 * (start + end), duration: end - start, full_cell: None }
        };
        if k >= last {
            done = true;
        }
        k += 1;
        Some(seg)
    })
    .filter(|s| s.duration > 0.0)
}

/// Time-ordered propagator of `events` for one crystallite.
///
/// Each event is cut at every multiple of `max_step` measured from absolute
/// time zero, so no piece exceeds `max_step`; the Hamiltonian is sampled at
/// each piece's midpoint. The first event starts at absolute time `t_start`,
/// which fixes the rotor phase.
pub fn propagate_sequence(
    sys: &SpinSystem,
    o: &Orientation,
    rotor_freq: f64,
    events: &PulseSequence,
    t_start: f64,
    max_step: f64,
) -> Result<Propagator, Error> {
    if events.is_empty() {
        return Err(Error::InvalidInput("empty pulse sequence".into()));
    }
    if !(max_step > 0.0) {
        return Err(Error::InvalidInput("max_step must be positive".into()));
    }
    if !(rotor_freq > 0.0) {
        return Err(Error::InvalidInput("rotor frequency must be positive".into()));
    }
    let coeffs = CrystalliteCoefficients::new(sys, o, rotor_freq);
    let mut total = Mat4::identity();
    let mut t = t_start;
    for ev in events.iter() {
        if !(ev.duration >= 0.0) {
            return Err(Error::InvalidInput(format!("negative pulse duration {}", ev.duration)));
        }
        let t_end = t + ev.duration;
        for seg in grid_segments(t, t_end, max_step) {
            let h = hamiltonian(&coeffs.at(seg.mid), ev.amplitude, ev.phase);
            total = expm_hermitian(&h, seg.duration) * total;
        }
        t = t_end;
    }
    Ok(Propagator(total))
}

/// Keeps the density-matrix elements whose coherence order is in `orders`.
pub fn coherence_filter(rho: &DensityMatrix, orders: &[i32]) -> DensityMatrix {
    let mut out = Mat4::zeros();
    for r in 0..4 {
        for c in 0..4 {
            if orders.contains(&coherence_order(r, c)) {
                out.0[r][c] = rho.0 .0[r][c];
            }
        }
    }
    DensityMatrix(out)
}

/// Tr(op† · ρ)
pub fn expectation(rho: &DensityMatrix, op: &Mat4) -> Complex64 {
    op.adjoint().trace_product(&rho.0)
}
