//! Fast evaluation of [`propagate_sequence`](super::propagate_sequence) on a
//! rotor-commensurate time grid.
//!
//! When the grid step divides the rotor period into `M` cells, the
//! Hamiltonian of a whole cell depends only on the cell index modulo `M` and
//! on the pulse amplitude. For every distinct amplitude we tabulate the
//! x-phase cell propagators once, store their running products
//! `P[j] = U[j−1] ⋯ U[0]`, and obtain any run of whole cells as
//! `P[e] · P[s]†`. Only the partial cells at pulse boundaries need a fresh
//! exponential. Pulse phases enter through a z-rotation of the x-phase
//! propagator, which is exact because every interaction term commutes with
//! the total z angular momentum.

use super::linalg::{expm_real_symmetric, Mat4};
use super::operators::rotate_about_z;
use super::propagate::hamiltonian_x_real;
use super::system::CrystalliteCoefficients;
use crate::sequence::PulseEvent;

/// Global time grid commensurate with the rotor period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotorGrid {
    pub rotor_freq: f64,
    pub cells_per_rotor: usize,
}

impl RotorGrid {
    pub fn new(rotor_freq: f64, cells_per_rotor: usize) -> Self {
        assert!(rotor_freq > 0.0 && cells_per_rotor > 0);
        RotorGrid { rotor_freq, cells_per_rotor }
    }

    /// Length of one cell, the maximum propagation step.
    pub fn step(&self) -> f64 {
        1.0 / (self.rotor_freq * self.cells_per_rotor as f64)
    }
}

struct AmplitudeTable {
    amplitude: f64,
    /// prefix[j] = U[j−1] ⋯ U[0], length M + 1.
    prefix: Vec<Mat4>,
}

pub struct CrystalliteEngine {
    coeffs: CrystalliteCoefficients,
    step: f64,
    cells: usize,
    tables: Vec<AmplitudeTable>,
}

impl CrystalliteEngine {
    pub fn new(coeffs: CrystalliteCoefficients, grid: RotorGrid) -> Self {
        debug_assert!((coeffs.rotor_freq - grid.rotor_freq).abs() <= 1e-12 * grid.rotor_freq);
        CrystalliteEngine { coeffs, step: grid.step(), cells: grid.cells_per_rotor, tables: Vec::new() }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    fn table_index(&mut self, amplitude: f64) -> usize {
        if let Some(i) = self.tables.iter().position(|t| t.amplitude == amplitude) {
            return i;
        }
        let mut prefix = Vec::with_capacity(self.cells + 1);
        let mut acc = Mat4::identity();
        prefix.push(acc);
        for j in 0..self.cells {
            let mid = (j as f64 + 0.5) * self.step;
            let h = hamiltonian_x_real(&self.coeffs.at(mid), amplitude);
            acc = expm_real_symmetric(h, self.step) * acc;
            prefix.push(acc);
        }
        self.tables.push(AmplitudeTable { amplitude, prefix });
        self.tables.len() - 1
    }

    /// Product of `count` whole cells starting at absolute cell `first`.
    fn cell_run(&self, table: usize, first: u64, count: u64) -> Mat4 {
        let p = &self.tables[table].prefix;
        let m = self.cells as u64;
        let s = (first % m) as usize;
        if count == 0 {
            return Mat4::identity();
        }
        if s as u64 + count <= m {
            return p[s + count as usize].mul_adjoint(&p[s]);
        }
        let mut out = p[self.cells].mul_adjoint(&p[s]);
        let rest = count - (m - s as u64);
        for _ in 0..rest / m {
            out = p[self.cells] * out;
        }
        let r = (rest % m) as usize;
        if r > 0 {
            out = p[r] * out;
        }
        out
    }

    fn partial(&self, amplitude: f64, start: f64, end: f64) -> Mat4 {
        let h = hamiltonian_x_real(&self.coeffs.at(0.5 * (start + end)), amplitude);
        expm_real_symmetric(h, end - start)
    }

    /// Propagator of a single pulse occupying `[t0, t0 + duration)`.
    pub fn pulse(&mut self, ev: &PulseEvent, t0: f64) -> Mat4 {
        let t1 = t0 + ev.duration;
        if t1 <= t0 {
            return Mat4::identity();
        }
        let table = self.table_index(ev.amplitude);
        let step = self.step;
        let a = (t0 / step).floor() as u64;
        let b = (t1 / step).floor() as u64;
        let u = if a == b {
            self.partial(ev.amplitude, t0, t1)
        } else {
            let left = self.partial(ev.amplitude, t0, (a + 1) as f64 * step);
            let mid = self.cell_run(table, a + 1, b - a - 1);
            let mut u = mid * left;
            let right_start = b as f64 * step;
            if t1 > right_start {
                u = self.partial(ev.amplitude, right_start, t1) * u;
            }
            u
        };
        rotate_about_z(&u, ev.phase)
    }

    /// Time-ordered product over `events`, the first starting at `t_start`.
    /// Returns the propagator and the end time.
    pub fn propagate(&mut self, events: &[PulseEvent], t_start: f64) -> (Mat4, f64) {
        let mut total = Mat4::identity();
        let mut t = t_start;
        for ev in events {
            total = self.pulse(ev, t) * total;
            t += ev.duration;
        }
        (total, t)
    }
}
