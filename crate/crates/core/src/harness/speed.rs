//! Position of the buildup maximum in the (τ1, τ_exc) plane as a function
//! of the spinning frequency.

use serde::{Deserialize, Serialize};

use super::config::SpeedStudyBlock;
use super::scan::{scan_2d, Axis, ScanGrid};
use crate::experiment::SimConfig;
use crate::sequence::{c7_defaults, SequenceParams};
use crate::spin::SpinSystem;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedRow {
    pub rotor_freq: f64,
    pub include_csa: bool,
    /// Excitation time at the maximum, s.
    pub tau_exc_max: f64,
    pub n_blocks_max: u32,
    /// τ1/τ_C at the maximum.
    pub tau1_ratio_max: f64,
    pub efficiency_max: f64,
    /// The maximum is an interior grid point above all four neighbours.
    pub clear_maximum: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpeedStudy {
    pub rows: Vec<SpeedRow>,
    /// Efficiency grids (x: Δτ1 in µs, y: block count), one per row.
    pub grids: Vec<ScanGrid>,
}

impl SpeedStudy {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("rotor_freq_hz,include_csa,tau_exc_max_ms,n_blocks_max,tau1_ratio_max,efficiency_max,clear_maximum,note\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.rotor_freq,
                r.include_csa,
                r.tau_exc_max * 1e3,
                r.n_blocks_max,
                r.tau1_ratio_max,
                r.efficiency_max,
                r.clear_maximum,
                r.note
            ));
        }
        s
    }
}

/// Local-maximum certificate: the argmax has four grid neighbours, all lower.
fn certify(g: &ScanGrid) -> (usize, usize, f64, bool, String) {
    let (ix, iy, v) = g.argmax();
    let (ny, nx) = (g.values.len(), g.values[0].len());
    if ix == 0 || iy == 0 || ix + 1 == nx || iy + 1 == ny {
        return (ix, iy, v, false, "maximum on the grid boundary; widen the grid".into());
    }
    let nb = [g.values[iy][ix - 1], g.values[iy][ix + 1], g.values[iy - 1][ix], g.values[iy + 1][ix]];
    if nb.iter().all(|&w| w < v) {
        (ix, iy, v, true, String::new())
    } else {
        (ix, iy, v, false, "flat maximum: a neighbour is not lower".into())
    }
}

/// For every speed, the C7(2,1) values are recomputed (κ_C = 7 ω_rot) and
/// the efficiency maximum is located on a τ1/τ_C × n_C grid, with and
/// without shielding anisotropy.
pub fn spinning_speed_study(
    study: &SpeedStudyBlock,
    sys: &SpinSystem,
    cfg: &SimConfig,
    threads: usize,
) -> Result<SpeedStudy, Error> {
    if study.speeds_hz.is_empty() {
        return Err(Error::InvalidInput("no spinning speeds".into()));
    }
    if study.ratio_points < 3 || !(study.ratio_min < study.ratio_max) {
        return Err(Error::InvalidInput("τ1 grid needs ratio_min < ratio_max and at least 3 points".into()));
    }
    let mut rows = Vec::new();
    let mut grids = Vec::new();
    for &speed in &study.speeds_hz {
        if !(speed > 0.0) {
            return Err(Error::InvalidInput(format!("spinning speed must be positive, got {speed}")));
        }
        let d = c7_defaults(speed)?;
        let base = SequenceParams::c7(speed, 1)?;
        let n_max = (study.tau_exc_max_ms * 1e-3 / base.block_duration()).floor() as u32;
        if n_max < 3 {
            return Err(Error::InvalidInput(format!("tau_exc_max_ms too short for {speed} Hz")));
        }
        let x = Axis::new(
            "tau1",
            (study.ratio_min - 1.0) * d.tau_c * 1e6,
            (study.ratio_max - 1.0) * d.tau_c * 1e6,
            study.ratio_points,
        );
        let y = Axis::new("n_blocks", 1.0, f64::from(n_max), n_max as usize);
        for include_csa in [false, true] {
            let c = SimConfig { rotor_freq: speed, include_csa, ..cfg.clone() };
            let g = scan_2d(&x, &y, &base, sys, &c, threads)?;
            let (ix, iy, v, clear, note) = certify(&g);
            let n = iy as u32 + 1;
            let mut p = base.with_blocks(n);
            p.tau1 = d.tau_c + x.coords()[ix] * 1e-6;
            rows.push(SpeedRow {
                rotor_freq: speed,
                include_csa,
                tau_exc_max: crate::sequence::excitation_time(&p),
                n_blocks_max: n,
                tau1_ratio_max: p.tau1 / d.tau_c,
                efficiency_max: v,
                clear_maximum: clear,
                note,
            });
            grids.push(g);
        }
    }
    Ok(SpeedStudy { rows, grids })
}
