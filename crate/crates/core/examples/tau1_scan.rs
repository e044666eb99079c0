//! Efficiency against the first pulse length at 31 blocks, both CSA modes.

use c7opt::experiment::*;
use c7opt::harness::{scan_1d, Axis};
use c7opt::sequence::{c7_defaults, SequenceParams};

fn main() -> Result<(), c7opt::Error> {
    let sys = reference::maleate();
    let tau_c = c7_defaults(reference::ROTOR_FREQ)?.tau_c;
    let base = SequenceParams::c7(reference::ROTOR_FREQ, 31)?;
    let axis = Axis::new("tau1", -5.0, 5.0, 41);
    let powder = PowderSpec { scheme: PowderKind::Zcw, count: 55, gamma: 2 };
    for include_csa in [false, true] {
        let cfg = SimConfig { include_csa, powder, ..SimConfig::default() };
        let g = scan_1d(&axis, &base, &sys, &cfg, 1)?;
        let (ix, _, v) = g.argmax();
        let dt = axis.coords()[ix] * 1e-6;
        println!("csa={include_csa}: best {v:.4} at dtau1/tau_C = {:.4}", dt / tau_c);
    }
    Ok(())
}
