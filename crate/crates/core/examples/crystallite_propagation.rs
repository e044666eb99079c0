//! One crystallite, one C7 block: propagator unitarity and the
//! double-quantum part of the evolved state.

use c7opt::experiment::reference;
use c7opt::sequence::{build_c7opt, SequenceParams};
use c7opt::spin::operators::{double_quantum_x, f_z};
use c7opt::spin::*;

fn main() -> Result<(), c7opt::Error> {
    let sys = reference::maleate();
    let o = Orientation { alpha: 0.3, beta: 1.1, gamma: 0.0 };
    let p = SequenceParams::c7(reference::ROTOR_FREQ, 8)?;
    let seq = build_c7opt(&p)?;
    let dt = 1.0 / reference::ROTOR_FREQ / 200.0;
    let u = propagate_sequence(&sys, &o, reference::ROTOR_FREQ, &seq, 0.0, dt)?;
    println!("{} events, {:.3} ms", seq.len(), seq.total_duration() * 1e3);
    println!("unitarity defect {:.2e}", u.unitarity_defect());

    let rho = DensityMatrix(f_z()).evolve(&u);
    let dq = coherence_filter(&rho, &[-2, 2]);
    println!("double-quantum norm {:.4}", dq.matrix().frobenius_norm());
    println!("<DQx> = {:.4}", expectation(&rho, &double_quantum_x()).re);
    Ok(())
}
