//! Efficiency at 31 blocks on successively refined ZCW sets.

use std::time::Instant;

use c7opt::experiment::*;
use c7opt::sequence::SequenceParams;

fn main() -> Result<(), c7opt::Error> {
    let sys = reference::maleate();
    let p = SequenceParams::c7(reference::ROTOR_FREQ, 31)?;
    let mut spec = PowderSpec { scheme: PowderKind::Zcw, count: 21, gamma: 1 };
    for _ in 0..5 {
        let cfg = SimConfig { powder: spec, ..SimConfig::default() };
        let t = Instant::now();
        let e = dqf_efficiency(&p, &sys, &cfg)?.efficiency;
        println!("{:>4} x {:<2} {:.5}  ({:.2} s)", spec.count, spec.gamma, e, t.elapsed().as_secs_f64());
        spec = spec.refined();
    }
    Ok(())
}
