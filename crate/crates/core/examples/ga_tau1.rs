//! GA over the first pulse length only, a few seeds on a small powder,
//! best point re-evaluated on a finer one.

use c7opt::experiment::*;
use c7opt::optim::*;

fn main() -> Result<(), c7opt::Error> {
    let sys = reference::maleate();
    let small = SimConfig { powder: PowderSpec { scheme: PowderKind::Zcw, count: 21, gamma: 1 }, ..SimConfig::default() };
    let fine = SimConfig { powder: PowderSpec { scheme: PowderKind::Zcw, count: 89, gamma: 2 }, ..SimConfig::default() };
    let problem = SequenceProblem::tau1_only(reference::ROTOR_FREQ)?;
    let exp = Experiment::new(&sys, &small)?;
    let check = Experiment::new(&sys, &fine)?;
    for seed in 0..4 {
        let cfg = GaConfig { seed, ..GaConfig::default() };
        let r = ga_run(&cfg, &problem.specs, |x| problem.fitness(&exp, x))?;
        let e = check.efficiency(&problem.apply(&r.best_values))?.efficiency;
        let dtau = (r.best_values[0] - problem.centre()[0]) * 1e6;
        println!("seed {seed}: dtau1 {dtau:+.3} us, {:.4} (small) {e:.4} (fine), {} evaluations", r.best_efficiency(), r.evaluations);
    }
    Ok(())
}
