//! GA against uniform random sampling at equal budget on the seven-parameter
//! problem. Small powder and short runs; see the acceptance suite for the
//! full protocol.

use c7opt::experiment::*;
use c7opt::optim::*;

fn main() -> Result<(), c7opt::Error> {
    let sys = reference::maleate();
    let cfg = SimConfig { powder: PowderSpec { scheme: PowderKind::Zcw, count: 13, gamma: 1 }, ..SimConfig::default() };
    let exp = Experiment::new(&sys, &cfg)?;
    let problem = SequenceProblem::full(reference::ROTOR_FREQ)?;
    let f = |x: &[f64]| problem.fitness(&exp, x);
    let ga = GaConfig { generations: 10, eval_budget: 500, ..GaConfig::default() };
    let (mut g, mut r) = (Vec::new(), Vec::new());
    for seed in 0..4 {
        g.push(ga_run(&GaConfig { seed, ..ga.clone() }, &problem.specs, f)?);
        r.push(random_search(ga.eval_budget, &problem.specs, f, seed)?);
        println!("seed {seed}: GA {:.4}  random {:.4}", g[seed as usize].best_efficiency(), r[seed as usize].best_efficiency());
    }
    println!("success rate (> 0.5): GA {:.2}, random {:.2}", success_rate(&g, 0.5)?, success_rate(&r, 0.5)?);
    Ok(())
}
