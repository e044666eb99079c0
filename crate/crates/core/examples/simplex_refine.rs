//! Nelder-Mead and finite-difference quasi-Newton polishing of a point in
//! the seven-parameter box, in coordinates scaled by the box widths.

use c7opt::experiment::*;
use c7opt::optim::*;

fn main() -> Result<(), c7opt::Error> {
    let sys = reference::maleate();
    let cfg = SimConfig { powder: PowderSpec { scheme: PowderKind::Zcw, count: 13, gamma: 1 }, ..SimConfig::default() };
    let exp = Experiment::new(&sys, &cfg)?;
    let problem = SequenceProblem::full(reference::ROTOR_FREQ)?;
    let clamp = |v: Vec<f64>| -> Vec<f64> { v.iter().zip(&problem.specs).map(|(x, s)| x.clamp(s.lower, s.upper)).collect() };
    let f = |u: &[f64]| problem.fitness(&exp, &clamp(problem.from_unit(u)));

    let mut u0 = vec![0.0; problem.dim()];
    u0[0] = 0.02; // tau1 a little longer than C7
    println!("start   {:.4}", 1.0 - f(&u0)?);
    let nm = nelder_mead(f, &u0, &vec![0.05; u0.len()], 300)?;
    println!("simplex {:.4} after {} evaluations", nm.best_efficiency(), nm.evaluations);
    let qn = quasi_newton_fd(f, &u0, &vec![1e-3; u0.len()], 300)?;
    println!("quasi-Newton {:.4} after {} evaluations", qn.record.best_efficiency(), qn.record.evaluations);
    Ok(())
}
