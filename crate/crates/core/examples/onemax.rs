//! The GA on a plain bit-counting objective, independent of the NMR model.

use c7opt::optim::*;

fn main() -> Result<(), c7opt::Error> {
    let specs: Vec<GeneSpec> = (0..12).map(|i| GeneSpec::integer(&format!("b{i}"), 0, 1)).collect();
    let onemax = |x: &[f64]| Ok(2.0 * (1.0 - x.iter().sum::<f64>() / x.len() as f64));
    let mut hits = 0;
    for seed in 0..100 {
        let r = ga_run(&GaConfig { seed, ..GaConfig::default() }, &specs, onemax)?;
        hits += usize::from(r.best_fitness == 0.0);
    }
    println!("all-ones found in {hits}/100 runs");
    let r = ga_run(&GaConfig::default(), &specs, onemax)?;
    for h in r.history.iter().step_by(5) {
        println!("gen {:>2}: best {:.3} mean {:.3}", h.generation, h.best_fitness, h.mean_fitness);
    }
    Ok(())
}
