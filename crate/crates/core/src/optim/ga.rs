//! Generational bit-string GA with roulette selection, one-point crossover,
//! flip mutation and elitism.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::encoding::{decode_genome, genome_length, GeneSpec, Genome};
use super::record::{GenerationStats, RunFailure, RunRecord};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub eval_budget: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub elitism: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 50,
            generations: 30,
            eval_budget: 1500,
            crossover_prob: 0.6,
            mutation_prob: 0.01,
            elitism: 1,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.population_size < 2 {
            return Err(Error::InvalidInput("population_size must be at least 2".into()));
        }
        if self.generations < 1 {
            return Err(Error::InvalidInput("generations must be at least 1".into()));
        }
        if self.eval_budget < self.population_size {
            return Err(Error::InvalidInput(format!(
                "eval_budget {} is smaller than population_size {}",
                self.eval_budget, self.population_size
            )));
        }
        for (name, p) in [("crossover_prob", self.crossover_prob), ("mutation_prob", self.mutation_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidInput(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if self.elitism >= self.population_size {
            return Err(Error::InvalidInput("elitism must be smaller than population_size".into()));
        }
        Ok(())
    }
}

/// Fitness-proportionate choice for a minimized fitness f ∈ [0, 2]:
/// weight 2 − f, uniform when every weight vanishes.
pub fn roulette_select<R: Rng + ?Sized>(fitness: &[f64], rng: &mut R) -> usize {
    assert!(!fitness.is_empty(), "roulette over an empty population");
    let w = |f: f64| (2.0 - f).max(0.0);
    let total: f64 = fitness.iter().map(|&f| w(f)).sum();
    if !(total > 0.0) || !total.is_finite() {
        return rng.gen_range(0..fitness.len());
    }
    let mut x = rng.gen::<f64>() * total;
    let mut last = 0;
    for (i, &f) in fitness.iter().enumerate() {
        let wi = w(f);
        if wi <= 0.0 {
            continue;
        }
        last = i;
        if x < wi {
            return i;
        }
        x -= wi;
    }
    last
}

/// Swap suffixes after a cut drawn uniformly from 1..L.
pub fn one_point_crossover<R: Rng + ?Sized>(a: &Genome, b: &Genome, rng: &mut R) -> (Genome, Genome) {
    assert_eq!(a.len(), b.len(), "crossover of genomes with different lengths");
    if a.len() < 2 {
        return (a.clone(), b.clone());
    }
    let cut = rng.gen_range(1..a.len());
    crossover_at(a, b, cut)
}

pub fn crossover_at(a: &Genome, b: &Genome, cut: usize) -> (Genome, Genome) {
    let mut ca = a.bits[..cut].to_vec();
    ca.extend_from_slice(&b.bits[cut..]);
    let mut cb = b.bits[..cut].to_vec();
    cb.extend_from_slice(&a.bits[cut..]);
    (Genome { bits: ca }, Genome { bits: cb })
}

/// Toggle every bit independently with probability `p_m`.
pub fn flip_mutate<R: Rng + ?Sized>(g: &Genome, p_m: f64, rng: &mut R) -> Genome {
    let bits = g.bits.iter().map(|&b| if rng.gen_bool(p_m) { !b } else { b }).collect();
    Genome { bits }
}

pub fn random_genome<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Genome {
    Genome { bits: (0..len).map(|_| rng.gen()).collect() }
}

/// Runs the GA on decoded gene values. `objective` returns the fitness to
/// minimize. Fitness values are memoized by genome, so repeated genomes
/// (including the elite) cost no evaluation.
pub fn ga_run<F>(cfg: &GaConfig, specs: &[GeneSpec], mut objective: F) -> Result<RunRecord, RunFailure>
where
    F: FnMut(&[f64]) -> Result<f64, Error>,
{
    let mut record = RunRecord::new("ga", cfg.seed);
    if let Err(e) = cfg.validate().and_then(|_| specs.iter().try_for_each(GeneSpec::validate)) {
        return Err(RunFailure { error: e, partial: record });
    }
    let len = genome_length(specs);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cache: HashMap<Genome, f64> = HashMap::new();
    let mut pop: Vec<Genome> = (0..cfg.population_size).map(|_| random_genome(len, &mut rng)).collect();

    for gen in 0..cfg.generations {
        let mut fit = Vec::with_capacity(pop.len());
        let mut exhausted = false;
        for g in &pop {
            let f = match cache.get(g) {
                Some(&f) => f,
                None => {
                    if record.evaluations >= cfg.eval_budget {
                        exhausted = true;
                        break;
                    }
                    let x = decode_genome(specs, g);
                    let f = match objective(&x) {
                        Ok(f) if f.is_finite() => f,
                        Ok(f) => {
                            let e = Error::Numerical(format!("non-finite fitness {f}"));
                            return Err(RunFailure { error: e, partial: record });
                        }
                        Err(e) => return Err(RunFailure { error: e, partial: record }),
                    };
                    record.evaluations += 1;
                    cache.insert(g.clone(), f);
                    f
                }
            };
            fit.push(f);
            record.offer(f, || decode_genome(specs, g), || Some(g.to_bit_string()));
        }
        if fit.is_empty() {
            break;
        }
        let best = fit.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = fit.iter().sum::<f64>() / fit.len() as f64;
        record.history.push(GenerationStats {
            generation: gen,
            best_fitness: best,
            mean_fitness: mean,
            evaluations: record.evaluations,
        });
        if exhausted || gen + 1 == cfg.generations {
            break;
        }

        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by(|&a, &b| fit[a].total_cmp(&fit[b]).then(a.cmp(&b)));
        let mut next: Vec<Genome> = order[..cfg.elitism].iter().map(|&i| pop[i].clone()).collect();
        let n_children = cfg.population_size - cfg.elitism;
        let parents: Vec<usize> = (0..n_children).map(|_| roulette_select(&fit, &mut rng)).collect();
        for pair in parents.chunks(2) {
            let mut kids = match *pair {
                [a, b] if rng.gen_bool(cfg.crossover_prob) => {
                    let (x, y) = one_point_crossover(&pop[a], &pop[b], &mut rng);
                    vec![x, y]
                }
                [a, b] => vec![pop[a].clone(), pop[b].clone()],
                [a] => vec![pop[a].clone()],
                _ => unreachable!(),
            };
            for k in kids.iter_mut() {
                *k = flip_mutate(k, cfg.mutation_prob, &mut rng);
            }
            next.extend(kids);
        }
        pop = next;
    }
    Ok(record)
}
