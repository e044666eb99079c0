//! Repeated optimizer runs on a [`SequenceProblem`].

use serde::{Deserialize, Serialize};

use super::config::OptimizerBlock;
use crate::experiment::Experiment;
use crate::optim::{ga_run, nelder_mead, quasi_newton_fd, random_search, GaConfig, RunFailure, RunRecord, SequenceProblem};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ga,
    Random,
    Simplex,
    QuasiNewton,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ga => "ga",
            Method::Random => "random",
            Method::Simplex => "simplex",
            Method::QuasiNewton => "quasi_newton",
        }
    }
}

/// Projects onto the gene box; unconstrained methods may step outside it.
fn clamp(problem: &SequenceProblem, v: &[f64]) -> Vec<f64> {
    v.iter().zip(&problem.specs).map(|(x, s)| x.clamp(s.lower, s.upper)).collect()
}

fn local_run(
    method: Method,
    problem: &SequenceProblem,
    exp: &Experiment,
    settings: &OptimizerBlock,
) -> Result<RunRecord, RunFailure> {
    let budget = settings.ga.eval_budget;
    let dim = problem.dim();
    let f = |u: &[f64]| problem.fitness(exp, &clamp(problem, &problem.from_unit(u)));
    let u0 = vec![0.0; dim];
    let mut rec = match method {
        Method::Simplex => nelder_mead(f, &u0, &vec![settings.simplex_step; dim], budget)?,
        Method::QuasiNewton => quasi_newton_fd(f, &u0, &vec![settings.fd_step; dim], budget)?.record,
        _ => unreachable!(),
    };
    rec.best_values = clamp(problem, &problem.from_unit(&rec.best_values));
    Ok(rec)
}

/// `settings.runs` runs of `settings.method`; run k uses seed
/// `settings.seed + k`. The deterministic local methods start from the
/// problem's base point and are run once. `on_run` sees every finished run.
pub fn optimize_runs(
    problem: &SequenceProblem,
    exp: &Experiment,
    settings: &OptimizerBlock,
    mut on_run: impl FnMut(usize, &RunRecord),
) -> Result<Vec<RunRecord>, RunFailure> {
    let objective = |x: &[f64]| problem.fitness(exp, x);
    let mut out = Vec::new();
    let runs = match settings.method {
        Method::Ga | Method::Random => settings.runs,
        _ => 1,
    };
    for k in 0..runs {
        let seed = settings.seed.wrapping_add(k as u64);
        let rec = match settings.method {
            Method::Ga => {
                let cfg = GaConfig { seed, ..settings.ga.clone() };
                ga_run(&cfg, &problem.specs, objective)?
            }
            Method::Random => random_search(settings.ga.eval_budget, &problem.specs, objective, seed)?,
            m => local_run(m, problem, exp, settings)?,
        };
        on_run(k, &rec);
        out.push(rec);
    }
    Ok(out)
}

/// One row per run: method, seed, best values in file units (offsets from
/// the C7 values for τ, κ and φ), efficiency and evaluations used.
pub fn summary_csv(problem: &SequenceProblem, records: &[RunRecord]) -> Result<String, Error> {
    let centre_specs: Vec<f64> = problem.specs.iter().map(|s| 0.5 * (s.lower + s.upper)).collect();
    let mut s = String::from("method,seed");
    for q in &problem.params {
        let unit = match q.display_scale() {
            x if x == 1e6 => "_us",
            x if x == 1.0 && q.is_integer() => "",
            x if x == 1.0 => "_hz",
            _ => "_deg",
        };
        if q.is_integer() {
            s.push_str(&format!(",{}", q.name()));
        } else {
            s.push_str(&format!(",d{}{unit}", q.name()));
        }
    }
    s.push_str(",efficiency,evaluations\n");
    for r in records {
        if r.best_values.len() != problem.dim() {
            return Err(Error::InvalidInput(format!("run {} has no best point", r.seed)));
        }
        s.push_str(&format!("{},{}", r.method, r.seed));
        for ((q, v), c) in problem.params.iter().zip(&r.best_values).zip(&centre_specs) {
            if q.is_integer() {
                s.push_str(&format!(",{v}"));
            } else {
                s.push_str(&format!(",{}", (v - c) * q.display_scale()));
            }
        }
        s.push_str(&format!(",{},{}\n", r.best_efficiency(), r.evaluations));
    }
    Ok(s)
}
