//! Bit-string genetic algorithm and the baselines it is compared against.

mod baselines;
mod encoding;
mod ga;
mod problem;
mod record;

pub use baselines::{fd_gradient, nelder_mead, quasi_newton_fd, random_search, sample_uniform, QuasiNewtonRun, RANDOM_BATCH};
pub use encoding::{decode_genome, encode_genome, genome_length, GeneSpec, Genome, FLOAT_BITS};
pub use ga::{crossover_at, flip_mutate, ga_run, one_point_crossover, random_genome, roulette_select, GaConfig};
pub use problem::{Bounds, SequenceProblem};
pub use record::{success_rate, GenerationStats, RunFailure, RunRecord};
