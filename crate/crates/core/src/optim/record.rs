use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Objective evaluations used so far.
    pub evaluations: usize,
}

/// History and outcome of one optimizer run. Fitness is minimized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: String,
    pub seed: u64,
    pub history: Vec<GenerationStats>,
    pub best_values: Vec<f64>,
    /// Best genome as a 0/1 string, for bit-string methods.
    pub best_bits: Option<String>,
    pub best_fitness: f64,
    pub evaluations: usize,
}

impl RunRecord {
    pub fn new(method: &str, seed: u64) -> RunRecord {
        RunRecord {
            method: method.to_string(),
            seed,
            history: Vec::new(),
            best_values: Vec::new(),
            best_bits: None,
            best_fitness: f64::INFINITY,
            evaluations: 0,
        }
    }

    /// Replace the best point if `f` is strictly better.
    pub(crate) fn offer(&mut self, f: f64, x: impl FnOnce() -> Vec<f64>, bits: impl FnOnce() -> Option<String>) {
        if f < self.best_fitness {
            self.best_fitness = f;
            self.best_values = x();
            self.best_bits = bits();
        }
    }

    /// 1 − best fitness.
    pub fn best_efficiency(&self) -> f64 {
        1.0 - self.best_fitness
    }

    /// One CSV row per history entry.
    pub fn history_csv(&self) -> String {
        let mut s = String::from("generation,best_fitness,mean_fitness,evaluations\n");
        for h in &self.history {
            s.push_str(&format!("{},{},{},{}\n", h.generation, h.best_fitness, h.mean_fitness, h.evaluations));
        }
        s
    }
}

/// An aborted run: the error and everything recorded before it.
#[derive(Debug, thiserror::Error)]
#[error("{error}")]
pub struct RunFailure {
    pub error: Error,
    pub partial: RunRecord,
}

impl From<RunFailure> for Error {
    fn from(f: RunFailure) -> Error {
        f.error
    }
}

/// Fraction of runs whose best efficiency exceeds `threshold`.
pub fn success_rate(records: &[RunRecord], threshold: f64) -> Result<f64, Error> {
    if records.is_empty() {
        return Err(Error::InvalidInput("success rate of an empty set of runs".into()));
    }
    let n = records.iter().filter(|r| r.best_efficiency() > threshold).count();
    Ok(n as f64 / records.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(f: f64) -> RunRecord {
        RunRecord { best_fitness: f, ..RunRecord::new("t", 0) }
    }

    #[test]
    fn success_rate_counts_strictly_above() {
        assert_eq!(success_rate(&[rec(0.3), rec(0.4)], 0.5).unwrap(), 1.0);
        assert_eq!(success_rate(&[rec(0.3), rec(0.5), rec(0.9)], 0.5).unwrap(), 1.0 / 3.0);
        assert!(success_rate(&[], 0.5).is_err());
    }
}
