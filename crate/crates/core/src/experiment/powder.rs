//! Crystallite orientation sets for powder averaging.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::spin::Orientation;
use crate::Error;

/// Named (α, β) set crossed with a uniform γ grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowderSpec {
    pub scheme: PowderKind,
    /// Number of (α, β) pairs.
    pub count: usize,
    /// Number of γ angles per (α, β) pair.
    pub gamma: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowderKind {
    /// Zaremba–Conroy–Wolfsberg full-sphere set; `count` must be a Fibonacci number.
    Zcw,
    /// A single crystallite at α = β = 0 (γ grid still applies).
    Single,
}

impl Default for PowderSpec {
    fn default() -> Self {
        PowderSpec { scheme: PowderKind::Zcw, count: 144, gamma: 8 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Powder {
    pub crystallites: Vec<(Orientation, f64)>,
}

impl Powder {
    pub fn len(&self) -> usize {
        self.crystallites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crystallites.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.crystallites.iter().map(|c| c.1).sum()
    }
}

fn fibonacci_index(n: usize) -> Option<usize> {
    let (mut a, mut b, mut i) = (1usize, 1usize, 1usize);
    while b < n {
        let c = a + b;
        a = b;
        b = c;
        i += 1;
    }
    (b == n && n >= 2).then_some(i)
}

fn fibonacci(i: usize) -> usize {
    let (mut a, mut b) = (0usize, 1usize);
    for _ in 0..i {
        let c = a + b;
        a = b;
        b = c;
    }
    a
}

/// ZCW (α, β) points over the full sphere, equal weights.
pub fn zcw_alpha_beta(count: usize) -> Result<Vec<(f64, f64)>, Error> {
    let idx = fibonacci_index(count)
        .ok_or_else(|| Error::InvalidInput(format!("ZCW count {count} is not a Fibonacci number ≥ 2")))?;
    // count = F_{idx+1} in the 0-based F_0 = 0 convention; the generator is two terms below.
    let g = fibonacci(idx.saturating_sub(1)).max(1);
    let n = count as f64;
    Ok((0..count)
        .map(|j| {
            let alpha = TAU * ((j * g) % count) as f64 / n;
            let frac = (j as f64 + 0.5) / n;
            let beta = (2.0 * frac - 1.0).clamp(-1.0, 1.0).acos();
            (alpha, beta)
        })
        .collect())
}

impl PowderSpec {
    pub fn build(&self) -> Result<Powder, Error> {
        if self.count == 0 || self.gamma == 0 {
            return Err(Error::InvalidInput("powder set must contain at least one crystallite".into()));
        }
        let ab = match self.scheme {
            PowderKind::Zcw => zcw_alpha_beta(self.count)?,
            PowderKind::Single => vec![(0.0, 0.0); self.count],
        };
        let w = 1.0 / (ab.len() * self.gamma) as f64;
        let mut crystallites = Vec::with_capacity(ab.len() * self.gamma);
        for &(alpha, beta) in &ab {
            for k in 0..self.gamma {
                let gamma = TAU * k as f64 / self.gamma as f64;
                crystallites.push((Orientation::new(alpha, beta, gamma), w));
            }
        }
        Ok(Powder { crystallites })
    }

    /// The next larger set used by the convergence check: the next Fibonacci
    /// (α, β) count and twice the γ grid.
    pub fn refined(&self) -> PowderSpec {
        let next = match self.scheme {
            PowderKind::Zcw => {
                let i = fibonacci_index(self.count).unwrap_or(2);
                fibonacci(i + 2)
            }
            PowderKind::Single => self.count,
        };
        PowderSpec { count: next, gamma: self.gamma * 2, ..*self }
    }
}
