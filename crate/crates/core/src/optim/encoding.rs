//! Fixed-length bit-string encoding of bounded decimal parameters.

use serde::{Deserialize, Serialize};

use crate::Error;

/// Bits per floating-point gene.
pub const FLOAT_BITS: u32 = 16;

/// One gene: a parameter interval and its quantization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneSpec {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub bits: u32,
    /// Integer genes decode to whole numbers and round-trip exactly.
    #[serde(default)]
    pub integer: bool,
}

impl GeneSpec {
    pub fn float(name: &str, lower: f64, upper: f64) -> GeneSpec {
        GeneSpec { name: name.to_string(), lower, upper, bits: FLOAT_BITS, integer: false }
    }

    /// Integer gene over `lower..=upper` with the smallest bit depth that
    /// gives every integer its own code.
    pub fn integer(name: &str, lower: i64, upper: i64) -> GeneSpec {
        let span = (upper - lower).max(1) as u64;
        let bits = 64 - span.leading_zeros();
        GeneSpec { name: name.to_string(), lower: lower as f64, upper: upper as f64, bits, integer: true }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.lower < self.upper) || !self.lower.is_finite() || !self.upper.is_finite() {
            return Err(Error::InvalidInput(format!(
                "gene '{}': lower bound {} must be below upper bound {}",
                self.name, self.lower, self.upper
            )));
        }
        if self.bits == 0 || self.bits > 52 {
            return Err(Error::InvalidInput(format!("gene '{}': bit depth {} outside 1..=52", self.name, self.bits)));
        }
        if self.integer {
            if self.lower.fract() != 0.0 || self.upper.fract() != 0.0 {
                return Err(Error::InvalidInput(format!("gene '{}': integer bounds must be whole", self.name)));
            }
            if self.max_code() < (self.upper - self.lower) as u64 {
                return Err(Error::InvalidInput(format!(
                    "gene '{}': {} bits cannot represent {} integers",
                    self.name,
                    self.bits,
                    self.upper - self.lower + 1.0
                )));
            }
        }
        Ok(())
    }

    pub fn max_code(&self) -> u64 {
        (1u64 << self.bits) - 1
    }

    /// Quantization step (B − A)/(2ⁿ − 1).
    pub fn resolution(&self) -> f64 {
        (self.upper - self.lower) / self.max_code() as f64
    }

    pub fn encode_code(&self, value: f64) -> Result<u64, Error> {
        if !(value >= self.lower && value <= self.upper) {
            return Err(Error::InvalidInput(format!(
                "gene '{}': value {value} outside [{}, {}]",
                self.name, self.lower, self.upper
            )));
        }
        let x = (value - self.lower) / (self.upper - self.lower) * self.max_code() as f64;
        Ok((x.round() as u64).min(self.max_code()))
    }

    pub fn decode_code(&self, code: u64) -> f64 {
        let v = self.lower + code.min(self.max_code()) as f64 * self.resolution();
        let v = if self.integer { v.round() } else { v };
        v.clamp(self.lower, self.upper)
    }

    /// Most significant bit first.
    pub fn encode(&self, value: f64) -> Result<Vec<bool>, Error> {
        let k = self.encode_code(value)?;
        Ok((0..self.bits).rev().map(|i| (k >> i) & 1 == 1).collect())
    }

    pub fn decode(&self, bits: &[bool]) -> f64 {
        debug_assert_eq!(bits.len(), self.bits as usize);
        let k = bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
        self.decode_code(k)
    }
}

/// Concatenated genes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genome {
    pub bits: Vec<bool>,
}

impl Genome {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Result<Genome, Error> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidInput(format!("invalid bit '{c}'"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|bits| Genome { bits })
    }
}

pub fn genome_length(specs: &[GeneSpec]) -> usize {
    specs.iter().map(|s| s.bits as usize).sum()
}

pub fn encode_genome(specs: &[GeneSpec], values: &[f64]) -> Result<Genome, Error> {
    if specs.len() != values.len() {
        return Err(Error::InvalidInput(format!("{} values for {} genes", values.len(), specs.len())));
    }
    let mut bits = Vec::with_capacity(genome_length(specs));
    for (s, &v) in specs.iter().zip(values) {
        bits.extend(s.encode(v)?);
    }
    Ok(Genome { bits })
}

pub fn decode_genome(specs: &[GeneSpec], g: &Genome) -> Vec<f64> {
    assert_eq!(g.len(), genome_length(specs), "genome length does not match gene specs");
    let mut out = Vec::with_capacity(specs.len());
    let mut at = 0;
    for s in specs {
        let n = s.bits as usize;
        out.push(s.decode(&g.bits[at..at + n]));
        at += n;
    }
    out
}
