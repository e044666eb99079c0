//! The relaxed-C7 search space: which sequence parameters are free, their
//! bounds, and the DQF fitness.

use std::f64::consts::PI;

use super::encoding::GeneSpec;
use crate::experiment::Experiment;
use crate::sequence::{c7_defaults, Param, SequenceParams};
use crate::Error;

/// Half-widths of the search box around the C7(2,1) defaults.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    /// s
    pub dtau: f64,
    /// Hz
    pub dkappa: f64,
    /// rad
    pub dphi: f64,
    pub dn: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { dtau: 5e-6, dkappa: 7142.0, dphi: 10.0 * PI / 180.0, dn: 20 }
    }
}

/// Free parameters with bounds; fixed ones take their values from `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceProblem {
    pub base: SequenceParams,
    pub params: Vec<Param>,
    pub specs: Vec<GeneSpec>,
}

impl SequenceProblem {
    /// Box centred on the C7(2,1) defaults at `rotor_freq` with `n_blocks`
    /// blocks.
    pub fn centred(rotor_freq: f64, n_blocks: u32, params: &[Param], bounds: &Bounds) -> Result<SequenceProblem, Error> {
        let base = SequenceParams::c7(rotor_freq, n_blocks)?;
        let d = c7_defaults(rotor_freq)?;
        if params.is_empty() {
            return Err(Error::InvalidInput("no free parameters".into()));
        }
        let specs = params
            .iter()
            .map(|&p| {
                let name = p.name();
                match p {
                    Param::Tau1 | Param::Tau2 => {
                        if bounds.dtau >= d.tau_c {
                            return Err(Error::InvalidInput("pulse-length bound reaches zero duration".into()));
                        }
                        Ok(GeneSpec::float(name, d.tau_c - bounds.dtau, d.tau_c + bounds.dtau))
                    }
                    Param::Kappa1 | Param::Kappa2 => {
                        if bounds.dkappa >= d.kappa_c {
                            return Err(Error::InvalidInput("amplitude bound reaches zero amplitude".into()));
                        }
                        Ok(GeneSpec::float(name, d.kappa_c - bounds.dkappa, d.kappa_c + bounds.dkappa))
                    }
                    Param::Phi1 | Param::Phi2 => Ok(GeneSpec::float(name, -bounds.dphi, bounds.dphi)),
                    Param::NBlocks => {
                        let lo = i64::from(n_blocks) - i64::from(bounds.dn);
                        if lo < 1 {
                            return Err(Error::InvalidInput("block-count bound reaches zero blocks".into()));
                        }
                        Ok(GeneSpec::integer(name, lo, i64::from(n_blocks + bounds.dn)))
                    }
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SequenceProblem { base, params: params.to_vec(), specs })
    }

    /// All seven parameters, 31 blocks at the centre.
    pub fn full(rotor_freq: f64) -> Result<SequenceProblem, Error> {
        SequenceProblem::centred(rotor_freq, 31, &Param::ALL, &Bounds::default())
    }

    /// τ1 only, 31 blocks.
    pub fn tau1_only(rotor_freq: f64) -> Result<SequenceProblem, Error> {
        SequenceProblem::centred(rotor_freq, 31, &[Param::Tau1], &Bounds::default())
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn apply(&self, values: &[f64]) -> SequenceParams {
        assert_eq!(values.len(), self.params.len());
        let mut p = self.base;
        for (&q, &v) in self.params.iter().zip(values) {
            q.set(&mut p, v);
        }
        p
    }

    /// Values of the free parameters at the box centre.
    pub fn centre(&self) -> Vec<f64> {
        self.params.iter().map(|q| q.get(&self.base)).collect()
    }

    pub fn half_widths(&self) -> Vec<f64> {
        self.specs.iter().map(|s| 0.5 * (s.upper - s.lower)).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.specs.iter().map(|s| s.upper - s.lower).collect()
    }

    pub fn fitness(&self, exp: &Experiment, values: &[f64]) -> Result<f64, Error> {
        Ok(exp.efficiency(&self.apply(values))?.fitness)
    }

    /// Maps coordinates measured in box widths from the centre to values;
    /// used by the unconstrained baselines.
    pub fn from_unit(&self, u: &[f64]) -> Vec<f64> {
        let c = self.centre();
        let w = self.widths();
        u.iter().zip(c.iter().zip(&w)).map(|(ui, (ci, wi))| ci + ui * wi).collect()
    }

    pub fn to_unit(&self, values: &[f64]) -> Vec<f64> {
        let c = self.centre();
        let w = self.widths();
        values.iter().zip(c.iter().zip(&w)).map(|(v, (ci, wi))| (v - ci) / wi).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_problem_bounds() {
        let p = SequenceProblem::full(10204.0).unwrap();
        assert_eq!(p.dim(), 7);
        let tau = &p.specs[0];
        assert!((tau.lower - 9.0e-6).abs() < 0.01e-6 && (tau.upper - 19.0e-6).abs() < 0.01e-6);
        let n = &p.specs[6];
        assert_eq!((n.lower, n.upper, n.bits), (11.0, 51.0, 6));
        assert_eq!(p.apply(&p.centre()), p.base);
        let u = p.to_unit(&p.centre());
        assert!(u.iter().all(|&v| v == 0.0));
    }
}
