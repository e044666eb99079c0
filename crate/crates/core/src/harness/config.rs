//! TOML run configuration. Frequencies are in Hz, durations in µs and angles
//! in degrees; everything is converted to SI/radians on the way in.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::optimize::Method;
use super::scan::Axis;
use crate::experiment::{reference, Magnetization, PowderKind, PowderSpec, SimConfig};
use crate::optim::{Bounds, GaConfig, SequenceProblem};
use crate::sequence::{Param, SequenceParams};
use crate::spin::{CsaTensor, Euler, SpinSystem};
use crate::Error;

fn deg(d: [f64; 3]) -> Euler {
    Euler::from_degrees(d[0], d[1], d[2])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CsaBlock {
    pub aniso_hz: f64,
    pub eta: f64,
    pub euler_deg: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpinBlock {
    pub larmor_freq_hz: f64,
    pub iso_shift_hz: [f64; 2],
    pub dipolar_b_hz: f64,
    pub dipolar_euler_deg: [f64; 3],
    pub csa: Vec<CsaBlock>,
}

impl Default for CsaBlock {
    fn default() -> Self {
        CsaBlock { aniso_hz: reference::csa_aniso(), eta: reference::CSA_ETA, euler_deg: reference::CSA_EULER_1 }
    }
}

impl Default for SpinBlock {
    fn default() -> Self {
        SpinBlock {
            larmor_freq_hz: reference::LARMOR_FREQ,
            iso_shift_hz: [0.0, 0.0],
            dipolar_b_hz: reference::DIPOLAR_B,
            dipolar_euler_deg: [0.0; 3],
            csa: vec![
                CsaBlock::default(),
                CsaBlock { euler_deg: reference::CSA_EULER_2, ..CsaBlock::default() },
            ],
        }
    }
}

impl SpinBlock {
    pub fn system(&self) -> Result<SpinSystem, Error> {
        if self.csa.len() != 2 {
            return Err(Error::Config(format!("spin.csa: expected 2 tensors, found {}", self.csa.len())));
        }
        let t = |c: &CsaBlock| CsaTensor { aniso: c.aniso_hz, eta: c.eta, euler: deg(c.euler_deg) };
        let sys = SpinSystem {
            larmor_freq: self.larmor_freq_hz,
            iso_shift: self.iso_shift_hz,
            csa: [t(&self.csa[0]), t(&self.csa[1])],
            dipolar_b: self.dipolar_b_hz,
            dipolar_euler: deg(self.dipolar_euler_deg),
        };
        sys.validate().map_err(|e| Error::Config(format!("spin: {e}")))?;
        Ok(sys)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationBlock {
    pub rotor_freq_hz: f64,
    pub transmitter_offset_hz: f64,
    pub steps_per_rotor: usize,
    pub include_csa: bool,
    pub magnetization: Magnetization,
    pub powder: PowderSpec,
}

impl Default for SimulationBlock {
    fn default() -> Self {
        let s = SimConfig::default();
        SimulationBlock {
            rotor_freq_hz: s.rotor_freq,
            transmitter_offset_hz: s.transmitter_offset,
            steps_per_rotor: s.steps_per_rotor,
            include_csa: s.include_csa,
            magnetization: s.magnetization,
            powder: PowderSpec { scheme: PowderKind::Zcw, count: 233, gamma: 4 },
        }
    }
}

impl SimulationBlock {
    pub fn sim_config(&self) -> Result<SimConfig, Error> {
        let c = SimConfig {
            rotor_freq: self.rotor_freq_hz,
            transmitter_offset: self.transmitter_offset_hz,
            powder: self.powder,
            steps_per_rotor: self.steps_per_rotor,
            include_csa: self.include_csa,
            magnetization: self.magnetization,
        };
        c.validate().map_err(|e| Error::Config(format!("simulation: {e}")))?;
        c.powder.build().map_err(|e| Error::Config(format!("simulation.powder: {e}")))?;
        Ok(c)
    }
}

/// Base sequence as offsets from the C7(2,1) values at the configured
/// spinning frequency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SequenceBlock {
    pub n_blocks: u32,
    pub dtau1_us: f64,
    pub dtau2_us: f64,
    pub dkappa1_hz: f64,
    pub dkappa2_hz: f64,
    pub dphi1_deg: f64,
    pub dphi2_deg: f64,
}

impl Default for SequenceBlock {
    fn default() -> Self {
        SequenceBlock {
            n_blocks: 31,
            dtau1_us: 0.0,
            dtau2_us: 0.0,
            dkappa1_hz: 0.0,
            dkappa2_hz: 0.0,
            dphi1_deg: 0.0,
            dphi2_deg: 0.0,
        }
    }
}

impl SequenceBlock {
    pub fn params(&self, rotor_freq: f64) -> Result<SequenceParams, Error> {
        let mut p = SequenceParams::c7(rotor_freq, self.n_blocks).map_err(|e| Error::Config(format!("sequence: {e}")))?;
        p.tau1 += self.dtau1_us * 1e-6;
        p.tau2 += self.dtau2_us * 1e-6;
        p.kappa1 += self.dkappa1_hz;
        p.kappa2 += self.dkappa2_hz;
        p.phi1 += self.dphi1_deg * PI / 180.0;
        p.phi2 += self.dphi2_deg * PI / 180.0;
        p.validate().map_err(|e| Error::Config(format!("sequence: {e}")))?;
        Ok(p)
    }
}

/// Half-widths of the search box around the C7(2,1) values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsBlock {
    pub dtau_us: f64,
    pub dkappa_hz: f64,
    pub dphi_deg: f64,
    pub dn: u32,
}

impl Default for BoundsBlock {
    fn default() -> Self {
        let b = Bounds::default();
        BoundsBlock { dtau_us: 5.0, dkappa_hz: b.dkappa, dphi_deg: 10.0, dn: b.dn }
    }
}

impl BoundsBlock {
    pub fn bounds(&self) -> Bounds {
        Bounds { dtau: self.dtau_us * 1e-6, dkappa: self.dkappa_hz, dphi: self.dphi_deg * PI / 180.0, dn: self.dn }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerBlock {
    pub method: Method,
    /// Free parameters by name; the rest stay at the `[sequence]` values.
    pub params: Vec<String>,
    pub runs: usize,
    /// Run k uses seed + k, for every method.
    pub seed: u64,
    /// Initial simplex edge in box widths.
    pub simplex_step: f64,
    /// Finite-difference step in box widths.
    pub fd_step: f64,
    /// Efficiency above which a run counts as a success.
    pub success_threshold: f64,
    /// Evaluation budget, population and operator settings; its own seed is
    /// replaced per run.
    pub ga: GaConfig,
}

impl Default for OptimizerBlock {
    fn default() -> Self {
        OptimizerBlock {
            method: Method::Ga,
            params: Param::ALL.iter().map(|p| p.name().to_string()).collect(),
            runs: 30,
            seed: 0,
            simplex_step: 0.5,
            fd_step: 1e-4,
            success_threshold: 0.5,
            ga: GaConfig::default(),
        }
    }
}

impl OptimizerBlock {
    pub fn free_params(&self) -> Result<Vec<Param>, Error> {
        if self.params.is_empty() {
            return Err(Error::Config("optimizer.params: no free parameters".into()));
        }
        self.params
            .iter()
            .map(|n| Param::from_name(n).map_err(|e| Error::Config(format!("optimizer.params: {e}"))))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Buildup,
    Scan1d,
    Scan2d,
    Optimize,
    Offset,
    Speedstudy,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Buildup => "buildup",
            Task::Scan1d => "scan1d",
            Task::Scan2d => "scan2d",
            Task::Optimize => "optimize",
            Task::Offset => "offset",
            Task::Speedstudy => "speedstudy",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TaskBlock {
    pub tasks: Vec<Task>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildupBlock {
    pub n_min: u32,
    pub n_max: u32,
    /// Emit the curve with and without shielding anisotropy.
    pub both_csa_modes: bool,
}

impl Default for BuildupBlock {
    fn default() -> Self {
        BuildupBlock { n_min: 1, n_max: 60, both_csa_modes: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scan1dBlock {
    pub axis: Axis,
}

impl Default for Scan1dBlock {
    fn default() -> Self {
        Scan1dBlock { axis: Axis::new("tau1", -5.0, 5.0, 101) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scan2dBlock {
    pub x: Axis,
    pub y: Axis,
}

impl Default for Scan2dBlock {
    fn default() -> Self {
        Scan2dBlock { x: Axis::new("tau1", -5.0, 5.0, 101), y: Axis::new("tau2", -5.0, 5.0, 101) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OffsetBlock {
    pub start_hz: f64,
    pub stop_hz: f64,
    pub points: usize,
}

impl Default for OffsetBlock {
    fn default() -> Self {
        OffsetBlock { start_hz: -15000.0, stop_hz: 15000.0, points: 61 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpeedStudyBlock {
    pub speeds_hz: Vec<f64>,
    /// τ1/τ_C grid.
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub ratio_points: usize,
    pub tau_exc_max_ms: f64,
}

impl Default for SpeedStudyBlock {
    fn default() -> Self {
        SpeedStudyBlock {
            speeds_hz: vec![4000.0, 6000.0, 8000.0, 9000.0, 10204.0, 12000.0],
            ratio_min: 0.99,
            ratio_max: 1.05,
            ratio_points: 31,
            tau_exc_max_ms: 12.0,
        }
    }
}

/// Everything a study needs. Every block and field is optional in the file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub task: TaskBlock,
    pub spin: SpinBlock,
    pub simulation: SimulationBlock,
    pub sequence: SequenceBlock,
    pub bounds: BoundsBlock,
    pub optimizer: OptimizerBlock,
    pub buildup: BuildupBlock,
    pub scan1d: Scan1dBlock,
    pub scan2d: Scan2dBlock,
    pub offset: OffsetBlock,
    pub speedstudy: SpeedStudyBlock,
}

impl RunConfig {
    /// Parses and validates. Syntax and unknown-field errors carry the
    /// line/column from the TOML parser.
    pub fn from_toml(text: &str) -> Result<RunConfig, Error> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// The resolved configuration as TOML; parsing it gives back `self`.
    pub fn to_toml(&self) -> Result<String, Error> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(format!("cannot serialize config: {e}")))
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.system()?;
        self.sim_config()?;
        self.base_params()?;
        self.problem()?;
        self.optimizer.ga.validate().map_err(|e| Error::Config(format!("optimizer.ga: {e}")))?;
        // TOML integers are signed; a larger seed could not be written to the manifest.
        if self.optimizer.seed > i64::MAX as u64 {
            return Err(Error::Config(format!("optimizer.seed must be at most {}", i64::MAX)));
        }
        if self.optimizer.runs == 0 {
            return Err(Error::Config("optimizer.runs must be at least 1".into()));
        }
        for (name, v) in [("optimizer.simplex_step", self.optimizer.simplex_step), ("optimizer.fd_step", self.optimizer.fd_step)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        let b = &self.buildup;
        if b.n_min == 0 || b.n_max < b.n_min {
            return Err(Error::Config(format!("buildup: invalid block range {}..={}", b.n_min, b.n_max)));
        }
        self.scan1d.axis.validate().map_err(|e| Error::Config(format!("scan1d.axis: {e}")))?;
        self.scan2d.x.validate().map_err(|e| Error::Config(format!("scan2d.x: {e}")))?;
        self.scan2d.y.validate().map_err(|e| Error::Config(format!("scan2d.y: {e}")))?;
        if self.scan2d.x.param == self.scan2d.y.param {
            return Err(Error::Config("scan2d: x and y scan the same parameter".into()));
        }
        let o = &self.offset;
        if o.points == 0 || !o.start_hz.is_finite() || !o.stop_hz.is_finite() {
            return Err(Error::Config("offset: need finite limits and at least one point".into()));
        }
        let s = &self.speedstudy;
        if s.speeds_hz.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::Config("speedstudy.speeds_hz: speeds must be positive".into()));
        }
        if s.ratio_points < 3 || !(s.ratio_min < s.ratio_max) || !(s.tau_exc_max_ms > 0.0) {
            return Err(Error::Config("speedstudy: need ratio_min < ratio_max, ≥ 3 points and tau_exc_max_ms > 0".into()));
        }
        Ok(())
    }

    pub fn system(&self) -> Result<SpinSystem, Error> {
        self.spin.system()
    }

    pub fn sim_config(&self) -> Result<SimConfig, Error> {
        self.simulation.sim_config()
    }

    pub fn base_params(&self) -> Result<SequenceParams, Error> {
        self.sequence.params(self.simulation.rotor_freq_hz)
    }

    /// Search box centred on C7(2,1); parameters not searched keep their
    /// `[sequence]` values.
    pub fn problem(&self) -> Result<SequenceProblem, Error> {
        let params = self.optimizer.free_params()?;
        let mut pr =
            SequenceProblem::centred(self.simulation.rotor_freq_hz, self.sequence.n_blocks, &params, &self.bounds.bounds())
                .map_err(|e| Error::Config(format!("bounds: {e}")))?;
        pr.base = self.base_params()?;
        Ok(pr)
    }
}
