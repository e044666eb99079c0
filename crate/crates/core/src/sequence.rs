//! C7 pulse trains: the rotor-synchronized C7(2,1) and its relaxed
//! seven-parameter generalization.
//!
//! Amplitudes are in Hz, durations in seconds and phases in radians
//! throughout this module.

use std::f64::consts::{PI, TAU};

use crate::Error;

/// Number of C elements per C7 block.
pub const ELEMENTS_PER_BLOCK: usize = 7;
/// Pulses per C7 block (two per C element).
pub const PULSES_PER_BLOCK: usize = 2 * ELEMENTS_PER_BLOCK;

/// One rectangular r.f. pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseEvent {
    pub amplitude: f64,
    pub phase: f64,
    pub duration: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PulseSequence {
    events: Vec<PulseEvent>,
}

impl PulseSequence {
    pub fn new(events: Vec<PulseEvent>) -> Self {
        PulseSequence { events }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PulseEvent> {
        self.events.iter()
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.events.iter().map(|e| e.duration).sum()
    }

    /// Copy with `shift` radians added to every pulse phase.
    pub fn phase_shifted(&self, shift: f64) -> PulseSequence {
        PulseSequence {
            events: self
                .events
                .iter()
                .map(|e| PulseEvent { phase: (e.phase + shift).rem_euclid(TAU), ..*e })
                .collect(),
        }
    }

    /// Concatenation `self` followed by `other`.
    pub fn followed_by(&self, other: &PulseSequence) -> PulseSequence {
        let mut events = self.events.clone();
        events.extend_from_slice(&other.events);
        PulseSequence { events }
    }

    /// CSV listing: `amplitude_hz,phase_deg,duration_us` per event.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("amplitude_hz,phase_deg,duration_us\n");
        for e in &self.events {
            out.push_str(&format!("{},{},{}\n", e.amplitude, e.phase.to_degrees(), e.duration * 1e6));
        }
        out
    }
}

/// Symmetry-derived C7(2,1) parameters at one spinning frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C7Defaults {
    pub rotor_freq: f64,
    /// κ_C = 7 ω_rot, Hz.
    pub kappa_c: f64,
    /// Duration of one 2π pulse, s.
    pub tau_c: f64,
    /// 2π ν / N
    pub phase_increment: f64,
    pub theta_c: f64,
    pub n: u32,
    pub space_winding: u32,
    pub spin_winding: u32,
}

impl C7Defaults {
    pub fn rotor_period(&self) -> f64 {
        1.0 / self.rotor_freq
    }

    /// Duration of one C7 block, 14 τ_C = 2 τ_rot.
    pub fn block_duration(&self) -> f64 {
        PULSES_PER_BLOCK as f64 * self.tau_c
    }
}

pub fn c7_defaults(rotor_freq: f64) -> Result<C7Defaults, Error> {
    if !(rotor_freq > 0.0) || !rotor_freq.is_finite() {
        return Err(Error::InvalidInput(format!("rotor frequency must be positive, got {rotor_freq}")));
    }
    let (n, space, spin) = (7u32, 2u32, 1u32);
    let kappa_c = 2.0 * f64::from(n) / f64::from(space) * rotor_freq;
    let theta_c = TAU;
    Ok(C7Defaults {
        rotor_freq,
        kappa_c,
        tau_c: theta_c / (TAU * kappa_c),
        phase_increment: TAU * f64::from(spin) / f64::from(n),
        theta_c,
        n,
        space_winding: space,
        spin_winding: spin,
    })
}

/// The seven optimization variables of the relaxed C7 family.
///
/// `phi1` and `phi2` are offsets (radians) from the C-element phases 0 and π.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SequenceParams {
    pub tau1: f64,
    pub tau2: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub n_blocks: u32,
}

impl SequenceParams {
    /// C7(2,1) values at `rotor_freq` with `n_blocks` blocks.
    pub fn c7(rotor_freq: f64, n_blocks: u32) -> Result<SequenceParams, Error> {
        let d = c7_defaults(rotor_freq)?;
        Ok(SequenceParams {
            tau1: d.tau_c,
            tau2: d.tau_c,
            kappa1: d.kappa_c,
            kappa2: d.kappa_c,
            phi1: 0.0,
            phi2: 0.0,
            n_blocks,
        })
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |what: &str, v: f64| Err(Error::InvalidInput(format!("{what} must be positive and finite, got {v}")));
        if !(self.tau1 > 0.0 && self.tau1.is_finite()) {
            return bad("tau1", self.tau1);
        }
        if !(self.tau2 > 0.0 && self.tau2.is_finite()) {
            return bad("tau2", self.tau2);
        }
        if !(self.kappa1 > 0.0 && self.kappa1.is_finite()) {
            return bad("kappa1", self.kappa1);
        }
        if !(self.kappa2 > 0.0 && self.kappa2.is_finite()) {
            return bad("kappa2", self.kappa2);
        }
        if !self.phi1.is_finite() || !self.phi2.is_finite() {
            return Err(Error::InvalidInput("phases must be finite".into()));
        }
        if self.n_blocks < 1 {
            return Err(Error::InvalidInput("n_blocks must be at least 1".into()));
        }
        Ok(())
    }

    /// Duration of one (possibly asynchronous) C7 block.
    pub fn block_duration(&self) -> f64 {
        ELEMENTS_PER_BLOCK as f64 * (self.tau1 + self.tau2)
    }

    pub fn with_blocks(&self, n_blocks: u32) -> SequenceParams {
        SequenceParams { n_blocks, ..*self }
    }
}

/// One of the seven fields of [`SequenceParams`], addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    Tau1,
    Tau2,
    Kappa1,
    Kappa2,
    Phi1,
    Phi2,
    NBlocks,
}

impl Param {
    pub const ALL: [Param; 7] =
        [Param::Tau1, Param::Tau2, Param::Kappa1, Param::Kappa2, Param::Phi1, Param::Phi2, Param::NBlocks];

    pub fn name(self) -> &'static str {
        match self {
            Param::Tau1 => "tau1",
            Param::Tau2 => "tau2",
            Param::Kappa1 => "kappa1",
            Param::Kappa2 => "kappa2",
            Param::Phi1 => "phi1",
            Param::Phi2 => "phi2",
            Param::NBlocks => "n_blocks",
        }
    }

    pub fn from_name(name: &str) -> Result<Param, Error> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown sequence parameter '{name}'")))
    }

    pub fn is_integer(self) -> bool {
        self == Param::NBlocks
    }

    /// Value in internal units (s, Hz, rad, count).
    pub fn get(self, p: &SequenceParams) -> f64 {
        match self {
            Param::Tau1 => p.tau1,
            Param::Tau2 => p.tau2,
            Param::Kappa1 => p.kappa1,
            Param::Kappa2 => p.kappa2,
            Param::Phi1 => p.phi1,
            Param::Phi2 => p.phi2,
            Param::NBlocks => f64::from(p.n_blocks),
        }
    }

    /// Sets the field; the block count is rounded to the nearest integer ≥ 1.
    pub fn set(self, p: &mut SequenceParams, v: f64) {
        match self {
            Param::Tau1 => p.tau1 = v,
            Param::Tau2 => p.tau2 = v,
            Param::Kappa1 => p.kappa1 = v,
            Param::Kappa2 => p.kappa2 = v,
            Param::Phi1 => p.phi1 = v,
            Param::Phi2 => p.phi2 = v,
            Param::NBlocks => p.n_blocks = v.round().max(1.0).min(f64::from(u32::MAX)) as u32,
        }
    }

    /// Scale from internal units to the units used in files and tables
    /// (µs, Hz, degrees, count).
    pub fn display_scale(self) -> f64 {
        match self {
            Param::Tau1 | Param::Tau2 => 1e6,
            Param::Phi1 | Param::Phi2 => 180.0 / PI,
            _ => 1.0,
        }
    }
}

/// Pulses of one C7 block of the relaxed family.
pub fn c7opt_block(p: &SequenceParams) -> PulseSequence {
    let inc = TAU / ELEMENTS_PER_BLOCK as f64;
    let mut events = Vec::with_capacity(PULSES_PER_BLOCK);
    for e in 0..ELEMENTS_PER_BLOCK {
        let offset = e as f64 * inc;
        events.push(PulseEvent { amplitude: p.kappa1, phase: (p.phi1 + offset).rem_euclid(TAU), duration: p.tau1 });
        events.push(PulseEvent { amplitude: p.kappa2, phase: (p.phi2 + PI + offset).rem_euclid(TAU), duration: p.tau2 });
    }
    PulseSequence::new(events)
}

/// `n_blocks` repetitions of [`c7opt_block`]; 14 · n_blocks events.
pub fn build_c7opt(p: &SequenceParams) -> Result<PulseSequence, Error> {
    p.validate()?;
    let block = c7opt_block(p);
    let mut events = Vec::with_capacity(PULSES_PER_BLOCK * p.n_blocks as usize);
    for _ in 0..p.n_blocks {
        events.extend_from_slice(block.events());
    }
    Ok(PulseSequence::new(events))
}

/// The canonical C N_n^ν train built directly from the symmetry relations,
/// element phase 2πν·i/N and second-pulse phase shifted by π.
pub fn build_c7(rotor_freq: f64, n_blocks: u32) -> Result<PulseSequence, Error> {
    let d = c7_defaults(rotor_freq)?;
    if n_blocks < 1 {
        return Err(Error::InvalidInput("n_blocks must be at least 1".into()));
    }
    let mut events = Vec::new();
    for i in 0..(d.n as usize * n_blocks as usize) {
        let phi = (d.phase_increment * i as f64).rem_euclid(TAU);
        let dur = d.theta_c / (TAU * d.kappa_c);
        events.push(PulseEvent { amplitude: d.kappa_c, phase: phi, duration: dur });
        events.push(PulseEvent { amplitude: d.kappa_c, phase: (phi + PI).rem_euclid(TAU), duration: dur });
    }
    Ok(PulseSequence::new(events))
}

/// Loss of rotor synchrony per rotor period caused by pulse length changes:
/// (7/2)(Δτ1 + Δτ2).
pub fn asynchrony(dtau1: f64, dtau2: f64) -> f64 {
    ELEMENTS_PER_BLOCK as f64 / 2.0 * (dtau1 + dtau2)
}

/// Flip angle 2π κ τ in radians.
pub fn flip_angle(kappa: f64, tau: f64) -> f64 {
    TAU * kappa * tau
}

/// Excitation period n_C · 7 · (τ1 + τ2).
pub fn excitation_time(p: &SequenceParams) -> f64 {
    f64::from(p.n_blocks) * p.block_duration()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn phase_diff(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    #[test]
    fn param_names_round_trip() {
        let mut p = SequenceParams::c7(10204.0, 31).unwrap();
        for q in Param::ALL {
            assert_eq!(Param::from_name(q.name()).unwrap(), q);
            let v = q.get(&p);
            q.set(&mut p, v);
            assert_eq!(q.get(&p), v);
        }
        assert!(Param::from_name("tau3").is_err());
        Param::NBlocks.set(&mut p, 30.6);
        assert_eq!(p.n_blocks, 31);
    }

    #[test]
    fn defaults_at_reference_speed() {
        let d = c7_defaults(10204.0).unwrap();
        assert_relative_eq!(d.kappa_c, 71428.0);
        assert!((d.tau_c * 1e6 - 14.00).abs() < 0.005);
        assert_relative_eq!(d.phase_increment, TAU / 7.0);
    }

    #[test]
    fn defaults_unit_and_low_speed() {
        let d = c7_defaults(1.0).unwrap();
        assert_relative_eq!(d.kappa_c, 7.0);
        assert_relative_eq!(d.tau_c, 1.0 / 7.0);
        let d = c7_defaults(4000.0).unwrap();
        assert_relative_eq!(d.kappa_c, 28000.0);
        assert!((d.tau_c * 1e6 - 35.714).abs() < 5e-4);
        assert!(c7_defaults(0.0).is_err());
        assert!(c7_defaults(-5.0).is_err());
    }

    #[test]
    fn relaxed_family_reduces_to_c7() {
        for n in [1, 4, 31] {
            let a = build_c7opt(&SequenceParams::c7(10204.0, n).unwrap()).unwrap();
            let b = build_c7(10204.0, n).unwrap();
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(b.iter()) {
                assert!((x.amplitude - y.amplitude).abs() <= 1e-12 * x.amplitude);
                assert!((x.duration - y.duration).abs() <= 1e-12 * x.duration);
                assert!(phase_diff(x.phase, y.phase) <= 1e-12);
            }
        }
    }

    #[test]
    fn default_phases_step_by_one_seventh_turn() {
        let s = build_c7opt(&SequenceParams::c7(10204.0, 2).unwrap()).unwrap();
        let deg: Vec<f64> = s.iter().take(4).map(|e| e.phase.to_degrees()).collect();
        assert!((deg[0] - 0.0).abs() < 1e-9);
        assert!((deg[1] - 180.0).abs() < 1e-9);
        assert!((deg[2] - 360.0 / 7.0).abs() < 1e-9);
        assert!((deg[3] - (180.0 + 360.0 / 7.0)).abs() < 1e-9);
    }

    #[test]
    fn full_experiment_pulse_count() {
        let p = SequenceParams::c7(10204.0, 31).unwrap();
        let s = build_c7opt(&p).unwrap();
        assert_eq!(s.len(), 434);
        assert_eq!(2 * s.len(), 868);
    }

    #[test]
    fn default_block_is_two_rotor_periods() {
        let p = SequenceParams::c7(10204.0, 5).unwrap();
        let s = build_c7opt(&p).unwrap();
        assert_relative_eq!(s.total_duration(), 5.0 * 2.0 / 10204.0, max_relative = 1e-12);
    }

    #[test]
    fn asynchrony_examples() {
        assert_eq!(asynchrony(0.0, 0.0), 0.0);
        assert!((asynchrony(0.364e-6, 0.0) - 1.274e-6).abs() < 1e-15);
        for x in [1e-7, -3e-6, 2.5e-6] {
            assert_eq!(asynchrony(x, -x), 0.0);
        }
    }

    #[test]
    fn flip_angle_examples() {
        assert!((flip_angle(71428.0, 14.00e-6) - TAU).abs() < 1e-3);
        assert!((flip_angle(71428.0, 7.00e-6) - PI).abs() < 1e-3);
        let d = c7_defaults(10204.0).unwrap();
        assert_relative_eq!(flip_angle(d.kappa_c, 1.022 * d.tau_c), TAU * 1.022, max_relative = 1e-12);
    }

    #[test]
    fn excitation_time_examples() {
        let p = SequenceParams::c7(10204.0, 31).unwrap();
        assert!((excitation_time(&p) * 1e3 - 6.076).abs() < 5e-4);
        assert_relative_eq!(excitation_time(&p), 31.0 * 2.0 / 10204.0, max_relative = 1e-12);
        let d = c7_defaults(10204.0).unwrap();
        let dt = 0.026 * d.tau_c;
        let q = SequenceParams { tau1: p.tau1 + dt, ..p };
        assert_relative_eq!(excitation_time(&q) - excitation_time(&p), 31.0 * 7.0 * dt, max_relative = 1e-9);
        assert!(SequenceParams { n_blocks: 0, ..p }.validate().is_err());
    }
}
