//! Double-quantum filtration experiment built from the relaxed C7 family.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::powder::{Powder, PowderSpec};
use crate::sequence::{c7opt_block, excitation_time, PulseEvent, SequenceParams};
use crate::spin::operators::{coherence_order, f_x, f_z, rotate_about_z};
use crate::spin::{CrystalliteCoefficients, CrystalliteEngine, Mat4, RotorGrid, SpinSystem};
use crate::Error;

/// Operator used both as the initial density matrix and for detection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Magnetization {
    /// I1z + I2z: longitudinal magnetization, the state the C7 blocks act on
    /// once the bracketing 90° pulses are idealized away.
    #[default]
    Longitudinal,
    /// I1x + I2x
    Transverse,
}

impl Magnetization {
    pub fn operator(self) -> Mat4 {
        match self {
            Magnetization::Longitudinal => f_z(),
            Magnetization::Transverse => f_x(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    /// Spinning frequency ω_rot/2π, Hz.
    pub rotor_freq: f64,
    /// Added to both isotropic shifts, Hz.
    pub transmitter_offset: f64,
    pub powder: PowderSpec,
    /// Time grid cells per rotor period; the maximum step is τ_rot / this.
    pub steps_per_rotor: usize,
    pub include_csa: bool,
    pub magnetization: Magnetization,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            rotor_freq: 10204.0,
            transmitter_offset: 0.0,
            powder: PowderSpec::default(),
            steps_per_rotor: 200,
            include_csa: true,
            magnetization: Magnetization::Longitudinal,
        }
    }
}

impl SimConfig {
    pub fn max_step(&self) -> f64 {
        1.0 / (self.rotor_freq * self.steps_per_rotor as f64)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.rotor_freq > 0.0) || !self.rotor_freq.is_finite() {
            return Err(Error::InvalidInput(format!("rotor_freq must be positive, got {}", self.rotor_freq)));
        }
        if self.steps_per_rotor == 0 {
            return Err(Error::InvalidInput("steps_per_rotor must be at least 1".into()));
        }
        if !self.transmitter_offset.is_finite() {
            return Err(Error::InvalidInput("transmitter_offset must be finite".into()));
        }
        if self.powder.count == 0 || self.powder.gamma == 0 {
            return Err(Error::InvalidInput("powder set must contain at least one crystallite".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> RotorGrid {
        RotorGrid::new(self.rotor_freq, self.steps_per_rotor)
    }

    /// The spin system the simulation actually sees: CSA toggle and
    /// transmitter offset applied.
    pub fn effective_system(&self, sys: &SpinSystem) -> SpinSystem {
        let s = if self.include_csa { sys.clone() } else { sys.without_csa() };
        if self.transmitter_offset != 0.0 {
            s.with_offset(self.transmitter_offset)
        } else {
            s
        }
    }
}

/// DQF efficiency (normalized first FID point) and the fitness 1 − efficiency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DqfResult {
    pub efficiency: f64,
    pub fitness: f64,
}

impl DqfResult {
    pub fn from_efficiency(efficiency: f64) -> Self {
        DqfResult { efficiency, fitness: 1.0 - efficiency }
    }
}

/// Keep only the ±2 coherence elements of ρ.
fn double_quantum_part(rho: &Mat4) -> Mat4 {
    let mut out = Mat4::zeros();
    for r in 0..4 {
        for c in 0..4 {
            if coherence_order(r, c).abs() == 2 {
                out.0[r][c] = rho.0[r][c];
            }
        }
    }
    out
}

/// Signal of one crystallite given excitation and reconversion propagators.
fn filtered_signal(u_exc: &Mat4, u_rec: &Mat4, rho0: &Mat4, norm: f64) -> f64 {
    let rho1 = double_quantum_part(&(*u_exc * *rho0).mul_adjoint(u_exc));
    let rho2 = (*u_rec * rho1).mul_adjoint(u_rec);
    // Detection operator is Hermitian, so Tr(D† ρ) = Tr(D ρ).
    rho0.trace_product(&rho2).re / norm
}

/// Everything that is fixed for one efficiency evaluation.
pub struct Experiment {
    sys: SpinSystem,
    cfg: SimConfig,
    powder: Powder,
    threads: usize,
}

/// Applies `f` to every crystallite index on up to `threads` scoped threads
/// and returns the results in index order.
fn map_crystallites<T, F>(count: usize, threads: usize, f: F) -> Result<Vec<T>, Error>
where
    T: Send,
    F: Fn(usize) -> Result<T, Error> + Sync,
{
    let threads = threads.clamp(1, count.max(1));
    if threads == 1 {
        return (0..count).map(&f).collect();
    }
    let chunk = count.div_ceil(threads);
    let f = &f;
    let parts: Vec<Result<Vec<T>, Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                let lo = (k * chunk).min(count);
                let hi = ((k + 1) * chunk).min(count);
                scope.spawn(move || (lo..hi).map(f).collect::<Result<Vec<T>, Error>>())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("crystallite worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(count);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

impl Experiment {
    pub fn new(sys: &SpinSystem, cfg: &SimConfig) -> Result<Experiment, Error> {
        cfg.validate()?;
        sys.validate()?;
        let powder = cfg.powder.build()?;
        if powder.is_empty() {
            return Err(Error::InvalidInput("empty powder set".into()));
        }
        Ok(Experiment { sys: cfg.effective_system(sys), cfg: cfg.clone(), powder, threads: 1 })
    }

    /// Worker threads for the crystallite loop. Results do not depend on it:
    /// the powder sum always runs in crystallite order.
    pub fn with_threads(mut self, threads: usize) -> Experiment {
        self.threads = threads.max(1);
        self
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn system(&self) -> &SpinSystem {
        &self.sys
    }

    pub fn powder(&self) -> &Powder {
        &self.powder
    }

    fn engine(&self, idx: usize) -> CrystalliteEngine {
        let (o, _) = self.powder.crystallites[idx];
        CrystalliteEngine::new(CrystalliteCoefficients::new(&self.sys, &o, self.cfg.rotor_freq), self.cfg.grid())
    }

    /// Efficiency contribution of crystallite `idx` (unweighted).
    pub fn crystallite_efficiency(&self, p: &SequenceParams, idx: usize) -> Result<f64, Error> {
        p.validate()?;
        let block = c7opt_block(p);
        let mut engine = self.engine(idx);
        let rho0 = self.cfg.magnetization.operator();
        let norm = rho0.trace_product(&rho0).re;
        let mut u_exc = Mat4::identity();
        let mut t = 0.0;
        for _ in 0..p.n_blocks {
            let (b, t_next) = engine.propagate(block.events(), t);
            u_exc = b * u_exc;
            t = t_next;
        }
        let mut u_rec = Mat4::identity();
        for _ in 0..p.n_blocks {
            let (b, t_next) = engine.propagate(block.events(), t);
            u_rec = b * u_rec;
            t = t_next;
        }
        let u_rec = rotate_about_z(&u_rec, FRAC_PI_2);
        let s = filtered_signal(&u_exc, &u_rec, &rho0, norm);
        if !s.is_finite() {
            return Err(Error::Numerical("non-finite crystallite signal".into()));
        }
        Ok(s)
    }

    pub fn efficiency(&self, p: &SequenceParams) -> Result<DqfResult, Error> {
        p.validate()?;
        let vals = map_crystallites(self.powder.len(), self.threads, |idx| self.crystallite_efficiency(p, idx))?;
        let acc = vals.iter().zip(&self.powder.crystallites).map(|(v, (_, w))| w * v).sum();
        Ok(DqfResult::from_efficiency(acc))
    }

    /// Efficiencies for n_C = 1..=max_blocks in one pass; entry `n − 1` holds
    /// the value for n blocks.
    pub fn buildup(&self, p: &SequenceParams, max_blocks: u32) -> Result<Vec<f64>, Error> {
        p.with_blocks(1).validate()?;
        if max_blocks == 0 {
            return Err(Error::InvalidInput("buildup needs at least one block".into()));
        }
        let block = c7opt_block(p);
        let rho0 = self.cfg.magnetization.operator();
        let norm = rho0.trace_product(&rho0).re;
        let nb = max_blocks as usize;
        let per = map_crystallites(self.powder.len(), self.threads, |idx| {
            let mut engine = self.engine(idx);
            // Block k starts where block k − 1 ended; reconversion for n
            // blocks consists of blocks n..2n at +90°.
            let mut blocks = Vec::with_capacity(2 * nb);
            let mut t = 0.0;
            for _ in 0..2 * nb {
                let (b, t_next) = engine.propagate(block.events(), t);
                blocks.push(b);
                t = t_next;
            }
            let mut out = Vec::with_capacity(nb);
            let mut u_exc = Mat4::identity();
            for n in 1..=nb {
                u_exc = blocks[n - 1] * u_exc;
                let mut u_rec = Mat4::identity();
                for b in &blocks[n..2 * n] {
                    u_rec = *b * u_rec;
                }
                let u_rec = rotate_about_z(&u_rec, FRAC_PI_2);
                out.push(filtered_signal(&u_exc, &u_rec, &rho0, norm));
            }
            Ok(out)
        })?;
        let mut out = vec![0.0; nb];
        for (vals, (_, w)) in per.iter().zip(&self.powder.crystallites) {
            for (o, v) in out.iter_mut().zip(vals) {
                *o += w * v;
            }
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite buildup value".into()));
        }
        Ok(out)
    }
}

/// Powder-averaged DQF efficiency of the relaxed C7 sequence `p`.
pub fn dqf_efficiency(p: &SequenceParams, sys: &SpinSystem, cfg: &SimConfig) -> Result<DqfResult, Error> {
    Experiment::new(sys, cfg)?.efficiency(p)
}

/// One point of a buildup curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildupPoint {
    pub n_blocks: u32,
    /// Excitation time, s.
    pub tau_exc: f64,
    pub efficiency: f64,
}

/// DQF efficiency as a function of the number of C7 blocks.
pub fn buildup_curve(
    p: &SequenceParams,
    sys: &SpinSystem,
    cfg: &SimConfig,
    n_range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<BuildupPoint>, Error> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo == 0 || hi < lo {
        return Err(Error::InvalidInput(format!("invalid block range {lo}..={hi}")));
    }
    let exp = Experiment::new(sys, cfg)?;
    let eff = exp.buildup(p, hi)?;
    Ok((lo..=hi)
        .map(|n| {
            let q = p.with_blocks(n);
            BuildupPoint { n_blocks: n, tau_exc: excitation_time(&q), efficiency: eff[(n - 1) as usize] }
        })
        .collect())
}

/// DQF efficiency with both isotropic shifts displaced by each offset (Hz).
pub fn offset_profile(
    p: &SequenceParams,
    sys: &SpinSystem,
    cfg: &SimConfig,
    offsets: &[f64],
) -> Result<Vec<(f64, f64)>, Error> {
    offsets
        .iter()
        .map(|&off| {
            let r = dqf_efficiency(p, &sys.with_offset(off), cfg)?;
            Ok((off, r.efficiency))
        })
        .collect()
}

/// Full width at half maximum of a sampled profile (linear interpolation of
/// the half-height crossings around the maximum). Returns `None` when the
/// profile does not drop below half height on both sides.
pub fn fwhm(profile: &[(f64, f64)]) -> Option<Fwhm> {
    let (imax, &(xmax, ymax)) = profile.iter().enumerate().max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?;
    if ymax <= 0.0 {
        return None;
    }
    let half = ymax / 2.0;
    let cross = |i: usize, j: usize| -> f64 {
        let (x0, y0) = profile[i];
        let (x1, y1) = profile[j];
        x0 + (half - y0) * (x1 - x0) / (y1 - y0)
    };
    let mut left = None;
    for i in (0..imax).rev() {
        if profile[i].1 < half {
            left = Some(cross(i, i + 1));
            break;
        }
    }
    let mut right = None;
    for i in (imax + 1)..profile.len() {
        if profile[i].1 < half {
            right = Some(cross(i - 1, i));
            break;
        }
    }
    let (l, r) = (left?, right?);
    Some(Fwhm { width: r - l, left: l, right: r, center: 0.5 * (l + r), peak_position: xmax, peak: ymax })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fwhm {
    pub width: f64,
    pub left: f64,
    pub right: f64,
    pub center: f64,
    pub peak_position: f64,
    pub peak: f64,
}

/// Pulse list of the full experiment (excitation then +90° reconversion);
/// useful for debugging and for checks against the reference propagator.
pub fn experiment_events(p: &SequenceParams) -> Result<(Vec<PulseEvent>, Vec<PulseEvent>), Error> {
    let exc = crate::sequence::build_c7opt(p)?;
    let rec = exc.phase_shifted(FRAC_PI_2);
    Ok((exc.events().to_vec(), rec.events().to_vec()))
}
