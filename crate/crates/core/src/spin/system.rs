//! Two-spin system description and the MAS-modulated interaction frequencies.
//!
//! Frame chain: tensor PAS → molecular frame → rotor frame (crystallite
//! angles) → laboratory frame (rotor phase −ω_r t, magic angle, 0). Euler
//! angles follow the ZYZ convention with
//! `D²_{m'm}(α,β,γ) = e^{−im'α} d²_{m'm}(β) e^{−imγ}` and the component
//! transformation `A^B_m = Σ_{m'} A^A_{m'} D²_{m'm}(Ω_AB)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

/// arccos(1/√3)
pub fn magic_angle() -> f64 {
    (1.0 / 3.0f64.sqrt()).acos()
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Euler {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Euler {
    pub const fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Euler { alpha, beta, gamma }
    }

    pub fn from_degrees(alpha: f64, beta: f64, gamma: f64) -> Self {
        Euler::new(alpha.to_radians(), beta.to_radians(), gamma.to_radians())
    }

    pub fn to_degrees(self) -> [f64; 3] {
        [self.alpha.to_degrees(), self.beta.to_degrees(), self.gamma.to_degrees()]
    }
}

/// Crystallite orientation: molecular frame → rotor frame.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Orientation {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Orientation {
    /// Wraps α and γ into [0, 2π); β must already lie in [0, π].
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        debug_assert!((0.0..=PI).contains(&beta), "beta out of range: {beta}");
        Orientation {
            alpha: alpha.rem_euclid(TAU),
            beta,
            gamma: gamma.rem_euclid(TAU),
        }
    }

    fn euler(&self) -> Euler {
        Euler::new(self.alpha, self.beta, self.gamma)
    }
}

/// Shielding tensor of one spin. `aniso` is δ_aniso = δ_zz − δ_iso in Hz.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CsaTensor {
    pub aniso: f64,
    pub eta: f64,
    pub euler: Euler,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinSystem {
    /// ω0/2π in Hz. Informational; only used to convert ppm values.
    pub larmor_freq: f64,
    /// Isotropic shifts relative to the transmitter, Hz.
    pub iso_shift: [f64; 2],
    pub csa: [CsaTensor; 2],
    /// b/2π in Hz.
    pub dipolar_b: f64,
    pub dipolar_euler: Euler,
}

impl SpinSystem {
    pub fn validate(&self) -> Result<(), crate::Error> {
        for (i, t) in self.csa.iter().enumerate() {
            if !(0.0..=1.0).contains(&t.eta) {
                return Err(crate::Error::InvalidInput(format!(
                    "csa_eta_{} = {} outside [0, 1]",
                    i + 1,
                    t.eta
                )));
            }
        }
        let finite = self.iso_shift.iter().all(|v| v.is_finite())
            && self.csa.iter().all(|t| t.aniso.is_finite())
            && self.dipolar_b.is_finite();
        if !finite {
            return Err(crate::Error::InvalidInput("non-finite spin system parameter".into()));
        }
        Ok(())
    }

    /// Same system with both shielding anisotropies removed.
    pub fn without_csa(&self) -> SpinSystem {
        let mut s = self.clone();
        for t in s.csa.iter_mut() {
            t.aniso = 0.0;
            t.eta = 0.0;
        }
        s
    }

    /// Same system with both isotropic shifts displaced by `offset` Hz.
    pub fn with_offset(&self, offset: f64) -> SpinSystem {
        let mut s = self.clone();
        for v in s.iso_shift.iter_mut() {
            *v += offset;
        }
        s
    }
}

/// Wigner reduced rotation matrix element d^2_{m'm}(β).
pub fn wigner_d2(mp: i32, m: i32, beta: f64) -> f64 {
    assert!(mp.abs() <= 2 && m.abs() <= 2);
    let fact = |n: i32| -> f64 { (1..=n).map(f64::from).product() };
    let j = 2;
    let pre = (fact(j + mp) * fact(j - mp) * fact(j + m) * fact(j - m)).sqrt();
    let (s, c) = (beta / 2.0).sin_cos();
    let kmin = 0.max(m - mp);
    let kmax = (j + m).min(j - mp);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let sign = if (k - m + mp) % 2 == 0 { 1.0 } else { -1.0 };
        let den = fact(j + m - k) * fact(k) * fact(mp - m + k) * fact(j - mp - k);
        sum += sign * c.powi(2 * j + m - mp - 2 * k) * s.powi(mp - m + 2 * k) / den;
    }
    pre * sum
}

pub fn wigner_big_d2(mp: i32, m: i32, e: Euler) -> Complex64 {
    Complex64::from_polar(1.0, -f64::from(mp) * e.alpha)
        * wigner_d2(mp, m, e.beta)
        * Complex64::from_polar(1.0, -f64::from(m) * e.gamma)
}

/// Rank-2 spherical components, index `m + 2`.
type Rank2 = [Complex64; 5];

fn rotate_rank2(a: &Rank2, e: Euler) -> Rank2 {
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for m in -2..=2 {
        let mut acc = Complex64::new(0.0, 0.0);
        for mp in -2..=2 {
            let v = a[(mp + 2) as usize];
            if v != Complex64::new(0.0, 0.0) {
                acc += v * wigner_big_d2(mp, m, e);
            }
        }
        out[(m + 2) as usize] = acc;
    }
    out
}

fn pas_components(aniso: f64, eta: f64) -> Rank2 {
    let side = Complex64::new(-eta * aniso / 6.0f64.sqrt(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [side, zero, Complex64::new(aniso, 0.0), zero, side]
}

/// A real rotor-modulated frequency `iso + Σ_{m≠0} c_m e^{i m ω_r t}`, in rad/s.
///
/// Only the m = 1, 2 amplitudes are stored; m < 0 are their conjugates.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RotorModulation {
    pub iso: f64,
    pub harmonics: [Complex64; 2],
}

impl RotorModulation {
    fn from_tensor(pas: &Rank2, to_molecule: Euler, crystallite: Euler, scale: f64, iso: f64) -> Self {
        let mol = rotate_rank2(pas, to_molecule);
        let rot = rotate_rank2(&mol, crystallite);
        let bm = magic_angle();
        let mut harmonics = [Complex64::new(0.0, 0.0); 2];
        for m in 1..=2 {
            harmonics[(m - 1) as usize] = rot[(m + 2) as usize] * wigner_d2(m, 0, bm) * scale;
        }
        RotorModulation { iso, harmonics }
    }

    /// Value at rotor phase θ = ω_r t.
    #[inline]
    pub fn at_phase(&self, cos1: f64, sin1: f64, cos2: f64, sin2: f64) -> f64 {
        let [h1, h2] = self.harmonics;
        self.iso + 2.0 * (h1.re * cos1 - h1.im * sin1 + h2.re * cos2 - h2.im * sin2)
    }
}

/// Fourier description of the three interaction frequencies for one
/// crystallite at one spinning speed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrystalliteCoefficients {
    pub rotor_freq: f64,
    pub cs: [RotorModulation; 2],
    pub dipolar: RotorModulation,
}

/// Instantaneous coefficients (rad/s) of I1z, I2z and the dipolar operator.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct InteractionFrequencies {
    pub cs1: f64,
    pub cs2: f64,
    pub dipolar: f64,
}

impl CrystalliteCoefficients {
    pub fn new(sys: &SpinSystem, o: &Orientation, rotor_freq: f64) -> Self {
        let cryst = o.euler();
        let cs = [0, 1].map(|i| {
            let t = &sys.csa[i];
            RotorModulation::from_tensor(
                &pas_components(t.aniso, t.eta),
                t.euler,
                cryst,
                TAU,
                TAU * sys.iso_shift[i],
            )
        });
        let dipolar = RotorModulation::from_tensor(
            &pas_components(sys.dipolar_b, 0.0),
            sys.dipolar_euler,
            cryst,
            TAU,
            0.0,
        );
        CrystalliteCoefficients { rotor_freq, cs, dipolar }
    }

    #[inline]
    pub fn at(&self, t: f64) -> InteractionFrequencies {
        let theta = (TAU * self.rotor_freq * t).rem_euclid(TAU);
        let (s1, c1) = theta.sin_cos();
        let c2 = c1 * c1 - s1 * s1;
        let s2 = 2.0 * s1 * c1;
        InteractionFrequencies {
            cs1: self.cs[0].at_phase(c1, s1, c2, s2),
            cs2: self.cs[1].at_phase(c1, s1, c2, s2),
            dipolar: self.dipolar.at_phase(c1, s1, c2, s2),
        }
    }
}

/// Instantaneous interaction frequencies (rad/s) for one crystallite.
pub fn interaction_frequencies(
    sys: &SpinSystem,
    o: &Orientation,
    rotor_freq: f64,
    t: f64,
) -> InteractionFrequencies {
    assert!(rotor_freq > 0.0, "rotor frequency must be positive");
    CrystalliteCoefficients::new(sys, o, rotor_freq).at(t)
}
