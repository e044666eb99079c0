//! Reference spin pair: the 1,4-¹³C₂ carboxyl pair of mono-ammonium maleate.

use crate::spin::{CsaTensor, Euler, SpinSystem};

/// ω0/2π for ¹³C at 16.4 T, Hz.
pub const LARMOR_FREQ: f64 = -176.1e6;
/// b/2π, Hz.
pub const DIPOLAR_B: f64 = -216.0;
/// Reference spinning frequency, Hz.
pub const ROTOR_FREQ: f64 = 10204.0;

/// Shielding anisotropy δ_aniso, Hz (negative: shielding convention); the
/// reference spinning frequency is 0.99 of its magnitude.
pub fn csa_aniso() -> f64 {
    -ROTOR_FREQ / 0.99
}

/// Asymmetry of both carboxyl shielding tensors.
pub const CSA_ETA: f64 = 0.836;

/// PAS → molecular frame of spin 1, degrees. The molecular z axis is the
/// C1–C4 vector; spin 2 is the image under the two-fold axis along x.
pub const CSA_EULER_1: [f64; 3] = [322.1, 16.55, 169.89];
pub const CSA_EULER_2: [f64; 3] = [37.9, 16.55, 10.11];

fn euler(d: [f64; 3]) -> Euler {
    Euler::from_degrees(d[0], d[1], d[2])
}

pub fn maleate() -> SpinSystem {
    let aniso = csa_aniso();
    SpinSystem {
        larmor_freq: LARMOR_FREQ,
        iso_shift: [0.0, 0.0],
        csa: [
            CsaTensor { aniso, eta: CSA_ETA, euler: euler(CSA_EULER_1) },
            CsaTensor { aniso, eta: CSA_ETA, euler: euler(CSA_EULER_2) },
        ],
        dipolar_b: DIPOLAR_B,
        dipolar_euler: Euler::default(),
    }
}
