//! Spin-1/2 pair operators in the Zeeman product basis
//! `{|αα⟩, |αβ⟩, |βα⟩, |ββ⟩}` (index 0..4, spin 1 is the left factor).

use num_complex::Complex64;

use super::linalg::Mat4;

/// Total Zeeman quantum number M of each basis state.
pub const ZEEMAN_M: [i32; 4] = [1, 0, 0, -1];

const Z: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ident2() -> [[Complex64; 2]; 2] {
    [[c(1.0, 0.0), Z], [Z, c(1.0, 0.0)]]
}

fn ix() -> [[Complex64; 2]; 2] {
    [[Z, c(0.5, 0.0)], [c(0.5, 0.0), Z]]
}

fn iy() -> [[Complex64; 2]; 2] {
    [[Z, c(0.0, -0.5)], [c(0.0, 0.5), Z]]
}

fn iz() -> [[Complex64; 2]; 2] {
    [[c(0.5, 0.0), Z], [Z, c(-0.5, 0.0)]]
}

fn iplus() -> [[Complex64; 2]; 2] {
    [[Z, c(1.0, 0.0)], [Z, Z]]
}

fn iminus() -> [[Complex64; 2]; 2] {
    [[Z, Z], [c(1.0, 0.0), Z]]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    One,
    Two,
}

fn single(op: [[Complex64; 2]; 2], spin: Spin) -> Mat4 {
    match spin {
        Spin::One => Mat4::kron(&op, &ident2()),
        Spin::Two => Mat4::kron(&ident2(), &op),
    }
}

pub fn i_x(spin: Spin) -> Mat4 {
    single(ix(), spin)
}

pub fn i_y(spin: Spin) -> Mat4 {
    single(iy(), spin)
}

pub fn i_z(spin: Spin) -> Mat4 {
    single(iz(), spin)
}

pub fn i_plus(spin: Spin) -> Mat4 {
    single(iplus(), spin)
}

pub fn i_minus(spin: Spin) -> Mat4 {
    single(iminus(), spin)
}

/// I1x + I2x
pub fn f_x() -> Mat4 {
    i_x(Spin::One) + i_x(Spin::Two)
}

/// I1y + I2y
pub fn f_y() -> Mat4 {
    i_y(Spin::One) + i_y(Spin::Two)
}

/// I1z + I2z
pub fn f_z() -> Mat4 {
    i_z(Spin::One) + i_z(Spin::Two)
}

/// Secular homonuclear dipolar operator 2 I1z I2z − I1x I2x − I1y I2y.
pub fn dipolar_secular() -> Mat4 {
    let zz = Mat4::kron(&iz(), &iz());
    let xx = Mat4::kron(&ix(), &ix());
    let yy = Mat4::kron(&iy(), &iy());
    zz.scale(2.0) - xx - yy
}

/// I1⁺I2⁺ + I1⁻I2⁻, the pure double-quantum operator.
pub fn double_quantum_x() -> Mat4 {
    Mat4::kron(&iplus(), &iplus()) + Mat4::kron(&iminus(), &iminus())
}

/// Coherence order M(r) − M(c) of density matrix element (r, c).
pub fn coherence_order(r: usize, c: usize) -> i32 {
    ZEEMAN_M[r] - ZEEMAN_M[c]
}

/// exp(−i φ Fz), diagonal entries only.
pub fn z_rotation_diagonal(phi: f64) -> [Complex64; 4] {
    ZEEMAN_M.map(|m| Complex64::from_polar(1.0, -phi * f64::from(m)))
}

/// Rz(φ) · U · Rz(φ)†, with Rz(φ) = exp(−i φ Fz).
///
/// Since every interaction term commutes with Fz, this maps the propagator of
/// an x-phase pulse onto the propagator of the same pulse at phase φ.
pub fn rotate_about_z(u: &Mat4, phi: f64) -> Mat4 {
    if phi == 0.0 {
        return *u;
    }
    let z = Complex64::from_polar(1.0, -phi);
    let z2 = z * z;
    // Factor e^{−iφp} indexed by coherence order p + 2.
    let f = [z2.conj(), z.conj(), Complex64::new(1.0, 0.0), z, z2];
    let mut out = *u;
    for r in 0..4 {
        for col in 0..4 {
            let p = coherence_order(r, col);
            if p != 0 {
                out.0[r][col] *= f[(p + 2) as usize];
            }
        }
    }
    out
}
