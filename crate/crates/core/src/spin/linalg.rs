//! Fixed-size 4×4 complex matrices for the two-spin Hilbert space.
//!
//! Everything here is stack allocated; the propagation loops perform
//! millions of these products per optimizer run.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

pub const DIM: usize = 4;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4(pub [[Complex64; DIM]; DIM]);

impl Default for Mat4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Mat4 {
    pub const fn zeros() -> Self {
        Mat4([[ZERO; DIM]; DIM])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..DIM {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_real(rows: [[f64; DIM]; DIM]) -> Self {
        let mut m = Self::zeros();
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.0[r][c] = Complex64::new(*v, 0.0);
            }
        }
        m
    }

    pub fn from_diagonal(d: [Complex64; DIM]) -> Self {
        let mut m = Self::zeros();
        for i in 0..DIM {
            m.0[i][i] = d[i];
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for r in 0..DIM {
            for c in 0..DIM {
                m.0[c][r] = self.0[r][c].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn scale_c(&self, s: Complex64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..DIM).map(|i| self.0[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖A − A†‖_F
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    /// ‖U†U − 1‖_F
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Self::identity()).frobenius_norm()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.0.iter().flat_map(|r| r.iter()).all(|v| v.im.abs() <= tol)
    }

    /// Product `self · other† `, used for range products of unitary prefixes.
    pub fn mul_adjoint(&self, other: &Mat4) -> Mat4 {
        let mut out = Mat4::zeros();
        for r in 0..DIM {
            for c in 0..DIM {
                let mut acc = ZERO;
                for k in 0..DIM {
                    acc += self.0[r][k] * other.0[c][k].conj();
                }
                out.0[r][c] = acc;
            }
        }
        out
    }

    /// Tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &Mat4) -> Complex64 {
        let mut acc = ZERO;
        for r in 0..DIM {
            for k in 0..DIM {
                acc += self.0[r][k] * other.0[k][r];
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        let mut m: f64 = 0.0;
        for r in 0..DIM {
            for c in 0..DIM {
                m = m.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        m
    }

    /// Kronecker product of two 2×2 matrices.
    pub fn kron(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Mat4 {
        let mut m = Mat4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.0[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        m
    }
}

impl Index<(usize, usize)> for Mat4 {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for Mat4 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.0[r][c]
    }
}

impl Add for Mat4 {
    type Output = Mat4;
    fn add(mut self, rhs: Mat4) -> Mat4 {
        self += rhs;
        self
    }
}

impl AddAssign for Mat4 {
    fn add_assign(&mut self, rhs: Mat4) {
        for r in 0..DIM {
            for c in 0..DIM {
                self.0[r][c] += rhs.0[r][c];
            }
        }
    }
}

impl Sub for Mat4 {
    type Output = Mat4;
    fn sub(mut self, rhs: Mat4) -> Mat4 {
        for r in 0..DIM {
            for c in 0..DIM {
                self.0[r][c] -= rhs.0[r][c];
            }
        }
        self
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    #[inline]
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = Mat4::zeros();
        for r in 0..DIM {
            for k in 0..DIM {
                let a = self.0[r][k];
                for c in 0..DIM {
                    out.0[r][c] += a * rhs.0[k][c];
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a real symmetric 4×4 matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues and the orthogonal matrix whose columns are the
/// eigenvectors.
pub fn eigh_real_symmetric(mut a: [[f64; DIM]; DIM]) -> ([f64; DIM], [[f64; DIM]; DIM]) {
    let mut v = [[0.0; DIM]; DIM];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = a.iter().flat_map(|r| r.iter()).map(|x| x * x).sum::<f64>();
    if scale == 0.0 {
        return ([0.0; DIM], v);
    }
    let tiny = scale * 1e-34;
    for _sweep in 0..32 {
        let off: f64 = (0..DIM)
            .flat_map(|p| ((p + 1)..DIM).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off <= tiny {
            break;
        }
        for p in 0..DIM - 1 {
            for q in (p + 1)..DIM {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..DIM {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..DIM {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut w = [0.0; DIM];
    for i in 0..DIM {
        w[i] = a[i][i];
    }
    (w, v)
}

/// Eigendecomposition of a complex Hermitian 4×4 matrix.
///
/// Uses the standard embedding of an n×n Hermitian matrix `A + iB` into the
/// real symmetric 2n×2n matrix `[[A, −B], [B, A]]`, whose spectrum is that of
/// the Hermitian matrix with every eigenvalue doubled.
pub fn eigh_hermitian(h: &Mat4) -> ([f64; DIM], Mat4) {
    const N2: usize = 2 * DIM;
    let mut a = [[0.0; N2]; N2];
    for r in 0..DIM {
        for c in 0..DIM {
            let re = 0.5 * (h.0[r][c].re + h.0[c][r].re);
            let im = 0.5 * (h.0[r][c].im - h.0[c][r].im);
            a[r][c] = re;
            a[r + DIM][c + DIM] = re;
            a[r][c + DIM] = -im;
            a[r + DIM][c] = im;
        }
    }
    let (w, v) = jacobi_n::<N2>(a);
    let mut order: Vec<usize> = (0..N2).collect();
    order.sort_by(|&i, &j| w[i].total_cmp(&w[j]));

    // Each eigenvalue appears twice; the pair (x, y) and (−y, x) span the same
    // complex vector x + iy. Gram–Schmidt over the complex candidates keeps
    // one representative per complex dimension.
    let mut vals = [0.0; DIM];
    let mut vecs = Mat4::zeros();
    let mut found = 0;
    for &k in &order {
        if found == DIM {
            break;
        }
        let mut cand = [ZERO; DIM];
        for r in 0..DIM {
            cand[r] = Complex64::new(v[r][k], v[r + DIM][k]);
        }
        for j in 0..found {
            let mut proj = ZERO;
            for r in 0..DIM {
                proj += vecs.0[r][j].conj() * cand[r];
            }
            for r in 0..DIM {
                cand[r] -= proj * vecs.0[r][j];
            }
        }
        let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 0.5 {
            continue;
        }
        for r in 0..DIM {
            vecs.0[r][found] = cand[r] / norm;
        }
        vals[found] = w[k];
        found += 1;
    }
    debug_assert_eq!(found, DIM);
    (vals, vecs)
}

fn jacobi_n<const N: usize>(mut a: [[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = a.iter().flat_map(|r| r.iter()).map(|x| x * x).sum::<f64>();
    if scale == 0.0 {
        return ([0.0; N], v);
    }
    let tiny = scale * 1e-34;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..N {
            for q in (p + 1)..N {
                off += a[p][q] * a[p][q];
            }
        }
        if off <= tiny {
            break;
        }
        for p in 0..N - 1 {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut w = [0.0; N];
    for i in 0..N {
        w[i] = a[i][i];
    }
    (w, v)
}

type Real4 = [[f64; DIM]; DIM];

#[inline]
fn rmul(a: &Real4, b: &Real4) -> Real4 {
    let mut o = [[0.0; DIM]; DIM];
    for r in 0..DIM {
        for k in 0..DIM {
            let x = a[r][k];
            for c in 0..DIM {
                o[r][c] += x * b[k][c];
            }
        }
    }
    o
}

/// Frobenius norm below which [`expm_real_symmetric`] uses the truncated
/// cos/sin series; the first omitted term is below 1e−15.
pub const SERIES_NORM_LIMIT: f64 = 0.5;

/// exp(−iX) = cos X − i sin X for real symmetric X with ‖X‖_F ≤ 0.5,
/// using even/odd Taylor polynomials through X¹³ evaluated in Y = X².
fn expm_series(x: &Real4) -> Mat4 {
    // cos: Σ (−1)^k Y^k / (2k)!, sin: X Σ (−1)^k Y^k / (2k+1)!, k = 0..6
    const C: [f64; 7] = [
        1.0,
        -1.0 / 2.0,
        1.0 / 24.0,
        -1.0 / 720.0,
        1.0 / 40320.0,
        -1.0 / 3628800.0,
        1.0 / 479001600.0,
    ];
    const S: [f64; 7] = [
        1.0,
        -1.0 / 6.0,
        1.0 / 120.0,
        -1.0 / 5040.0,
        1.0 / 362880.0,
        -1.0 / 39916800.0,
        1.0 / 6227020800.0,
    ];
    let y1 = rmul(x, x);
    let y2 = rmul(&y1, &y1);
    let y3 = rmul(&y2, &y1);
    // p(Y) = a0 + a1 Y + a2 Y² + a3 Y³ + Y³ (a4 Y + a5 Y² + a6 Y³)
    let poly = |a: &[f64; 7]| -> Real4 {
        let mut lo = [[0.0; DIM]; DIM];
        let mut hi = [[0.0; DIM]; DIM];
        for r in 0..DIM {
            for c in 0..DIM {
                lo[r][c] = a[1] * y1[r][c] + a[2] * y2[r][c] + a[3] * y3[r][c];
                hi[r][c] = a[4] * y1[r][c] + a[5] * y2[r][c] + a[6] * y3[r][c];
            }
            lo[r][r] += a[0];
        }
        let t = rmul(&y3, &hi);
        for r in 0..DIM {
            for c in 0..DIM {
                lo[r][c] += t[r][c];
            }
        }
        lo
    };
    let cos = poly(&C);
    let sin = rmul(x, &poly(&S));
    let mut u = Mat4::zeros();
    for r in 0..DIM {
        for c in 0..DIM {
            u.0[r][c] = Complex64::new(cos[r][c], -sin[r][c]);
        }
    }
    u
}

/// exp(−i H t) for a real symmetric `H`.
///
/// Short steps use the cos/sin series; otherwise the real eigendecomposition.
/// The result is complex symmetric.
pub fn expm_real_symmetric(h: [[f64; DIM]; DIM], t: f64) -> Mat4 {
    let mut x = h;
    let mut norm2 = 0.0;
    for row in x.iter_mut() {
        for v in row.iter_mut() {
            *v *= t;
            norm2 += *v * *v;
        }
    }
    if norm2 <= SERIES_NORM_LIMIT * SERIES_NORM_LIMIT {
        return expm_series(&x);
    }
    expm_real_symmetric_eigen(h, t)
}

/// exp(−i H t) for a real symmetric `H` via its eigendecomposition.
pub fn expm_real_symmetric_eigen(h: [[f64; DIM]; DIM], t: f64) -> Mat4 {
    let (w, v) = eigh_real_symmetric(h);
    let mut phases = [ZERO; DIM];
    for k in 0..DIM {
        let (s, c) = (w[k] * t).sin_cos();
        phases[k] = Complex64::new(c, -s);
    }
    let mut u = Mat4::zeros();
    for r in 0..DIM {
        for c in r..DIM {
            let mut acc = ZERO;
            for k in 0..DIM {
                acc += phases[k] * (v[r][k] * v[c][k]);
            }
            u.0[r][c] = acc;
            u.0[c][r] = acc;
        }
    }
    u
}

/// exp(−i H t) for a Hermitian `H`.
pub fn expm_hermitian(h: &Mat4, t: f64) -> Mat4 {
    if h.is_real(0.0) {
        let mut re = [[0.0; DIM]; DIM];
        for r in 0..DIM {
            for c in 0..DIM {
                re[r][c] = 0.5 * (h.0[r][c].re + h.0[c][r].re);
            }
        }
        return expm_real_symmetric(re, t);
    }
    let (w, v) = eigh_hermitian(h);
    let mut u = Mat4::zeros();
    for k in 0..DIM {
        let (s, c) = (w[k] * t).sin_cos();
        let ph = Complex64::new(c, -s);
        for r in 0..DIM {
            let vr = v.0[r][k] * ph;
            for cc in 0..DIM {
                u.0[r][cc] += vr * v.0[cc][k].conj();
            }
        }
    }
    u
}
