//! Matrices of the named gates.
//!
//! `rz(φ)` follows the phase-gate convention `diag(1, e^{iφ})`; it differs from
//! the symmetric `diag(e^{-iφ/2}, e^{iφ/2})` rotation only by a global phase.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::Matrix;
use crate::Complex;

fn m2(a: Complex, b: Complex, c: Complex, d: Complex) -> Matrix {
    Matrix::from_rows(2, vec![a, b, c, d])
}

const fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

pub fn i() -> Matrix {
    Matrix::identity(2)
}

pub fn x() -> Matrix {
    m2(re(0.0), re(1.0), re(1.0), re(0.0))
}

pub fn y() -> Matrix {
    m2(re(0.0), Complex::new(0.0, -1.0), Complex::new(0.0, 1.0), re(0.0))
}

pub fn z() -> Matrix {
    m2(re(1.0), re(0.0), re(0.0), re(-1.0))
}

pub fn h() -> Matrix {
    let s = FRAC_1_SQRT_2;
    m2(re(s), re(s), re(s), re(-s))
}

pub fn rz(phi: f64) -> Matrix {
    m2(re(1.0), re(0.0), re(0.0), Complex::from_polar(1.0, phi))
}

pub fn sx() -> Matrix {
    let p = Complex::new(0.5, 0.5);
    let q = Complex::new(0.5, -0.5);
    m2(p, q, q, p)
}

pub fn sxdg() -> Matrix {
    sx().adjoint()
}

/// Exchanges the two target qubits.
pub fn swap() -> Matrix {
    Matrix::from_real(
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    )
}

/// Standard rotation about Y, `exp(-iθY/2)`.
pub fn ry(theta: f64) -> Matrix {
    let (s, c) = (theta / 2.0).sin_cos();
    m2(re(c), re(-s), re(s), re(c))
}

/// Symmetric rotation about Z, `exp(-iθZ/2)`.
pub fn rz_symmetric(theta: f64) -> Matrix {
    Matrix::diagonal(&[
        Complex::from_polar(1.0, -theta / 2.0),
        Complex::from_polar(1.0, theta / 2.0),
    ])
}
