//! Small dense complex matrices used for gate unitaries and test oracles.

use std::fmt;
use std::ops::Mul;

use crate::Complex;

/// Row-major square complex matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![Complex::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the length is not a square.
    pub fn from_rows(dim: usize, data: Vec<Complex>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data must be dim*dim");
        Matrix { dim, data }
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Self {
        Self::from_rows(dim, data.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn diagonal(entries: &[Complex]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: Complex) -> Self {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`; `other` occupies the low index bits.
    pub fn kron(&self, other: &Matrix) -> Self {
        let dim = self.dim * other.dim;
        let mut m = Self::zeros(dim);
        for a in 0..self.dim {
            for b in 0..self.dim {
                let x = self[(a, b)];
                if x == Complex::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.dim {
                    for d in 0..other.dim {
                        m[(a * other.dim + c, b * other.dim + d)] = x * other[(c, d)];
                    }
                }
            }
        }
        m
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// Equality after removing a global phase from `other`.
    pub fn approx_eq_up_to_phase(&self, other: &Matrix, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        match phase_between(&self.data, &other.data) {
            Some(phase) => self.approx_eq(&other.scale(phase), tol),
            None => self.approx_eq(other, tol),
        }
    }

    /// Deviation of `M†M` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let prod = &self.adjoint() * self;
        prod.max_abs_diff(&Matrix::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    /// True when every entry is exactly 0 or 1 and every row/column has a single 1.
    pub fn is_permutation(&self) -> bool {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        if !self.data.iter().all(|&x| x == one || x == zero) {
            return false;
        }
        (0..self.dim).all(|r| (0..self.dim).filter(|&c| self[(r, c)] == one).count() == 1)
            && (0..self.dim).all(|c| (0..self.dim).filter(|&r| self[(r, c)] == one).count() == 1)
    }

    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Unit phase `e^{iγ}` such that `b·e^{iγ}` best aligns with `a`, or `None` if `b` is zero.
pub(crate) fn phase_between(a: &[Complex], b: &[Complex]) -> Option<Complex> {
    let overlap: Complex = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    if overlap.norm() < 1e-14 {
        None
    } else {
        Some(overlap / overlap.norm())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex;
    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        &self.data[r * self.dim + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let x = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", x.re, x.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
