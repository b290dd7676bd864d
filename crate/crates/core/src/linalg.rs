//! Fixed-size complex linear algebra for 2×2 coins and transfer matrices.
//!
//! General-purpose matrix crates are overkill here: everything in the walk is
//! a 2×2 block acting on a two-component chirality vector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Two-component chirality amplitude `(Ψᴸ, Ψᴿ)` at one lattice site.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Spinor {
    pub left: C64,
    pub right: C64,
}

impl Spinor {
    pub const ZERO: Spinor = Spinor {
        left: ZERO,
        right: ZERO,
    };

    pub const fn new(left: C64, right: C64) -> Self {
        Spinor { left, right }
    }

    /// `|Ψᴸ|² + |Ψᴿ|²`
    pub fn norm_sqr(&self) -> f64 {
        self.left.norm_sqr() + self.right.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest component modulus.
    pub fn max_abs(&self) -> f64 {
        self.left.norm().max(self.right.norm())
    }

    pub fn scale(&self, s: C64) -> Spinor {
        Spinor::new(self.left * s, self.right * s)
    }
}

impl Add for Spinor {
    type Output = Spinor;
    fn add(self, rhs: Spinor) -> Spinor {
        Spinor::new(self.left + rhs.left, self.right + rhs.right)
    }
}

impl Sub for Spinor {
    type Output = Spinor;
    fn sub(self, rhs: Spinor) -> Spinor {
        Spinor::new(self.left - rhs.left, self.right - rhs.right)
    }
}

/// Row-major 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);

    pub const fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn apply(&self, v: Spinor) -> Spinor {
        let m = &self.0;
        Spinor::new(
            m[0][0] * v.left + m[0][1] * v.right,
            m[1][0] * v.left + m[1][1] * v.right,
        )
    }

    /// Entrywise max-norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<Spinor> for Mat2 {
    type Output = Spinor;
    fn mul(self, rhs: Spinor) -> Spinor {
        self.apply(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn product_and_determinant() {
        let a = Mat2::new(c(1.0, 0.0), c(2.0, 1.0), c(0.0, -1.0), c(3.0, 0.0));
        let b = Mat2::new(c(0.5, 0.5), c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 2.0));
        let ab = a * b;
        assert!(((ab.det()) - a.det() * b.det()).norm() < 1e-14);
        assert_eq!(Mat2::IDENTITY * a, a);
        assert!((a.trace() - c(4.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn adjoint_is_involution() {
        let a = Mat2::new(c(1.0, 0.3), c(2.0, 1.0), c(0.0, -1.0), c(3.0, 0.7));
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn apply_matches_operator() {
        let a = Mat2::new(c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(0.0, 0.0));
        let v = Spinor::new(c(1.0, 1.0), c(0.0, 2.0));
        let w = a * v;
        assert_eq!(w.left, c(1.0, 1.0) + c(0.0, 1.0) * c(0.0, 2.0));
        assert_eq!(w.right, c(2.0, 2.0));
        assert!((v.norm_sqr() - 6.0).abs() < 1e-15);
    }
}
