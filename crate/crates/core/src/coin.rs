//! U(2) coins and the 2x2 complex matrices that carry them.

use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Four-angle parametrization of an element of U(2):
///
/// ```text
/// U(α, ξ, ζ, θ) = e^{iα} [[ e^{iξ} cos θ,  e^{iζ} sin θ],
///                         [-e^{-iζ} sin θ, e^{-iξ} cos θ]]
/// ```
///
/// Angles are kept exactly as given; no reduction modulo 2π is performed.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CoinAngles {
    pub alpha: f64,
    pub xi: f64,
    pub zeta: f64,
    pub theta: f64,
}

impl CoinAngles {
    pub const IDENTITY: CoinAngles = CoinAngles::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(alpha: f64, xi: f64, zeta: f64, theta: f64) -> Self {
        Self {
            alpha,
            xi,
            zeta,
            theta,
        }
    }

    /// `U(0, π/2, 0, θ)`: the rotation family used around shifts.
    pub const fn rotation(theta: f64) -> Self {
        Self::new(0.0, std::f64::consts::FRAC_PI_2, 0.0, theta)
    }

    /// `U(0, -π/2, 0, -θ)`, the inverse of [`CoinAngles::rotation`].
    pub const fn rotation_inverse(theta: f64) -> Self {
        Self::new(0.0, -std::f64::consts::FRAC_PI_2, 0.0, -theta)
    }

    /// `U(0, 0, -π/2, θ) = [[cos θ, -i sin θ], [-i sin θ, cos θ]]`, the shape of every mass coin.
    pub const fn mixing(theta: f64) -> Self {
        Self::new(0.0, 0.0, -std::f64::consts::FRAC_PI_2, theta)
    }

    /// Gauge coin with θ = 0; ζ is carried but has no effect.
    pub const fn phase(alpha: f64, xi: f64, zeta: f64) -> Self {
        Self::new(alpha, xi, zeta, 0.0)
    }

    pub fn matrix(&self) -> Mat2 {
        u2_from_angles(*self)
    }
}

/// Builds the 2x2 matrix of [`CoinAngles`].
pub fn u2_from_angles(angles: CoinAngles) -> Mat2 {
    let CoinAngles {
        alpha,
        xi,
        zeta,
        theta,
    } = angles;
    let (s, c) = theta.sin_cos();
    let g = C64::from_polar(1.0, alpha);
    let exi = C64::from_polar(1.0, xi);
    let ezeta = C64::from_polar(1.0, zeta);
    Mat2([
        g * exi * c,
        g * ezeta * s,
        -g * ezeta.conj() * s,
        g * exi.conj() * c,
    ])
}

/// Row-major complex 2x2 matrix `[m00, m01, m10, m11]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [C64; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([ONE, ZERO, ZERO, ONE]);

    pub fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Mat2([m00, m01, m10, m11])
    }

    pub fn diag(d0: C64, d1: C64) -> Self {
        Mat2([d0, ZERO, ZERO, d1])
    }

    pub fn from_real(rows: [[f64; 2]; 2]) -> Self {
        Mat2([
            C64::new(rows[0][0], 0.0),
            C64::new(rows[0][1], 0.0),
            C64::new(rows[1][0], 0.0),
            C64::new(rows[1][1], 0.0),
        ])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[2 * row + col]
    }

    pub fn adjoint(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn trace(&self) -> C64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> C64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        Mat2(self.0.map(|z| z * s))
    }

    #[inline]
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let [a, b, c, d] = self.0;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `U†U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Mat2::IDENTITY)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::IDENTITY
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    #[inline]
    fn mul(self, rhs: Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl Default for Mat2 {
    fn default() -> Self {
        Mat2::IDENTITY
    }
}
