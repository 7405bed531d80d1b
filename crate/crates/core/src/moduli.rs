//! Moduli of manifolds of type `S¹ × S³`.
//!
//! A point is a translation length `λ > 0` and the conjugacy class of the
//! holonomy in `SO(4)`, represented by a rotation-angle pair on the maximal
//! torus modulo the Weyl group of even signed permutations.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, Matrix3, Matrix4};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orthogonality and determinant tolerance for isometries.
pub const ISOMETRY_TOL: f64 = 1e-12;
/// Tolerance for ties in the lexicographic order and for equality of points.
pub const ANGLE_TIE_TOL: f64 = 1e-12;
pub const MODULI_TOL: f64 = 1e-10;
/// Rank of `Iso(S³) = SO(4)`.
pub const S3_ISOMETRY_RANK: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct IsometryClass {
    matrix: Matrix4<f64>,
}

impl IsometryClass {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.shape() != (4, 4) {
            return Err(Error::invalid(format!(
                "isometry must be 4×4, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Self::from_matrix4(Matrix4::from_iterator(matrix.iter().copied()))
    }

    pub fn from_matrix4(matrix: Matrix4<f64>) -> Result<Self> {
        let defect = (matrix.transpose() * matrix - Matrix4::identity()).amax();
        if defect.is_nan() || defect > ISOMETRY_TOL {
            return Err(Error::invalid(format!("matrix is not orthogonal (defect {defect:e})")));
        }
        let det = matrix.determinant();
        if (det - 1.0).abs() > ISOMETRY_TOL {
            return Err(Error::invalid(format!("determinant is {det}, expected +1")));
        }
        Ok(IsometryClass { matrix })
    }

    /// From 16 reals in row-major order.
    pub fn from_row_major(values: &[f64]) -> Result<Self> {
        if values.len() != 16 {
            return Err(Error::invalid(format!("expected 16 entries, got {}", values.len())));
        }
        Self::from_matrix4(Matrix4::from_row_slice(values))
    }

    /// Rotation by `x` in the `(e0, e1)` plane and by `y` in the `(e2, e3)` plane.
    pub fn torus(x: f64, y: f64) -> Self {
        let (sx, cx) = x.sin_cos();
        let (sy, cy) = y.sin_cos();
        #[rustfmt::skip]
        let m = Matrix4::new(
            cx, -sx, 0.0, 0.0,
            sx,  cx, 0.0, 0.0,
            0.0, 0.0, cy, -sy,
            0.0, 0.0, sy,  cy,
        );
        IsometryClass { matrix: m }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }

    pub fn conjugate_by(&self, q: &IsometryClass) -> IsometryClass {
        IsometryClass {
            matrix: q.matrix * self.matrix * q.matrix.transpose(),
        }
    }
}

/// A random element of `SO(4)` from the QR decomposition of a Gaussian matrix.
pub fn random_so4<R: Rng + ?Sized>(rng: &mut R) -> IsometryClass {
    let g = Matrix4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..4 {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    IsometryClass { matrix: q }
}

/// Orthonormal bases of self-dual and anti-self-dual 2-forms, as
/// antisymmetric matrices scaled to unit norm under `⟨A, B⟩ = ½ tr(AᵀB)`.
fn two_form_bases() -> [[Matrix4<f64>; 3]; 2] {
    let e = |i: usize, j: usize| {
        let mut m = Matrix4::zeros();
        m[(i, j)] = 1.0;
        m[(j, i)] = -1.0;
        m
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        [
            (e(0, 1) + e(2, 3)) * s,
            (e(0, 2) - e(1, 3)) * s,
            (e(0, 3) + e(1, 2)) * s,
        ],
        [
            (e(0, 1) - e(2, 3)) * s,
            (e(0, 2) + e(1, 3)) * s,
            (e(0, 3) - e(1, 2)) * s,
        ],
    ]
}

/// Rotation angle in `[0, π]` of `R` acting on one of the `Λ²±` factors.
fn two_form_rotation_angle(r: &Matrix4<f64>, basis: &[Matrix4<f64>; 3]) -> f64 {
    let q = Matrix3::from_fn(|a, b| {
        let image = r * basis[b] * r.transpose();
        0.5 * (basis[a].transpose() * image).trace()
    });
    let sin = (q - q.transpose()).norm() / (2.0 * std::f64::consts::SQRT_2);
    let cos = 0.5 * (q.trace() - 1.0);
    sin.atan2(cos)
}

/// Torus angles of `R`, defined up to the Weyl group.
///
/// Writing `R(v) = p v q̄` with unit quaternions, `R` rotates `Λ²₊` by twice
/// the angle `a` of `p` and `Λ²₋` by twice the angle `b` of `q`, and
/// `tr R = 4 cos a cos b`. The torus angles are `(a + b, a − b)`.
pub fn torus_angles(r: &IsometryClass) -> (f64, f64) {
    let [plus, minus] = two_form_bases();
    let m = r.matrix();
    let a = 0.5 * two_form_rotation_angle(m, &plus);
    let mut b = 0.5 * two_form_rotation_angle(m, &minus);
    if m.trace() < 0.0 {
        b = PI - b;
    }
    (a + b, a - b)
}

fn reduce(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if TAU - r <= ANGLE_TIE_TOL {
        0.0
    } else {
        r
    }
}

fn lex_less(p: (f64, f64), q: (f64, f64)) -> bool {
    if (p.0 - q.0).abs() > ANGLE_TIE_TOL {
        return p.0 < q.0;
    }
    p.1 < q.1 - ANGLE_TIE_TOL
}

/// The Weyl orbit `{(x,y), (y,x), (−x,−y), (−y,−x)}` reduced into `[0, 2π)²`.
pub fn weyl_orbit(x: f64, y: f64) -> [(f64, f64); 4] {
    [(x, y), (y, x), (-x, -y), (-y, -x)].map(|(a, b)| (reduce(a), reduce(b)))
}

/// The lexicographically smallest element of the Weyl orbit.
pub fn weyl_canonicalize(x: f64, y: f64) -> (f64, f64) {
    let orbit = weyl_orbit(x, y);
    let mut best = orbit[0];
    for &p in &orbit[1..] {
        if lex_less(p, best) {
            best = p;
        }
    }
    best
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuliPoint {
    lambda: f64,
    angles: (f64, f64),
}

impl ModuliPoint {
    pub fn new(lambda: f64, x: f64, y: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::invalid(format!(
                "translation length must be positive, got {lambda}"
            )));
        }
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::invalid("angles must be finite"));
        }
        Ok(ModuliPoint {
            lambda,
            angles: weyl_canonicalize(x, y),
        })
    }

    pub fn from_isometry(lambda: f64, psi: &IsometryClass) -> Result<Self> {
        let (x, y) = torus_angles(psi);
        ModuliPoint::new(lambda, x, y)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn angles(&self) -> (f64, f64) {
        self.angles
    }
}

pub fn moduli_equal(p: &ModuliPoint, q: &ModuliPoint) -> bool {
    (p.lambda - q.lambda).abs() <= MODULI_TOL
        && angle_distance(p.angles.0, q.angles.0) <= MODULI_TOL
        && angle_distance(p.angles.1, q.angles.1) <= MODULI_TOL
}

/// `1 + rk Iso(Σ)`.
pub fn moduli_dim(rank: usize) -> usize {
    1 + rank
}

/// `2 + rk Iso(Σ)`.
pub fn nsns_moduli_dim(rank: usize) -> usize {
    2 + rank
}
