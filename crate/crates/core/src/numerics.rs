//! Double-precision complex helpers: polynomial evaluation, Newton's method,
//! closed disks and the truncated Hausdorff distance `d_r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Number of equally spaced samples used to stand in for the circle `∂D_r`.
pub const BOUNDARY_SAMPLES: usize = 256;

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_REL_TOL: f64 = 1e-13;
const DERIVATIVE_FLOOR: f64 = 1e-300;

/// A closed disk in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    #[serde(with = "crate::complex_serde")]
    pub center: Complex,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex, radius: f64) -> Self {
        debug_assert!(radius >= 0.0, "negative disk radius {radius}");
        Disk { center, radius }
    }

    pub fn contains_point(&self, z: Complex) -> bool {
        (z - self.center).norm() <= self.radius
    }

    /// Signed gap between two closed disks: positive when they are disjoint.
    pub fn gap(&self, other: &Disk) -> f64 {
        (self.center - other.center).norm() - self.radius - other.radius
    }

    /// Positive when `inner` lies strictly inside `self`.
    pub fn containment_margin(&self, inner: &Disk) -> f64 {
        self.radius - (self.center - inner.center).norm() - inner.radius
    }
}

/// A finite set of sample points standing in for a compact set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointSet {
    pub points: Vec<Complex>,
}

impl PointSet {
    pub fn new(points: Vec<Complex>) -> Self {
        PointSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Applies `z ↦ scale·(z − center)` to every point.
    pub fn affine(&self, center: Complex, scale: Complex) -> PointSet {
        PointSet::new(self.points.iter().map(|&z| scale * (z - center)).collect())
    }
}

impl From<Vec<Complex>> for PointSet {
    fn from(points: Vec<Complex>) -> Self {
        PointSet::new(points)
    }
}

/// Horner evaluation of `Σ coeffs[j]·z^j`.
pub fn poly_eval(coeffs: &[i32], z: Complex) -> Complex {
    debug_assert!(!coeffs.is_empty());
    coeffs
        .iter()
        .rev()
        .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + f64::from(c))
}

/// Value and first derivative in one Horner pass.
fn poly_eval_with_derivative(coeffs: &[i32], z: Complex) -> (Complex, Complex) {
    let zero = Complex::new(0.0, 0.0);
    coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| {
        (p * z + f64::from(c), dp * z + p)
    })
}

/// Plain Newton iteration from `seed`.
///
/// Succeeds once `|p(z)| ≤ 1e-13·(1 + Σ|coeffs|)`; a few extra steps are taken
/// afterwards while they keep decreasing the residual.
pub fn newton_root(coeffs: &[i32], seed: Complex) -> Result<Complex> {
    if coeffs.iter().skip(1).all(|&c| c == 0) {
        return Err(Error::ConstantPolynomial);
    }
    let scale: f64 = 1.0 + coeffs.iter().map(|c| f64::from(c.abs())).sum::<f64>();
    let tol = NEWTON_REL_TOL * scale;

    let mut z = seed;
    let mut residual = f64::INFINITY;
    for _ in 0..NEWTON_MAX_ITER {
        let (p, dp) = poly_eval_with_derivative(coeffs, z);
        residual = p.norm();
        if residual <= tol {
            return Ok(polish(coeffs, z, residual));
        }
        if dp.norm() < DERIVATIVE_FLOOR {
            return Err(Error::DerivativeVanished { re: z.re, im: z.im });
        }
        z -= p / dp;
    }
    let residual_final = poly_eval(coeffs, z).norm();
    if residual_final <= tol {
        return Ok(z);
    }
    Err(Error::NoConvergence {
        iterations: NEWTON_MAX_ITER,
        residual: residual.min(residual_final),
    })
}

fn polish(coeffs: &[i32], mut z: Complex, mut residual: f64) -> Complex {
    for _ in 0..3 {
        let (p, dp) = poly_eval_with_derivative(coeffs, z);
        if dp.norm() < DERIVATIVE_FLOOR {
            break;
        }
        let next = z - p / dp;
        let next_residual = poly_eval(coeffs, next).norm();
        if next_residual >= residual {
            break;
        }
        z = next;
        residual = next_residual;
    }
    z
}

/// Deterministic sample of the circle of radius `r` about the origin.
pub fn boundary_sample(r: f64) -> Vec<Complex> {
    (0..BOUNDARY_SAMPLES)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / BOUNDARY_SAMPLES as f64;
            Complex::from_polar(r, theta)
        })
        .collect()
}

/// `[E]_r`: the points of `E` in the closed disk `D_r` together with a fixed
/// sample of its boundary circle.
pub fn truncate_set(set: &PointSet, r: f64) -> PointSet {
    assert!(r > 0.0, "truncation radius must be positive");
    let mut points: Vec<Complex> = set.points.iter().copied().filter(|z| z.norm() <= r).collect();
    points.extend(boundary_sample(r));
    PointSet::new(points)
}

/// max over `a ∈ from` of the distance to the nearest point of `to`.
pub fn directed_hausdorff(from: &[Complex], to: &[Complex]) -> f64 {
    from.iter()
        .map(|a| {
            to.iter()
                .map(|b| (a - b).norm_sqr())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
        .sqrt()
}

/// `d_r(E, F)`: Hausdorff distance between `[E]_r` and `[F]_r`.
pub fn hausdorff_dr(e: &PointSet, f: &PointSet, r: f64) -> f64 {
    let e = truncate_set(e, r);
    let f = truncate_set(f, r);
    directed_hausdorff(&e.points, &f.points).max(directed_hausdorff(&f.points, &e.points))
}
