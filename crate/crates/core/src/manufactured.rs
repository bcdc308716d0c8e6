//! Exact solutions of the L-shape experiments and the transmission data they
//! induce.
//!
//! Interior: `u = s·Re(z^α)` with `z^α` taken on the branch `arg z ∈ (−π/2, 3π/2)`,
//! which is smooth on Ω̄ \ {0}. Exterior: `u^ext = Re(1/(z − v))` with the pole
//! `v` inside Ω, so `u^ext` is harmonic in the exterior and decays like `1/|x|`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{self, Point};

/// A transmission problem with known solution.
///
/// Implementors give the interior solution `u`, the exterior solution
/// `u^ext`, and the volume load `f = −Δu`. The jump data and the exterior
/// flux are derived from them.
pub trait TransmissionData {
    fn interior(&self, x: Point) -> f64;
    fn interior_gradient(&self, x: Point) -> Point;
    fn exterior(&self, x: Point) -> f64;
    fn exterior_gradient(&self, x: Point) -> Point;

    fn load(&self, _x: Point) -> f64 {
        0.0
    }

    /// `u₀ = u − u^ext`.
    fn trace_jump(&self, x: Point) -> f64 {
        self.interior(x) - self.exterior(x)
    }

    /// `φ₀ = (∇u − ∇u^ext)·n`.
    fn flux_jump(&self, x: Point, normal: Point) -> f64 {
        geometry::dot(geometry::sub(self.interior_gradient(x), self.exterior_gradient(x)), normal)
    }

    /// `φ = ∇u^ext·n`, the quantity approximated by the flux unknown.
    fn exterior_flux(&self, x: Point, normal: Point) -> f64 {
        geometry::dot(self.exterior_gradient(x), normal)
    }
}

fn c(x: Point) -> Complex64 {
    Complex64::new(x[0], x[1])
}

/// Gradient of `Re g` from the complex derivative `g′`.
fn grad_re(dg: Complex64) -> Point {
    [dg.re, -dg.im]
}

/// Hessian of `Re g` from `g″`.
fn hess_re(d2g: Complex64) -> [[f64; 2]; 2] {
    [[d2g.re, -d2g.im], [-d2g.im, -d2g.re]]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManufacturedCase {
    pub alpha: f64,
    pub scale: f64,
    pub pole: Point,
}

impl ManufacturedCase {
    /// The L-shape case with amplitude 1000 and pole (0.1, 0.1).
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!("alpha must be positive, got {alpha}")));
        }
        Ok(ManufacturedCase { alpha, scale: 1000.0, pole: [0.1, 0.1] })
    }

    /// The canonical exponent for degree `k`: α = k + 1/2.
    pub fn for_degree(k: usize) -> Result<Self> {
        Self::new(k as f64 + 0.5)
    }

    /// `z^p` on the branch with cut along the negative imaginary axis.
    fn power(&self, z: Complex64, p: f64) -> Complex64 {
        let mut arg = z.arg();
        if arg < -std::f64::consts::FRAC_PI_2 {
            arg += 2.0 * std::f64::consts::PI;
        }
        Complex64::from_polar(z.norm().powf(p), p * arg)
    }

    pub fn interior_value(&self, x: Point) -> f64 {
        let z = c(x);
        if z.norm() == 0.0 {
            return 0.0;
        }
        self.scale * self.power(z, self.alpha).re
    }

    /// Value and gradient of `u`.
    pub fn interior_exact(&self, x: Point) -> Result<(f64, Point)> {
        let z = c(x);
        if z.norm() == 0.0 {
            return Err(Error::BranchPoint);
        }
        let dg = self.scale * self.alpha * self.power(z, self.alpha - 1.0);
        Ok((self.interior_value(x), grad_re(dg)))
    }

    pub fn interior_hessian(&self, x: Point) -> Result<[[f64; 2]; 2]> {
        let z = c(x);
        if z.norm() == 0.0 {
            return Err(Error::BranchPoint);
        }
        let a = self.alpha;
        Ok(hess_re(self.scale * a * (a - 1.0) * self.power(z, a - 2.0)))
    }

    /// Value and gradient of `u^ext`.
    pub fn exterior_exact(&self, x: Point) -> Result<(f64, Point)> {
        let w = c(x) - c(self.pole);
        if w.norm() == 0.0 {
            return Err(Error::AtPole);
        }
        let inv = w.inv();
        Ok((inv.re, grad_re(-inv * inv)))
    }

    pub fn exterior_hessian(&self, x: Point) -> Result<[[f64; 2]; 2]> {
        let w = c(x) - c(self.pole);
        if w.norm() == 0.0 {
            return Err(Error::AtPole);
        }
        let inv = w.inv();
        Ok(hess_re(2.0 * inv * inv * inv))
    }

    /// `φ = ∇u^ext·n` at a boundary point with the normal of its segment.
    pub fn exact_flux(&self, x: Point, normal: Point) -> Result<f64> {
        Ok(geometry::dot(self.exterior_exact(x)?.1, normal))
    }

    /// Jump data `(u₀, φ₀, f)` at a boundary point with the normal of its segment.
    pub fn jump_data(&self, x: Point, normal: Point) -> Result<(f64, f64, f64)> {
        let (u, gu) = self.interior_exact(x)?;
        let (ue, gue) = self.exterior_exact(x)?;
        Ok((u - ue, geometry::dot(geometry::sub(gu, gue), normal), 0.0))
    }
}

impl TransmissionData for ManufacturedCase {
    fn interior(&self, x: Point) -> f64 {
        self.interior_value(x)
    }

    /// At the origin this returns the limit 0 for α > 1 and NaN otherwise.
    fn interior_gradient(&self, x: Point) -> Point {
        match self.interior_exact(x) {
            Ok((_, g)) => g,
            Err(_) if self.alpha > 1.0 => [0.0, 0.0],
            Err(_) => [f64::NAN, f64::NAN],
        }
    }

    fn exterior(&self, x: Point) -> f64 {
        self.exterior_exact(x).map_or(f64::NAN, |v| v.0)
    }

    fn exterior_gradient(&self, x: Point) -> Point {
        self.exterior_exact(x).map_or([f64::NAN, f64::NAN], |v| v.1)
    }
}

/// A harmonic polynomial of degree ≤ 2 inside with a vanishing exterior
/// solution. Lies in every finite element space of degree ≥ its own degree,
/// so the coupled discretization reproduces it up to round-off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicPolynomial {
    /// `u = c0 + c1 x + c2 y + c3 (x² − y²) + c4 xy`.
    pub coeffs: [f64; 5],
}

impl HarmonicPolynomial {
    pub fn degree(&self) -> usize {
        if self.coeffs[3] != 0.0 || self.coeffs[4] != 0.0 {
            2
        } else if self.coeffs[1] != 0.0 || self.coeffs[2] != 0.0 {
            1
        } else {
            0
        }
    }
}

impl TransmissionData for HarmonicPolynomial {
    fn interior(&self, x: Point) -> f64 {
        let c = &self.coeffs;
        c[0] + c[1] * x[0] + c[2] * x[1] + c[3] * (x[0] * x[0] - x[1] * x[1]) + c[4] * x[0] * x[1]
    }

    fn interior_gradient(&self, x: Point) -> Point {
        let c = &self.coeffs;
        [c[1] + 2.0 * c[3] * x[0] + c[4] * x[1], c[2] - 2.0 * c[3] * x[1] + c[4] * x[0]]
    }

    fn exterior(&self, _x: Point) -> f64 {
        0.0
    }

    fn exterior_gradient(&self, _x: Point) -> Point {
        [0.0, 0.0]
    }
}
