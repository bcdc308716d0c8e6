//! Layer potentials off Γ, the discrete exterior representation formula and
//! the Calderón residual.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{self, Point};
use crate::linalg::{dense_mul_vec, spd_solve};
use crate::mesh::BoundaryMesh;

use super::operators::BoundaryOperators;
use super::panel::PanelIntegrator;
use super::space::{BemSpace, PanelBasis, TraceSpace};

/// `(Ṽφ)(x) = ∫_Γ G(x, y) φ(y) dy` for a discrete density.
pub fn single_layer_potential(space: &impl PanelBasis, phi: &[f64], x: Point, integrator: &PanelIntegrator) -> f64 {
    let bmesh = space.boundary();
    let mut total = 0.0;
    for (s, seg) in bmesh.geometry.iter().enumerate() {
        let (lg, _) = integrator.point_moments(x, seg);
        let len = seg.length();
        for (d, p) in space.local(s) {
            let m: f64 = p.iter().zip(&lg).map(|(c, l)| c * l).sum();
            total += phi[d] * (-len / (2.0 * PI)) * m;
        }
    }
    total
}

/// `(K̃w)(x) = ∫_Γ ∂G/∂n(y)(x, y) w(y) dy` for a discrete density.
pub fn double_layer_potential(space: &impl PanelBasis, w: &[f64], x: Point, integrator: &PanelIntegrator) -> f64 {
    let bmesh = space.boundary();
    let mut total = 0.0;
    for (s, seg) in bmesh.geometry.iter().enumerate() {
        let (_, inv) = integrator.point_moments(x, seg);
        let len = seg.length();
        let offset = geometry::dot(geometry::sub(x, seg.start), bmesh.outward_normals[s]);
        for (d, p) in space.local(s) {
            let m: f64 = p.iter().zip(&inv).map(|(c, r)| c * r).sum();
            total += w[d] * len / (2.0 * PI) * offset * m;
        }
    }
    total
}

/// Winding number of the boundary polygon around `x` (1 inside, 0 outside).
pub fn winding_number(bmesh: &BoundaryMesh, x: Point) -> i32 {
    let mut wn = 0;
    for seg in &bmesh.geometry {
        let (a, b) = (seg.start, seg.end);
        let side = geometry::cross(geometry::sub(b, a), geometry::sub(x, a));
        if a[1] <= x[1] {
            if b[1] > x[1] && side > 0.0 {
                wn += 1;
            }
        } else if b[1] <= x[1] && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// `u^ext(x) = K̃(u − u₀)(x) − Ṽφ(x)` for `x` strictly outside Ω̄.
pub fn eval_exterior_representation(
    trace: &TraceSpace<'_>,
    flux: &BemSpace<'_>,
    u_trace: &[f64],
    u0h: &[f64],
    phi: &[f64],
    x: Point,
    integrator: &PanelIntegrator,
) -> Result<f64> {
    let bmesh = trace.bmesh;
    let on_boundary = bmesh.geometry.iter().any(|s| s.distance_to_point(x) == 0.0);
    if on_boundary || winding_number(bmesh, x) != 0 {
        return Err(Error::NotExterior { x: x[0], y: x[1] });
    }
    let jump: Vec<f64> = u_trace.iter().zip(u0h).map(|(u, u0)| u - u0).collect();
    Ok(double_layer_potential(trace, &jump, x, integrator) - single_layer_potential(flux, phi, x, integrator))
}

/// Discrete L²(Γ) norm of `Vφ + (1/2 − K)u` tested against the flux space,
/// i.e. `sqrt(rᵀ M⁻¹ r)` with `r = Vφ + B u` and `M` the flux mass matrix.
///
/// Vanishes (up to discretization) exactly when `(u, φ)` are the exterior
/// trace and normal derivative of a harmonic function decaying at infinity.
pub fn calderon_residual(ops: &BoundaryOperators, u_trace: &[f64], phi: &[f64]) -> f64 {
    let vphi = dense_mul_vec(&ops.single_layer, phi);
    let bu = dense_mul_vec(&ops.coupling, u_trace);
    let r: Vec<f64> = vphi.iter().zip(&bu).map(|(a, b)| a + b).collect();
    let z = spd_solve(&ops.flux_mass, &r).expect("boundary mass matrix is SPD");
    crate::linalg::dot(&r, &z).max(0.0).sqrt()
}
