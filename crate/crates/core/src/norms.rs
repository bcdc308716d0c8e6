//! Error norms of discrete solutions and observed orders of convergence.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::bem::{l2_project, BemSpace, PanelBasis};
use crate::error::{Error, Result};
use crate::fem::FeSpace;
use crate::geometry::{self, Point};
use crate::linalg::{dense_mul_vec, dot};
use crate::mesh::{BoundaryMesh, ElementSet, TriMesh};
use crate::quadrature::{GaussRule, TriangleRule};

fn sum_over_triangles(
    mesh: &TriMesh,
    elements: impl Iterator<Item = usize>,
    quad_degree: usize,
    mut integrand: impl FnMut(usize, &[f64; 3], Point) -> f64,
) -> f64 {
    let rule = TriangleRule::new(quad_degree);
    let mut total = 0.0;
    for t in elements {
        let jac = 2.0 * mesh.signed_area(t);
        let p = mesh.triangle_points(t);
        let mut local = 0.0;
        for (l, w) in rule.points.iter().zip(&rule.weights) {
            let x =
                [l[0] * p[0][0] + l[1] * p[1][0] + l[2] * p[2][0], l[0] * p[0][1] + l[1] * p[1][1] + l[2] * p[2][1]];
            local += w * integrand(t, l, x);
        }
        total += jac * local;
    }
    total
}

/// `‖∇(u − u_h)‖_{L²(Ω)}`.
pub fn error_h1_semi(space: &FeSpace<'_>, uh: &[f64], exact_grad: impl Fn(Point) -> Point, quad_degree: usize) -> f64 {
    sum_over_triangles(space.mesh, 0..space.mesh.n_triangles(), quad_degree, |t, l, x| {
        let e = geometry::sub(exact_grad(x), space.evaluate_gradient(uh, t, l));
        geometry::dot(e, e)
    })
    .sqrt()
}

/// `‖u − u_h‖_{L²(Ω)}`.
pub fn error_l2(space: &FeSpace<'_>, uh: &[f64], exact: impl Fn(Point) -> f64, quad_degree: usize) -> f64 {
    error_l2_strip(space, uh, exact, &ElementSet::all(space.mesh), quad_degree)
}

/// `‖u − u_h‖_{L²(S)}` over the triangles of `strip`.
pub fn error_l2_strip(
    space: &FeSpace<'_>,
    uh: &[f64],
    exact: impl Fn(Point) -> f64,
    strip: &ElementSet,
    quad_degree: usize,
) -> f64 {
    sum_over_triangles(space.mesh, strip.elements.iter().copied(), quad_degree, |t, l, x| {
        let e = exact(x) - space.evaluate(uh, t, l);
        e * e
    })
    .sqrt()
}

/// `h^{1/2} ‖φ − φ_h‖_{L²(Γ)}` with the global mesh size `h`.
pub fn error_flux_weighted(
    space: &impl PanelBasis,
    phi_h: &[f64],
    exact_flux: impl Fn(Point, usize) -> f64,
    h: f64,
    points: usize,
) -> f64 {
    h.sqrt() * crate::bem::boundary_l2_error(space, phi_h, exact_flux, points)
}

/// `|u|_{H²(S)}` from the Hessian, `(∫ Σ_ij |∂_i∂_j u|²)^{1/2}`.
pub fn h2_seminorm(mesh: &TriMesh, hessian: impl Fn(Point) -> [[f64; 2]; 2], quad_degree: usize) -> f64 {
    sum_over_triangles(mesh, 0..mesh.n_triangles(), quad_degree, |_, _, x| {
        let h = hessian(x);
        h[0][0] * h[0][0] + h[0][1] * h[0][1] + h[1][0] * h[1][0] + h[1][1] * h[1][1]
    })
    .sqrt()
}

/// `(Σ_segments ∫ |g′|²)^{1/2}` where `derivative(x, s)` is the arclength
/// derivative of `g` on segment `s`.
pub fn boundary_h1_seminorm(bmesh: &BoundaryMesh, derivative: impl Fn(Point, usize) -> f64, points: usize) -> f64 {
    let rule = GaussRule::new(points);
    let mut total = 0.0;
    for (s, seg) in bmesh.geometry.iter().enumerate() {
        total += seg.length() * rule.iter().map(|(t, w)| w * derivative(seg.point_at(t), s).powi(2)).sum::<f64>();
    }
    total.sqrt()
}

/// `‖φ − φ_h‖_V` approximated on a nested finer boundary mesh.
///
/// `fine` must be a uniform refinement of `coarse.bmesh` with the same
/// polynomial degree and `fine_single_layer` its single layer matrix. The
/// exact flux is replaced by its L² projection on the fine mesh; `φ_h` is
/// represented exactly there.
pub fn flux_energy_error(
    coarse: &BemSpace<'_>,
    phi_h: &[f64],
    fine: &BemSpace<'_>,
    fine_single_layer: &Mat<f64>,
    exact_flux: impl Fn(Point, usize) -> f64,
    points: usize,
) -> Result<f64> {
    let (nc, nf) = (coarse.bmesh.n_segments(), fine.bmesh.n_segments());
    if nf % nc != 0 || !(nf / nc).is_power_of_two() || coarse.degree != fine.degree {
        return Err(Error::DimensionMismatch("fine flux space is not a refinement of the coarse one".into()));
    }
    let shift = (nf / nc).trailing_zeros();
    for s in 0..nf {
        let parent = &coarse.bmesh.geometry[s >> shift];
        if parent.distance_to_point(fine.bmesh.geometry[s].midpoint()) > 1e-12 {
            return Err(Error::DimensionMismatch(format!("fine segment {s} is not nested in its parent")));
        }
    }
    let prolonged = l2_project(
        fine,
        |x, s| {
            let p = &coarse.bmesh.geometry[s >> shift];
            let d = p.direction();
            let sigma = geometry::dot(geometry::sub(x, p.start), d) / geometry::dot(d, d);
            coarse.evaluate(phi_h, s >> shift, sigma)
        },
        points,
    );
    let reference = l2_project(fine, exact_flux, points);
    let e: Vec<f64> = reference.iter().zip(&prolonged).map(|(a, b)| a - b).collect();
    Ok(dot(&e, &dense_mul_vec(fine_single_layer, &e)).max(0.0).sqrt())
}

/// Errors of one refinement level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub level: usize,
    pub h: f64,
    pub ndof_fem: usize,
    pub ndof_bem: usize,
    pub err_h1: f64,
    pub err_l2: f64,
    pub err_strip: f64,
    pub err_flux: f64,
}

impl ErrorReport {
    pub fn errors(&self) -> [f64; 4] {
        [self.err_h1, self.err_l2, self.err_strip, self.err_flux]
    }
}

/// Observed orders between two levels; `None` where an error is not positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EocRow {
    pub from_level: usize,
    pub to_level: usize,
    pub eoc_h1: Option<f64>,
    pub eoc_l2: Option<f64>,
    pub eoc_strip: Option<f64>,
    pub eoc_flux: Option<f64>,
}

impl EocRow {
    pub fn orders(&self) -> [Option<f64>; 4] {
        [self.eoc_h1, self.eoc_l2, self.eoc_strip, self.eoc_flux]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EocTable {
    pub rows: Vec<EocRow>,
}

impl EocTable {
    pub fn last(&self) -> Option<&EocRow> {
        self.rows.last()
    }
}

/// `log(e₀/e₁) / log(h₀/h₁)`.
pub fn eoc_pair(e0: f64, e1: f64, h0: f64, h1: f64) -> Option<f64> {
    let valid = |v: f64| v > 0.0 && v.is_finite();
    if valid(e0) && valid(e1) && valid(h0) && valid(h1) && h0 != h1 {
        Some((e0 / e1).ln() / (h0 / h1).ln())
    } else {
        None
    }
}

/// Orders between consecutive reports.
pub fn eoc(reports: &[ErrorReport]) -> EocTable {
    let rows = reports
        .windows(2)
        .map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let o = |x: f64, y: f64| eoc_pair(x, y, a.h, b.h);
            EocRow {
                from_level: a.level,
                to_level: b.level,
                eoc_h1: o(a.err_h1, b.err_h1),
                eoc_l2: o(a.err_l2, b.err_l2),
                eoc_strip: o(a.err_strip, b.err_strip),
                eoc_flux: o(a.err_flux, b.err_flux),
            }
        })
        .collect();
    EocTable { rows }
}
