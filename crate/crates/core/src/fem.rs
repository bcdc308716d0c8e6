//! Continuous Lagrange finite elements of degree 1 and 2 on a [`TriMesh`].
//!
//! Degrees of freedom are numbered vertices first (mesh vertex order), then
//! edge midpoints (mesh edge order) for `k = 2`. On each triangle the local
//! dofs are the three vertices followed, for `k = 2`, by the three local
//! edges `(v0,v1), (v1,v2), (v2,v0)`.

use crate::error::{Error, Result};
use crate::geometry::{self, Point};
use crate::linalg::{CsrMatrix, TripletBuilder};
use crate::mesh::{extract_boundary, BoundaryMesh, TriMesh};
use crate::quadrature::TriangleRule;

/// Degree-k continuous Lagrange space `S^{k,1}(T_Ω)`.
#[derive(Clone, Debug)]
pub struct FeSpace<'m> {
    pub mesh: &'m TriMesh,
    pub degree: usize,
    pub dof_coords: Vec<Point>,
    /// Local-to-global dof map, 3 or 6 entries per triangle.
    pub element_dofs: Vec<Vec<usize>>,
    /// Dofs on Γ in trace order (see [`TraceOperator`]).
    pub boundary_dofs: Vec<usize>,
}

pub fn build_fe_space(mesh: &TriMesh, degree: usize) -> Result<FeSpace<'_>> {
    if !(1..=2).contains(&degree) {
        return Err(Error::UnsupportedDegree(degree));
    }
    let nv = mesh.n_vertices();
    let mut dof_coords = mesh.vertices.clone();
    if degree == 2 {
        dof_coords.extend(mesh.edges().iter().map(|e| geometry::midpoint(mesh.vertices[e[0]], mesh.vertices[e[1]])));
    }
    let element_dofs = mesh
        .triangles
        .iter()
        .zip(mesh.triangle_edges())
        .map(|(t, te)| {
            let mut d = t.to_vec();
            if degree == 2 {
                d.extend(te.iter().map(|&e| nv + e));
            }
            d
        })
        .collect();
    let mut space = FeSpace { mesh, degree, dof_coords, element_dofs, boundary_dofs: Vec::new() };
    let bmesh = extract_boundary(mesh)?;
    space.boundary_dofs = trace_restriction(&space, &bmesh)?.volume_dofs;
    Ok(space)
}

impl FeSpace<'_> {
    pub fn n_dofs(&self) -> usize {
        self.dof_coords.len()
    }

    pub fn local_dofs(&self) -> usize {
        if self.degree == 1 {
            3
        } else {
            6
        }
    }

    /// Maps barycentric coordinates of triangle `t` to a point.
    pub fn map_point(&self, t: usize, lambda: &[f64; 3]) -> Point {
        let p = self.mesh.triangle_points(t);
        [
            lambda[0] * p[0][0] + lambda[1] * p[1][0] + lambda[2] * p[2][0],
            lambda[0] * p[0][1] + lambda[1] * p[1][1] + lambda[2] * p[2][1],
        ]
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        self.dof_coords.iter().map(|&p| f(p)).collect()
    }

    /// Value of the discrete function `coeffs` at barycentric point `lambda` of triangle `t`.
    pub fn evaluate(&self, coeffs: &[f64], t: usize, lambda: &[f64; 3]) -> f64 {
        let phi = shape_values(self.degree, lambda);
        self.element_dofs[t].iter().zip(phi.iter()).map(|(&d, v)| coeffs[d] * v).sum()
    }

    /// Gradient of the discrete function `coeffs` at barycentric point `lambda` of triangle `t`.
    pub fn evaluate_gradient(&self, coeffs: &[f64], t: usize, lambda: &[f64; 3]) -> Point {
        let gl = barycentric_gradients(&self.mesh.triangle_points(t));
        let grads = shape_gradients(self.degree, lambda, &gl);
        let mut g = [0.0; 2];
        for (&d, dg) in self.element_dofs[t].iter().zip(grads.iter()) {
            g[0] += coeffs[d] * dg[0];
            g[1] += coeffs[d] * dg[1];
        }
        g
    }
}

/// Gradients of the barycentric coordinates of a triangle (constant per triangle).
pub fn barycentric_gradients(p: &[Point; 3]) -> [Point; 3] {
    let two_area = geometry::cross(geometry::sub(p[1], p[0]), geometry::sub(p[2], p[0]));
    [
        [(p[1][1] - p[2][1]) / two_area, (p[2][0] - p[1][0]) / two_area],
        [(p[2][1] - p[0][1]) / two_area, (p[0][0] - p[2][0]) / two_area],
        [(p[0][1] - p[1][1]) / two_area, (p[1][0] - p[0][0]) / two_area],
    ]
}

/// Local Lagrange shape function values; only the first 3 (k=1) or 6 (k=2) are meaningful.
pub fn shape_values(degree: usize, l: &[f64; 3]) -> [f64; 6] {
    match degree {
        1 => [l[0], l[1], l[2], 0.0, 0.0, 0.0],
        _ => [
            l[0] * (2.0 * l[0] - 1.0),
            l[1] * (2.0 * l[1] - 1.0),
            l[2] * (2.0 * l[2] - 1.0),
            4.0 * l[0] * l[1],
            4.0 * l[1] * l[2],
            4.0 * l[2] * l[0],
        ],
    }
}

pub fn shape_gradients(degree: usize, l: &[f64; 3], gl: &[Point; 3]) -> [Point; 6] {
    let lin = |a: f64, ga: Point, b: f64, gb: Point| [a * ga[0] + b * gb[0], a * ga[1] + b * gb[1]];
    match degree {
        1 => [gl[0], gl[1], gl[2], [0.0; 2], [0.0; 2], [0.0; 2]],
        _ => [
            geometry::scale(gl[0], 4.0 * l[0] - 1.0),
            geometry::scale(gl[1], 4.0 * l[1] - 1.0),
            geometry::scale(gl[2], 4.0 * l[2] - 1.0),
            lin(4.0 * l[1], gl[0], 4.0 * l[0], gl[1]),
            lin(4.0 * l[2], gl[1], 4.0 * l[1], gl[2]),
            lin(4.0 * l[0], gl[2], 4.0 * l[2], gl[0]),
        ],
    }
}

type MatrixField = dyn Fn(Point) -> [[f64; 2]; 2] + Send + Sync;

/// Symmetric, uniformly positive definite diffusion coefficient `𝔄(x)`.
pub struct Coefficient {
    field: Box<MatrixField>,
    pub ellipticity: f64,
}

impl std::fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Coefficient").field("ellipticity", &self.ellipticity).finish_non_exhaustive()
    }
}

impl Coefficient {
    pub fn new(ellipticity: f64, field: impl Fn(Point) -> [[f64; 2]; 2] + Send + Sync + 'static) -> Self {
        Coefficient { field: Box::new(field), ellipticity }
    }

    pub fn identity() -> Self {
        Coefficient::new(1.0, |_| [[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn eval(&self, x: Point) -> [[f64; 2]; 2] {
        (self.field)(x)
    }

    /// Evaluates at `x`, failing unless the matrix is symmetric with smallest
    /// eigenvalue at least the declared ellipticity bound.
    pub fn eval_checked(&self, x: Point) -> Result<[[f64; 2]; 2]> {
        let a = self.eval(x);
        let scale = a[0][0].abs().max(a[1][1].abs()).max(1.0);
        let sym = (a[0][1] - a[1][0]).abs() <= 1e-12 * scale;
        let tr = a[0][0] + a[1][1];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let lmin = 0.5 * tr - (0.25 * tr * tr - det).max(0.0).sqrt();
        if sym && lmin >= self.ellipticity * (1.0 - 1e-12) && self.ellipticity > 0.0 {
            Ok(a)
        } else {
            Err(Error::NotElliptic { x: x[0], y: x[1] })
        }
    }
}

/// Galerkin matrix of `a(u, v) = ⟨𝔄∇u, ∇v⟩_Ω`.
pub fn assemble_stiffness(space: &FeSpace<'_>, coeff: &Coefficient) -> Result<CsrMatrix> {
    let rule = TriangleRule::new(2 * space.degree);
    let nl = space.local_dofs();
    let mut builder = TripletBuilder::new(space.n_dofs(), space.n_dofs());
    let mut local = vec![0.0; nl * nl];
    for t in 0..space.mesh.n_triangles() {
        let pts = space.mesh.triangle_points(t);
        let gl = barycentric_gradients(&pts);
        let area = space.mesh.signed_area(t);
        local.iter_mut().for_each(|v| *v = 0.0);
        for (lam, w) in rule.points.iter().zip(&rule.weights) {
            let a = coeff.eval_checked(space.map_point(t, lam))?;
            let g = shape_gradients(space.degree, lam, &gl);
            let wt = 2.0 * area * w;
            for i in 0..nl {
                let ag = [a[0][0] * g[i][0] + a[0][1] * g[i][1], a[1][0] * g[i][0] + a[1][1] * g[i][1]];
                for j in 0..nl {
                    local[i * nl + j] += wt * geometry::dot(ag, g[j]);
                }
            }
        }
        let dofs = &space.element_dofs[t];
        for i in 0..nl {
            for j in 0..nl {
                builder.add(dofs[i], dofs[j], local[i * nl + j]);
            }
        }
    }
    Ok(builder.build())
}

/// Load vector `⟨f, v_i⟩_Ω` by triangle-wise quadrature of the given exactness degree.
pub fn assemble_domain_load(space: &FeSpace<'_>, f: impl Fn(Point) -> f64, quad_degree: usize) -> Vec<f64> {
    let rule = TriangleRule::new(quad_degree);
    let nl = space.local_dofs();
    let mut b = vec![0.0; space.n_dofs()];
    for t in 0..space.mesh.n_triangles() {
        let area = space.mesh.signed_area(t);
        for (lam, w) in rule.points.iter().zip(&rule.weights) {
            let fx = f(space.map_point(t, lam)) * 2.0 * area * w;
            if fx == 0.0 {
                continue;
            }
            let phi = shape_values(space.degree, lam);
            for i in 0..nl {
                b[space.element_dofs[t][i]] += fx * phi[i];
            }
        }
    }
    b
}

/// Selection of the volume dofs lying on Γ.
///
/// Trace dof `i < n` (n = number of segments) is the start vertex of segment
/// `i`; for `k = 2`, trace dof `n + i` is the midpoint of segment `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceOperator {
    pub volume_dofs: Vec<usize>,
    pub n_volume: usize,
}

pub fn trace_restriction(space: &FeSpace<'_>, bmesh: &BoundaryMesh) -> Result<TraceOperator> {
    if !bmesh.belongs_to(space.mesh) {
        return Err(Error::DimensionMismatch("boundary mesh was not extracted from the space's mesh".into()));
    }
    let nv = space.mesh.n_vertices();
    let mut volume_dofs: Vec<usize> = bmesh.segments.iter().map(|s| s[0]).collect();
    if space.degree == 2 {
        volume_dofs.extend(bmesh.parent_edge.iter().map(|&(t, le)| nv + space.mesh.triangle_edges()[t][le]));
    }
    Ok(TraceOperator { volume_dofs, n_volume: space.n_dofs() })
}

impl TraceOperator {
    pub fn n_trace(&self) -> usize {
        self.volume_dofs.len()
    }

    pub fn restrict(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n_volume);
        self.volume_dofs.iter().map(|&d| v[d]).collect()
    }

    /// Extension by zero: the transpose of [`restrict`](Self::restrict).
    pub fn extend(&self, t: &[f64]) -> Vec<f64> {
        assert_eq!(t.len(), self.n_trace());
        let mut v = vec![0.0; self.n_volume];
        for (&d, &x) in self.volume_dofs.iter().zip(t) {
            v[d] += x;
        }
        v
    }
}
