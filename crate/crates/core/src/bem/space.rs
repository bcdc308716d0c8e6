//! Piecewise polynomial spaces on the boundary polygon.

use crate::error::{Error, Result};
use crate::geometry::{Point, Segment};
use crate::mesh::BoundaryMesh;

use super::panel::Poly;

/// A space of piecewise polynomials on Γ described segment by segment.
pub trait PanelBasis {
    fn boundary(&self) -> &BoundaryMesh;
    fn n_dofs(&self) -> usize;
    /// Global dofs active on segment `s` with their local polynomials in the
    /// segment parameter σ ∈ [0, 1].
    fn local(&self, s: usize) -> Vec<(usize, Poly)>;

    /// Evaluates the discrete function `coeffs` at parameter σ of segment `s`.
    fn evaluate(&self, coeffs: &[f64], s: usize, sigma: f64) -> f64 {
        self.local(s).iter().map(|(d, p)| coeffs[*d] * poly_eval(p, sigma)).sum()
    }
}

pub fn poly_eval(p: &Poly, x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

pub fn poly_derivative(p: &Poly) -> Poly {
    let mut d = [0.0; 3];
    for i in 1..p.len() {
        d[i - 1] = i as f64 * p[i];
    }
    d
}

/// Continuous piecewise polynomials `S^{k,1}(T_Γ)` of degree 1 or 2.
///
/// Dof `i < n` is the start vertex of segment `i`; for degree 2, dof `n + i`
/// is the midpoint of segment `i`. This matches [`crate::fem::TraceOperator`].
#[derive(Clone, Copy, Debug)]
pub struct TraceSpace<'b> {
    pub bmesh: &'b BoundaryMesh,
    pub degree: usize,
}

impl<'b> TraceSpace<'b> {
    pub fn new(bmesh: &'b BoundaryMesh, degree: usize) -> Result<Self> {
        if !(1..=2).contains(&degree) {
            return Err(Error::UnsupportedDegree(degree));
        }
        Ok(TraceSpace { bmesh, degree })
    }

    /// Location of each dof on Γ.
    pub fn dof_points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.bmesh.geometry.iter().map(|s| s.start).collect();
        if self.degree == 2 {
            pts.extend(self.bmesh.geometry.iter().map(Segment::midpoint));
        }
        pts
    }

    /// Nodal interpolant of a continuous boundary function.
    pub fn interpolate(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        self.dof_points().into_iter().map(f).collect()
    }
}

impl PanelBasis for TraceSpace<'_> {
    fn boundary(&self) -> &BoundaryMesh {
        self.bmesh
    }

    fn n_dofs(&self) -> usize {
        self.degree * self.bmesh.n_segments()
    }

    fn local(&self, s: usize) -> Vec<(usize, Poly)> {
        let n = self.bmesh.n_segments();
        let next = (s + 1) % n;
        match self.degree {
            1 => vec![(s, [1.0, -1.0, 0.0]), (next, [0.0, 1.0, 0.0])],
            _ => vec![(s, [1.0, -3.0, 2.0]), (next, [0.0, -1.0, 2.0]), (n + s, [0.0, 4.0, -4.0])],
        }
    }
}

/// Discontinuous piecewise polynomials `S^{p,0}(T_Γ)` of degree `p ∈ {0, 1}`.
///
/// Degree 0: dof `i` is the constant on segment `i`. Degree 1: dofs `2i` and
/// `2i + 1` are the endpoint values (start, end) on segment `i`.
#[derive(Clone, Copy, Debug)]
pub struct BemSpace<'b> {
    pub bmesh: &'b BoundaryMesh,
    pub degree: usize,
}

impl<'b> BemSpace<'b> {
    pub fn new(bmesh: &'b BoundaryMesh, degree: usize) -> Result<Self> {
        if degree > 1 {
            return Err(Error::UnsupportedDegree(degree));
        }
        Ok(BemSpace { bmesh, degree })
    }

    /// Coefficients of the constant function `c`.
    pub fn constant(&self, c: f64) -> Vec<f64> {
        vec![c; self.n_dofs()]
    }
}

impl PanelBasis for BemSpace<'_> {
    fn boundary(&self) -> &BoundaryMesh {
        self.bmesh
    }

    fn n_dofs(&self) -> usize {
        (self.degree + 1) * self.bmesh.n_segments()
    }

    fn local(&self, s: usize) -> Vec<(usize, Poly)> {
        match self.degree {
            0 => vec![(s, [1.0, 0.0, 0.0])],
            _ => vec![(2 * s, [1.0, -1.0, 0.0]), (2 * s + 1, [0.0, 1.0, 0.0])],
        }
    }
}

/// Arclength derivatives of a [`TraceSpace`] basis, segment by segment.
#[derive(Clone, Copy, Debug)]
pub struct ArcDerivative<'a, 'b>(pub &'a TraceSpace<'b>);

impl PanelBasis for ArcDerivative<'_, '_> {
    fn boundary(&self) -> &BoundaryMesh {
        self.0.bmesh
    }

    fn n_dofs(&self) -> usize {
        self.0.n_dofs()
    }

    fn local(&self, s: usize) -> Vec<(usize, Poly)> {
        let inv_len = 1.0 / self.0.bmesh.geometry[s].length();
        self.0
            .local(s)
            .into_iter()
            .map(|(d, p)| {
                let mut dp = poly_derivative(&p);
                dp.iter_mut().for_each(|c| *c *= inv_len);
                (d, dp)
            })
            .collect()
    }
}
