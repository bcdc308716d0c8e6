//! L² projections onto boundary spaces and boundary L² errors.
//!
//! Boundary data are given as `f(x, s)` where `s` is the segment containing
//! `x`, so that piecewise data such as normal derivatives are well defined at
//! corners.

use faer::Mat;

use crate::geometry::Point;
use crate::linalg::spd_solve;
use crate::quadrature::GaussRule;

use super::operators::mass_matrix;
use super::space::{poly_eval, PanelBasis};

/// `⟨f, ψ_i⟩_Γ` for every basis function, with `points` Gauss points per segment.
pub fn boundary_load(space: &impl PanelBasis, f: impl Fn(Point, usize) -> f64, points: usize) -> Vec<f64> {
    let rule = GaussRule::new(points);
    let bmesh = space.boundary();
    let mut out = vec![0.0; space.n_dofs()];
    for (s, seg) in bmesh.geometry.iter().enumerate() {
        let len = seg.length();
        let local = space.local(s);
        for (sigma, w) in rule.iter() {
            let fx = f(seg.point_at(sigma), s) * w * len;
            for (d, p) in &local {
                out[*d] += fx * poly_eval(p, sigma);
            }
        }
    }
    out
}

/// L²(Γ) orthogonal projection of `f` onto `space`.
pub fn l2_project(space: &impl PanelBasis, f: impl Fn(Point, usize) -> f64, points: usize) -> Vec<f64> {
    let m: Mat<f64> = mass_matrix(space, space);
    let rhs = boundary_load(space, f, points);
    spd_solve(&m, &rhs).expect("boundary mass matrix is SPD")
}

/// `‖f − Σ cᵢψᵢ‖_{L²(Γ)}` with `points` Gauss points per segment.
pub fn boundary_l2_error(
    space: &impl PanelBasis,
    coeffs: &[f64],
    f: impl Fn(Point, usize) -> f64,
    points: usize,
) -> f64 {
    let rule = GaussRule::new(points);
    let bmesh = space.boundary();
    let mut sum = 0.0;
    for (s, seg) in bmesh.geometry.iter().enumerate() {
        let len = seg.length();
        for (sigma, w) in rule.iter() {
            let e = f(seg.point_at(sigma), s) - space.evaluate(coeffs, s, sigma);
            sum += w * len * e * e;
        }
    }
    sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bem::space::{BemSpace, TraceSpace};
    use crate::mesh::{build_lshape, extract_boundary};

    #[test]
    fn projection_reproduces_space_members() {
        let b = extract_boundary(&build_lshape(1)).unwrap();
        let t = TraceSpace::new(&b, 2).unwrap();
        let f = |x: Point, _s: usize| x[0] * x[0] - 3.0 * x[1] + 0.5;
        let c = l2_project(&t, f, 8);
        assert!(boundary_l2_error(&t, &c, f, 8) < 1e-14);
        let m = BemSpace::new(&b, 0).unwrap();
        let normals = b.outward_normals.clone();
        let g = move |_x: Point, s: usize| normals[s][0] - 2.0 * normals[s][1];
        let c = l2_project(&m, &g, 4);
        assert!(boundary_l2_error(&m, &c, &g, 4) < 1e-14);
    }

    #[test]
    fn projection_error_decreases() {
        let f = |x: Point, _s: usize| (7.0 * x[0]).sin() * x[1].exp();
        let mut prev = f64::INFINITY;
        for level in 0..4 {
            let b = extract_boundary(&build_lshape(level)).unwrap();
            let m = BemSpace::new(&b, 1).unwrap();
            let e = boundary_l2_error(&m, &l2_project(&m, f, 8), f, 8);
            assert!(e < prev / 3.0);
            prev = e;
        }
    }
}
