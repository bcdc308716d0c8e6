//! The symmetric coupling block system and its solution.
//!
//! With `R` the trace restriction from volume dofs to trace dofs, the system
//! for `(u_h, φ_h)` is
//!
//! ```text
//! [ A + RᵀDR   −RᵀBᵀ ] [u]   [ F + Rᵀ(q + D u₀ₕ) ]
//! [ B R          V   ] [φ] = [ B u₀ₕ             ]
//! ```
//!
//! where `A` is the volume stiffness, `V`, `B = M/2 − K` and `D` the boundary
//! matrices, `F = ⟨f, v⟩_Ω`, `q = ⟨φ₀, v⟩_Γ` and `u₀ₕ` the L²(Γ) projection of
//! `u₀` onto the trace space. The jump `u₀` only ever enters through `u₀ₕ`.
//!
//! Data modes:
//! * [`DataMode::ProjectU0`]: `q` is evaluated by Gauss quadrature of `φ₀`.
//! * [`DataMode::ProjectBoth`]: `φ₀` is first projected onto the flux space.
//!
//! In both modes the discrete right-hand side is consistent with the discrete
//! operators, so the perturbations of Galerkin orthogonality are exactly the
//! data projection errors.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use crate::bem::{
    assemble_boundary_operators, boundary_load, l2_project, BemSpace, BoundaryOperators, PanelBasis, PanelIntegrator,
    TraceSpace,
};
use crate::error::{Error, Result};
use crate::fem::{assemble_domain_load, assemble_stiffness, Coefficient, FeSpace, TraceOperator};
use crate::geometry::Point;
use crate::linalg::{dense_mul_vec, dense_tr_mul_vec, norm2, write_coordinate, CsrMatrix, TripletBuilder};
use crate::manufactured::TransmissionData;
use crate::quadrature::{integrate_adaptive_scalar, TriangleRule};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DataMode {
    #[default]
    ProjectU0,
    ProjectBoth,
}

impl FromStr for DataMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "project-u0" => Ok(DataMode::ProjectU0),
            "project-both" => Ok(DataMode::ProjectBoth),
            other => Err(Error::UnknownDataMode(other.to_string())),
        }
    }
}

impl fmt::Display for DataMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DataMode::ProjectU0 => "project-u0",
            DataMode::ProjectBoth => "project-both",
        })
    }
}

/// Assembled block operator of the coupled problem.
#[derive(Clone, Debug)]
pub struct CoupledSystem {
    pub stiffness: CsrMatrix,
    pub boundary: BoundaryOperators,
    pub trace: TraceOperator,
}

pub fn assemble_system(
    fe: &FeSpace<'_>,
    trace: &TraceOperator,
    trace_space: &TraceSpace<'_>,
    flux_space: &BemSpace<'_>,
    coeff: &Coefficient,
    integrator: &PanelIntegrator,
) -> Result<CoupledSystem> {
    if trace.n_volume != fe.n_dofs() || trace.n_trace() != trace_space.n_dofs() {
        return Err(Error::DimensionMismatch(format!(
            "trace operator maps {} -> {}, spaces have {} volume and {} trace dofs",
            trace.n_volume,
            trace.n_trace(),
            fe.n_dofs(),
            trace_space.n_dofs()
        )));
    }
    if !trace_space.bmesh.belongs_to(fe.mesh) || trace_space.degree != fe.degree || flux_space.degree + 1 != fe.degree {
        return Err(Error::DimensionMismatch("volume, trace and flux spaces do not match".into()));
    }
    let stiffness = assemble_stiffness(fe, coeff)?;
    let boundary = assemble_boundary_operators(trace_space, flux_space, integrator)?;
    Ok(CoupledSystem { stiffness, boundary, trace: trace.clone() })
}

impl CoupledSystem {
    pub fn n_fem(&self) -> usize {
        self.stiffness.nrows
    }

    pub fn n_bem(&self) -> usize {
        self.boundary.single_layer.nrows()
    }

    pub fn n_total(&self) -> usize {
        self.n_fem() + self.n_bem()
    }

    /// The block matrix, FEM rows and columns first.
    pub fn block_matrix(&self) -> CsrMatrix {
        let nf = self.n_fem();
        let dofs = &self.trace.volume_dofs;
        let b = &self.boundary;
        let mut tb = TripletBuilder::new(self.n_total(), self.n_total());
        for (r, c, v) in self.stiffness.triplets() {
            tb.add(r, c, v);
        }
        for (i, &gi) in dofs.iter().enumerate() {
            for (j, &gj) in dofs.iter().enumerate() {
                tb.add(gi, gj, b.hypersingular[(i, j)]);
            }
        }
        for r in 0..self.n_bem() {
            for (j, &gj) in dofs.iter().enumerate() {
                let v = b.coupling[(r, j)];
                tb.add(gj, nf + r, -v);
                tb.add(nf + r, gj, v);
            }
            for c in 0..self.n_bem() {
                tb.add(nf + r, nf + c, b.single_layer[(r, c)]);
            }
        }
        tb.build()
    }

    /// Applies the block operator to `(u, φ)`.
    pub fn apply(&self, u: &[f64], phi: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let b = &self.boundary;
        let ut = self.trace.restrict(u);
        let mut r1 = self.stiffness.mul_vec(u);
        let du = dense_mul_vec(&b.hypersingular, &ut);
        let btphi = dense_tr_mul_vec(&b.coupling, phi);
        let bnd: Vec<f64> = du.iter().zip(&btphi).map(|(d, p)| d - p).collect();
        for (x, y) in r1.iter_mut().zip(self.trace.extend(&bnd)) {
            *x += y;
        }
        let bu = dense_mul_vec(&b.coupling, &ut);
        let vphi = dense_mul_vec(&b.single_layer, phi);
        let r2 = bu.iter().zip(&vphi).map(|(a, c)| a + c).collect();
        (r1, r2)
    }

    /// Writes the block matrix in coordinate text format.
    pub fn write_matrix(&self, w: impl Write) -> Result<()> {
        let a = self.block_matrix();
        write_coordinate(w, a.nrows, a.ncols, a.triplets())?;
        Ok(())
    }
}

/// Right-hand side of the block system.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledRhs {
    pub rhs1: Vec<f64>,
    pub rhs2: Vec<f64>,
    /// Projection of `u₀` onto the trace space.
    pub u0h: Vec<f64>,
}

/// Quadrature settings for data terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DataQuadrature {
    /// Exactness degree of the triangle rule for `⟨f, v⟩_Ω`.
    pub volume_degree: usize,
    /// Gauss points per segment for boundary data.
    pub boundary_points: usize,
}

impl Default for DataQuadrature {
    fn default() -> Self {
        DataQuadrature { volume_degree: 10, boundary_points: 16 }
    }
}

/// Assembles `(L₁, L₂)` from `f(x)`, `u₀(x, segment)` and `φ₀(x, segment)`.
#[allow(clippy::too_many_arguments)]
pub fn assemble_rhs(
    sys: &CoupledSystem,
    fe: &FeSpace<'_>,
    trace_space: &TraceSpace<'_>,
    flux_space: &BemSpace<'_>,
    f: impl Fn(Point) -> f64,
    u0: impl Fn(Point, usize) -> f64,
    phi0: impl Fn(Point, usize) -> f64,
    mode: DataMode,
    quad: DataQuadrature,
) -> CoupledRhs {
    let b = &sys.boundary;
    let u0h = l2_project(trace_space, &u0, quad.boundary_points);
    let q = match mode {
        DataMode::ProjectU0 => boundary_load(trace_space, &phi0, quad.boundary_points),
        DataMode::ProjectBoth => {
            let phi0h = l2_project(flux_space, &phi0, quad.boundary_points);
            dense_tr_mul_vec(&b.mixed_mass, &phi0h)
        }
    };
    let du0 = dense_mul_vec(&b.hypersingular, &u0h);
    let bnd: Vec<f64> = q.iter().zip(&du0).map(|(a, d)| a + d).collect();
    let mut rhs1 = assemble_domain_load(fe, f, quad.volume_degree);
    for (x, y) in rhs1.iter_mut().zip(sys.trace.extend(&bnd)) {
        *x += y;
    }
    let rhs2 = dense_mul_vec(&b.coupling, &u0h);
    CoupledRhs { rhs1, rhs2, u0h }
}

/// [`assemble_rhs`] with data taken from a known transmission solution.
pub fn assemble_rhs_from(
    sys: &CoupledSystem,
    fe: &FeSpace<'_>,
    trace_space: &TraceSpace<'_>,
    flux_space: &BemSpace<'_>,
    data: &impl TransmissionData,
    mode: DataMode,
    quad: DataQuadrature,
) -> CoupledRhs {
    let normals = &trace_space.bmesh.outward_normals;
    assemble_rhs(
        sys,
        fe,
        trace_space,
        flux_space,
        |x| data.load(x),
        |x, _| data.trace_jump(x),
        |x, s| data.flux_jump(x, normals[s]),
        mode,
        quad,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoupledSolution {
    /// Volume coefficients of `u_h`.
    pub u: Vec<f64>,
    /// Flux coefficients of `φ_h`.
    pub phi: Vec<f64>,
    /// `‖r‖ / ‖rhs‖` of the block system (absolute if the right-hand side vanishes).
    pub relative_residual: f64,
}

/// Solves the block system by sparse LU with partial pivoting.
pub fn solve(sys: &CoupledSystem, rhs: &CoupledRhs) -> Result<CoupledSolution> {
    let n = sys.n_total();
    let nf = sys.n_fem();
    if rhs.rhs1.len() != nf || rhs.rhs2.len() != sys.n_bem() {
        return Err(Error::DimensionMismatch("right-hand side does not match the system".into()));
    }
    let triplets: Vec<Triplet<usize, usize, f64>> =
        sys.block_matrix().triplets().map(|(r, c, v)| Triplet::new(r, c, v)).collect();
    let a = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| Error::Factorization(format!("{e:?}")))?;
    let lu = a.sp_lu().map_err(|e| Error::Factorization(format!("{e:?}")))?;
    let mut x = Mat::from_fn(n, 1, |i, _| if i < nf { rhs.rhs1[i] } else { rhs.rhs2[i - nf] });
    lu.solve_in_place(x.as_mut());
    let xs: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    if xs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Factorization("solution is not finite; the block matrix is singular".into()));
    }
    let (u, phi) = (xs[..nf].to_vec(), xs[nf..].to_vec());
    let (r1, r2) = sys.apply(&u, &phi);
    let res: Vec<f64> = r1.iter().zip(&rhs.rhs1).chain(r2.iter().zip(&rhs.rhs2)).map(|(a, b)| a - b).collect();
    let scale: Vec<f64> = rhs.rhs1.iter().chain(&rhs.rhs2).copied().collect();
    let denom = norm2(&scale);
    let relative_residual = if denom > 0.0 { norm2(&res) / denom } else { norm2(&res) };
    Ok(CoupledSolution { u, phi, relative_residual })
}

/// `⟨f, 1⟩_Ω + ⟨φ₀, 1⟩_Γ` by quadrature: the triangle rule of `quad` in the
/// volume and adaptive Gauss-Kronrod on each segment, which resolves corner
/// singularities of `φ₀`.
pub fn check_compatibility(
    f: impl Fn(Point) -> f64,
    phi0: impl Fn(Point, usize) -> f64,
    fe: &FeSpace<'_>,
    flux_space: &BemSpace<'_>,
    quad: DataQuadrature,
) -> f64 {
    let rule = TriangleRule::new(quad.volume_degree);
    let mesh = fe.mesh;
    let mut vol = 0.0;
    for t in 0..mesh.n_triangles() {
        let area = mesh.signed_area(t);
        for (l, w) in rule.points.iter().zip(&rule.weights) {
            vol += 2.0 * area * w * f(fe.map_point(t, l));
        }
    }
    let bnd: f64 = flux_space
        .bmesh
        .geometry
        .iter()
        .enumerate()
        .map(|(s, seg)| seg.length() * integrate_adaptive_scalar(|t| phi0(seg.point_at(t), s), 0.0, 1.0, 1e-14))
        .sum();
    vol + bnd
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{build_fe_space, trace_restriction};
    use crate::manufactured::{HarmonicPolynomial, ManufacturedCase};
    use crate::mesh::{build_lshape, extract_boundary};

    #[test]
    fn data_mode_strings() {
        assert_eq!("project-u0".parse::<DataMode>().unwrap(), DataMode::ProjectU0);
        assert_eq!("project-both".parse::<DataMode>().unwrap(), DataMode::ProjectBoth);
        assert!(matches!("exact".parse::<DataMode>(), Err(Error::UnknownDataMode(_))));
        assert_eq!(DataMode::ProjectBoth.to_string(), "project-both");
    }

    #[test]
    fn constants_and_trivial_data() {
        let mesh = build_lshape(1);
        let b = extract_boundary(&mesh).unwrap();
        for k in 1..=2 {
            let fe = build_fe_space(&mesh, k).unwrap();
            let tr = trace_restriction(&fe, &b).unwrap();
            let t = TraceSpace::new(&b, k).unwrap();
            let m = BemSpace::new(&b, k - 1).unwrap();
            let sys = assemble_system(&fe, &tr, &t, &m, &Coefficient::identity(), &PanelIntegrator::default()).unwrap();
            let (r1, r2) = sys.apply(&vec![1.0; fe.n_dofs()], &vec![0.0; m.n_dofs()]);
            assert!(r1.iter().all(|v| v.abs() < 1e-12));
            let mass1 = dense_mul_vec(&sys.boundary.mixed_mass, &vec![1.0; t.n_dofs()]);
            assert!(r2.iter().zip(&mass1).all(|(a, b)| (a - b).abs() < 1e-12));

            let q = DataQuadrature::default();
            let zero = assemble_rhs(&sys, &fe, &t, &m, |_| 0.0, |_, _| 0.0, |_, _| 0.0, DataMode::ProjectU0, q);
            assert!(zero.rhs1.iter().chain(&zero.rhs2).all(|v| *v == 0.0));
            let sol = solve(&sys, &zero).unwrap();
            assert!(sol.u.iter().chain(&sol.phi).all(|v| *v == 0.0));

            let one = assemble_rhs(&sys, &fe, &t, &m, |_| 0.0, |_, _| 1.0, |_, _| 0.0, DataMode::ProjectU0, q);
            assert!(one.rhs1.iter().all(|v| v.abs() < 1e-12));
            assert!(one.rhs2.iter().zip(&mass1).all(|(a, b)| (a - b).abs() < 1e-12));
        }
    }

    #[test]
    fn patch_test() {
        let mesh = build_lshape(1);
        let b = extract_boundary(&mesh).unwrap();
        let cases = [
            (1, HarmonicPolynomial { coeffs: [0.3, -1.2, 2.0, 0.0, 0.0] }),
            (2, HarmonicPolynomial { coeffs: [0.3, -1.2, 2.0, 4.0, -3.0] }),
        ];
        for (k, p) in cases {
            let fe = build_fe_space(&mesh, k).unwrap();
            let tr = trace_restriction(&fe, &b).unwrap();
            let t = TraceSpace::new(&b, k).unwrap();
            let m = BemSpace::new(&b, k - 1).unwrap();
            let sys = assemble_system(&fe, &tr, &t, &m, &Coefficient::identity(), &PanelIntegrator::default()).unwrap();
            for mode in [DataMode::ProjectU0, DataMode::ProjectBoth] {
                let rhs = assemble_rhs_from(&sys, &fe, &t, &m, &p, mode, DataQuadrature::default());
                let sol = solve(&sys, &rhs).unwrap();
                assert!(sol.relative_residual < 1e-12);
                let exact = fe.interpolate(|x| p.interior(x));
                let err = sol.u.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(err < 1e-10, "k={k} {mode}: {err}");
                assert!(sol.phi.iter().all(|v| v.abs() < 1e-10));
            }
        }
    }

    #[test]
    fn linearity_and_compatibility() {
        let mesh = build_lshape(1);
        let b = extract_boundary(&mesh).unwrap();
        let fe = build_fe_space(&mesh, 1).unwrap();
        let tr = trace_restriction(&fe, &b).unwrap();
        let t = TraceSpace::new(&b, 1).unwrap();
        let m = BemSpace::new(&b, 0).unwrap();
        let sys = assemble_system(&fe, &tr, &t, &m, &Coefficient::identity(), &PanelIntegrator::default()).unwrap();
        let case = ManufacturedCase::new(1.5).unwrap();
        let q = DataQuadrature::default();
        let rhs = assemble_rhs_from(&sys, &fe, &t, &m, &case, DataMode::ProjectU0, q);
        let s1 = solve(&sys, &rhs).unwrap();
        let doubled = CoupledRhs {
            rhs1: rhs.rhs1.iter().map(|v| 2.0 * v).collect(),
            rhs2: rhs.rhs2.iter().map(|v| 2.0 * v).collect(),
            u0h: rhs.u0h.clone(),
        };
        let s2 = solve(&sys, &doubled).unwrap();
        for (a, b) in s1.u.iter().chain(&s1.phi).zip(s2.u.iter().chain(&s2.phi)) {
            assert!((2.0 * a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
        let normals = &b.outward_normals;
        let c = check_compatibility(|_| 0.0, |x, s| case.flux_jump(x, normals[s]), &fe, &m, q);
        assert!(c.abs() < 1e-8, "{c}");
        assert!((check_compatibility(|_| 1.0, |_, _| 0.0, &fe, &m, q) - 0.12).abs() < 1e-14);
        assert!((check_compatibility(|_| 0.0, |_, _| 1.0, &fe, &m, q) - 1.6).abs() < 1e-14);
    }

    #[test]
    fn matrix_dump_has_header_and_entries() {
        let mesh = build_lshape(0);
        let b = extract_boundary(&mesh).unwrap();
        let fe = build_fe_space(&mesh, 1).unwrap();
        let tr = trace_restriction(&fe, &b).unwrap();
        let t = TraceSpace::new(&b, 1).unwrap();
        let m = BemSpace::new(&b, 0).unwrap();
        let sys = assemble_system(&fe, &tr, &t, &m, &Coefficient::identity(), &PanelIntegrator::default()).unwrap();
        let mut out = Vec::new();
        sys.write_matrix(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("# 19 19\n"));
        assert!(text.lines().count() > 1 + 8 * 8);
    }
}
