//! Dense Galerkin matrices of the boundary integral operators.
//!
//! * `V`: single layer, `⟨Vφ, ψ⟩` on the flux space.
//! * `B`: the coupling form `b(u, ψ) = ⟨(1/2 − K)u, ψ⟩`, rows indexed by the
//!   flux space and columns by the trace space.
//! * `D`: hypersingular, through `⟨Du, v⟩ = ⟨V u′, v′⟩` with arclength
//!   derivatives; its kernel is the constants.
//!
//! The adjoint double layer `K′` never enters the coupled system and is not
//! assembled.

use faer::Mat;

use crate::error::{Error, Result};
use crate::mesh::BoundaryMesh;

use super::panel::{PanelIntegrator, PanelMoments, PanelPair, PanelRelation};
use super::space::{ArcDerivative, BemSpace, PanelBasis, TraceSpace};

fn relation(bmesh: &BoundaryMesh, i: usize, j: usize) -> PanelRelation {
    let (a, b) = (bmesh.segments[i], bmesh.segments[j]);
    if i == j {
        PanelRelation::Identical
    } else if a[0] == b[0] || a[0] == b[1] || a[1] == b[0] || a[1] == b[1] {
        PanelRelation::Adjacent
    } else {
        PanelRelation::Disjoint
    }
}

/// Calls `visit(test, trial, moments)` for every ordered pair of segments.
fn for_each_pair(
    bmesh: &BoundaryMesh,
    integrator: &PanelIntegrator,
    mut visit: impl FnMut(usize, usize, &PanelMoments),
) {
    let n = bmesh.n_segments();
    for i in 0..n {
        for j in 0..n {
            let pair = PanelPair::with_relation(bmesh.geometry[i], bmesh.geometry[j], relation(bmesh, i, j));
            let mom = integrator.moments(&pair);
            visit(i, j, &mom);
        }
    }
}

fn check_scaling(bmesh: &BoundaryMesh) -> Result<()> {
    let diameter = bmesh.diameter();
    if diameter >= 1.0 {
        return Err(Error::ScalingViolation { diameter });
    }
    Ok(())
}

fn scatter_single_layer(
    out: &mut Mat<f64>,
    test: &impl PanelBasis,
    trial: &impl PanelBasis,
    i: usize,
    j: usize,
    mom: &PanelMoments,
) {
    let tl = test.local(i);
    let sl = trial.local(j);
    for (a, p) in &tl {
        for (b, q) in &sl {
            out[(*a, *b)] += mom.single_layer_entry(p, q);
        }
    }
}

fn scatter_double_layer(
    out: &mut Mat<f64>,
    test: &impl PanelBasis,
    trial: &impl PanelBasis,
    i: usize,
    j: usize,
    mom: &PanelMoments,
) {
    let tl = test.local(i);
    let sl = trial.local(j);
    for (a, p) in &tl {
        for (b, q) in &sl {
            out[(*a, *b)] += mom.double_layer_entry(p, q);
        }
    }
}

/// `⟨Vφ, ψ⟩` on the flux space. Refuses domains of diameter ≥ 1.
pub fn slp_matrix(flux: &BemSpace<'_>, integrator: &PanelIntegrator) -> Result<Mat<f64>> {
    check_scaling(flux.bmesh)?;
    let mut v = Mat::zeros(flux.n_dofs(), flux.n_dofs());
    for_each_pair(flux.bmesh, integrator, |i, j, m| scatter_single_layer(&mut v, flux, flux, i, j, m));
    Ok(v)
}

/// `⟨Ku, ψ⟩` with rows on the flux space and columns on the trace space.
pub fn double_layer_matrix(trace: &TraceSpace<'_>, flux: &BemSpace<'_>, integrator: &PanelIntegrator) -> Mat<f64> {
    let mut k = Mat::zeros(flux.n_dofs(), trace.n_dofs());
    for_each_pair(flux.bmesh, integrator, |i, j, m| scatter_double_layer(&mut k, flux, trace, i, j, m));
    k
}

/// `B[ψ, u] = ⟨(1/2 − K)u, ψ⟩`.
pub fn dlp_matrix(trace: &TraceSpace<'_>, flux: &BemSpace<'_>, integrator: &PanelIntegrator) -> Result<Mat<f64>> {
    same_boundary(trace.bmesh, flux.bmesh)?;
    let k = double_layer_matrix(trace, flux, integrator);
    let m = mass_matrix(flux, trace);
    Ok(Mat::from_fn(k.nrows(), k.ncols(), |r, c| 0.5 * m[(r, c)] - k[(r, c)]))
}

/// `⟨Du, v⟩ = ⟨V u′, v′⟩` on the trace space.
pub fn hypersingular_matrix(trace: &TraceSpace<'_>, integrator: &PanelIntegrator) -> Mat<f64> {
    let d = ArcDerivative(trace);
    let mut out = Mat::zeros(trace.n_dofs(), trace.n_dofs());
    for_each_pair(trace.bmesh, integrator, |i, j, m| scatter_single_layer(&mut out, &d, &d, i, j, m));
    out
}

/// `⟨p, q⟩_Γ` between two boundary spaces on the same boundary.
pub fn mass_matrix(test: &impl PanelBasis, trial: &impl PanelBasis) -> Mat<f64> {
    let bmesh = test.boundary();
    let mut m = Mat::zeros(test.n_dofs(), trial.n_dofs());
    for s in 0..bmesh.n_segments() {
        let len = bmesh.geometry[s].length();
        for (a, p) in test.local(s) {
            for (b, q) in trial.local(s) {
                let mut v = 0.0;
                for (n, pn) in p.iter().enumerate() {
                    for (k, qk) in q.iter().enumerate() {
                        v += pn * qk / (n + k + 1) as f64;
                    }
                }
                m[(a, b)] += len * v;
            }
        }
    }
    m
}

fn same_boundary(a: &BoundaryMesh, b: &BoundaryMesh) -> Result<()> {
    if std::ptr::eq(a, b) || a.segments == b.segments {
        Ok(())
    } else {
        Err(Error::DimensionMismatch("trace and flux spaces live on different boundary meshes".into()))
    }
}

/// All boundary matrices needed by the coupled system, from a single sweep over panel pairs.
#[derive(Clone, Debug)]
pub struct BoundaryOperators {
    /// `V`, flux × flux.
    pub single_layer: Mat<f64>,
    /// `B = M/2 − K`, flux × trace.
    pub coupling: Mat<f64>,
    /// `D`, trace × trace.
    pub hypersingular: Mat<f64>,
    pub flux_mass: Mat<f64>,
    pub trace_mass: Mat<f64>,
    /// `⟨u, ψ⟩`, flux × trace.
    pub mixed_mass: Mat<f64>,
}

pub fn assemble_boundary_operators(
    trace: &TraceSpace<'_>,
    flux: &BemSpace<'_>,
    integrator: &PanelIntegrator,
) -> Result<BoundaryOperators> {
    same_boundary(trace.bmesh, flux.bmesh)?;
    check_scaling(flux.bmesh)?;
    let (nt, nm) = (trace.n_dofs(), flux.n_dofs());
    let d = ArcDerivative(trace);
    let mut v = Mat::zeros(nm, nm);
    let mut k = Mat::zeros(nm, nt);
    let mut hyp = Mat::zeros(nt, nt);
    for_each_pair(flux.bmesh, integrator, |i, j, m| {
        scatter_single_layer(&mut v, flux, flux, i, j, m);
        scatter_double_layer(&mut k, flux, trace, i, j, m);
        scatter_single_layer(&mut hyp, &d, &d, i, j, m);
    });
    let mixed_mass = mass_matrix(flux, trace);
    let coupling = Mat::from_fn(nm, nt, |r, c| 0.5 * mixed_mass[(r, c)] - k[(r, c)]);
    Ok(BoundaryOperators {
        single_layer: v,
        coupling,
        hypersingular: hyp,
        flux_mass: mass_matrix(flux, flux),
        trace_mass: mass_matrix(trace, trace),
        mixed_mass,
    })
}
