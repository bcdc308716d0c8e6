//! Boundary element spaces, Galerkin matrices of the Laplace boundary
//! integral operators, L² projections onto the boundary spaces and layer
//! potentials.

pub mod operators;
pub mod panel;
pub mod potential;
pub mod projection;
pub mod space;

pub use operators::{
    assemble_boundary_operators, dlp_matrix, double_layer_matrix, hypersingular_matrix, mass_matrix, slp_matrix,
    BoundaryOperators,
};
pub use panel::{PanelIntegrator, PanelMoments, PanelPair, PanelRelation};
pub use potential::{calderon_residual, double_layer_potential, eval_exterior_representation, single_layer_potential};
pub use projection::{boundary_l2_error, boundary_load, l2_project};
pub use space::{ArcDerivative, BemSpace, PanelBasis, TraceSpace};

/// Single layer Galerkin block of one panel pair for local Lagrange bases:
/// degree `trial_degree` on the trial panel and `test_degree` on the test
/// panel (0 = constant, 1 = endpoint hats, 2 = quadratic nodal).
pub fn slp_panel_moments(
    pair: &PanelPair,
    trial_degree: usize,
    test_degree: usize,
    integrator: &PanelIntegrator,
) -> crate::error::Result<faer::Mat<f64>> {
    let basis = |deg: usize| -> crate::error::Result<Vec<panel::Poly>> {
        Ok(match deg {
            0 => vec![[1.0, 0.0, 0.0]],
            1 => vec![[1.0, -1.0, 0.0], [0.0, 1.0, 0.0]],
            2 => vec![[1.0, -3.0, 2.0], [0.0, -1.0, 2.0], [0.0, 4.0, -4.0]],
            d => return Err(crate::error::Error::UnsupportedDegree(d)),
        })
    };
    for s in [&pair.test, &pair.trial] {
        let l = s.length();
        if l.is_nan() || l <= 0.0 {
            return Err(crate::error::Error::DegenerateSegment(l));
        }
    }
    let (tb, sb) = (basis(test_degree)?, basis(trial_degree)?);
    let mom = integrator.moments(pair);
    Ok(faer::Mat::from_fn(tb.len(), sb.len(), |i, j| mom.single_layer_entry(&tb[i], &sb[j])))
}
