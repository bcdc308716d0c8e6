//! Calderón residual of the exact exterior pair under refinement, and the
//! exterior solution recovered from a coupled solve by the representation
//! formula.

use fembem::bem::{
    assemble_boundary_operators, calderon_residual, eval_exterior_representation, l2_project, BemSpace, PanelBasis,
    PanelIntegrator, TraceSpace,
};
use fembem::coupling::{assemble_rhs_from, assemble_system, solve, DataMode, DataQuadrature};
use fembem::fem::{build_fe_space, trace_restriction, Coefficient};
use fembem::manufactured::{ManufacturedCase, TransmissionData};
use fembem::mesh::{build_lshape, extract_boundary};

fn main() -> fembem::Result<()> {
    let case = ManufacturedCase::for_degree(1)?;
    let integ = PanelIntegrator::default();

    println!("Calderón residual of (Π γu^ext, Π ∂_n u^ext):");
    for level in 0..=5 {
        let b = extract_boundary(&build_lshape(level))?;
        let t = TraceSpace::new(&b, 1)?;
        let m = BemSpace::new(&b, 0)?;
        let ops = assemble_boundary_operators(&t, &m, &integ)?;
        let n = &b.outward_normals;
        let u = l2_project(&t, |x, _| case.exterior(x), 16);
        let phi = l2_project(&m, |x, s| case.exterior_flux(x, n[s]), 16);
        let wrong = calderon_residual(&ops, &vec![1.0; t.n_dofs()], &vec![0.0; m.n_dofs()]);
        println!(
            "  level {level}: {:.3e}   (constant trace, zero flux: {wrong:.6})",
            calderon_residual(&ops, &u, &phi)
        );
    }

    let points = [[1.0, 1.0], [-0.1, 0.1], [0.5, -0.5], [4.0, 4.0]];
    println!("\nexterior representation vs exact:");
    for level in [2, 4] {
        let mesh = build_lshape(level);
        let b = extract_boundary(&mesh)?;
        let fe = build_fe_space(&mesh, 1)?;
        let tr = trace_restriction(&fe, &b)?;
        let t = TraceSpace::new(&b, 1)?;
        let m = BemSpace::new(&b, 0)?;
        let sys = assemble_system(&fe, &tr, &t, &m, &Coefficient::identity(), &integ)?;
        let rhs = assemble_rhs_from(&sys, &fe, &t, &m, &case, DataMode::ProjectU0, DataQuadrature::default());
        let sol = solve(&sys, &rhs)?;
        let ut = tr.restrict(&sol.u);
        for x in points {
            let v = eval_exterior_representation(&t, &m, &ut, &rhs.u0h, &sol.phi, x, &integ)?;
            println!("  level {level} x = {x:?}: {v:+.8}  exact {:+.8}", case.exterior(x));
        }
    }
    Ok(())
}
