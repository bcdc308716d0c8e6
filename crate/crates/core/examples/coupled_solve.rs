//! One coupled solve on a fixed level, its errors against the exact solution
//! and a dump of the block matrix to `matrix_<level>.txt`.
//!
//! Usage: `cargo run --example coupled_solve -- [level] [degree]`

use fembem::bem::{BemSpace, PanelBasis, PanelIntegrator, TraceSpace};
use fembem::coupling::{assemble_rhs_from, assemble_system, solve, DataMode, DataQuadrature};
use fembem::fem::{build_fe_space, trace_restriction, Coefficient};
use fembem::manufactured::{ManufacturedCase, TransmissionData};
use fembem::mesh::{boundary_strip, build_lshape, extract_boundary};
use fembem::norms::{error_flux_weighted, error_h1_semi, error_l2, error_l2_strip};

fn main() -> fembem::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let level = args.first().copied().unwrap_or(3);
    let k = args.get(1).copied().unwrap_or(1);
    let case = ManufacturedCase::for_degree(k)?;

    let mesh = build_lshape(level);
    let b = extract_boundary(&mesh)?;
    let fe = build_fe_space(&mesh, k)?;
    let tr = trace_restriction(&fe, &b)?;
    let t = TraceSpace::new(&b, k)?;
    let m = BemSpace::new(&b, k - 1)?;
    let sys = assemble_system(&fe, &tr, &t, &m, &Coefficient::identity(), &PanelIntegrator::default())?;
    let rhs = assemble_rhs_from(&sys, &fe, &t, &m, &case, DataMode::ProjectU0, DataQuadrature::default());
    let sol = solve(&sys, &rhs)?;

    println!("level {level}, k = {k}, α = {}: {} volume + {} flux unknowns", case.alpha, fe.n_dofs(), m.n_dofs());
    println!("relative residual  {:.2e}", sol.relative_residual);
    println!("|u − u_h|_H1       {:.6e}", error_h1_semi(&fe, &sol.u, |x| case.interior_gradient(x), 10));
    println!("‖u − u_h‖_L2       {:.6e}", error_l2(&fe, &sol.u, |x| case.interior(x), 10));
    println!(
        "‖u − u_h‖_L2(S_h)  {:.6e}",
        error_l2_strip(&fe, &sol.u, |x| case.interior(x), &boundary_strip(&mesh), 10)
    );
    let n = &b.outward_normals;
    println!(
        "h^½‖φ − φ_h‖_L2    {:.6e}",
        error_flux_weighted(&m, &sol.phi, |x, s| case.exterior_flux(x, n[s]), mesh.h, 16)
    );

    let path = format!("matrix_{level}.txt");
    sys.write_matrix(std::io::BufWriter::new(std::fs::File::create(&path)?))?;
    println!("wrote {path} ({} x {})", sys.n_total(), sys.n_total());
    Ok(())
}
