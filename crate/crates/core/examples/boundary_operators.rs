//! Galerkin matrices V, B = M/2 − K and D on the L-shape boundary, with the
//! identities they satisfy.

use fembem::bem::{assemble_boundary_operators, BemSpace, PanelBasis, PanelIntegrator, TraceSpace};
use fembem::linalg::{dense_asymmetry, dense_mul_vec};
use fembem::mesh::{build_lshape, extract_boundary};

fn main() -> fembem::Result<()> {
    let integ = PanelIntegrator::default();
    for k in 1..=2 {
        for level in 0..=3 {
            let b = extract_boundary(&build_lshape(level))?;
            let t = TraceSpace::new(&b, k)?;
            let m = BemSpace::new(&b, k - 1)?;
            let ops = assemble_boundary_operators(&t, &m, &integ)?;
            let ones = vec![1.0; t.n_dofs()];
            let b1 = dense_mul_vec(&ops.coupling, &ones);
            let m1 = dense_mul_vec(&ops.mixed_mass, &ones);
            let b_err = b1.iter().zip(&m1).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            let d1 = dense_mul_vec(&ops.hypersingular, &ones).iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let mut ev = ops.single_layer.self_adjoint_eigenvalues(faer::Side::Lower).unwrap();
            ev.sort_by(f64::total_cmp);
            let one_v_one: f64 = dense_mul_vec(&ops.single_layer, &m.constant(1.0)).iter().sum();
            println!(
                "k={k} level {level}: dofs {}+{}  |B1-M1| {b_err:.1e}  |D1| {d1:.1e}  asym(V) {:.1e}  λmin(V) {:.3e}  <V1,1> {one_v_one:.12}",
                t.n_dofs(),
                m.n_dofs(),
                dense_asymmetry(&ops.single_layer),
                ev[0]
            );
        }
    }
    Ok(())
}
