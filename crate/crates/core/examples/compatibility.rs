//! The 2D compatibility functional ⟨f, 1⟩_Ω + ⟨φ₀, 1⟩_Γ for the manufactured
//! data and two control cases.

use fembem::bem::BemSpace;
use fembem::coupling::{check_compatibility, DataQuadrature};
use fembem::fem::build_fe_space;
use fembem::manufactured::{ManufacturedCase, TransmissionData};
use fembem::mesh::{build_lshape, extract_boundary};

fn main() -> fembem::Result<()> {
    let quad = DataQuadrature::default();
    for k in 1..=2 {
        let case = ManufacturedCase::for_degree(k)?;
        let mesh = build_lshape(2);
        let b = extract_boundary(&mesh)?;
        let fe = build_fe_space(&mesh, k)?;
        let m = BemSpace::new(&b, k - 1)?;
        let n = &b.outward_normals;
        let v = check_compatibility(|x| case.load(x), |x, s| case.flux_jump(x, n[s]), &fe, &m, quad);
        println!("manufactured α = {}: {v:+.3e}", case.alpha);
    }
    let mesh = build_lshape(0);
    let b = extract_boundary(&mesh)?;
    let fe = build_fe_space(&mesh, 1)?;
    let m = BemSpace::new(&b, 0)?;
    println!("f = 1, φ₀ = 0: {:.15}", check_compatibility(|_| 1.0, |_, _| 0.0, &fe, &m, quad));
    println!("f = 0, φ₀ = 1: {:.15}", check_compatibility(|_| 0.0, |_, _| 1.0, &fe, &m, quad));
    Ok(())
}
