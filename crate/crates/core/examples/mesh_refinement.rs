//! Red refinement of the L-shape: counts, geometry invariants, the boundary
//! loop and the boundary strip. Writes the level-2 mesh to `mesh_2.txt`.

use fembem::mesh::{boundary_strip, build_lshape, extract_boundary};

fn main() -> fembem::Result<()> {
    println!("level  triangles  vertices  segments  strip        h       area  perimeter");
    for level in 0..=5 {
        let mesh = build_lshape(level);
        let b = extract_boundary(&mesh)?;
        println!(
            "{level:>5}  {:>9}  {:>8}  {:>8}  {:>5}  {:>7.5}  {:>9.6}  {:>9.6}",
            mesh.n_triangles(),
            mesh.n_vertices(),
            b.n_segments(),
            boundary_strip(&mesh).len(),
            mesh.h,
            mesh.total_area(),
            b.total_length()
        );
    }
    let b = extract_boundary(&build_lshape(0))?;
    println!("\ncoarse boundary loop (start, outward normal):");
    for (seg, n) in b.geometry.iter().zip(&b.outward_normals) {
        println!("  ({:5.2}, {:5.2})  n = ({:2}, {:2})", seg.start[0], seg.start[1], n[0], n[1]);
    }
    let path = "mesh_2.txt";
    build_lshape(2).write_text(std::io::BufWriter::new(std::fs::File::create(path)?))?;
    println!("\nwrote {path}");
    Ok(())
}
