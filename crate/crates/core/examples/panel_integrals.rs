//! Single and double layer moments for the three panel relations, and the
//! closed-form self-interaction of a constant density.

use std::f64::consts::PI;

use fembem::bem::{slp_panel_moments, PanelIntegrator, PanelPair};
use fembem::geometry::Segment;

fn main() -> fembem::Result<()> {
    let integ = PanelIntegrator::default();
    let a = Segment::new([0.0, 0.0], [0.2, 0.0]);
    let pairs = [
        ("identical", a),
        ("adjacent", Segment::new([0.2, 0.0], [0.2, 0.2])),
        ("disjoint", Segment::new([0.3, 0.1], [0.5, 0.25])),
    ];
    for (name, b) in pairs {
        let pair = PanelPair::new(a, b)?;
        let m = integ.moments(&pair);
        println!("{name} ({:?})", pair.relation);
        for n in 0..3 {
            println!(
                "  V {:?}   K {:?}",
                m.single_layer[n].map(|v| (v * 1e6).round() / 1e6),
                m.double_layer[n].map(|v| (v * 1e6).round() / 1e6)
            );
        }
    }
    println!("\nconstant density on one panel vs (L²/2π)(3/2 − ln L):");
    for l in [0.05, 0.2, 0.4] {
        let s = Segment::new([0.0, 0.0], [l, 0.0]);
        let got = slp_panel_moments(&PanelPair::new(s, s)?, 0, 0, &integ)?[(0, 0)];
        let exact = l * l / (2.0 * PI) * (1.5 - l.ln());
        println!("  L = {l:<4}  {got:.15}  {exact:.15}  diff {:.1e}", (got - exact).abs());
    }
    Ok(())
}
