use fembem::bem::{PanelIntegrator, PanelPair};
use fembem::geometry::{Point, Segment};
use fembem::norms::eoc_pair;
use fembem::study::parse_levels;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point> {
    (-0.5..0.5f64, -0.5..0.5f64).prop_map(|(x, y)| [x, y])
}

fn segment() -> impl Strategy<Value = Segment> {
    (point(), 0.0..std::f64::consts::TAU, 0.05..0.4f64)
        .prop_map(|(p, a, l)| Segment::new(p, [p[0] + l * a.cos(), p[1] + l * a.sin()]))
}

fn rigid(s: &Segment, angle: f64, shift: Point) -> Segment {
    let (c, sn) = (angle.cos(), angle.sin());
    let m = |p: Point| [c * p[0] - sn * p[1] + shift[0], sn * p[0] + c * p[1] + shift[1]];
    Segment::new(m(s.start), m(s.end))
}

fn max_diff(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> f64 {
    (0..3).flat_map(|i| (0..3).map(move |j| (a[i][j] - b[i][j]).abs())).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_layer_moments_transpose_under_swap(a in segment(), b in segment()) {
        prop_assume!(a.distance_to_segment(&b) > 0.01);
        let integ = PanelIntegrator::default();
        let ab = integ.moments(&PanelPair::new(a, b).unwrap()).single_layer;
        let ba = integ.moments(&PanelPair::new(b, a).unwrap()).single_layer;
        for n in 0..3 {
            for m in 0..3 {
                prop_assert!((ab[n][m] - ba[m][n]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn moments_are_invariant_under_rigid_motions(
        a in segment(),
        b in segment(),
        angle in 0.0..std::f64::consts::TAU,
        shift in point(),
    ) {
        prop_assume!(a.distance_to_segment(&b) > 0.01);
        let integ = PanelIntegrator::default();
        let m0 = integ.moments(&PanelPair::new(a, b).unwrap());
        let m1 = integ.moments(&PanelPair::new(rigid(&a, angle, shift), rigid(&b, angle, shift)).unwrap());
        prop_assert!(max_diff(&m0.single_layer, &m1.single_layer) < 1e-12);
        prop_assert!(max_diff(&m0.double_layer, &m1.double_layer) < 1e-11);
    }

    #[test]
    fn identical_pair_has_no_double_layer(a in segment(), flip in any::<bool>()) {
        let b = if flip { Segment::new(a.end, a.start) } else { a };
        let m = PanelIntegrator::default().moments(&PanelPair::new(a, b).unwrap());
        prop_assert_eq!(max_diff(&m.double_layer, &[[0.0; 3]; 3]), 0.0);
    }

    #[test]
    fn eoc_recovers_power_laws(p in 0.5..4.0f64, e0 in 1e-6..1e3f64, h0 in 0.01..0.5f64) {
        let h1 = 0.5 * h0;
        let e1 = e0 * 0.5f64.powf(p);
        prop_assert!((eoc_pair(e0, e1, h0, h1).unwrap() - p).abs() < 1e-10);
    }

    #[test]
    fn level_ranges_parse(a in 0usize..10, len in 0usize..5) {
        let b = a + len;
        prop_assert_eq!(parse_levels(&format!("{a}..{b}")).unwrap(), (a, b));
        prop_assert_eq!(parse_levels(&format!(" {a} ..= {b} ")).unwrap(), (a, b));
        prop_assert_eq!(parse_levels(&a.to_string()).unwrap(), (a, a));
    }
}
