mod common;

use std::f64::consts::PI;

use common::{oracle_moments, random_pair};
use fembem::bem::{slp_panel_moments, PanelIntegrator, PanelPair, PanelRelation};
use fembem::geometry::Segment;
use fembem::Error;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn max_diff(pair: &PanelPair) -> f64 {
    let m = PanelIntegrator::default().moments(pair);
    let (sl, dl) = oracle_moments(&pair.test, &pair.trial);
    let mut d: f64 = 0.0;
    for n in 0..3 {
        for k in 0..3 {
            d = d.max((m.single_layer[n][k] - sl[n][k]).abs());
            d = d.max((m.double_layer[n][k] - dl[n][k]).abs());
        }
    }
    d
}

#[test]
fn randomized_pairs_match_quadrature() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = [0.0f64; 3];
    for i in 0..60 {
        let rel = i % 3;
        let (a, b) = random_pair(&mut rng, rel);
        let pair = PanelPair::new(a, b).unwrap();
        let expected = [PanelRelation::Identical, PanelRelation::Adjacent, PanelRelation::Disjoint][rel];
        assert_eq!(pair.relation, expected);
        let d = max_diff(&pair);
        worst[rel] = worst[rel].max(d);
        assert!(d < 1e-10, "pair {i} ({:?}) differs by {d:e}", pair.relation);
    }
    println!("worst differences (identical, adjacent, disjoint): {worst:?}");
}

#[test]
fn identical_constant_closed_form() {
    for l in [0.05, 0.2, 0.4] {
        let s = Segment::new([0.1, -0.3], [0.1 + l * 0.6, -0.3 + l * 0.8]);
        let m = slp_panel_moments(&PanelPair::new(s, s).unwrap(), 0, 0, &PanelIntegrator::default()).unwrap();
        let exact = l * l / (2.0 * PI) * (1.5 - l.ln());
        assert!((m[(0, 0)] - exact).abs() < 1e-14, "L={l}");
    }
    let s = Segment::new([0.0, 0.0], [0.2, 0.0]);
    let m = slp_panel_moments(&PanelPair::new(s, s).unwrap(), 0, 0, &PanelIntegrator::default()).unwrap();
    assert!((m[(0, 0)] - 0.0197953).abs() < 1e-7);
}

#[test]
fn swapping_panels_transposes_the_block() {
    let integ = PanelIntegrator::default();
    let a = Segment::new([0.0, 0.0], [0.2, 0.05]);
    let pairs = [
        Segment::new([0.2, 0.05], [0.1, 0.3]),
        Segment::new([0.5, 0.4], [0.3, 0.6]),
        Segment::new([0.2, 0.05], [0.0, 0.0]),
    ];
    for b in pairs {
        for deg in 0..=2 {
            let ab = slp_panel_moments(&PanelPair::new(a, b).unwrap(), deg, deg, &integ).unwrap();
            let ba = slp_panel_moments(&PanelPair::new(b, a).unwrap(), deg, deg, &integ).unwrap();
            for i in 0..ab.nrows() {
                for j in 0..ab.ncols() {
                    assert!((ab[(i, j)] - ba[(j, i)]).abs() < 1e-14);
                }
            }
        }
    }
}

#[test]
fn far_pair_matches_tensor_gauss() {
    let a = Segment::new([0.0, 0.0], [0.2, 0.0]);
    let b = Segment::new([3.0, 1.0], [3.1, 1.2]);
    let pair = PanelPair::new(a, b).unwrap();
    assert_eq!(pair.relation, PanelRelation::Disjoint);
    let m = PanelIntegrator::default().moments(&pair);
    let g = common::gauss_legendre(20);
    let (la, lb) = (a.length(), b.length());
    let n = b.normal();
    for p in 0..3 {
        for q in 0..3 {
            let (mut sl, mut dl) = (0.0, 0.0);
            for &(t, wt) in &g {
                for &(s, ws) in &g {
                    let x = a.point_at(t);
                    let y = b.point_at(s);
                    let d = [x[0] - y[0], x[1] - y[1]];
                    let r2 = d[0] * d[0] + d[1] * d[1];
                    let w = wt * ws * la * lb * t.powi(p) * s.powi(q);
                    sl += w * (-0.5 * r2.ln() / (2.0 * PI));
                    dl += w * (d[0] * n[0] + d[1] * n[1]) / (2.0 * PI * r2);
                }
            }
            assert!((m.single_layer[p as usize][q as usize] - sl).abs() < 1e-12);
            assert!((m.double_layer[p as usize][q as usize] - dl).abs() < 1e-12);
        }
    }
}

#[test]
fn degenerate_segments_are_rejected() {
    let p = [0.1, 0.1];
    let z = Segment::new(p, p);
    let s = Segment::new([0.0, 0.0], [1.0, 0.0]);
    assert!(matches!(PanelPair::new(z, s), Err(Error::DegenerateSegment(_))));
    let pair = PanelPair::with_relation(s, z, PanelRelation::Disjoint);
    assert!(matches!(slp_panel_moments(&pair, 0, 0, &PanelIntegrator::default()), Err(Error::DegenerateSegment(_))));
    assert!(matches!(
        slp_panel_moments(&PanelPair::new(s, s).unwrap(), 3, 0, &PanelIntegrator::default()),
        Err(Error::UnsupportedDegree(3))
    ));
}
