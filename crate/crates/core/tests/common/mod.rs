//! Brute-force quadrature oracle for panel integrals, independent of the
//! library's quadrature code.

#![allow(dead_code)]

use std::f64::consts::PI;

use fembem::geometry::Segment;
use rand::Rng;

pub type Block = [[f64; 3]; 3];

/// Gauss-Legendre nodes and weights on [0, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((0.5 * (1.0 - x), 1.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Tanh-sinh quadrature on [a, b], halving the step until two levels agree to `tol`.
/// Integrable endpoint singularities are handled without special treatment.
pub fn tanh_sinh<const K: usize>(f: &mut impl FnMut(f64) -> [f64; K], a: f64, b: f64, tol: f64) -> [f64; K] {
    let half = 0.5 * (b - a);
    let mut h = 1.0;
    let mut sum = [0.0; K];
    let add = |sum: &mut [f64; K], f: &mut dyn FnMut(f64) -> [f64; K], t: f64, both: bool| -> bool {
        let u = 0.5 * PI * t.sinh();
        let c = u.cosh();
        let e = 1.0 / (u.exp() * c);
        let w = 0.5 * PI * t.cosh() / (c * c) * half;
        let off = half * e;
        if !(off > 0.0) || a + off <= a || b - off >= b || w < 1e-300 {
            return false;
        }
        let fr = f(b - off);
        for k in 0..K {
            sum[k] += w * fr[k];
        }
        if both {
            let fl = f(a + off);
            for k in 0..K {
                sum[k] += w * fl[k];
            }
        }
        true
    };
    let mid = f(a + half);
    for k in 0..K {
        sum[k] = 0.5 * PI * half * mid[k];
    }
    let mut j = 1;
    while add(&mut sum, f, j as f64 * h, true) {
        j += 1;
    }
    let mut prev: [f64; K] = sum.map(|v| v * h);
    for _ in 0..12 {
        h *= 0.5;
        let mut j = 1;
        while add(&mut sum, f, j as f64 * h, true) {
            j += 2;
        }
        let cur = sum.map(|v| v * h);
        let diff = cur.iter().zip(&prev).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prev = cur;
        if diff <= tol {
            break;
        }
    }
    prev
}

fn integrate_with_breaks<const K: usize>(
    f: &mut impl FnMut(f64) -> [f64; K],
    breaks: &mut Vec<f64>,
    tol: f64,
) -> [f64; K] {
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let mut out = [0.0; K];
    for w in breaks.windows(2) {
        let v = tanh_sinh(f, w[0], w[1], tol);
        for k in 0..K {
            out[k] += v[k];
        }
    }
    out
}

fn closest_param(p: [f64; 2], seg: &Segment) -> f64 {
    let d = [seg.end[0] - seg.start[0], seg.end[1] - seg.start[1]];
    let r = [p[0] - seg.start[0], p[1] - seg.start[1]];
    ((r[0] * d[0] + r[1] * d[1]) / (d[0] * d[0] + d[1] * d[1])).clamp(0.0, 1.0)
}

fn at(seg: &Segment, t: f64) -> [f64; 2] {
    [seg.start[0] + t * (seg.end[0] - seg.start[0]), seg.start[1] + t * (seg.end[1] - seg.start[1])]
}

fn len(seg: &Segment) -> f64 {
    ((seg.end[0] - seg.start[0]).powi(2) + (seg.end[1] - seg.start[1]).powi(2)).sqrt()
}

/// `(∫∫ tⁿ sᵐ G |dx||dy|, ∫∫ tⁿ sᵐ ∂G/∂n_y |dx||dy|)` for n, m ≤ 2.
pub fn oracle_moments(test: &Segment, trial: &Segment) -> (Block, Block) {
    let (lx, ly) = (len(test), len(trial));
    let dy = [trial.end[0] - trial.start[0], trial.end[1] - trial.start[1]];
    let dx = [test.end[0] - test.start[0], test.end[1] - test.start[1]];
    // (x − y)·n_y = ((x₀ − y₀) × d_y + t dx × d_y) / |d_y|, exactly zero for collinear panels
    let off0 = ((test.start[0] - trial.start[0]) * dy[1] - (test.start[1] - trial.start[1]) * dy[0]) / ly;
    let slope = (dx[0] * dy[1] - dx[1] * dy[0]) / ly;
    let mut outer = |t: f64| -> [f64; 18] {
        let x = at(test, t);
        let offset = off0 + t * slope;
        let mut inner = |s: f64| -> [f64; 6] {
            let y = at(trial, s);
            let d = [x[0] - y[0], x[1] - y[1]];
            let r2 = d[0] * d[0] + d[1] * d[1];
            if r2 == 0.0 {
                return [0.0; 6];
            }
            let g = -0.5 * r2.ln() / (2.0 * PI);
            let k = offset / (2.0 * PI * r2);
            [g, s * g, s * s * g, k, s * k, s * s * k]
        };
        let mut br = vec![0.0, closest_param(x, trial), 1.0];
        let v = integrate_with_breaks(&mut inner, &mut br, 1e-14);
        let mut out = [0.0; 18];
        let mut tn = 1.0;
        for n in 0..3 {
            for m in 0..3 {
                out[3 * n + m] = tn * v[m];
                out[9 + 3 * n + m] = tn * v[3 + m];
            }
            tn *= t;
        }
        out
    };
    let mut br = vec![0.0, closest_param(trial.start, test), closest_param(trial.end, test), 1.0];
    let v = integrate_with_breaks(&mut outer, &mut br, 1e-13);
    let mut sl = [[0.0; 3]; 3];
    let mut dl = [[0.0; 3]; 3];
    for n in 0..3 {
        for m in 0..3 {
            sl[n][m] = lx * ly * v[3 * n + m];
            dl[n][m] = lx * ly * v[9 + 3 * n + m];
        }
    }
    (sl, dl)
}

/// A random panel pair of the requested relation, lengths in [0.05, 0.4].
pub fn random_pair(rng: &mut impl Rng, relation: usize) -> (Segment, Segment) {
    let p = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
    let a1 = rng.gen_range(0.0..2.0 * PI);
    let l1 = rng.gen_range(0.05..0.4);
    let q = [p[0] + l1 * a1.cos(), p[1] + l1 * a1.sin()];
    let test = Segment::new(p, q);
    match relation {
        0 => {
            if rng.gen::<f64>() < 0.5 {
                (test, test)
            } else {
                (test, Segment::new(q, p))
            }
        }
        1 => {
            // second panel leaves a shared endpoint at an angle away from the first
            let shared = if rng.gen::<f64>() < 0.5 { p } else { q };
            let other = if shared == p { q } else { p };
            let base = (other[1] - shared[1]).atan2(other[0] - shared[0]);
            let ang = base + rng.gen_range(0.25..2.0 * PI - 0.25);
            let l2 = rng.gen_range(0.05..0.4);
            let far = [shared[0] + l2 * ang.cos(), shared[1] + l2 * ang.sin()];
            let trial = if rng.gen::<f64>() < 0.5 { Segment::new(shared, far) } else { Segment::new(far, shared) };
            (test, trial)
        }
        _ => loop {
            let c = [rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)];
            let a2 = rng.gen_range(0.0..2.0 * PI);
            let l2 = rng.gen_range(0.05..0.4);
            let trial = Segment::new(c, [c[0] + l2 * a2.cos(), c[1] + l2 * a2.sin()]);
            if test.distance_to_segment(&trial) > 0.02 {
                break (test, trial);
            }
        },
    }
}
