//! Galerkin moments of the Laplace single and double layer kernels on pairs
//! of straight panels.
//!
//! For a test panel `x(t)` and trial panel `y(s)`, `t, s ∈ [0, 1]`, the
//! moments are
//!
//! ```text
//! single_layer[n][m] = ∫∫ tⁿ sᵐ G(x, y)          |dx| |dy|,   G = −log|x − y| / 2π
//! double_layer[n][m] = ∫∫ tⁿ sᵐ ∂G/∂n(y)(x, y)   |dx| |dy|,   ∂G/∂n(y) = (x − y)·n(y) / (2π |x − y|²)
//! ```
//!
//! Identical and vertex-sharing panels are integrated in closed form.
//! Disjoint panels use the closed-form inner integral and a Gauss rule in
//! `t`, bisecting the test panel until each piece is at least its own length
//! away from the trial panel.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{self, Point, Segment};
use crate::quadrature::GaussRule;

/// Highest local polynomial degree on either panel.
pub const MAX_DEGREE: usize = 2;
const NM: usize = MAX_DEGREE + 1;
/// Point moments are needed one degree higher for the vertex-sharing split.
const NP: usize = NM + 1;

pub type Moments = [[f64; NM]; NM];

/// Trial-panel points farther than this many panel lengths use Gauss quadrature
/// for the inner integral; the closed form loses digits to cancellation there.
const FAR_FIELD_RATIO: f64 = 2.0;
const FAR_FIELD_POINTS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PanelRelation {
    Identical,
    /// Sharing exactly one endpoint.
    Adjacent,
    Disjoint,
}

#[derive(Clone, Copy, Debug)]
pub struct PanelPair {
    pub test: Segment,
    pub trial: Segment,
    pub relation: PanelRelation,
}

impl PanelPair {
    /// Classifies the pair by exact endpoint coincidence.
    pub fn new(test: Segment, trial: Segment) -> Result<Self> {
        for s in [&test, &trial] {
            let l = s.length();
            if l.is_nan() || l <= 0.0 {
                return Err(Error::DegenerateSegment(l));
            }
        }
        let same = |a: Point, b: Point| a == b;
        let relation = if (same(test.start, trial.start) && same(test.end, trial.end))
            || (same(test.start, trial.end) && same(test.end, trial.start))
        {
            PanelRelation::Identical
        } else if same(test.start, trial.start)
            || same(test.start, trial.end)
            || same(test.end, trial.start)
            || same(test.end, trial.end)
        {
            PanelRelation::Adjacent
        } else {
            PanelRelation::Disjoint
        };
        Ok(PanelPair { test, trial, relation })
    }

    /// Uses a relation already known from mesh topology.
    pub fn with_relation(test: Segment, trial: Segment, relation: PanelRelation) -> Self {
        PanelPair { test, trial, relation }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PanelMoments {
    pub single_layer: Moments,
    pub double_layer: Moments,
}

impl PanelMoments {
    /// Contracts moments with local test and trial polynomials.
    pub fn single_layer_entry(&self, test: &Poly, trial: &Poly) -> f64 {
        contract(&self.single_layer, test, trial)
    }

    pub fn double_layer_entry(&self, test: &Poly, trial: &Poly) -> f64 {
        contract(&self.double_layer, test, trial)
    }
}

/// Monomial coefficients `c[0] + c[1] σ + c[2] σ²` of a local basis polynomial.
pub type Poly = [f64; NM];

fn contract(m: &Moments, p: &Poly, q: &Poly) -> f64 {
    let mut s = 0.0;
    for n in 0..NM {
        if p[n] == 0.0 {
            continue;
        }
        for k in 0..NM {
            s += p[n] * q[k] * m[n][k];
        }
    }
    s
}

/// Evaluates the panel moments of [`PanelPair`]s.
#[derive(Clone, Debug)]
pub struct PanelIntegrator {
    outer: GaussRule,
    far: GaussRule,
}

impl Default for PanelIntegrator {
    fn default() -> Self {
        PanelIntegrator::new(16)
    }
}

impl PanelIntegrator {
    /// `outer_points` is the Gauss order of the outer rule for disjoint pairs.
    pub fn new(outer_points: usize) -> Self {
        PanelIntegrator { outer: GaussRule::new(outer_points.max(1)), far: GaussRule::new(FAR_FIELD_POINTS) }
    }

    pub fn moments(&self, pair: &PanelPair) -> PanelMoments {
        match pair.relation {
            PanelRelation::Identical => identical_moments(&pair.test, &pair.trial),
            PanelRelation::Adjacent => adjacent_moments(&pair.test, &pair.trial),
            PanelRelation::Disjoint => self.disjoint_moments(&pair.test, &pair.trial),
        }
    }

    /// `∫ σᵐ log|p − y(σ)| dσ` and `∫ σᵐ |p − y(σ)|⁻² dσ` over the trial panel parameter.
    pub fn point_moments(&self, p: Point, seg: &Segment) -> ([f64; NP], [f64; NP]) {
        if seg.distance_to_point(p) > FAR_FIELD_RATIO * seg.length() {
            gauss_point_moments(&self.far, p, seg)
        } else {
            analytic_point_moments(p, seg)
        }
    }

    fn disjoint_moments(&self, test: &Segment, trial: &Segment) -> PanelMoments {
        let mut out = PanelMoments::default();
        self.disjoint_piece(test, trial, 0.0, 1.0, 0, &mut out);
        let jac = test.length() * trial.length();
        for n in 0..NM {
            for m in 0..NM {
                out.single_layer[n][m] *= -jac / (2.0 * PI);
                out.double_layer[n][m] *= jac / (2.0 * PI);
            }
        }
        out
    }

    fn disjoint_piece(&self, test: &Segment, trial: &Segment, ta: f64, tb: f64, depth: usize, out: &mut PanelMoments) {
        let piece = Segment::new(test.point_at(ta), test.point_at(tb));
        if depth < 40 && piece.distance_to_segment(trial) < piece.length() {
            let tm = 0.5 * (ta + tb);
            self.disjoint_piece(test, trial, ta, tm, depth + 1, out);
            self.disjoint_piece(test, trial, tm, tb, depth + 1, out);
            return;
        }
        let n_y = trial.normal();
        for (xi, w) in self.outer.iter() {
            let t = ta + (tb - ta) * xi;
            let wt = w * (tb - ta);
            let x = test.point_at(t);
            let (lg, inv) = self.point_moments(x, trial);
            let normal_offset = geometry::dot(geometry::sub(x, trial.start), n_y);
            let mut tn = 1.0;
            for n in 0..NM {
                for m in 0..NM {
                    out.single_layer[n][m] += wt * tn * lg[m];
                    out.double_layer[n][m] += wt * tn * normal_offset * inv[m];
                }
                tn *= t;
            }
        }
    }
}

fn gauss_point_moments(rule: &GaussRule, p: Point, seg: &Segment) -> ([f64; NP], [f64; NP]) {
    let mut lg = [0.0; NP];
    let mut inv = [0.0; NP];
    for (s, w) in rule.iter() {
        let r2 = {
            let d = geometry::sub(p, seg.point_at(s));
            geometry::dot(d, d)
        };
        let (l, i) = (0.5 * r2.ln(), 1.0 / r2);
        let mut sm = w;
        for m in 0..NP {
            lg[m] += sm * l;
            inv[m] += sm * i;
            sm *= s;
        }
    }
    (lg, inv)
}

/// Closed-form point moments. `p` must not lie on the closed segment.
pub fn analytic_point_moments(p: Point, seg: &Segment) -> ([f64; NP], [f64; NP]) {
    let d = seg.direction();
    let l2 = geometry::dot(d, d);
    let rel = geometry::sub(p, seg.start);
    let t0 = geometry::dot(rel, d) / l2;
    let eta = geometry::cross(d, rel).abs() / l2;
    let (u0, u1) = (-t0, 1.0 - t0);
    let eta2 = eta * eta;

    // db[j] = ∫ u^j / (u² + η²) du over [u0, u1]
    const NB: usize = NP + 2;
    let mut db = [0.0; NB];
    db[0] = if eta == 0.0 {
        (u1 - u0) / (u0 * u1)
    } else if u0 * u1 > 0.0 {
        (eta * (u1 - u0) / (eta2 + u0 * u1)).atan() / eta
    } else {
        ((u1 / eta).atan() - (u0 / eta).atan()) / eta
    };
    db[1] = 0.5 * ((u1 * u1 + eta2) / (u0 * u0 + eta2)).ln();
    for j in 2..NB {
        let jm = (j - 1) as i32;
        db[j] = (u1.powi(jm) - u0.powi(jm)) / jm as f64 - eta2 * db[j - 2];
    }
    // da[j] = ∫ u^j log(u² + η²) du over [u0, u1]
    let boundary_term = |u: f64, j: i32| {
        if u == 0.0 {
            0.0
        } else {
            u.powi(j + 1) * (u * u + eta2).ln()
        }
    };
    let mut da = [0.0; NP];
    for j in 0..NP {
        let jf = j as f64 + 1.0;
        da[j] = (boundary_term(u1, j as i32) - boundary_term(u0, j as i32)) / jf - 2.0 / jf * db[j + 2];
    }

    let log_l = 0.5 * l2.ln();
    let mut lg = [0.0; NP];
    let mut inv = [0.0; NP];
    for m in 0..NP {
        let mut a = 0.0;
        let mut b = 0.0;
        for j in 0..=m {
            let c = binomial(m, j) * t0.powi((m - j) as i32);
            a += c * da[j];
            b += c * db[j];
        }
        lg[m] = log_l / (m as f64 + 1.0) + 0.5 * a;
        inv[m] = b / l2;
    }
    (lg, inv)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// `∫₀¹∫₀¹ tⁿ sᵐ log|s − t| ds dt`.
pub fn log_diagonal_moment(n: usize, m: usize) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let p = n + m + 1;
    let pf = p as f64;
    let tail: f64 = (0..=m).map(|j| 1.0 / ((j as f64 + 1.0) * (nf + mf - j as f64 + 1.0))).sum();
    (-harmonic(n + 1) / (nf + 1.0) + harmonic(p + 1) / (pf + 1.0) - 1.0 / ((pf + 1.0) * (pf + 1.0)) - tail) / (mf + 1.0)
}

fn identical_moments(test: &Segment, trial: &Segment) -> PanelMoments {
    let l = test.length();
    let flipped = test.start != trial.start;
    let mut sl = [[0.0; NM]; NM];
    for n in 0..NM {
        for m in 0..NM {
            let (nf, mf) = (n as f64, m as f64);
            sl[n][m] = -(l * l) / (2.0 * PI) * (l.ln() / ((nf + 1.0) * (mf + 1.0)) + log_diagonal_moment(n, m));
        }
    }
    let mut out = PanelMoments { single_layer: sl, double_layer: [[0.0; NM]; NM] };
    if flipped {
        // trial runs the other way: s = 1 − s'
        out.single_layer = reparametrize(&out.single_layer, false, true);
    }
    out
}

/// Rewrites moments from parameters (t', s') to (t, s) where `t = 1 − t'` if
/// `flip_test` (likewise for s).
fn reparametrize(mom: &Moments, flip_test: bool, flip_trial: bool) -> Moments {
    let tx = flip_matrix(flip_test);
    let ty = flip_matrix(flip_trial);
    let mut out = [[0.0; NM]; NM];
    for n in 0..NM {
        for m in 0..NM {
            let mut s = 0.0;
            for j in 0..NM {
                for i in 0..NM {
                    s += tx[n][j] * ty[m][i] * mom[j][i];
                }
            }
            out[n][m] = s;
        }
    }
    out
}

/// Row n holds the monomial coefficients of `tⁿ` in terms of `t'` (t = 1 − t' if flipped).
fn flip_matrix(flip: bool) -> [[f64; NM]; NM] {
    let mut t = [[0.0; NM]; NM];
    for n in 0..NM {
        if flip {
            for j in 0..=n {
                t[n][j] = binomial(n, j) * if j % 2 == 0 { 1.0 } else { -1.0 };
            }
        } else {
            t[n][n] = 1.0;
        }
    }
    t
}

/// Panels sharing the vertex `q`. With `x = q + t' u` and `y = q + s' w`, the
/// unit square is split along `s' = t'` and each triangle collapsed onto the
/// shared vertex, which leaves one-dimensional point moments only.
fn adjacent_moments(test: &Segment, trial: &Segment) -> PanelMoments {
    let (q, flip_test, flip_trial) = if test.start == trial.start {
        (test.start, false, false)
    } else if test.start == trial.end {
        (test.start, false, true)
    } else if test.end == trial.start {
        (test.end, true, false)
    } else {
        (test.end, true, true)
    };
    let far_test = if flip_test { test.start } else { test.end };
    let far_trial = if flip_trial { trial.start } else { trial.end };
    let u = geometry::sub(far_test, q);
    let w = geometry::sub(far_trial, q);
    let origin = [0.0, 0.0];
    let along_w = Segment::new(origin, w);
    let along_u = Segment::new(origin, u);
    // region s' < t': point u against [0, w]; region t' < s': point w against [0, u]
    let (lg_u, inv_u) = analytic_point_moments(u, &along_w);
    let (lg_w, inv_w) = analytic_point_moments(w, &along_u);
    let u_dot_n = geometry::dot(u, trial.normal());
    let jac = test.length() * trial.length();
    let mut sl = [[0.0; NM]; NM];
    let mut dl = [[0.0; NM]; NM];
    for n in 0..NM {
        for m in 0..NM {
            let (nf, mf) = (n as f64, m as f64);
            let p = nf + mf + 2.0;
            let log_part = -1.0 / (p * p * (mf + 1.0)) + lg_u[m] / p - 1.0 / (p * p * (nf + 1.0)) + lg_w[n] / p;
            sl[n][m] = -jac / (2.0 * PI) * log_part;
            dl[n][m] = jac / (2.0 * PI) * u_dot_n * (inv_u[m] + inv_w[n + 1]) / (nf + mf + 1.0);
        }
    }
    PanelMoments {
        single_layer: reparametrize(&sl, flip_test, flip_trial),
        double_layer: reparametrize(&dl, flip_test, flip_trial),
    }
}
