//! Quadrature rules: Gauss–Legendre on intervals, collapsed Gauss rules on
//! triangles, and a globally adaptive Gauss–Kronrod integrator.

use std::f64::consts::PI;

/// Gauss–Legendre rule on [0, 1].
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// `n`-point rule, exact for polynomials of degree `2n − 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss rule needs at least one point");
        let (x, w) = legendre_nodes(n);
        GaussRule { nodes: x.iter().map(|&t| 0.5 * (t + 1.0)).collect(), weights: w.iter().map(|&v| 0.5 * v).collect() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Integrates `f` over [a, b].
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let h = b - a;
        self.iter().map(|(x, w)| w * f(a + h * x)).sum::<f64>() * h
    }
}

/// Nodes and weights on [−1, 1] by Newton iteration on the three-term recurrence.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Quadrature on the reference triangle with vertices (0,0), (1,0), (0,1),
/// obtained by collapsing a tensor Gauss rule onto the triangle.
///
/// Points are given in barycentric form `(λ0, λ1, λ2)` so they can be mapped
/// to any affine triangle. Weights sum to 1/2.
#[derive(Clone, Debug)]
pub struct TriangleRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl TriangleRule {
    /// Rule exact for polynomials of total degree `degree`.
    pub fn new(degree: usize) -> Self {
        // Collapsing adds one degree in the radial direction.
        let n = (degree + 2).div_ceil(2).max(1);
        let g = GaussRule::new(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for (xi, wx) in g.iter() {
            for (eta, wy) in g.iter() {
                let x = xi;
                let y = (1.0 - xi) * eta;
                points.push([1.0 - x - y, x, y]);
                weights.push(wx * wy * (1.0 - xi));
            }
        }
        TriangleRule { points, weights, degree }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn kronrod15<const N: usize>(f: &mut impl FnMut(f64) -> [f64; N], a: f64, b: f64) -> ([f64; N], f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    let fc = f(c);
    for j in 0..N {
        k[j] = WGK[7] * fc[j];
        g[j] = WG[3] * fc[j];
    }
    for i in 0..7 {
        let f1 = f(c - h * XGK[i]);
        let f2 = f(c + h * XGK[i]);
        for j in 0..N {
            k[j] += WGK[i] * (f1[j] + f2[j]);
            if i % 2 == 1 {
                g[j] += WG[i / 2] * (f1[j] + f2[j]);
            }
        }
    }
    let mut err = 0.0f64;
    for j in 0..N {
        k[j] *= h;
        g[j] *= h;
        err = err.max((k[j] - g[j]).abs());
    }
    (k, err)
}

/// Globally adaptive G7/K15 integration of a vector-valued integrand.
///
/// Keeps bisecting the subinterval with the largest error estimate until the
/// summed estimate drops below `tol` (absolute, max-norm over components) or
/// `max_intervals` is reached. Handles integrable endpoint singularities such
/// as `log t` well; interior singularities should be placed on `breaks`.
pub fn integrate_adaptive<const N: usize>(
    mut f: impl FnMut(f64) -> [f64; N],
    breaks: &[f64],
    tol: f64,
    max_intervals: usize,
) -> [f64; N] {
    struct Piece<const N: usize> {
        a: f64,
        b: f64,
        val: [f64; N],
        err: f64,
    }
    let mut pieces: Vec<Piece<N>> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (val, err) = kronrod15(&mut f, w[0], w[1]);
            Piece { a: w[0], b: w[1], val, err }
        })
        .collect();
    while pieces.len() < max_intervals {
        let total: f64 = pieces.iter().map(|p| p.err).sum();
        if total <= tol {
            break;
        }
        let (idx, _) = pieces.iter().enumerate().max_by(|x, y| x.1.err.total_cmp(&y.1.err)).expect("nonempty");
        let p = pieces.swap_remove(idx);
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            pieces.push(Piece { err: 0.0, ..p });
            continue;
        }
        let (v1, e1) = kronrod15(&mut f, p.a, m);
        let (v2, e2) = kronrod15(&mut f, m, p.b);
        pieces.push(Piece { a: p.a, b: m, val: v1, err: e1 });
        pieces.push(Piece { a: m, b: p.b, val: v2, err: e2 });
    }
    let mut out = [0.0; N];
    for p in &pieces {
        for j in 0..N {
            out[j] += p.val[j];
        }
    }
    out
}

/// Scalar convenience wrapper around [`integrate_adaptive`] on [a, b].
pub fn integrate_adaptive_scalar(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    integrate_adaptive(|x| [f(x)], &[a, b], tol, 4000)[0]
}
