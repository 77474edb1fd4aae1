//! Floating-point quadrature used by the numerical oracles.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_64, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod integration of a complex integrand over [a, b].
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    let mut stack = vec![(a, b, gk15(&f, a, b))];
    let mut total = Complex64::new(0.0, 0.0);
    let mut evals = 0usize;
    while let Some((lo, hi, (val, err))) = stack.pop() {
        let width = (hi - lo) / (b - a).abs().max(1e-300);
        // the second test is the round-off floor of the rule itself
        if err <= tol * width.max(1e-3) || err <= 1e-15 * val.norm() || hi - lo < 1e-13 * (1.0 + lo.abs()) {
            total += val;
            continue;
        }
        evals += 1;
        if evals > 200_000 {
            return Err(Error::NonConvergence(format!(
                "adaptive quadrature on [{a}, {b}] exceeded its budget"
            )));
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, gk15(&f, lo, mid)));
        stack.push((mid, hi, gk15(&f, mid, hi)));
    }
    Ok(total)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, tol).map(|c| c.re)
}

/// ∫ over [a, ∞) split at the given breakpoints; the tail uses x = a' + t/(1−t).
pub fn integrate_to_inf<F: Fn(f64) -> Complex64>(f: F, breaks: &[f64], tol: f64) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        total += integrate(&f, w[0], w[1], tol)?;
    }
    let last = *breaks.last().expect("at least one breakpoint");
    total += integrate(
        |t| {
            let s = 1.0 - t;
            f(last + t / s) / (s * s)
        },
        0.0,
        1.0,
        tol,
    )?;
    Ok(total)
}

/// Deterministic product rule for averages over the unit 3-sphere.
///
/// ξ = (cos χ, sin χ cos θ, sin χ sin θ cos φ, sin χ sin θ sin φ) with
/// Gauss–Legendre in χ and θ and the trapezoidal rule in φ.
pub struct SphereRule {
    nodes: Vec<([f64; 4], f64)>,
}

impl SphereRule {
    pub fn new(order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let pi = std::f64::consts::PI;
        let nphi = 2 * order.max(8);
        let mut nodes = Vec::with_capacity(order * order * nphi);
        let mut total = 0.0;
        for (xc, wc) in x.iter().zip(&w) {
            let chi = 0.5 * pi * (xc + 1.0);
            for (xt, wt) in x.iter().zip(&w) {
                let th = 0.5 * pi * (xt + 1.0);
                for k in 0..nphi {
                    let ph = 2.0 * pi * k as f64 / nphi as f64;
                    let wgt = wc * wt * chi.sin().powi(2) * th.sin();
                    let p = [
                        chi.cos(),
                        chi.sin() * th.cos(),
                        chi.sin() * th.sin() * ph.cos(),
                        chi.sin() * th.sin() * ph.sin(),
                    ];
                    nodes.push((p, wgt));
                    total += wgt;
                }
            }
        }
        for n in nodes.iter_mut() {
            n.1 /= total;
        }
        Self { nodes }
    }

    pub fn average<F: Fn(&[f64; 4]) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().map(|(p, w)| w * f(p)).sum()
    }

    /// ⟨ξ_{a₁}…ξ_{a_k}⟩ for components 1..=4.
    pub fn moment(&self, idx: &[u8]) -> f64 {
        self.average(|p| idx.iter().map(|&i| p[(i - 1) as usize]).product())
    }
}

/// One Richardson step for an error expansion in powers of h^p, with
/// successive step ratio 2.
pub fn richardson(values: &[f64], p: i32) -> Vec<f64> {
    let r = 2f64.powi(p);
    values.windows(2).map(|w| (r * w[1] - w[0]) / (r - 1.0)).collect()
}
