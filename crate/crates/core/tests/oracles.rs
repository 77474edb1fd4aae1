use diracdet::clifford::{explicit_matrices, Mat4};
use diracdet::expansion::{
    compute_m2_exact, compute_table1, imaginary_part_polynomial, real_part_polynomial, ChiralitySignature,
    CoefficientTable,
};
use diracdet::integrals::{i_series, n_integral};
use diracdet::numeric::integrate_to_inf;
use diracdet::tensor::Rank4Decomposition;
use diracdet::GQ;
use num_complex::Complex64;

type M = [[Complex64; 4]; 4];

fn to_c(m: &Mat4) -> M {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let (re, im) = m.0[r][c].to_f64_pair();
            out[r][c] = Complex64::new(re, im);
        }
    }
    out
}

fn mul(a: &M, b: &M) -> M {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

fn scale(a: &M, s: Complex64) -> M {
    a.map(|row| row.map(|x| x * s))
}

fn add(a: &M, b: &M) -> M {
    let mut out = *a;
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] += b[r][c];
        }
    }
    out
}

fn trace(a: &M) -> Complex64 {
    (0..4).map(|k| a[k][k]).sum()
}

fn identity() -> M {
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (k, row) in out.iter_mut().enumerate() {
        row[k] = Complex64::new(1.0, 0.0);
    }
    out
}

/// Simpson's rule on [a, b] with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for j in 1..n {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + j as f64 * h);
    }
    s * h / 3.0
}

/// N_{n,k} with the contour swung onto the positive imaginary axis,
/// u = i t, then t = tan θ.
fn n_oracle(n: u32, k: u32) -> f64 {
    let p = (n + k) as i32;
    let phase = match p.rem_euclid(4) {
        0 => 1.0,
        2 => -1.0,
        _ => panic!("odd n + k"),
    };
    let f = |th: f64| th.sin().powi(p - 1) * th.cos().powi(2 * n as i32 + 1 - p);
    phase * simpson(f, 0.0, std::f64::consts::FRAC_PI_2, 2000)
}

#[test]
fn n_integral_against_imaginary_axis() {
    for (n, k) in [(2, 0), (2, 2), (4, 0), (4, 2), (4, 4), (6, 2)] {
        let exact = n_integral(n, k).unwrap().value;
        let x = *exact.numer() as f64 / *exact.denom() as f64;
        let num = n_oracle(n, k);
        assert!((x - num).abs() < 1e-10, "N_{n},{k}: {x} vs {num}");
    }
}

/// Re ∫₀^∞ du u ⟨tr R Γ₁ R Γ₂ R⟩ with R = (1 + u(ξ̸ + iη))⁻¹, averaged over
/// ξ = ±e_a, at vertex indices (ν₁, ν₂).
fn m2_brute(s: [u8; 2], nu: [usize; 2], eta: f64) -> f64 {
    let rep = explicit_matrices();
    let g: Vec<M> = rep.gamma.iter().map(to_c).collect();
    let g5 = to_c(&rep.gamma5);
    let i = Complex64::new(0.0, 1.0);
    let vertex = |s: u8, nu: usize| if s == 5 { scale(&mul(&g[nu], &g5), i) } else { g[nu] };
    let v1 = vertex(s[0], nu[0]);
    let v2 = vertex(s[1], nu[1]);
    let one = identity();
    let mut total = 0.0;
    for a in 0..4 {
        for sign in [1.0, -1.0] {
            let xi = scale(&g[a], Complex64::new(sign, 0.0));
            let f = |u: f64| {
                let z = Complex64::new(1.0, u * eta);
                let den = z * z - u * u;
                let r = scale(&add(&scale(&one, z), &scale(&xi, Complex64::new(-u, 0.0))), 1.0 / den);
                let w = mul(&mul(&mul(&mul(&r, &v1), &r), &v2), &r);
                trace(&w) * u
            };
            let br = [0.0, 0.5, 1.0 - 4.0 * eta, 1.0, 1.0 + 4.0 * eta, 2.0, 8.0];
            total += integrate_to_inf(f, &br, 1e-12).unwrap().re;
        }
    }
    total / 8.0
}

/// Fits c₀ + c₂η² + c₄η⁴ through three small η.
fn fit_even(vals: [(f64, f64); 3]) -> (f64, f64) {
    let [(x0, y0), (x1, y1), (x2, y2)] = vals.map(|(e, y)| (e * e, y));
    let l = |x: f64, xa: f64, xb: f64| (x - xa) * (x - xb);
    let c0 = y0 * l(0.0, x1, x2) / l(x0, x1, x2)
        + y1 * l(0.0, x0, x2) / l(x1, x0, x2)
        + y2 * l(0.0, x0, x1) / l(x2, x0, x1);
    // derivative of the Lagrange interpolant in x at x = 0
    let d = |xa: f64, xb: f64, xs: f64| -(xa + xb) / l(xs, xa, xb);
    let c2 = y0 * d(x1, x2, x0) + y1 * d(x0, x2, x1) + y2 * d(x0, x1, x2);
    (c0, c2)
}

#[test]
fn exact_m2_against_brute_force_resolvent() {
    let exact = compute_m2_exact(4).unwrap();
    for s in [[0u8, 0], [5, 5], [0, 5]] {
        let etas = [0.04, 0.02, 0.01];
        let vals = etas.map(|e| (e, m2_brute(s, [0, 0], e)));
        let (c0, c2) = fit_even(vals);
        let entry = exact.get(&s).unwrap();
        let (a, _) = entry.a.to_f64_pair();
        let (a0, _) = entry.a0.to_f64_pair();
        assert!((c0 - a).abs() < 1e-6, "{s:?}: Λ² {c0} vs {a}");
        assert!((2.0 * c2 - a0).abs() < 1e-2, "{s:?}: m² log {} vs {a0}", 2.0 * c2);
        let off = m2_brute(s, [0, 1], 0.02);
        assert!(off.abs() < 1e-9, "{s:?}: off-diagonal {off}");
    }
}

#[test]
fn eta_series_constants_feed_the_quadratic_route() {
    let m = compute_m2_exact(2).unwrap();
    for k in 0..=3 {
        assert_eq!(m.series[k], i_series(2, k as u32, 2).unwrap());
    }
}

/// Coefficients of the tensor relabelled 1→2→3→4→1.
fn rotate(r: &Rank4Decomposition) -> Rank4Decomposition {
    Rank4Decomposition { a: r.c, b: r.b, c: r.a, d: -r.d }
}

#[test]
fn quartic_assembly_is_cyclically_symmetric() {
    let t = compute_table1().unwrap();
    let mut sym = t.clone();
    let mut asymmetric = false;
    for e in sym.entries.iter_mut() {
        // T̄(s) = ¼ Σ_r R^r T(rot⁻ʳ s)
        let mut acc = Rank4Decomposition::default();
        let mut sig = e.signature.clone();
        for r in 0..4 {
            let mut c = *t.get(&sig).unwrap();
            for _ in 0..r {
                c = rotate(&c);
            }
            acc = Rank4Decomposition { a: acc.a + c.a, b: acc.b + c.b, c: acc.c + c.c, d: acc.d + c.d };
            // rot⁻¹: shift right
            let mut v = sig.as_slice().to_vec();
            v.rotate_right(1);
            sig = ChiralitySignature::new(v).unwrap();
        }
        let acc = acc.scale(GQ::frac(1, 4));
        asymmetric |= acc != e.computed;
        e.computed = acc;
    }
    assert!(asymmetric, "the table alone is not cyclic; the check would be vacuous");
    let same = |a: &CoefficientTable, b: &CoefficientTable| {
        real_part_polynomial(a).equal_modulo_cyclic(&real_part_polynomial(b))
            && imaginary_part_polynomial(a).equal_modulo_cyclic(&imaginary_part_polynomial(b))
    };
    assert!(same(&t, &sym));
}
