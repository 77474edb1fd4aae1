//! Radial and parameter integrals: N_{n,k}, the I_{n,k}(η) series and the
//! cutoff-profile independence of the logarithmic coefficient.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{integrate, integrate_to_inf, richardson};
use crate::scalar::{fmt_q, q, GQ, Q};

/// Exact value of N_{n,k} together with its labels.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct IntegralValue {
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
    pub n: u32,
    pub k: u32,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

fn factorial(n: u32) -> Q {
    (1..=n as i128).fold(Q::one(), |a, k| a * q(k))
}

fn binom(n: i64, k: i64) -> Q {
    if k < 0 || n < k || n < 0 {
        if n == -1 && k == 0 {
            return Q::one();
        }
        return Q::zero();
    }
    let mut r = Q::one();
    for j in 0..k {
        r = r * q((n - j) as i128) / q((j + 1) as i128);
    }
    r
}

/// Euler Beta function at positive integers.
pub fn beta_int(x: u32, y: u32) -> Q {
    factorial(x - 1) * factorial(y - 1) / factorial(x + y - 1)
}

fn check_nk(n: u32, k: u32) -> Result<()> {
    if n == 0 || k > n {
        return Err(Error::Domain(format!("N_{{{n},{k}}} needs n ≥ 1 and 0 ≤ k ≤ n")));
    }
    if (n - k) % 2 == 1 {
        return Err(Error::UnsupportedParity(format!(
            "N_{{{n},{k}}} has odd n − k; such terms vanish under the angular average"
        )));
    }
    Ok(())
}

/// N_{n,k} = ∫₀^∞ du u^{n+k−1} (1 − [u(1+i0⁺)]²)^{−n−1}.
///
/// Rotating the contour onto the imaginary axis gives
/// `(−1)^{(n+k)/2} · ½ · B((n+k)/2, (n−k)/2 + 1)`.
pub fn n_integral(n: u32, k: u32) -> Result<IntegralValue> {
    check_nk(n, k)?;
    let x = (n + k) / 2;
    let y = (n - k) / 2 + 1;
    if x < 1 {
        return Err(Error::Domain(format!("B({x},{y}) is singular")));
    }
    let sign = if x.is_multiple_of(2) { Q::one() } else { -Q::one() };
    Ok(IntegralValue { value: sign * beta_int(x, y) / q(2), n, k })
}

/// Real part of the finite-δ integral. The poles of the integrand lie at
/// u = ±1/(1+iδ), both outside the sector 0 ≤ arg u ≤ π/4, so the real
/// half-line may be swung onto the ray arg u = π/4 where the integrand is
/// smooth and quadrature is well conditioned.
fn n_integrand_at(n: u32, k: u32, delta: f64) -> Result<f64> {
    let z = Complex64::new(1.0, delta);
    let rot = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let p = (n + k - 1) as i32;
    let one = Complex64::new(1.0, 0.0);
    let f = |r: f64| {
        let u = rot * r;
        let w = z * u;
        rot * u.powi(p) * (one - w * w).powi(-((n + 1) as i32))
    };
    Ok(integrate_to_inf(f, &[0.0, 0.5, 1.0, 2.0, 4.0], 1e-13)?.re)
}

/// Quadrature oracle for [`n_integral`]: the i0⁺ is replaced by a finite δ
/// on the ladder δ, δ/2, …, δ/16 and extrapolated to δ → 0 (the error is
/// even in δ).
pub fn n_integral_numeric(n: u32, k: u32, delta: f64) -> Result<f64> {
    check_nk(n, k)?;
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::Domain(format!("δ = {delta} must lie in (0, 0.5)")));
    }
    let ladder: Vec<f64> =
        (0..5).map(|j| n_integrand_at(n, k, delta / f64::from(1u32 << j))).collect::<Result<_>>()?;
    let mut table = ladder.clone();
    let mut prev = f64::NAN;
    for p in [2, 4, 6, 8] {
        prev = *table.last().expect("ladder is non-empty");
        table = richardson(&table, p);
    }
    let best = table[0];
    let spread = (prev - best).abs();
    if spread > 1e-7 * (1.0 + best.abs()) {
        return Err(Error::NonConvergence(format!(
            "N_{{{n},{k}}}: extrapolants differ by {spread:.3e} (ladder {ladder:?})"
        )));
    }
    Ok(best)
}

/// Even-power truncated series in η.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EtaSeries {
    /// `even[j]` is the coefficient of η^{2j}.
    #[serde(serialize_with = "ser_qs")]
    pub even: Vec<Q>,
}

fn ser_qs<S: serde::Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(x.len()))?;
    for v in x {
        seq.serialize_element(&fmt_q(v))?;
    }
    seq.end()
}

impl EtaSeries {
    pub fn coeff(&self, power: usize) -> Q {
        if power % 2 == 1 {
            return Q::zero();
        }
        self.even.get(power / 2).copied().unwrap_or_else(Q::zero)
    }

    pub fn constant(&self) -> Q {
        self.coeff(0)
    }

    pub fn eval(&self, eta: f64) -> f64 {
        let e2 = eta * eta;
        self.even.iter().rev().fold(0.0, |acc, c| acc * e2 + *c.numer() as f64 / *c.denom() as f64)
    }
}

impl std::fmt::Display for EtaSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.even.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match j {
                0 => parts.push(fmt_q(c)),
                1 => parts.push(format!("{}·η^2", fmt_q(c))),
                _ => parts.push(format!("{}·η^{}", fmt_q(c), 2 * j)),
            }
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(η^{})", parts.join(" + "), 2 * self.even.len())
    }
}

/// Partial fractions of (s+α)^{−p}(s+β)^{−q} with α − β = 2: returns
/// (c_j, d_j) for j = 1..=p and 1..=q.
fn partial_fractions(p: u32, qq: u32) -> (Vec<Q>, Vec<Q>) {
    let (p, qq) = (p as i64, qq as i64);
    let two = q(2);
    let powq = |b: Q, e: i64| -> Q {
        let mut r = Q::one();
        for _ in 0..e.unsigned_abs() {
            r *= b;
        }
        if e < 0 {
            Q::one() / r
        } else {
            r
        }
    };
    let c = (1..=p).map(|j| powq(-two, -qq) * binom(qq + p - j - 1, p - j) * powq(two, -(p - j))).collect();
    let d = (1..=qq)
        .map(|j| powq(two, -p) * binom(p + qq - j - 1, qq - j) * powq(-Q::one() / two, qq - j))
        .collect();
    (c, d)
}

/// Taylor coefficients of (1 + iση)^{−m} up to η^order, σ = ±1.
fn inv_power_series(m: u32, sigma: i64, order: usize) -> Vec<GQ> {
    (0..=order)
        .map(|r| {
            let b = binom(m as i64 + r as i64 - 1, r as i64);
            let sgn = if r % 2 == 0 { 1 } else { -1 };
            GQ::i_pow(r as i64) * GQ::real(b * q(sgn * sigma.pow(r as u32) as i128))
        })
        .collect()
}

/// All Taylor coefficients (including odd powers) of I_{n,k}(η) up to
/// η^order, where
/// I_{n,k}(η) = Re ∫₀^∞ ds (s+1+iη)^{−(n+1−k)} (s−1+iη)^{−k}.
pub fn i_series_all_powers(n: u32, k: u32, order: usize) -> Result<Vec<Q>> {
    if k > n + 1 {
        return Err(Error::Domain(format!("I_{{{n},{k}}} needs 0 ≤ k ≤ n+1")));
    }
    let p = n + 1 - k;
    let (c, d) = partial_fractions(p, k);
    let mut acc = vec![GQ::zero(); order + 1];
    // ∫₀^∞ (s+a)^{−j} ds = a^{1−j}/(j−1); the j = 1 logarithms are purely
    // imaginary for |α| = |β| and drop out of the real part
    for (j0, cj) in c.iter().enumerate() {
        let j = j0 as u32 + 1;
        if j < 2 || cj.is_zero() {
            continue;
        }
        // α^{1−j} = (1 + iη)^{−(j−1)}
        for (r, t) in inv_power_series(j - 1, 1, order).into_iter().enumerate() {
            acc[r] += t * (*cj / q((j - 1) as i128));
        }
    }
    for (j0, dj) in d.iter().enumerate() {
        let j = j0 as u32 + 1;
        if j < 2 || dj.is_zero() {
            continue;
        }
        // β^{1−j} = (−1)^{j−1} (1 − iη)^{−(j−1)}
        let sgn = if (j - 1).is_multiple_of(2) { q(1) } else { q(-1) };
        for (r, t) in inv_power_series(j - 1, -1, order).into_iter().enumerate() {
            acc[r] += t * (*dj * sgn / q((j - 1) as i128));
        }
    }
    Ok(acc.into_iter().map(|g| g.re).collect())
}

/// Even-power series of I_{n,k}(η) about η = 0⁺ through η^order.
pub fn i_series(n: u32, k: u32, order: usize) -> Result<EtaSeries> {
    if n % 2 == 1 {
        return Err(Error::UnsupportedParity(format!("I_{{{n},{k}}}: odd n contributes nothing")));
    }
    let all = i_series_all_powers(n, k, order)?;
    if let Some((p, c)) = all.iter().enumerate().find(|(p, c)| p % 2 == 1 && !c.is_zero()) {
        return Err(Error::Verification(format!(
            "I_{{{n},{k}}} has a nonzero η^{p} coefficient {}",
            fmt_q(c)
        )));
    }
    Ok(EtaSeries { even: all.into_iter().step_by(2).collect() })
}

/// I_{n,k}(η) at finite η from the partial-fraction closed form (including
/// the logarithms).
pub fn i_closed_form(n: u32, k: u32, eta: f64) -> f64 {
    let p = n + 1 - k;
    let (c, d) = partial_fractions(p, k);
    let alpha = Complex64::new(1.0, eta);
    let beta = Complex64::new(-1.0, eta);
    let f = |x: &Q| *x.numer() as f64 / *x.denom() as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for (j0, cj) in c.iter().enumerate() {
        let j = j0 as i32 + 1;
        total += if j == 1 { -alpha.ln() * f(cj) } else { alpha.powi(1 - j) * (f(cj) / f64::from(j - 1)) };
    }
    for (j0, dj) in d.iter().enumerate() {
        let j = j0 as i32 + 1;
        total += if j == 1 { -beta.ln() * f(dj) } else { beta.powi(1 - j) * (f(dj) / f64::from(j - 1)) };
    }
    total.re
}

/// I_{n,k}(η) by direct quadrature of the u-representation
/// Re ∫₀^∞ du u^{n−1} (1+u[1+iη])^{−(n+1−k)} (1+u[−1+iη])^{−k}.
pub fn i_numeric(n: u32, k: u32, eta: f64) -> Result<f64> {
    let a = Complex64::new(1.0, eta);
    let b = Complex64::new(-1.0, eta);
    let one = Complex64::new(1.0, 0.0);
    let f = |u: f64| {
        (one + a * u).powi(-((n + 1 - k) as i32)) * (one + b * u).powi(-(k as i32)) * u.powi(n as i32 - 1)
    };
    let e = eta.abs();
    let mut br = vec![0.0, 0.5, 1.0 - 4.0 * e, 1.0, 1.0 + 4.0 * e, 2.0, 8.0];
    br.retain(|x| *x >= 0.0);
    br.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(integrate_to_inf(f, &br, 1e-12)?.re)
}

/// ∫_{−∞}^{∞} du u^{n−1} (1+u[1+iη])^{−(n+1−k)} (1+u[−1+iη])^{−k} plus the
/// same with k ↔ n+1−k. Both poles sit in one half plane, so this vanishes.
pub fn whole_line_symmetrized(n: u32, k: u32, eta: f64) -> Result<Complex64> {
    if k > n + 1 {
        return Err(Error::Domain(format!("k = {k} exceeds n + 1 = {}", n + 1)));
    }
    let a = Complex64::new(1.0, eta);
    let b = Complex64::new(-1.0, eta);
    let one = Complex64::new(1.0, 0.0);
    let g = |u: f64, kk: u32| {
        (one + a * u).powi(-((n + 1 - kk) as i32)) * (one + b * u).powi(-(kk as i32)) * u.powi(n as i32 - 1)
    };
    let f = |u: f64| g(u, k) + g(-u, k) + g(u, n + 1 - k) + g(-u, n + 1 - k);
    integrate_to_inf(f, &[0.0, 0.5, 1.0, 1.5, 3.0], 1e-13)
}

/// Cutoff profile f(|p|/Λ).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Profile {
    Step,
    Gaussian,
    Rescaled(Box<Profile>, f64),
}

impl Profile {
    pub fn name(&self) -> String {
        match self {
            Profile::Step => "step θ(1−t)".into(),
            Profile::Gaussian => "gaussian exp(−t²)".into(),
            Profile::Rescaled(p, s) => format!("{} at t/{s}", p.name()),
        }
    }

    /// ∫₁^∞ dp/p f(p/Λ), computed with p = eˣ.
    pub fn radial_integral(&self, lambda: f64) -> Result<f64> {
        match self {
            Profile::Step => Ok(lambda.ln().max(0.0)),
            Profile::Gaussian => {
                let top = lambda.ln() + 4.0;
                let v =
                    integrate(|x| Complex64::new((-(x.exp() / lambda).powi(2)).exp(), 0.0), 0.0, top, 1e-13)?;
                Ok(v.re)
            }
            Profile::Rescaled(p, s) => p.radial_integral(lambda * s),
        }
    }
}

/// Least-squares fit of ∫ dp/p f(p/Λ) = a + b·log Λ over a geometric ladder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogFit {
    pub profile: String,
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn log_coefficient(profile: &Profile) -> Result<LogFit> {
    let lambdas: Vec<f64> = (3..=8).map(|e| 10f64.powi(e)).collect();
    let xs: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = lambdas.iter().map(|&l| profile.radial_integral(l)).collect::<Result<_>>()?;
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    if !slope.is_finite() || max_residual > 1e-6 {
        return Err(Error::Fit(format!("{}: slope {slope}, residual {max_residual:.3e}", profile.name())));
    }
    Ok(LogFit { profile: profile.name(), slope, intercept, max_residual })
}

/// Fits the log Λ coefficient for each profile; all must equal 1.
pub fn log_coeff_f_independence(profiles: &[Profile]) -> Result<Vec<LogFit>> {
    profiles.iter().map(log_coefficient).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;

    #[test]
    fn beta_values() {
        assert_eq!(beta_int(1, 1), q(1));
        assert_eq!(beta_int(2, 3), qf(1, 12));
    }

    #[test]
    fn exact_n_values() {
        let v = |n, k| n_integral(n, k).unwrap().value;
        assert_eq!(v(2, 0), qf(-1, 4));
        assert_eq!(v(2, 2), qf(1, 4));
        assert_eq!(v(4, 0), qf(1, 24));
        assert_eq!(v(4, 2), qf(-1, 24));
        assert_eq!(v(4, 4), qf(1, 8));
    }

    #[test]
    fn odd_parity_rejected() {
        assert!(matches!(n_integral(2, 1), Err(Error::UnsupportedParity(_))));
        assert!(matches!(n_integral(2, 3), Err(Error::Domain(_))));
        assert!(matches!(n_integral(0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn numeric_oracle_tracks_exact_n() {
        for (n, k) in [(2, 0), (2, 2), (4, 0), (4, 2), (4, 4), (6, 0), (6, 4)] {
            let exact = n_integral(n, k).unwrap().value;
            let exact = *exact.numer() as f64 / *exact.denom() as f64;
            let num = n_integral_numeric(n, k, 0.1).unwrap();
            assert!((num - exact).abs() < 1e-7, "N_{n},{k}: {num} vs {exact}");
        }
    }

    #[test]
    fn partial_fractions_balance() {
        for p in 1..5 {
            for qq in 1..5 {
                let (c, d) = partial_fractions(p, qq);
                assert_eq!(c[0] + d[0], Q::zero(), "p={p} q={qq}");
            }
        }
    }

    #[test]
    fn n2_series() {
        let s = |k| i_series(2, k, 4).unwrap();
        assert_eq!(s(0).even[..2], [qf(1, 2), qf(-3, 2)]);
        assert_eq!(s(1).even[..2], [qf(-1, 2), qf(1, 2)]);
        assert_eq!(s(2).even[..2], [qf(-1, 2), qf(1, 2)]);
        assert_eq!(s(3).even[..2], [qf(1, 2), qf(-3, 2)]);
    }

    #[test]
    fn closed_form_matches_quadrature_and_series() {
        for k in 0..=3 {
            for eta in [0.3, -0.2, 0.05] {
                let cf = i_closed_form(2, k, eta);
                let num = i_numeric(2, k, eta).unwrap();
                assert!((cf - num).abs() < 1e-9, "k={k} η={eta}: {cf} vs {num}");
            }
            let s = i_series(2, k, 8).unwrap();
            let eta = 0.05;
            assert!((s.eval(eta) - i_closed_form(2, k, eta)).abs() < 1e-11);
        }
    }

    #[test]
    fn odd_n_series_rejected() {
        assert!(matches!(i_series(3, 1, 2), Err(Error::UnsupportedParity(_))));
    }

    #[test]
    fn whole_line_vanishes() {
        for n in [1, 2, 3, 4] {
            for k in 0..=n + 1 {
                let v = whole_line_symmetrized(n, k, 0.5).unwrap();
                assert!(v.norm() < 1e-9, "n={n} k={k}: {v}");
            }
        }
    }

    #[test]
    fn step_profile_is_exact_log() {
        let fit = log_coefficient(&Profile::Step).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-9);
    }
}
