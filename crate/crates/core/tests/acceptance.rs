use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use diracdet::clifford::{clifford_check, enum_trace_oracle, gamma_trace, GammaWord};
use diracdet::expansion::{
    assemble_s4_and_decompose, compute_jn, compute_m2_exact, compute_s_log_report, compute_table1,
    ChiralitySignature,
};
use diracdet::integrals::{
    i_series, i_series_all_powers, log_coefficient, n_integral, n_integral_numeric, Profile,
};
use diracdet::ncpoly::{
    apply_to_one, build_expression, drop_axial, field_strength, gauge_variation_vector, Expr, FieldKind,
    FieldLetter, FieldPolynomial,
};
use diracdet::numeric::SphereRule;
use diracdet::scalar::{qf, Q};
use diracdet::tensor::{sphere_moment, Ix, Monomial, TensorExpr};
use diracdet::{PiCoefficient, GQ};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, ok: bool, detail: impl std::fmt::Display) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {detail}");
}

fn zero() -> GQ {
    GQ::int(0)
}

fn average(idx: &[u8]) -> GQ {
    let xis = idx.iter().map(|&v| Ix::val(v).unwrap()).collect();
    TensorExpr::monomial(GQ::int(1), Monomial { xis, ..Monomial::default() })
        .angular_average()
        .unwrap()
        .scalar_part()
}

fn tuples(len: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..4usize.pow(len as u32))
        .map(move |m| (0..len).map(|j| (m / 4usize.pow(j as u32) % 4) as u8 + 1).collect())
}

#[test]
fn criterion_01_clifford_relations() {
    let start = Instant::now();
    let checks = clifford_check();
    let anticommutators = checks.iter().filter(|c| c.name.starts_with("{γ^")).count();
    let bad: Vec<&str> = checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
    let elapsed = start.elapsed();
    verdict(
        1,
        anticommutators == 16 && checks.len() == 22 && bad.is_empty() && elapsed < Duration::from_secs(1),
        format!("{} identities, {} failing, {elapsed:.2?}", checks.len(), bad.len()),
    );
}

#[test]
fn criterion_02_trace_engine_against_matrices() {
    let start = Instant::now();
    let mut words: Vec<Vec<u8>> = (0..=6)
        .flat_map(|len| {
            (0..5usize.pow(len as u32))
                .map(move |m| (0..len).map(|j| (m / 5usize.pow(j as u32) % 5) as u8 + 1).collect())
        })
        .collect();
    let exhaustive = words.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    for _ in 0..500 {
        let len = rng.gen_range(7..=9);
        words.push((0..len).map(|_| rng.gen_range(1..=5)).collect());
    }
    let empty = BTreeMap::new();
    let bad = words
        .iter()
        .filter(|v| {
            let w = GammaWord::concrete(v).unwrap();
            gamma_trace(&w).unwrap().evaluate(&empty, None).unwrap() != enum_trace_oracle(&w, None).unwrap()
        })
        .count();
    let elapsed = start.elapsed();
    verdict(
        2,
        exhaustive == 19531 && bad == 0 && elapsed < Duration::from_secs(30),
        format!("{} words ({exhaustive} exhaustive), {bad} disagreements, {elapsed:.2?}", words.len()),
    );
}

#[test]
fn criterion_03_radial_integrals() {
    let listed =
        [(2, 0, qf(1, 4)), (2, 2, qf(-1, 4)), (4, 0, qf(1, 24)), (4, 2, qf(-1, 24)), (4, 4, qf(1, 8))];
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, k, want) in listed {
        let exact = n_integral(n, k).unwrap().value;
        let numeric = n_integral_numeric(n, k, 0.1).unwrap();
        let w = *want.numer() as f64 / *want.denom() as f64;
        let hit = exact == want && (numeric - w).abs() < 1e-6;
        ok &= hit;
        parts.push(format!("N{n}{k}={exact} (listed {want}, quadrature {numeric:.9})"));
    }
    verdict(3, ok, parts.join(", "));
}

#[test]
fn criterion_04_angular_averages() {
    let mut bad = Vec::new();
    let mut want = |idx: &[u8], v: GQ| {
        let got = average(idx);
        if got != v {
            bad.push(format!("{idx:?}={got}"));
        }
    };
    want(&[], GQ::int(1));
    for a in 1..=4u8 {
        for b in 1..=4u8 {
            want(&[a, b], if a == b { GQ::frac(1, 4) } else { zero() });
        }
    }
    for t in tuples(4) {
        let pairs = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)];
        let hits = pairs.iter().filter(|(a, b, c, d)| t[*a] == t[*b] && t[*c] == t[*d]).count();
        want(&t, GQ::frac(hits as i128, 24));
    }
    for len in [1, 3, 5] {
        for t in tuples(len) {
            want(&t, zero());
        }
    }
    let c3 = sphere_moment(3);
    let rule = SphereRule::new(16);
    let quad = rule.moment(&[1, 1, 2, 2, 3, 3]);
    let contracted: Vec<Ix> = (0..3).flat_map(|k| [Ix::Sym(k), Ix::Sym(k)]).collect();
    let full = TensorExpr::monomial(GQ::int(1), Monomial { xis: contracted, ..Monomial::default() })
        .angular_average()
        .unwrap()
        .scalar_part();
    let ok = bad.is_empty() && c3 == qf(1, 192) && (quad - 1.0 / 192.0).abs() < 1e-10 && full == GQ::int(1);
    verdict(4, ok, format!("{} mismatches, c₃={c3}, quadrature {quad:.3e}, ⟨(ξ·ξ)³⟩={full}", bad.len()));
}

#[test]
fn criterion_05_odd_orders_vanish() {
    let mut nonzero = Vec::new();
    let mut count = 0;
    for n in [1, 3] {
        for s in ChiralitySignature::all(n) {
            count += 1;
            if !compute_jn(&s).unwrap().is_zero() {
                nonzero.push(s.to_string());
            }
        }
    }
    verdict(5, nonzero.is_empty() && count == 10, format!("{count} signatures, nonzero: {nonzero:?}"));
}

#[test]
fn criterion_06_quadratic_constants() {
    let m = compute_m2_exact(4).unwrap();
    let a = |s: [u8; 2]| m.get(&s).unwrap().a;
    let ok =
        a([5, 5]) == GQ::int(1) && a([0, 0]) == GQ::int(-1) && a([5, 0]) == zero() && a([0, 5]) == zero();
    verdict(6, ok, format!("A55={} A00={} A50={} A05={}", a([5, 5]), a([0, 0]), a([5, 0]), a([0, 5])));
}

#[test]
fn criterion_07_quartic_table() {
    let start = Instant::now();
    let t = compute_table1().unwrap();
    let elapsed = start.elapsed();
    let mismatched = t.mismatches().len();
    let cells = t.entries.len() * 4;
    let structure = t.structure_checks();
    let ok = cells == 64
        && mismatched == 0
        && structure.iter().all(|c| c.passed)
        && elapsed < Duration::from_secs(60);
    verdict(
        7,
        ok,
        format!(
            "{cells} cells, {mismatched} mismatched signatures, structure {}, {elapsed:.2?}",
            structure.iter().map(|c| format!("{}={}", c.name, c.passed)).collect::<Vec<_>>().join(", ")
        ),
    );
}

#[test]
fn criterion_08_quartic_decomposition() {
    let d = assemble_s4_and_decompose(&compute_table1().unwrap()).unwrap();
    let d_j = build_expression(&Expr::scaled(GQ::i(), Expr::comm(Expr::d("m"), Expr::j("m"))), &[]).unwrap();
    let terms = d.p_r.len();
    let r1 = d.p_r1.equal_modulo_cyclic(&d.f_squared);
    let rest = d.p_r.sub(&d.p_r1).sub(&d.p_r2).canonicalize(true).is_zero();
    let current = d.p_r2.sub(&d_j).canonicalize(true).is_zero();
    let imag = d.p_i.canonicalize(true).is_zero();
    verdict(
        8,
        terms == 19 && r1 && rest && current && imag,
        format!(
            "P_R terms {terms}, P_R1≅F²/2 {r1}, P_R−P_R1−P_R2≅0 {rest}, P_R2≅i[D,J] {current}, P_I≅0 {imag}"
        ),
    );
}

#[test]
fn criterion_09_eta_series() {
    let i20 = i_series(2, 0, 4).unwrap();
    let i21 = i_series(2, 1, 4).unwrap();
    let pair = |s: &diracdet::integrals::EtaSeries| (s.coeff(0), s.coeff(2));
    let mut odd = Vec::new();
    for n in [2, 4] {
        for k in 0..=n + 1 {
            let all = i_series_all_powers(n, k, 8).unwrap();
            if all.iter().skip(1).step_by(2).any(|c: &Q| *c != qf(0, 1)) {
                odd.push(format!("I{n}{k}"));
            }
        }
    }
    let ok = pair(&i20) == (qf(1, 2), qf(-3, 2)) && pair(&i21) == (qf(1, 2), qf(1, 2)) && odd.is_empty();
    verdict(
        9,
        ok,
        format!(
            "I20 = {} + ({})η², I21 = {} + ({})η² (expected 1/2 + (1/2)η²), odd powers in {odd:?}",
            i20.coeff(0),
            i20.coeff(2),
            i21.coeff(0),
            i21.coeff(2)
        ),
    );
}

#[test]
fn criterion_10_exact_quadratic() {
    let m = compute_m2_exact(4).unwrap();
    let e55 = m.get(&[5, 5]).unwrap();
    let e00 = m.get(&[0, 0]).unwrap();
    let routes = m.entries.iter().all(|e| e.a == e.a_simplified);
    verdict(
        10,
        e55.a0 == GQ::int(-2) && e00.a0 == zero() && routes,
        format!("A⁽⁰⁾55={} (expected -2), A⁽⁰⁾00={}, Λ² routes agree {routes}", e55.a0, e00.a0),
    );
}

#[test]
fn criterion_11_gauge_invariance() {
    let mut parts = Vec::new();
    let mut ok = true;
    for sign in [1i8, -1] {
        let f = field_strength(Some(sign), 0, 1);
        let delta = gauge_variation_vector(&f.mul(&f).unwrap()).unwrap().canonicalize(true);
        ok &= delta.is_zero();
        parts.push(format!(
            "δ tr F{}F{}: {} terms",
            if sign > 0 { '+' } else { '-' },
            if sign > 0 { '+' } else { '-' },
            delta.len()
        ));
    }
    let v = FieldPolynomial::letter(FieldLetter::field(FieldKind::V, 0));
    let c = FieldPolynomial::letter(FieldLetter::field(FieldKind::C, 0));
    let control = c.mul(&c).unwrap().sub(&v.mul(&v).unwrap());
    let delta = gauge_variation_vector(&control).unwrap().canonicalize(true);
    ok &= !delta.is_zero();
    parts.push(format!("control: {} terms", delta.len()));
    verdict(11, ok, parts.join(", "));
}

#[test]
fn criterion_12_profile_independence() {
    let fits: Vec<_> =
        [Profile::Step, Profile::Gaussian].iter().map(|p| log_coefficient(p).unwrap()).collect();
    let ok = fits.iter().all(|f| (f.slope - 1.0).abs() < 1e-4);
    verdict(
        12,
        ok,
        fits.iter().map(|f| format!("{}: {:.8}", f.profile, f.slope)).collect::<Vec<_>>().join(", "),
    );
}

#[test]
fn criterion_13_yang_mills_and_residue() {
    let table = compute_table1().unwrap();
    let r = compute_s_log_report(&table, &compute_m2_exact(4).unwrap()).unwrap();
    let canonical = r.decomposition.p_r.add(&r.decomposition.p_i);
    let projected = drop_axial(&apply_to_one(&canonical)).canonicalize(true);
    let f = field_strength(None, 0, 1);
    let reference = f.mul(&f).unwrap().canonicalize(true);
    let prefactor = r.log_prefactor == PiCoefficient::over_pi2(1, 24);
    let res = r.residue.holds && r.residue.statement.contains("4·Res");
    verdict(
        13,
        projected == reference && r.yang_mills.equal && prefactor && res,
        format!(
            "projection equal {}, prefactor {}, residue: {}",
            projected == reference,
            r.log_prefactor,
            r.residue.statement
        ),
    );
}

#[test]
fn criterion_14_mass_term_flag() {
    let r = compute_s_log_report(&compute_table1().unwrap(), &compute_m2_exact(4).unwrap()).unwrap();
    let m = &r.mass_term;
    let flagged = m.readings.len() == 2
        && m.readings.iter().any(|x| x.value == GQ::int(-6))
        && m.readings.iter().any(|x| x.value == GQ::int(-3))
        && m.readings.iter().all(|x| x.matches == (x.value == m.in_units_of_24pi2));
    verdict(
        14,
        flagged && !m.verdict.is_empty(),
        format!("computed {}·m²/(24π²); {}", m.in_units_of_24pi2, m.verdict),
    );
}
