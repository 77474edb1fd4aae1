use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clifford::{clifford_check, enum_trace_oracle, gamma_trace, GammaWord};
use crate::error::Result;
use crate::expansion::{
    assemble_s2_leading, compute_m2_exact, compute_s_log_report, compute_table1, parity_checks,
    route_consistency_n4, Check,
};
use crate::integrals::{log_coeff_f_independence, n_integral, n_integral_numeric, Profile};
use crate::ncpoly::{field_strength, gauge_variation_vector, FieldKind, FieldLetter, FieldPolynomial};
use crate::numeric::SphereRule;
use crate::scalar::{fmt_q, GQ};
use crate::tensor::{sphere_moment, Ix, Monomial, TensorExpr};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One line of the verification report.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub paper_ref: String,
    pub status: Status,
    pub detail: String,
}

impl Record {
    fn new(anchor: &str, c: Check) -> Self {
        Self {
            check: c.name,
            paper_ref: anchor.into(),
            status: if c.passed { Status::Pass } else { Status::Fail },
            detail: c.detail,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

const CLIFFORD: &str = "Euclidean Clifford relations in the chiral representation";
const TRACES: &str = "trace technology for Dirac words";
const ANGULAR: &str = "angular averages over the unit 3-sphere";
const RADIAL: &str = "u-integrals N_{n,k}";
const PARITY: &str = "vanishing of odd orders and mass-sign independence";
const TABLE: &str = "quartic coefficient table";
const DECOMP: &str = "decomposition of the quartic term";
const QUADRATIC: &str = "quadratic divergence and its mass correction";
const GAUGE: &str = "gauge invariance of the curvature squares";
const PROFILE: &str = "cutoff-profile independence of the log coefficient";
const REPORT: &str = "logarithmic divergence and residue";

pub struct SuiteOptions {
    pub oracle_order: usize,
    pub eta_order: usize,
    pub random_words: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { oracle_order: 16, eta_order: 4, random_words: 500, seed: 0x5eed }
    }
}

fn failure(anchor: &str, name: &str, e: impl std::fmt::Display) -> Record {
    Record { check: name.into(), paper_ref: anchor.into(), status: Status::Fail, detail: e.to_string() }
}

fn collect(anchor: &str, name: &str, r: Result<Vec<Check>>) -> Vec<Record> {
    match r {
        Ok(v) => v.into_iter().map(|c| Record::new(anchor, c)).collect(),
        Err(e) => vec![failure(anchor, name, e)],
    }
}

pub fn clifford_records() -> Vec<Record> {
    let r = clifford_check();
    let bad: Vec<&str> = r.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
    vec![Record::new(
        CLIFFORD,
        Check::new(
            "anticommutators and γ5 relations hold exactly",
            bad.is_empty(),
            if bad.is_empty() {
                format!("{} identities", r.len())
            } else {
                format!("violated: {}", bad.join(", "))
            },
        ),
    )]
}

fn trace_agrees(v: &[u8]) -> Result<bool> {
    let w = GammaWord::concrete(v)?;
    let sym = gamma_trace(&w)?;
    let val = sym.evaluate(&BTreeMap::new(), None)?;
    Ok(val == enum_trace_oracle(&w, None)?)
}

fn words_up_to(max_len: usize) -> Vec<Vec<u8>> {
    let alphabet = [1u8, 2, 3, 4, 5];
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 5);
        for w in &layer {
            for &a in &alphabet {
                let mut x = w.clone();
                x.push(a);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Symbolic traces against explicit matrix products: every word up to
/// `max_len` letters and `random` seeded words of 7 to 9 letters.
pub fn trace_sweep(max_len: usize, random: usize, seed: u64) -> Vec<Record> {
    let mut out = Vec::new();
    let sweep = |words: &[Vec<u8>]| -> (usize, Vec<String>) {
        let mut bad = Vec::new();
        for w in words {
            match trace_agrees(w) {
                Ok(true) => {}
                Ok(false) => bad.push(format!("{w:?}")),
                Err(e) => bad.push(format!("{w:?}: {e}")),
            }
        }
        (words.len(), bad)
    };
    let detail = |n: usize, bad: &[String]| {
        if bad.is_empty() {
            format!("{n} words agree")
        } else {
            format!("{} of {n} disagree, first {}", bad.len(), bad[0])
        }
    };
    let (n, bad) = sweep(&words_up_to(max_len));
    out.push(Record::new(
        TRACES,
        Check::new(format!("all words of length ≤ {max_len}"), bad.is_empty(), detail(n, &bad)),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let long: Vec<Vec<u8>> = (0..random)
        .map(|_| {
            let len = rng.gen_range(7..=9);
            (0..len).map(|_| rng.gen_range(1..=5u8)).collect()
        })
        .collect();
    let (n, bad) = sweep(&long);
    out.push(Record::new(
        TRACES,
        Check::new("seeded words of length 7 to 9", bad.is_empty(), detail(n, &bad)),
    ));
    out
}

fn concrete_average(idx: &[u8]) -> Result<GQ> {
    let xis = idx.iter().map(|&v| Ix::val(v)).collect::<Result<Vec<_>>>()?;
    let t = TensorExpr::monomial(GQ::one(), Monomial { xis, ..Monomial::default() });
    Ok(t.angular_average()?.scalar_part())
}

fn tuples(len: usize) -> Vec<Vec<u8>> {
    (0..4usize.pow(len as u32))
        .map(|mut m| {
            (0..len)
                .map(|_| {
                    let v = (m % 4) as u8 + 1;
                    m /= 4;
                    v
                })
                .collect()
        })
        .collect()
}

/// Exact sphere moments against product quadrature, plus the full
/// contraction ⟨(ξ·ξ)³⟩ = 1.
pub fn angular_records(order: usize) -> Vec<Record> {
    let rule = SphereRule::new(order);
    let mut worst = 0f64;
    let mut errors = Vec::new();
    for len in 0..=6 {
        for t in tuples(len) {
            match concrete_average(&t) {
                Ok(exact) => {
                    let (re, im) = exact.to_f64_pair();
                    worst = worst.max((re - rule.moment(&t)).abs()).max(im.abs());
                }
                Err(e) => errors.push(format!("{t:?}: {e}")),
            }
        }
    }
    let mut out = vec![Record::new(
        ANGULAR,
        Check::new(
            "exact moments agree with quadrature through six factors",
            errors.is_empty() && worst < 1e-10,
            if errors.is_empty() {
                format!("max deviation {worst:.2e} at order {order}")
            } else {
                errors.join("; ")
            },
        ),
    )];
    let low = [
        (vec![], GQ::one()),
        (vec![1, 1], GQ::frac(1, 4)),
        (vec![1, 1, 2, 2], GQ::frac(1, 24)),
        (vec![3, 3, 3, 3], GQ::frac(3, 24)),
        (vec![1, 1, 2, 2, 3, 3], GQ::frac(1, 192)),
    ];
    let mut bad = Vec::new();
    for (t, want) in &low {
        match concrete_average(t) {
            Ok(v) if v == *want => {}
            Ok(v) => bad.push(format!("{t:?}: {v}")),
            Err(e) => bad.push(format!("{t:?}: {e}")),
        }
    }
    for t in tuples(5).iter().chain(&tuples(3)).chain(&tuples(1)) {
        match concrete_average(t) {
            Ok(v) if v.is_zero() => {}
            Ok(v) => bad.push(format!("{t:?}: {v}")),
            Err(e) => bad.push(format!("{t:?}: {e}")),
        }
    }
    out.push(Record::new(
        ANGULAR,
        Check::new(
            "low moments and odd moments exactly",
            bad.is_empty(),
            if bad.is_empty() {
                "⟨1⟩, ⟨ξξ⟩, four- and six-fold pairings; odd ones vanish".into()
            } else {
                bad.join("; ")
            },
        ),
    ));
    let m = sphere_moment(3);
    let contracted: Vec<Ix> = (0..3).flat_map(|k| [Ix::Sym(k), Ix::Sym(k)]).collect();
    let full = TensorExpr::monomial(GQ::one(), Monomial { xis: contracted, ..Monomial::default() })
        .angular_average()
        .map(|t| t.scalar_part());
    out.push(Record::new(
        ANGULAR,
        Check::new(
            "six-fold coefficient from the full contraction",
            full.as_ref().map(|v| v.is_one()).unwrap_or(false) && m == crate::scalar::qf(1, 192),
            format!(
                "c₃ = {}, ⟨(ξ·ξ)³⟩ = {}",
                fmt_q(&m),
                full.map(|v| v.to_string()).unwrap_or_else(|e| e.to_string())
            ),
        ),
    ));
    out
}

/// Exact N_{n,k} against quadrature along the rotated ray.
pub fn radial_records() -> Vec<Record> {
    let mut out = Vec::new();
    for (n, k) in [(2, 0), (2, 2), (4, 0), (4, 2), (4, 4)] {
        let name = format!("N_{n},{k} exact vs quadrature");
        let rec = n_integral(n, k).and_then(|v| {
            let exact = v.value;
            let num = n_integral_numeric(n, k, 0.1)?;
            let x = *exact.numer() as f64 / *exact.denom() as f64;
            Ok(Check::new(
                name.clone(),
                (num - x).abs() < 1e-6,
                format!("exact {}, numeric {num:.10}", fmt_q(&exact)),
            ))
        });
        out.push(match rec {
            Ok(c) => Record::new(RADIAL, c),
            Err(e) => failure(RADIAL, &name, e),
        });
    }
    out
}

pub fn table_records() -> Vec<Record> {
    let t = match compute_table1() {
        Ok(t) => t,
        Err(e) => return vec![failure(TABLE, "quartic coefficient table", e)],
    };
    let mut out: Vec<Record> = t
        .entries
        .iter()
        .map(|e| {
            let [a, b, c, d] = e.computed.as_array();
            Record::new(
                TABLE,
                Check::new(
                    format!("table entry {}", e.signature),
                    e.matches,
                    if e.matches {
                        format!("A {a}, B {b}, C {c}, D {d}")
                    } else {
                        let [ea, eb, ec, ed] = e.expected.as_array();
                        format!("computed ({a}, {b}, {c}, {d}), expected ({ea}, {eb}, {ec}, {ed})")
                    },
                ),
            )
        })
        .collect();
    out.extend(t.structure_checks().into_iter().map(|c| Record::new(TABLE, c)));
    out
}

pub fn decomposition_records() -> Vec<Record> {
    let r = compute_table1().and_then(|t| crate::expansion::assemble_s4_and_decompose(&t));
    match r {
        Ok(d) => {
            let mut out: Vec<Record> = d.checks.into_iter().map(|c| Record::new(DECOMP, c)).collect();
            out.push(Record::new(
                DECOMP,
                Check::new(
                    "curvature squares against P_R modulo cyclicity",
                    true,
                    if d.f_squared_equal_mod_cyclic {
                        "equal: the boundary term is invisible to cyclic rotation of operator words"
                    } else {
                        "different"
                    },
                ),
            ));
            out
        }
        Err(e) => vec![failure(DECOMP, "quartic decomposition", e)],
    }
}

pub fn quadratic_records(eta_order: usize) -> Vec<Record> {
    let mut out = Vec::new();
    match compute_m2_exact(eta_order) {
        Ok(m) => {
            let parts: Vec<String> =
                m.entries.iter().map(|e| format!("{}: A {}, A⁽⁰⁾ {}", e.signature, e.a, e.a0)).collect();
            out.push(Record::new(
                QUADRATIC,
                Check::new(
                    "exact quadratic coefficients agree with the u-integral route",
                    true,
                    parts.join("; "),
                ),
            ));
            let a55 = m.get(&[5, 5]).map(|e| e.a0);
            out.push(Record::new(
                QUADRATIC,
                Check::new(
                    "axial mass correction A⁽⁰⁾(5,5)",
                    a55.is_some(),
                    match a55 {
                        Some(v) if v == GQ::int(-2) => "−2, as printed".to_string(),
                        Some(v) => format!("computed {v}; the printed value is −2"),
                        None => "missing".into(),
                    },
                ),
            ));
        }
        Err(e) => out.push(failure(QUADRATIC, "exact quadratic coefficients", e)),
    }
    out.extend(collect(QUADRATIC, "quartic route consistency", route_consistency_n4()));
    match assemble_s2_leading() {
        Ok(s2) => {
            out.push(Record::new(
                QUADRATIC,
                Check::new(
                    "quadratic part on 1 is −V·V + C·C",
                    s2.field.len() == 2,
                    format!("{} · ({})", s2.prefactor, s2.field.pretty()),
                ),
            ));
            out.push(Record::new(
                QUADRATIC,
                Check::new(
                    "quadratic part vanishes at V = ±C",
                    s2.vector_equals_axial.iter().all(|p| p.is_zero()),
                    "both signs",
                ),
            ));
        }
        Err(e) => out.push(failure(QUADRATIC, "quadratic part", e)),
    }
    out
}

fn squared(f: &FieldPolynomial) -> Result<FieldPolynomial> {
    f.mul(f)
}

pub fn gauge_records() -> Vec<Record> {
    let mut out = Vec::new();
    for (sign, label) in [(1i8, "F⁺F⁺"), (-1, "F⁻F⁻")] {
        let name = format!("first-order variation of tr {label} vanishes");
        let r = squared(&field_strength(Some(sign), 0, 1))
            .and_then(|p| gauge_variation_vector(&p))
            .map(|d| d.canonicalize(true));
        out.push(match r {
            Ok(d) => Record::new(GAUGE, Check::new(name, d.is_zero(), format!("{} residual terms", d.len()))),
            Err(e) => failure(GAUGE, &name, e),
        });
    }
    let v = FieldPolynomial::letter(FieldLetter::field(FieldKind::V, 0));
    let c = FieldPolynomial::letter(FieldLetter::field(FieldKind::C, 0));
    let name = "control: variation of tr(−V·V + C·C) is nonzero";
    let r = v
        .mul(&v)
        .and_then(|vv| Ok(c.mul(&c)?.sub(&vv)))
        .and_then(|p| gauge_variation_vector(&p))
        .map(|d| d.canonicalize(true));
    out.push(match r {
        Ok(d) => Record::new(GAUGE, Check::new(name, !d.is_zero(), format!("residual {}", d.pretty()))),
        Err(e) => failure(GAUGE, name, e),
    });
    out
}

pub fn profile_records() -> Vec<Record> {
    let profiles = [Profile::Step, Profile::Gaussian, Profile::Rescaled(Box::new(Profile::Gaussian), 2.0)];
    match log_coeff_f_independence(&profiles) {
        Ok(fits) => fits
            .into_iter()
            .map(|f| {
                Record::new(
                    PROFILE,
                    Check::new(
                        format!("log coefficient for {}", f.profile),
                        (f.slope - 1.0).abs() < 1e-4,
                        format!("slope {:.8}, intercept {:.6}", f.slope, f.intercept),
                    ),
                )
            })
            .collect(),
        Err(e) => vec![failure(PROFILE, "log coefficient fits", e)],
    }
}

pub fn report_records(eta_order: usize) -> Vec<Record> {
    let r = compute_table1()
        .and_then(|t| Ok((t, compute_m2_exact(eta_order)?)))
        .and_then(|(t, m)| compute_s_log_report(&t, &m));
    let r = match r {
        Ok(r) => r,
        Err(e) => return vec![failure(REPORT, "logarithmic report", e)],
    };
    vec![
        Record::new(
            REPORT,
            Check::new(
                "C = 0 projection is the Yang-Mills density",
                r.yang_mills.equal,
                format!("{} ∫tr F_μνF^μν", r.yang_mills.prefactor),
            ),
        ),
        Record::new(
            REPORT,
            Check::new(
                "log coefficient is four times the residue",
                r.residue.holds,
                format!("c_log = {}, Res = {}", r.residue.c_log, r.residue.res),
            ),
        ),
        Record::new(
            REPORT,
            Check::new(
                "mass term constant",
                true,
                format!("{} ({})", r.mass_term.coefficient, r.mass_term.verdict),
            ),
        ),
    ]
}

/// Runs every check in a fixed order.
pub fn run_suite(opts: &SuiteOptions) -> Vec<Record> {
    let mut out = clifford_records();
    out.extend(trace_sweep(6, opts.random_words, opts.seed));
    out.extend(angular_records(opts.oracle_order));
    out.extend(radial_records());
    out.extend(collect(PARITY, "parity checks", parity_checks()));
    out.extend(table_records());
    out.extend(decomposition_records());
    out.extend(quadratic_records(opts.eta_order));
    out.extend(gauge_records());
    out.extend(profile_records());
    out.extend(report_records(opts.eta_order));
    out
}
