use serde::Serialize;

use super::{compute_jn, eta_coefficient, Check, ChiralitySignature, CoefficientTable, M2Exact};
use crate::error::{Error, Result};
use crate::ncpoly::{
    apply_to_one, build_expression, drop_axial, drop_total_derivatives, field_strength, total_derivative,
    vector_to_axial, CovLetter, CovariantPolynomial, Expr, FieldPolynomial, Gen, Term,
};
use crate::scalar::{PiCoefficient, GQ};

fn gen(s: u8) -> Gen {
    if s == 5 {
        Gen::C
    } else {
        Gen::D
    }
}

fn word(s: &ChiralitySignature, labels: &[u32]) -> Vec<CovLetter> {
    s.as_slice().iter().zip(labels).map(|(&v, &l)| CovLetter { gen: gen(v), index: l }).collect()
}

/// P_R = Σ_s (A ηη + B ηη + C ηη) D^{s₁}D^{s₂}D^{s₃}D^{s₄} from a table.
pub fn real_part_polynomial(table: &CoefficientTable) -> CovariantPolynomial {
    let (a, b) = (100, 101);
    let mut p = CovariantPolynomial::zero();
    for e in &table.entries {
        let c = e.computed;
        p.add_term(c.a, Term::new(word(&e.signature, &[a, a, b, b])));
        p.add_term(c.b, Term::new(word(&e.signature, &[a, b, a, b])));
        p.add_term(c.c, Term::new(word(&e.signature, &[a, b, b, a])));
    }
    p.canonicalize(false)
}

/// P_I = Σ_s D ε D^{s₁}D^{s₂}D^{s₃}D^{s₄}.
pub fn imaginary_part_polynomial(table: &CoefficientTable) -> CovariantPolynomial {
    let l = [100, 101, 102, 103];
    let mut p = CovariantPolynomial::zero();
    for e in &table.entries {
        p.add_term(e.computed.d, Term { word: word(&e.signature, &l), eps: Some(l) });
    }
    p.canonicalize(false)
}

fn d(n: &str) -> Expr {
    Expr::d(n)
}

fn c(n: &str) -> Expr {
    Expr::c(n)
}

fn comm(a: Expr, b: Expr) -> Expr {
    Expr::comm(a, b)
}

fn times(k: GQ, e: Expr) -> Expr {
    Expr::scaled(k, e)
}

/// −[D,D][D,D] − [C,C][C,C] + [D,D][C,C] + [C,C][D,D] + 2[D,C][D,C] + 2[D,C][C,D].
pub fn p_r1_expr() -> Expr {
    let one = GQ::int(1);
    let two = GQ::int(2);
    Expr::sum(vec![
        times(-one, Expr::prod(vec![comm(d("m"), d("n")), comm(d("m"), d("n"))])),
        times(-one, Expr::prod(vec![comm(c("m"), c("n")), comm(c("m"), c("n"))])),
        Expr::prod(vec![comm(d("m"), d("n")), comm(c("m"), c("n"))]),
        Expr::prod(vec![comm(c("m"), c("n")), comm(d("m"), d("n"))]),
        times(two, Expr::prod(vec![comm(d("m"), c("n")), comm(d("m"), c("n"))])),
        times(two, Expr::prod(vec![comm(d("m"), c("n")), comm(c("m"), d("n"))])),
    ])
}

/// i[D^μ, J_μ] + [[D^μ,D^ν],[C_μ,C_ν]] − 2[C^μ, [D_μ,D_ν]C^ν].
pub fn p_r2_expr() -> Expr {
    Expr::sum(vec![
        times(GQ::i(), comm(d("m"), Expr::j("m"))),
        comm(comm(d("m"), d("n")), comm(c("m"), c("n"))),
        times(GQ::int(-2), comm(c("m"), Expr::prod(vec![comm(d("m"), d("n")), c("n")]))),
    ])
}

/// ½F⁺_{μν}F⁺_{μν} + ½F⁻_{μν}F⁻_{μν}.
pub fn f_squared_expr() -> Expr {
    let half = GQ::frac(1, 2);
    Expr::sum(vec![
        times(half, Expr::prod(vec![Expr::fpm(true, "m", "n"), Expr::fpm(true, "m", "n")])),
        times(half, Expr::prod(vec![Expr::fpm(false, "m", "n"), Expr::fpm(false, "m", "n")])),
    ])
}

/// (i/2) ε^{abcd} [[D_a,D_b] + [C_a,C_b], [D_c,C_d]].
pub fn bracket_form_of_p_i() -> Expr {
    times(
        GQ::frac(1, 2) * GQ::i(),
        Expr::prod(vec![
            Expr::eps(["a", "b", "c", "d"]),
            comm(Expr::sum(vec![comm(d("a"), d("b")), comm(c("a"), c("b"))]), comm(d("c"), c("d"))),
        ]),
    )
}

fn residual(name: &str, p: &CovariantPolynomial) -> Check {
    let ok = p.is_zero();
    Check::new(name, ok, if ok { "zero residual".into() } else { format!("residual {}", p.pretty()) })
}

fn residual_field(name: &str, p: &FieldPolynomial, want_zero: bool) -> Check {
    let ok = p.is_zero() == want_zero;
    let detail = if p.is_zero() {
        "zero".to_string()
    } else {
        format!("{} terms, e.g. {}", p.len(), truncate(&p.pretty(), 160))
    };
    Check::new(name, ok, detail)
}

fn truncate(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.to_string()
    } else {
        format!("{}…", s.chars().take(n).collect::<String>())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct S4Decomposition {
    pub p_r: CovariantPolynomial,
    pub p_i: CovariantPolynomial,
    pub p_r1: CovariantPolynomial,
    pub p_r2: CovariantPolynomial,
    pub f_squared: CovariantPolynomial,
    pub current: CovariantPolynomial,
    /// Sign σ with P_I = σ·(bracket form), if either sign fits.
    pub p_i_bracket_sign: Option<i8>,
    /// Whether P_R ≡ ½F⁺F⁺ + ½F⁻F⁻ already holds modulo cyclicity at the
    /// covariant level.
    pub f_squared_equal_mod_cyclic: bool,
    pub checks: Vec<Check>,
}

impl S4Decomposition {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Builds P_R and P_I from the quartic table and verifies their
/// decomposition into curvature squares, a boundary current and pure
/// commutators.
pub fn assemble_s4_and_decompose(table: &CoefficientTable) -> Result<S4Decomposition> {
    let p_r = real_part_polynomial(table);
    let p_i = imaginary_part_polynomial(table);
    let p_r1 = build_expression(&p_r1_expr(), &[])?;
    let p_r2 = build_expression(&p_r2_expr(), &[])?;
    let f_squared = build_expression(&f_squared_expr(), &[])?;
    let current = build_expression(&Expr::j("m"), &["m"])?;
    let d_j = build_expression(&times(GQ::i(), comm(d("m"), Expr::j("m"))), &[])?;
    let bracket = build_expression(&bracket_form_of_p_i(), &[])?;

    let mut checks =
        vec![Check::new("P_R has 19 canonical terms", p_r.len() == 19, format!("{} terms", p_r.len()))];
    checks.push(residual(
        "P_R1 equals half the sum of squared chiral curvatures modulo cyclicity",
        &p_r1.sub(&f_squared).canonicalize(true),
    ));
    checks.push(residual(
        "P_R1 equals half the sum of squared chiral curvatures exactly",
        &p_r1.sub(&f_squared).canonicalize(false),
    ));
    checks.push(residual(
        "P_R − P_R1 − P_R2 vanishes modulo cyclicity",
        &p_r.sub(&p_r1).sub(&p_r2).canonicalize(true),
    ));
    checks.push(residual("P_R2 − i[D^μ, J_μ] is a sum of commutators", &p_r2.sub(&d_j).canonicalize(true)));
    checks.push(residual("P_I vanishes modulo cyclicity", &p_i.canonicalize(true)));

    let p_i_bracket_sign = if p_i.equal_exact(&bracket) {
        Some(1)
    } else if p_i.equal_exact(&bracket.scale(-GQ::int(1))) {
        Some(-1)
    } else {
        None
    };
    checks.push(Check::new(
        "P_I matches the ε bracket form up to sign",
        p_i_bracket_sign.is_some(),
        match p_i_bracket_sign {
            Some(1) => "P_I = +(bracket form)".to_string(),
            Some(_) => "P_I = −(bracket form)".to_string(),
            None => format!("P_I = {}", p_i.pretty()),
        },
    ));

    // negative controls: the boundary current is really there
    checks.push(Check::new(
        "control: P_R differs from the curvature squares as an operator",
        !p_r.equal_exact(&f_squared),
        format!("difference has {} terms", p_r.sub(&f_squared).canonicalize(false).len()),
    ));
    let field_r = apply_to_one(&p_r);
    let field_f = apply_to_one(&f_squared);
    checks.push(residual_field(
        "control: on 1, P_R and the curvature squares differ under the trace",
        &field_r.sub(&field_f).canonicalize(true),
        false,
    ));
    let div_j = total_derivative(&apply_to_one(&current), 0);
    checks.push(residual_field(
        "on 1, the difference is the divergence of J under the trace",
        &field_r.sub(&field_f).sub(&div_j).canonicalize(true),
        true,
    ));

    let f_squared_equal_mod_cyclic = p_r.equal_modulo_cyclic(&f_squared);
    Ok(S4Decomposition {
        p_r,
        p_i,
        p_r1,
        p_r2,
        f_squared,
        current,
        p_i_bracket_sign,
        f_squared_equal_mod_cyclic,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct S2Leading {
    /// Multiplies Λ².
    pub prefactor: PiCoefficient,
    pub coefficients: Vec<(ChiralitySignature, GQ)>,
    pub covariant: CovariantPolynomial,
    /// The covariant operator applied to 1.
    pub field_raw: FieldPolynomial,
    /// Same with total derivatives removed.
    pub field: FieldPolynomial,
    /// `field` at V = +C and V = −C.
    pub vector_equals_axial: [FieldPolynomial; 2],
}

/// Λ²-part: Σ_s A_s D^{s₁}_a D^{s₂}_a with A from J₂, then applied to 1.
pub fn assemble_s2_leading() -> Result<S2Leading> {
    let mut covariant = CovariantPolynomial::zero();
    let mut coefficients = Vec::new();
    for s in ChiralitySignature::all(2) {
        let a = eta_coefficient(&compute_jn(&s)?, 1, 2)?;
        covariant.add_term(a, Term::new(word(&s, &[100, 100])));
        coefficients.push((s, a));
    }
    let covariant = covariant.canonicalize(false);
    let field_raw = apply_to_one(&covariant);
    let field = drop_total_derivatives(&field_raw);
    let vector_equals_axial = [vector_to_axial(&field, 1), vector_to_axial(&field, -1)];
    Ok(S2Leading {
        prefactor: PiCoefficient::over_pi2(1, 16),
        coefficients,
        covariant,
        field_raw,
        field,
        vector_equals_axial,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassReading {
    pub label: String,
    /// In units of m²/(24π²).
    pub value: GQ,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassTerm {
    /// Coefficient of m² log(Λ/|m|) ∫tr C^μC_μ.
    pub coefficient: PiCoefficient,
    /// The same in units of 1/(24π²).
    pub in_units_of_24pi2: GQ,
    pub readings: Vec<MassReading>,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueRelation {
    pub c_log: PiCoefficient,
    pub res: PiCoefficient,
    pub statement: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct YangMillsProjection {
    pub prefactor: PiCoefficient,
    /// C = 0 part of the log coefficient on 1, cyclic normal form.
    pub projected: FieldPolynomial,
    /// F_{μν}F_{μν} with F = ∂V − ∂V + i[V, V], cyclic normal form.
    pub reference: FieldPolynomial,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceReport {
    pub lambda2_part: S2Leading,
    pub log_prefactor: PiCoefficient,
    pub f_form: CovariantPolynomial,
    /// P_R + P_I as built from the table.
    pub canonical_form: CovariantPolynomial,
    pub boundary_current: CovariantPolynomial,
    pub boundary_current_field: FieldPolynomial,
    pub decomposition: S4Decomposition,
    pub mass_term: MassTerm,
    pub residue: ResidueRelation,
    pub yang_mills: YangMillsProjection,
    pub finite_part: String,
}

fn mass_term(m2: &M2Exact) -> Result<MassTerm> {
    let a0 = m2.get(&[5, 5]).ok_or_else(|| Error::Verification("missing axial quadratic entry".into()))?.a0;
    let coefficient = PiCoefficient::new(a0 * GQ::frac(1, 16), -2);
    let in24 = a0 * GQ::frac(24, 16);
    let readings = vec![
        ("curvature formula: −6m²/(24π²)", GQ::int(-6)),
        ("quadratic-part formula: −m²/(8π²)", GQ::int(-3)),
    ]
    .into_iter()
    .map(|(l, v)| MassReading { label: l.into(), value: v, matches: v == in24 })
    .collect::<Vec<_>>();
    let verdict = match readings.iter().find(|r| r.matches) {
        Some(r) => format!("matches the {}", r.label),
        None => format!("matches neither reading: computed {in24}·m²/(24π²)"),
    };
    Ok(MassTerm { coefficient, in_units_of_24pi2: in24, readings, verdict })
}

/// Logarithmic coefficient of the effective action with its decomposition,
/// boundary current, mass term, residue relation and C = 0 projection.
pub fn compute_s_log_report(table: &CoefficientTable, m2: &M2Exact) -> Result<DivergenceReport> {
    let decomposition = assemble_s4_and_decompose(table)?;
    let failed: Vec<&Check> = decomposition.checks.iter().filter(|c| !c.passed).collect();
    if !failed.is_empty() {
        let msg: Vec<String> = failed.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        return Err(Error::Verification(msg.join("; ")));
    }
    let log_prefactor = PiCoefficient::over_pi2(1, 24);
    let canonical_form = decomposition.p_r.add(&decomposition.p_i);

    let projected = drop_axial(&apply_to_one(&canonical_form)).canonicalize(true);
    let f = field_strength(None, 0, 1);
    let reference = f.mul(&f)?.canonicalize(true);
    let yang_mills =
        YangMillsProjection { prefactor: log_prefactor, equal: projected == reference, projected, reference };

    let res = PiCoefficient::over_pi2(1, 96);
    let residue = ResidueRelation {
        c_log: log_prefactor,
        res,
        statement: "S_log = c_log = 4·Res, Res = c_log/4".into(),
        holds: res.coeff * GQ::int(4) == log_prefactor.coeff && res.pi_power == log_prefactor.pi_power,
    };

    Ok(DivergenceReport {
        lambda2_part: assemble_s2_leading()?,
        log_prefactor,
        f_form: decomposition.f_squared.clone(),
        canonical_form,
        boundary_current: decomposition.current.clone(),
        boundary_current_field: apply_to_one(&decomposition.current),
        mass_term: mass_term(m2)?,
        residue,
        yang_mills,
        decomposition,
        finite_part: "not computed".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{FieldKind, FieldLetter};

    #[test]
    fn s2_field_form() {
        let s2 = assemble_s2_leading().unwrap();
        let v = FieldLetter::field(FieldKind::V, 100);
        let c = FieldLetter::field(FieldKind::C, 100);
        let mut want = FieldPolynomial::zero();
        want.add_term(-GQ::int(1), Term::new(vec![v.clone(), v]));
        want.add_term(GQ::int(1), Term::new(vec![c.clone(), c]));
        assert!(s2.field.equal_exact(&want));
        assert!(s2.vector_equals_axial.iter().all(|p| p.is_zero()));
        assert!(!s2.field_raw.equal_exact(&s2.field));
    }

    #[test]
    fn bracket_expression_builds() {
        let p = build_expression(&bracket_form_of_p_i(), &[]).unwrap();
        assert!(!p.is_zero());
        assert!(p.canonicalize(true).is_zero());
    }
}
