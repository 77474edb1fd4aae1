//! Command-line front end: configuration, the verification suite and the
//! text/json/LaTeX emitters for each artifact.

mod suite;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expansion::{
    assemble_s2_leading, compute_m2_exact, compute_s_log_report, compute_table1, CoefficientTable,
    DivergenceReport, M2Exact, S2Leading,
};
use crate::integrals::i_numeric;
use crate::scalar::fmt_q;

pub use suite::{
    angular_records, clifford_records, decomposition_records, gauge_records, profile_records,
    quadratic_records, radial_records, report_records, run_suite, table_records, trace_sweep, Record, Status,
    SuiteOptions,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Subcommand)]
pub enum Command {
    /// Run the full verification suite.
    Verify,
    /// Quartic coefficient table against the shipped reference.
    Table1,
    /// Logarithmic divergence report.
    Slog,
    /// Quadratic divergence.
    S2,
    /// Exact quadratic coefficients and their mass corrections.
    M2,
    /// Relation between the log coefficient and the residue.
    Residue,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Clone, PartialEq, Eq, Debug, Parser)]
#[command(name = "diracdet", version, about = "Divergent parts of the Dirac determinant on flat R^4")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cross-check exact values against quadrature where it applies.
    #[arg(long, global = true)]
    pub numeric_oracle: bool,
    /// Gauss-Legendre order of the sphere quadrature.
    #[arg(long, default_value_t = 16, global = true)]
    pub oracle_order: usize,
    /// Highest power of η kept in the I series.
    #[arg(long, default_value_t = 4, global = true)]
    pub eta_order: usize,
}

impl CliConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            format: Format::Text,
            out: None,
            numeric_oracle: false,
            oracle_order: 16,
            eta_order: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eta_order < 2 || self.eta_order % 2 == 1 {
            return Err(Error::Domain(format!("--eta-order {} must be even and at least 2", self.eta_order)));
        }
        if self.oracle_order < 4 {
            return Err(Error::Domain(format!("--oracle-order {} must be at least 4", self.oracle_order)));
        }
        if self.oracle_order > 200 {
            return Err(Error::Domain(format!("--oracle-order {} is unreasonably large", self.oracle_order)));
        }
        Ok(())
    }
}

/// Rendered artifact and whether everything it reports passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Runs one command. Configuration problems are `Err(Error::Domain)`;
/// failed checks give `passed == false`.
pub fn run(config: &CliConfig) -> Result<Outcome> {
    config.validate()?;
    match config.command {
        Command::Verify => verify(config),
        Command::Table1 => table(config),
        Command::Slog => slog(config),
        Command::S2 => s2(config),
        Command::M2 => m2(config),
        Command::Residue => residue(config),
    }
}

/// Runs a command and writes its artifact, returning the exit status.
pub fn main_with(config: &CliConfig) -> i32 {
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let outcome = match run(config) {
        Ok(o) => o,
        Err(e) => {
            let msg = match config.format {
                Format::Json => json_string(&json!({"error": e.to_string(), "passed": false})),
                _ => format!("error: {e}\n"),
            };
            emit(config, &msg);
            return EXIT_FAILED;
        }
    };
    if !emit(config, &outcome.output) {
        return EXIT_CONFIG;
    }
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn emit(config: &CliConfig, s: &str) -> bool {
    match &config.out {
        Some(p) => match std::fs::write(p, s) {
            Ok(()) => true,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", p.display());
                false
            }
        },
        None => {
            print!("{s}");
            true
        }
    }
}

fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn latex_escape(s: &str) -> String {
    s.replace('\\', "\\textbackslash{}")
        .replace('&', "\\&")
        .replace('%', "\\%")
        .replace('_', "\\_")
        .replace('#', "\\#")
        .replace('{', "\\{")
        .replace('}', "\\}")
}

/// Renders suite records; json output carries the list of failed checks.
pub fn render_records(records: &[Record], format: Format) -> String {
    let failed: Vec<&Record> = records.iter().filter(|r| !r.passed()).collect();
    match format {
        Format::Json => json_string(&json!({
            "checks": records,
            "total": records.len(),
            "failed": failed.iter().map(|r| r.check.as_str()).collect::<Vec<_>>(),
            "passed": failed.is_empty(),
        })),
        Format::Text => {
            let mut s = String::new();
            for r in records {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{tag}  {}: {}", r.check, r.detail);
            }
            let _ = writeln!(s, "{} of {} checks passed", records.len() - failed.len(), records.len());
            s
        }
        Format::Latex => {
            let mut s =
                String::from("\\begin{tabular}{lll}\n\\hline\ncheck & status & detail \\\\\n\\hline\n");
            for r in records {
                let tag = if r.passed() { "pass" } else { "fail" };
                let _ = writeln!(s, "{} & {tag} & {} \\\\", latex_escape(&r.check), latex_escape(&r.detail));
            }
            s.push_str("\\hline\n\\end{tabular}\n");
            s
        }
    }
}

fn verify(config: &CliConfig) -> Result<Outcome> {
    let opts = SuiteOptions {
        oracle_order: config.oracle_order,
        eta_order: config.eta_order,
        ..SuiteOptions::default()
    };
    let records = run_suite(&opts);
    Ok(Outcome {
        passed: records.iter().all(Record::passed),
        output: render_records(&records, config.format),
    })
}

fn table_text(t: &CoefficientTable) -> String {
    let mut s = String::from("signature      A     B     C     D   status\n");
    for e in &t.entries {
        let [a, b, c, d] = e.computed.as_array();
        let p: Vec<String> = e.signature.printed().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(
            s,
            "({})  {:>4}  {:>4}  {:>4}  {:>4}   {}",
            p.join(","),
            a.to_string(),
            b.to_string(),
            c.to_string(),
            d.to_string(),
            if e.matches { "ok" } else { "MISMATCH" }
        );
    }
    s
}

fn table_latex(t: &CoefficientTable) -> String {
    let n = t.entries.len();
    let mut s = format!("\\begin{{tabular}}{{c|{}}}\n\\hline\n", "c".repeat(n));
    for slot in 0..4 {
        let _ = write!(s, "$s_{}$", slot + 1);
        for e in &t.entries {
            let _ = write!(s, " & {}", e.signature.printed()[slot]);
        }
        s.push_str(" \\\\\n");
    }
    s.push_str("\\hline\n");
    for (row, k) in ["A", "B", "C", "D"].iter().enumerate() {
        let _ = write!(s, "${k}_s$");
        for e in &t.entries {
            let _ = write!(s, " & ${}$", e.computed.as_array()[row].latex());
        }
        s.push_str(" \\\\\n");
    }
    s.push_str("\\hline\n\\end{tabular}\n");
    s
}

fn table(config: &CliConfig) -> Result<Outcome> {
    let t = compute_table1()?;
    let mut checks = t.structure_checks();
    let extra = if config.numeric_oracle { radial_records() } else { vec![] };
    let passed =
        t.mismatches().is_empty() && checks.iter().all(|c| c.passed) && extra.iter().all(Record::passed);
    let output = match config.format {
        Format::Text => {
            let mut s = table_text(&t);
            for c in checks.drain(..) {
                let _ = writeln!(s, "{}  {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            for r in &extra {
                let _ =
                    writeln!(s, "{}  {}: {}", if r.passed() { "PASS" } else { "FAIL" }, r.check, r.detail);
            }
            s
        }
        Format::Json => json_string(&json!({
            "entries": t.entries.iter().map(|e| json!({
                "signature": e.signature.printed(),
                "computed": to_value(&e.computed),
                "expected": to_value(&e.expected),
                "status": if e.matches { "pass" } else { "fail" },
            })).collect::<Vec<_>>(),
            "checks": checks,
            "oracle": extra,
            "passed": passed,
        })),
        Format::Latex => table_latex(&t),
    };
    Ok(Outcome { output, passed })
}

fn s2_json(s2: &S2Leading) -> Value {
    json!({
        "prefactor": to_value(&s2.prefactor),
        "coefficients": s2.coefficients.iter().map(|(s, a)| json!({"signature": s, "A": a})).collect::<Vec<_>>(),
        "covariant": s2.covariant.to_json(),
        "field_with_boundary_terms": s2.field_raw.to_json(),
        "field": s2.field.to_json(),
        "vector_equals_axial": [s2.vector_equals_axial[0].to_json(), s2.vector_equals_axial[1].to_json()],
    })
}

fn s2(config: &CliConfig) -> Result<Outcome> {
    let s2 = assemble_s2_leading()?;
    let passed = s2.vector_equals_axial.iter().all(|p| p.is_zero());
    let output = match config.format {
        Format::Json => json_string(&s2_json(&s2)),
        Format::Text => format!(
            "Λ² coefficient, prefactor {}\n  covariant: ∫tr({})\n  on 1:      ∫tr({})\n  V = C:     {}\n  V = −C:    {}\n",
            s2.prefactor,
            s2.covariant.pretty(),
            s2.field.pretty(),
            s2.vector_equals_axial[0].pretty(),
            s2.vector_equals_axial[1].pretty()
        ),
        Format::Latex => format!(
            "\\begin{{align}}\nS^{{(2)}} &= {}\\int \\mathrm{{tr}}\\left({}\\right) \\\\\n&= {}\\int \\mathrm{{tr}}\\left({}\\right)\n\\end{{align}}\n",
            s2.prefactor.latex(),
            s2.covariant.latex(),
            s2.prefactor.latex(),
            s2.field.latex()
        ),
    };
    Ok(Outcome { output, passed })
}

fn series_text(m: &M2Exact) -> Vec<String> {
    m.series
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut line = format!("I_2,{k} = {}", fmt_q(&s.constant()));
            for (j, c) in s.even.iter().enumerate().skip(1) {
                let sign = if c.is_negative() { '-' } else { '+' };
                let _ = write!(line, " {sign} {}·η^{}", fmt_q(&c.abs()), 2 * j);
            }
            line.push_str(" + …");
            line
        })
        .collect()
}

fn m2_oracle(m: &M2Exact) -> Result<Vec<Record>> {
    let eta = 0.02;
    let mut out = Vec::new();
    for (k, s) in m.series.iter().enumerate() {
        let num = i_numeric(2, k as u32, eta)?;
        let ser = s.eval(eta);
        let tol = 4.0 * eta.powi(s.even.len() as i32 * 2);
        out.push(Record {
            check: format!("I_2,{k} series vs quadrature at η = {eta}"),
            paper_ref: "u-integrals at finite mass".into(),
            status: if (num - ser).abs() < tol.max(1e-10) { Status::Pass } else { Status::Fail },
            detail: format!("series {ser:.12}, quadrature {num:.12}"),
        });
    }
    Ok(out)
}

fn m2(config: &CliConfig) -> Result<Outcome> {
    let m = compute_m2_exact(config.eta_order)?;
    let extra = if config.numeric_oracle { m2_oracle(&m)? } else { vec![] };
    let passed = extra.iter().all(Record::passed);
    let output = match config.format {
        Format::Json => json_string(&json!({
            "units": "η^{ν₁ν₂}/(16π²)",
            "entries": m.entries.iter().map(|e| json!({
                "signature": e.signature,
                "lambda2": e.a,
                "m2_log": e.a0,
                "lambda2_u_integral_route": e.a_simplified,
            })).collect::<Vec<_>>(),
            "series": m.series,
            "oracle": extra,
            "passed": passed,
        })),
        Format::Text => {
            let mut s = String::from("signature   Λ²    m² log(Λ/|m|)   (units of η/16π²)\n");
            for e in &m.entries {
                let _ = writeln!(
                    s,
                    "{:<10}  {:>3}   {:>3}",
                    e.signature.to_string(),
                    e.a.to_string(),
                    e.a0.to_string()
                );
            }
            for l in series_text(&m) {
                let _ = writeln!(s, "{l}");
            }
            for r in &extra {
                let _ =
                    writeln!(s, "{}  {}: {}", if r.passed() { "PASS" } else { "FAIL" }, r.check, r.detail);
            }
            s
        }
        Format::Latex => {
            let mut s =
                String::from("\\begin{tabular}{ccc}\n\\hline\n$s$ & $A_s$ & $A^{(0)}_s$ \\\\\n\\hline\n");
            for e in &m.entries {
                let sig: Vec<String> = e.signature.as_slice().iter().map(|v| v.to_string()).collect();
                let _ = writeln!(s, "${}$ & ${}$ & ${}$ \\\\", sig.join(""), e.a.latex(), e.a0.latex());
            }
            s.push_str("\\hline\n\\end{tabular}\n");
            s
        }
    };
    Ok(Outcome { output, passed })
}

/// Stable JSON form of a report.
pub fn report_json(r: &DivergenceReport) -> Value {
    json!({
        "lambda2_part": s2_json(&r.lambda2_part),
        "log_part": {
            "prefactor": to_value(&r.log_prefactor),
            "f_form": r.f_form.to_json(),
            "canonical_form": r.canonical_form.to_json(),
            "boundary_current": r.boundary_current.to_json(),
            "boundary_current_on_one": r.boundary_current_field.to_json(),
            "checks": r.decomposition.checks,
            "p_i_bracket_sign": r.decomposition.p_i_bracket_sign,
        },
        "mass_term": to_value(&r.mass_term),
        "residue": to_value(&r.residue),
        "yang_mills": {
            "prefactor": to_value(&r.yang_mills.prefactor),
            "projected": r.yang_mills.projected.to_json(),
            "reference": r.yang_mills.reference.to_json(),
            "equal": r.yang_mills.equal,
        },
        "finite_part": r.finite_part,
    })
}

fn report_passed(r: &DivergenceReport) -> bool {
    r.decomposition.all_passed() && r.yang_mills.equal && r.residue.holds
}

fn slog(config: &CliConfig) -> Result<Outcome> {
    let r = compute_s_log_report(&compute_table1()?, &compute_m2_exact(config.eta_order)?)?;
    let passed = report_passed(&r);
    let output = match config.format {
        Format::Json => json_string(&report_json(&r)),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "coefficient of log(Λ/|m|), prefactor {}", r.log_prefactor);
            let _ = writeln!(s, "  ½F⁺F⁺ + ½F⁻F⁻:  ∫tr({})", r.f_form.pretty());
            let _ = writeln!(s, "  from the table:  ∫tr({})", r.canonical_form.pretty());
            let _ = writeln!(s, "  boundary term:   ∫∂^μ tr J_μ, J_μ = {}", r.boundary_current.pretty());
            let _ = writeln!(s, "  J_μ on 1:        {}", r.boundary_current_field.pretty());
            let _ = writeln!(s, "  mass term:       {} · m² ∫tr C^μC_μ", r.mass_term.coefficient);
            for m in &r.mass_term.readings {
                let _ = writeln!(s, "    {} → {}", m.label, if m.matches { "matches" } else { "differs" });
            }
            let _ = writeln!(s, "    {}", r.mass_term.verdict);
            let _ = writeln!(
                s,
                "  residue:         {} ({})",
                r.residue.statement,
                if r.residue.holds { "holds" } else { "fails" }
            );
            let _ = writeln!(
                s,
                "  C = 0:           {} ∫tr({})",
                r.yang_mills.prefactor,
                r.yang_mills.projected.pretty()
            );
            let _ = writeln!(s, "    equals F_μνF^μν: {}", r.yang_mills.equal);
            let _ = writeln!(s, "  finite part:     {}", r.finite_part);
            for c in &r.decomposition.checks {
                let _ = writeln!(s, "{}  {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            s
        }
        Format::Latex => {
            let p = r.log_prefactor.latex();
            format!(
                "\\begin{{align}}\nS_{{\\log}} &= {p}\\int \\mathrm{{tr}}\\left[{}\\right] \\\\\n&\\quad + {p}\\int \\partial^\\mu \\mathrm{{tr}}\\, J_\\mu + {}\\, m^2 \\int \\mathrm{{tr}}\\, C^\\mu C_\\mu \\\\\nJ_\\mu &= {} \\\\\nS_{{\\log}}\\big|_{{C=0}} &= {p}\\int \\mathrm{{tr}}\\left[{}\\right]\n\\end{{align}}\n",
                r.f_form.latex(),
                r.mass_term.coefficient.latex(),
                r.boundary_current.latex(),
                r.yang_mills.projected.latex()
            )
        }
    };
    Ok(Outcome { output, passed })
}

fn residue(config: &CliConfig) -> Result<Outcome> {
    let r = compute_s_log_report(&compute_table1()?, &compute_m2_exact(config.eta_order)?)?;
    let rr = &r.residue;
    let output = match config.format {
        Format::Json => json_string(&to_value(rr)),
        Format::Text => format!(
            "c_log = {}\nRes = {}\n{} ({})\n",
            rr.c_log,
            rr.res,
            rr.statement,
            if rr.holds { "holds" } else { "fails" }
        ),
        Format::Latex => format!(
            "\\begin{{align}}\nc_{{\\log}} &= {} \\\\\n\\mathrm{{Res}} &= {} = \\tfrac{{1}}{{4}}\\, c_{{\\log}}\n\\end{{align}}\n",
            rr.c_log.latex(),
            rr.res.latex()
        ),
    };
    Ok(Outcome { output, passed: rr.holds })
}
