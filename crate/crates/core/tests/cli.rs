use std::process::{Command, Output};

use diracdet::cli::{run, CliConfig, Command as Cmd, Format};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diracdet")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_passes_and_json_lists_every_check() {
    let o = bin(&["verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() > 50);
    for c in checks {
        for key in ["check", "paper_ref", "status", "detail"] {
            assert!(c.get(key).is_some(), "{key} missing in {c}");
        }
        assert_eq!(c["status"], "pass", "{c}");
    }
    assert_eq!(v["failed"].as_array().unwrap().len(), 0);
}

#[test]
fn output_is_deterministic() {
    for cmd in ["verify", "slog", "table1", "m2"] {
        let a = bin(&[cmd, "--format", "json"]);
        let b = bin(&[cmd, "--format", "json"]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn table_latex_layout() {
    let o = bin(&["table1", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("\\begin{tabular}"));
    assert!(s.trim_end().ends_with("\\end{tabular}"));
    for row in ["$s_1$", "$s_4$", "$A_s$", "$D_s$"] {
        assert!(s.contains(row), "{row}");
    }
    let d_row = s.lines().find(|l| l.starts_with("$D_s$")).unwrap();
    assert_eq!(d_row.matches("$-i$").count(), 4);
    assert_eq!(d_row.matches("& $i$").count(), 4);
}

#[test]
fn slog_json_yang_mills_projection() {
    let o = bin(&["slog", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["yang_mills"]["equal"], true);
    assert_eq!(v["yang_mills"]["projected"], v["yang_mills"]["reference"]);
    assert_eq!(v["log_part"]["prefactor"]["display"], "1/(24π^2)");
    assert_eq!(v["finite_part"], "not computed");
    assert_eq!(v["residue"]["holds"], true);
    let readings = v["mass_term"]["readings"].as_array().unwrap();
    assert_eq!(readings.len(), 2);
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(bin(&["m2", "--eta-order", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["m2", "--eta-order", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--oracle-order", "3"]).status.code(), Some(2));
    assert_eq!(bin(&["nonsense"]).status.code(), Some(2));
    assert_eq!(bin(&["table1", "--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_artifact() {
    let dir = std::env::temp_dir().join(format!("diracdet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("residue.tex");
    let o = bin(&["residue", "--format", "latex", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let s = std::fs::read_to_string(&path).unwrap();
    assert!(s.contains("\\begin{align}"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn numeric_oracle_flag() {
    let o = bin(&["m2", "--numeric-oracle", "--eta-order", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("quadrature"));
    let o = bin(&["table1", "--numeric-oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("N_4,4"));
}

#[test]
fn library_entry_point() {
    let mut c = CliConfig::new(Cmd::S2);
    c.format = Format::Text;
    let out = run(&c).unwrap();
    assert!(out.passed);
    assert!(out.output.contains("-V^aV_a + C^aC_a"));
    c.eta_order = 5;
    assert!(run(&c).is_err());
}
