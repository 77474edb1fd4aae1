use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{compute_jn, Check, ChiralitySignature};
use crate::error::{Error, Result};
use crate::scalar::GQ;
use crate::tensor::{decompose_rank4, Rank4Decomposition};

const GOLDEN: &str = include_str!("../../data/table1.json");

#[derive(Deserialize)]
struct GoldenFile {
    columns: Vec<GoldenColumn>,
}

#[derive(Deserialize)]
struct GoldenColumn {
    s: Vec<u8>,
    #[serde(rename = "A")]
    a: i128,
    #[serde(rename = "B")]
    b: i128,
    #[serde(rename = "C")]
    c: i128,
    #[serde(rename = "D")]
    d: i128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedEntry {
    pub signature: ChiralitySignature,
    pub coefficients: Rank4Decomposition,
}

/// The shipped reference table, in its printed column order.
pub fn expected_table1() -> Result<Vec<ExpectedEntry>> {
    let f: GoldenFile =
        serde_json::from_str(GOLDEN).map_err(|e| Error::Parse(format!("golden table: {e}")))?;
    f.columns
        .into_iter()
        .map(|c| {
            Ok(ExpectedEntry {
                signature: ChiralitySignature::from_printed(&c.s)?,
                coefficients: Rank4Decomposition {
                    a: GQ::int(c.a),
                    b: GQ::int(c.b),
                    c: GQ::int(c.c),
                    d: GQ::int(c.d) * GQ::i(),
                },
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableEntry {
    pub signature: ChiralitySignature,
    /// Three times the projection of J₄ onto ηη, ηη, ηη, ε.
    pub computed: Rank4Decomposition,
    pub expected: Rank4Decomposition,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientTable {
    pub entries: Vec<TableEntry>,
}

impl CoefficientTable {
    pub fn get(&self, s: &ChiralitySignature) -> Option<&Rank4Decomposition> {
        self.entries.iter().find(|e| &e.signature == s).map(|e| &e.computed)
    }

    pub fn mismatches(&self) -> Vec<&TableEntry> {
        self.entries.iter().filter(|e| !e.matches).collect()
    }

    /// A, B, C real and D imaginary; A, B, C vanish for an odd number of
    /// axial vertices, D for an even number.
    pub fn structure_checks(&self) -> Vec<Check> {
        let mut reality = Vec::new();
        let mut parity = Vec::new();
        for e in &self.entries {
            let [a, b, c, d] = e.computed.as_array();
            if !(a.is_real() && b.is_real() && c.is_real() && d.is_imaginary()) {
                reality.push(e.signature.to_string());
            }
            let odd = e.signature.fives() % 2 == 1;
            let ok = if odd { a.is_zero() && b.is_zero() && c.is_zero() } else { d.is_zero() };
            if !ok {
                parity.push(e.signature.to_string());
            }
        }
        let detail = |v: &[String]| {
            if v.is_empty() {
                "all 16 signatures".to_string()
            } else {
                format!("violated by {}", v.join(" "))
            }
        };
        vec![
            Check::new("table reality pattern", reality.is_empty(), detail(&reality)),
            Check::new("table parity in axial vertices", parity.is_empty(), detail(&parity)),
        ]
    }
}

/// Computes all sixteen quartic coefficient sets and compares them with
/// the reference table; mismatches are recorded, not raised.
pub fn compute_table1() -> Result<CoefficientTable> {
    let expected = expected_table1()?;
    let mut entries = Vec::with_capacity(expected.len());
    for e in expected {
        let j = compute_jn(&e.signature)?;
        let computed = decompose_rank4(&j, [1, 2, 3, 4])?.scale(GQ::int(3));
        entries.push(TableEntry {
            matches: computed == e.coefficients,
            signature: e.signature,
            computed,
            expected: e.coefficients,
        });
    }
    Ok(CoefficientTable { entries })
}

/// As [`compute_table1`] but any mismatch is an error naming the
/// offending signatures.
pub fn table1() -> Result<CoefficientTable> {
    let t = compute_table1()?;
    let bad: Vec<String> = t
        .mismatches()
        .iter()
        .map(|e| {
            format!(
                "{}: computed {:?}, expected {:?}",
                e.signature,
                e.computed.as_array(),
                e.expected.as_array()
            )
        })
        .collect();
    if !bad.is_empty() {
        return Err(Error::TableMismatch(bad.join("; ")));
    }
    Ok(t)
}
