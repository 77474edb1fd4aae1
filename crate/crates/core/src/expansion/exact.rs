use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{compute_jn, Check, ChiralitySignature, EpsilonSignature, SlotAverages};
use crate::error::{Error, Result};
use crate::integrals::{i_series, i_series_all_powers, whole_line_symmetrized, EtaSeries};
use crate::scalar::{fmt_q, GQ};
use crate::tensor::{decompose_rank4, TensorExpr};

/// The scalar c in `expr = c·η^{ab}` (Sym labels a, b); any other
/// structure is an error.
pub fn eta_coefficient(expr: &TensorExpr, a: u32, b: u32) -> Result<GQ> {
    let at = |x: u8, y: u8| {
        let m: BTreeMap<u32, u8> = [(a, x), (b, y)].into_iter().collect();
        expr.evaluate(&m, None)
    };
    let c = at(1, 1)?;
    for x in 1..=4 {
        for y in 1..=4 {
            let want = if x == y { c } else { GQ::zero() };
            if at(x, y)? != want {
                return Err(Error::OutsideSpan(format!("{} is not proportional to η", expr.pretty())));
            }
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct M2Entry {
    pub signature: ChiralitySignature,
    /// Λ² coefficient.
    pub a: GQ,
    /// m² log(Λ/|m|) coefficient.
    pub a0: GQ,
    /// Λ² coefficient from the u-integral route with N_{2,k}.
    pub a_simplified: GQ,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct M2Exact {
    pub entries: Vec<M2Entry>,
    /// I_{2,k} series used, k = 0..=3.
    pub series: Vec<EtaSeries>,
}

impl M2Exact {
    pub fn get(&self, s: &[u8]) -> Option<&M2Entry> {
        self.entries.iter().find(|e| e.signature.as_slice() == s)
    }
}

/// Exact quadratic coefficients: Σ_ε I_{2,k}(m/Λ) T_ε integrated in Λ.
/// With I = I(0⁺) + c₂η² + …, the Λ² coefficient is Σ I(0⁺)T and the
/// m² log Λ coefficient is 2Σ c₂T (both in units of η/16π²).
pub fn compute_m2_exact(eta_order: usize) -> Result<M2Exact> {
    let order = eta_order.max(2);
    let series: Vec<EtaSeries> = (0..=3).map(|k| i_series(2, k, order)).collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for s in ChiralitySignature::all(2) {
        let avg = SlotAverages::new(&s)?;
        let mut lead = TensorExpr::zero();
        let mut sub = TensorExpr::zero();
        for eps in EpsilonSignature::all(3) {
            let t = avg.projector(&eps)?;
            let ser = &series[eps.k() as usize];
            lead = lead.add(&t.scale(GQ::real(ser.constant())));
            sub = sub.add(&t.scale(GQ::real(ser.coeff(2))));
        }
        let a = eta_coefficient(&lead, 1, 2)?;
        let a0 = eta_coefficient(&sub, 1, 2)? * GQ::int(2);
        let a_simplified = eta_coefficient(&avg.j_structure()?, 1, 2)?;
        if a != a_simplified {
            return Err(Error::Verification(format!(
                "Λ² coefficient for {s}: projector route {a}, u-integral route {a_simplified}"
            )));
        }
        entries.push(M2Entry { signature: s, a, a0, a_simplified });
    }
    Ok(M2Exact { entries, series })
}

/// Quartic route consistency: Σ_ε I_{4,k}(0⁺) T_ε against J₄ for every
/// signature.
pub fn route_consistency_n4() -> Result<Vec<Check>> {
    let i0: Vec<GQ> =
        (0..=5).map(|k| i_series(4, k, 0).map(|s| GQ::real(s.constant()))).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for s in ChiralitySignature::all(4) {
        let avg = SlotAverages::new(&s)?;
        let mut m = TensorExpr::zero();
        for eps in EpsilonSignature::all(5) {
            m = m.add(&avg.projector(&eps)?.scale(i0[eps.k() as usize]));
        }
        let lhs = decompose_rank4(&m, [1, 2, 3, 4])?;
        let rhs = decompose_rank4(&avg.j_structure()?, [1, 2, 3, 4])?;
        out.push(Check::new(
            format!("quartic routes agree for {s}"),
            lhs == rhs,
            format!("projector route {:?}, u-integral route {:?}", lhs.as_array(), rhs.as_array()),
        ));
    }
    Ok(out)
}

/// Odd orders vanish, the η series are even, and the symmetrized
/// whole-line u-integrals vanish.
pub fn parity_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in [1, 3] {
        let nonzero: Vec<String> = ChiralitySignature::all(n)
            .iter()
            .filter_map(|s| match compute_jn(s) {
                Ok(j) if j.is_zero() => None,
                Ok(_) => Some(s.to_string()),
                Err(e) => Some(format!("{s}: {e}")),
            })
            .collect();
        out.push(Check::new(
            format!("J_{n} vanishes for all signatures"),
            nonzero.is_empty(),
            if nonzero.is_empty() {
                format!("{} signatures", 1 << n)
            } else {
                format!("nonzero for {}", nonzero.join(" "))
            },
        ));
    }
    let mut odd = Vec::new();
    for n in [2u32, 4] {
        for k in 0..=n + 1 {
            let c = i_series_all_powers(n, k, 8)?;
            for (p, v) in c.iter().enumerate() {
                if p % 2 == 1 && !v.is_zero() {
                    odd.push(format!("I_{n},{k} η^{p}: {}", fmt_q(v)));
                }
            }
        }
    }
    out.push(Check::new(
        "I_{n,k} series are even in η",
        odd.is_empty(),
        if odd.is_empty() { "n = 2, 4; all k; through η^8".into() } else { odd.join("; ") },
    ));
    let mut worst = 0f64;
    for n in 1..=4u32 {
        for k in 0..=n + 1 {
            for eta in [0.3, -0.7] {
                worst = worst.max(whole_line_symmetrized(n, k, eta)?.norm());
            }
        }
    }
    out.push(Check::new(
        "symmetrized whole-line u-integrals vanish",
        worst < 1e-8,
        format!("max |value| {worst:.2e} over n = 1..4, η = 0.3, −0.7"),
    ));
    Ok(out)
}
