//! Structure constants of the resolvent expansion and the assembly of the
//! divergent parts of the effective action.

mod assembly;
mod exact;
mod table;

use std::fmt;

use serde::Serialize;

use crate::clifford::{gamma_trace, GammaSymbol, GammaWord};
use crate::error::{Error, Result};
use crate::integrals::n_integral;
use crate::scalar::GQ;
use crate::tensor::{Ix, TensorExpr};

pub use assembly::{
    assemble_s2_leading, assemble_s4_and_decompose, bracket_form_of_p_i, compute_s_log_report,
    f_squared_expr, imaginary_part_polynomial, p_r1_expr, p_r2_expr, real_part_polynomial, DivergenceReport,
    MassReading, MassTerm, ResidueRelation, S2Leading, S4Decomposition, YangMillsProjection,
};
pub use exact::{compute_m2_exact, eta_coefficient, parity_checks, route_consistency_n4, M2Entry, M2Exact};
pub use table::{compute_table1, expected_table1, table1, CoefficientTable, ExpectedEntry, TableEntry};

/// Outcome of one named verification step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Vertex types s_j ∈ {0, 5}: 0 is γ^ν, 5 is iγ^νγ₅.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct ChiralitySignature(Vec<u8>);

impl ChiralitySignature {
    pub fn new(s: Vec<u8>) -> Result<Self> {
        if s.is_empty() || s.len() > 4 {
            return Err(Error::Domain(format!("signature length {} outside 1..=4", s.len())));
        }
        if let Some(v) = s.iter().find(|v| **v != 0 && **v != 5) {
            return Err(Error::Domain(format!("vertex type {v} is neither 0 nor 5")));
        }
        Ok(Self(s))
    }

    /// Reads the printed convention where a vector vertex is written 1.
    pub fn from_printed(s: &[u8]) -> Result<Self> {
        Self::new(s.iter().map(|&v| if v == 1 { 0 } else { v }).collect())
    }

    pub fn printed(&self) -> Vec<u8> {
        self.0.iter().map(|&v| if v == 0 { 1 } else { v }).collect()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn fives(&self) -> usize {
        self.0.iter().filter(|&&v| v == 5).count()
    }

    /// All 2ⁿ signatures of length n, lexicographic with 0 < 5.
    pub fn all(n: usize) -> Vec<Self> {
        (0..1u32 << n)
            .map(|m| Self((0..n).map(|j| if m >> (n - 1 - j) & 1 == 1 { 5 } else { 0 }).collect()))
            .collect()
    }

    /// Simultaneous rotation by one slot: s_j ↦ s_{j+1}.
    pub fn rotated(&self) -> Self {
        let mut v = self.0.clone();
        v.rotate_left(1);
        Self(v)
    }
}

impl fmt::Display for ChiralitySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Projector labels ε_j = ±1 for the n+1 propagators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct EpsilonSignature(Vec<i8>);

impl EpsilonSignature {
    pub fn new(e: Vec<i8>) -> Result<Self> {
        if let Some(v) = e.iter().find(|v| v.abs() != 1) {
            return Err(Error::Domain(format!("projector label {v} is not ±1")));
        }
        Ok(Self(e))
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    /// Number of minus signs, so that Σε_j = len − 2k.
    pub fn k(&self) -> u32 {
        self.0.iter().filter(|&&v| v < 0).count() as u32
    }

    pub fn flipped(&self) -> Self {
        Self(self.0.iter().map(|v| -v).collect())
    }

    pub fn all(len: usize) -> Vec<Self> {
        (0..1u32 << len)
            .map(|m| Self((0..len).map(|j| if m >> (len - 1 - j) & 1 == 1 { -1 } else { 1 }).collect()))
            .collect()
    }
}

impl fmt::Display for EpsilonSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&v| if v > 0 { '+' } else { '-' }).collect();
        write!(f, "{s}")
    }
}

/// Lorentz label of the j-th vertex (j from 1).
pub fn vertex_index(j: usize) -> Ix {
    Ix::Sym(j as u32)
}

/// Angular averages ⟨tr X₀ γ_{s₁} X₁ … γ_{sₙ} Xₙ⟩ for every choice of
/// X_j ∈ {1, ξ̸}, indexed by the bit mask of ξ̸ slots (bit j is slot j).
pub(crate) struct SlotAverages {
    n: usize,
    values: Vec<TensorExpr>,
}

impl SlotAverages {
    pub(crate) fn new(s: &ChiralitySignature) -> Result<Self> {
        let n = s.len();
        let mut values = Vec::with_capacity(1 << (n + 1));
        for mask in 0u32..1 << (n + 1) {
            let mut letters = Vec::new();
            let mut pre = GQ::int(1);
            for slot in 0..=n {
                if mask >> slot & 1 == 1 {
                    letters.push(GammaSymbol::SlashedXi);
                }
                if slot < n {
                    letters.push(GammaSymbol::Plain(vertex_index(slot + 1)));
                    if s.as_slice()[slot] == 5 {
                        letters.push(GammaSymbol::Five);
                        pre *= GQ::i();
                    }
                }
            }
            // an odd number of gammas has zero trace
            let plain = n + mask.count_ones() as usize;
            let avg = if plain % 2 == 1 {
                TensorExpr::zero()
            } else {
                gamma_trace(&GammaWord::with_prefactor(pre, letters))?.angular_average()?
            };
            values.push(avg);
        }
        Ok(Self { n, values })
    }

    /// Σ_j N_{n,j} × (coefficient of u^j in the expanded product).
    pub(crate) fn j_structure(&self) -> Result<TensorExpr> {
        let mut out = TensorExpr::zero();
        for (mask, w) in self.values.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let j = (mask as u32).count_ones();
            let sign = if j.is_multiple_of(2) { GQ::int(1) } else { GQ::int(-1) };
            let nv = n_integral(self.n as u32, j)?.value;
            out = out.add(&w.scale(sign * GQ::real(nv)));
        }
        Ok(out)
    }

    /// ⟨tr P_{ε₁}γ_{s₁}P_{ε₂}…γ_{sₙ}P_{εₙ₊₁}⟩ with P_ε = ½(1 + εξ̸).
    pub(crate) fn projector(&self, eps: &EpsilonSignature) -> Result<TensorExpr> {
        if eps.as_slice().len() != self.n + 1 {
            return Err(Error::Domain(format!(
                "{} projector labels for {} vertices",
                eps.as_slice().len(),
                self.n
            )));
        }
        let mut out = TensorExpr::zero();
        for (mask, w) in self.values.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let sign: i128 =
                (0..=self.n).filter(|j| mask >> j & 1 == 1).map(|j| eps.as_slice()[j] as i128).product();
            out = out.add(&w.scale(GQ::int(sign)));
        }
        Ok(out.scale(GQ::frac(1, 1 << (self.n + 1))))
    }
}

/// The structure tensor J_n for a vertex signature: the expanded product
/// (1−uξ̸)γ_{s₁}(1−uξ̸)…γ_{sₙ}(1−uξ̸) traced, angular averaged and
/// integrated against u^{n−1}(1−u²)^{−n−1} power by power. Vertex j carries
/// the index `Sym(j)`.
pub fn compute_jn(s: &ChiralitySignature) -> Result<TensorExpr> {
    SlotAverages::new(s)?.j_structure()
}

/// Angular-averaged spin trace with projectors between the vertices.
pub fn projector_trace(s: &ChiralitySignature, eps: &EpsilonSignature) -> Result<TensorExpr> {
    SlotAverages::new(s)?.projector(eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::decompose_rank4;

    fn sig(v: &[u8]) -> ChiralitySignature {
        ChiralitySignature::new(v.to_vec()).unwrap()
    }

    #[test]
    fn signatures() {
        assert_eq!(ChiralitySignature::all(2).len(), 4);
        assert_eq!(ChiralitySignature::from_printed(&[1, 5]).unwrap(), sig(&[0, 5]));
        assert!(ChiralitySignature::new(vec![1]).is_err());
        assert!(ChiralitySignature::new(vec![0; 5]).is_err());
        assert_eq!(sig(&[0, 5, 5]).to_string(), "(0,5,5)");
        let e = EpsilonSignature::new(vec![1, -1, -1]).unwrap();
        assert_eq!(e.k(), 2);
        assert_eq!(e.to_string(), "+--");
    }

    #[test]
    fn odd_orders_vanish() {
        for n in [1, 3] {
            for s in ChiralitySignature::all(n) {
                assert!(compute_jn(&s).unwrap().is_zero(), "{s}");
            }
        }
    }

    #[test]
    fn quadratic_constants() {
        let a = |v: &[u8]| eta_coefficient(&compute_jn(&sig(v)).unwrap(), 1, 2).unwrap();
        assert_eq!(a(&[5, 5]), GQ::int(1));
        assert_eq!(a(&[0, 0]), GQ::int(-1));
        assert_eq!(a(&[0, 5]), GQ::int(0));
        assert_eq!(a(&[5, 0]), GQ::int(0));
    }

    #[test]
    fn vector_quartic() {
        let j = compute_jn(&sig(&[0, 0, 0, 0])).unwrap();
        let d = decompose_rank4(&j, [1, 2, 3, 4]).unwrap().scale(GQ::int(3));
        assert_eq!(d.as_array(), [0, -2, 2, 0].map(GQ::int));
    }

    #[test]
    fn projector_length_checked() {
        let e = EpsilonSignature::new(vec![1, 1]).unwrap();
        assert!(projector_trace(&sig(&[0, 0]), &e).is_err());
    }
}
