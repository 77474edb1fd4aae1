use num_traits::One;
use serde::Serialize;

use super::{label_latex, label_name, Letter, Placement, Poly, Render, Term};
use crate::error::{Error, Result};
use crate::scalar::GQ;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum FieldKind {
    V,
    C,
    Lambda,
}

/// A matrix-valued field with a multi-index of partial derivatives.
/// `index` is `None` only for the gauge parameter λ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct FieldLetter {
    pub kind: FieldKind,
    pub index: Option<u32>,
    pub derivs: Vec<u32>,
}

impl FieldLetter {
    pub fn field(kind: FieldKind, index: u32) -> Self {
        Self { kind, index: Some(index), derivs: vec![] }
    }

    pub fn lambda() -> Self {
        Self { kind: FieldKind::Lambda, index: None, derivs: vec![] }
    }

    pub fn with_derivs(mut self, d: &[u32]) -> Self {
        self.derivs.extend_from_slice(d);
        self.derivs.sort_unstable();
        self
    }

    pub fn differentiate(&self, label: u32) -> Self {
        self.clone().with_derivs(&[label])
    }
}

fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation until exhausted
    loop {
        let n = cur.len();
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

impl Letter for FieldLetter {
    fn labels(&self) -> Vec<u32> {
        let mut v = self.derivs.clone();
        v.extend(self.index);
        v
    }

    fn map_labels(&self, f: &dyn Fn(u32) -> u32) -> Self {
        Self {
            kind: self.kind,
            index: self.index.map(f),
            derivs: self.derivs.iter().map(|&l| f(l)).collect(),
        }
    }

    fn variants(&self) -> Vec<Self> {
        if self.derivs.len() < 2 {
            return vec![self.clone()];
        }
        distinct_permutations(&self.derivs)
            .into_iter()
            .map(|derivs| Self { kind: self.kind, index: self.index, derivs })
            .collect()
    }
}

impl FieldLetter {
    fn draw(&self, p: &mut Placement, latex: bool) -> String {
        let name = |l: u32| if latex { label_latex(l) } else { label_name(l) };
        let pos = |p: &mut Placement, l: u32| if p.upper(l) { "^" } else { "_" };
        let mut s = String::new();
        for &d in &self.derivs {
            let pp = pos(p, d);
            if latex {
                s.push_str(&format!("\\partial{pp}{{{}}}", name(d)));
            } else {
                s.push_str(&format!("∂{pp}{}", name(d)));
            }
        }
        let base = match (self.kind, latex) {
            (FieldKind::V, _) => "V",
            (FieldKind::C, _) => "C",
            (FieldKind::Lambda, false) => "λ",
            (FieldKind::Lambda, true) => "\\lambda",
        };
        s.push_str(base);
        if let Some(i) = self.index {
            let pp = pos(p, i);
            if latex {
                s.push_str(&format!("{pp}{{{}}}", name(i)));
            } else {
                s.push_str(&format!("{pp}{}", name(i)));
            }
        }
        if self.derivs.is_empty() {
            s
        } else {
            format!("({s})")
        }
    }
}

impl Render for FieldLetter {
    fn render(&self, p: &mut Placement) -> String {
        self.draw(p, false)
    }

    fn render_latex(&self, p: &mut Placement) -> String {
        self.draw(p, true)
    }
}

pub type FieldPolynomial = Poly<FieldLetter>;

/// ∂_label of every term by the Leibniz rule.
pub fn total_derivative(p: &FieldPolynomial, label: u32) -> FieldPolynomial {
    let mut out = FieldPolynomial::zero();
    for (t, c) in p.terms() {
        for k in 0..t.word.len() {
            let mut word = t.word.clone();
            word[k] = word[k].differentiate(label);
            out.add_term(*c, Term { word, eps: t.eps });
        }
    }
    out
}

fn contains_lambda(p: &FieldPolynomial) -> bool {
    p.terms().any(|(t, _)| t.word.iter().any(|l| l.kind == FieldKind::Lambda))
}

/// Variation of one letter ∂_d X under δV_a = ∂_a λ + i[V_a, λ],
/// δC_a = i[C_a, λ].
fn vary_letter(l: &FieldLetter, constant: bool) -> Vec<(GQ, Vec<FieldLetter>)> {
    let i = GQ::i();
    let mut out = Vec::new();
    if l.kind == FieldKind::V && !constant {
        let mut d = l.derivs.clone();
        d.extend(l.index);
        out.push((GQ::one(), vec![FieldLetter::lambda().with_derivs(&d)]));
    }
    let n = l.derivs.len();
    for mask in 0u32..(1 << n) {
        let (mut on_field, mut on_lambda) = (Vec::new(), Vec::new());
        for (k, &d) in l.derivs.iter().enumerate() {
            if mask & (1 << k) != 0 {
                on_field.push(d);
            } else {
                on_lambda.push(d);
            }
        }
        if constant && !on_lambda.is_empty() {
            continue;
        }
        let x = FieldLetter { kind: l.kind, index: l.index, derivs: vec![] }.with_derivs(&on_field);
        let lam = FieldLetter::lambda().with_derivs(&on_lambda);
        out.push((i, vec![x.clone(), lam.clone()]));
        out.push((-i, vec![lam, x]));
    }
    out
}

fn variation(p: &FieldPolynomial, constant: bool) -> Result<FieldPolynomial> {
    if contains_lambda(p) {
        return Err(Error::Domain("gauge variation of an expression that already contains λ".into()));
    }
    let mut out = FieldPolynomial::zero();
    for (t, c) in p.terms() {
        for k in 0..t.word.len() {
            for (cv, repl) in vary_letter(&t.word[k], constant) {
                let mut word = t.word[..k].to_vec();
                word.extend(repl);
                word.extend_from_slice(&t.word[k + 1..]);
                out.add_term(*c * cv, Term { word, eps: t.eps });
            }
        }
    }
    Ok(out.canonicalize(false))
}

/// First-order variation under an infinitesimal vector gauge
/// transformation with parameter λ(x).
pub fn gauge_variation_vector(p: &FieldPolynomial) -> Result<FieldPolynomial> {
    variation(p, false)
}

/// Same as [`gauge_variation_vector`] with ∂λ = 0.
pub fn gauge_variation_vector_constant(p: &FieldPolynomial) -> Result<FieldPolynomial> {
    variation(p, true)
}

/// Sets every axial field to zero.
pub fn drop_axial(p: &FieldPolynomial) -> FieldPolynomial {
    p.filter(|t| t.word.iter().all(|l| l.kind != FieldKind::C))
}

/// Replaces V by `sign`·C everywhere.
pub fn vector_to_axial(p: &FieldPolynomial, sign: i8) -> FieldPolynomial {
    p.substitute(|l| match l.kind {
        FieldKind::V => FieldPolynomial::letter(FieldLetter { kind: FieldKind::C, ..l.clone() })
            .scale(GQ::int(sign as i128)),
        _ => FieldPolynomial::letter(l.clone()),
    })
    .canonicalize(false)
}

/// Removes single-factor terms carrying a derivative, which integrate to
/// boundary contributions.
pub fn drop_total_derivatives(p: &FieldPolynomial) -> FieldPolynomial {
    p.filter(|t| !(t.word.len() == 1 && !t.word[0].derivs.is_empty()))
}

/// ∂_μ A_ν − ∂_ν A_μ + i[A_μ, A_ν] with A = V + s·iC, or A = V when `axial`
/// is `None`.
pub fn field_strength(axial: Option<i8>, mu: u32, nu: u32) -> FieldPolynomial {
    let a = |l: u32| {
        let v = FieldPolynomial::letter(FieldLetter::field(FieldKind::V, l));
        match axial {
            None => v,
            Some(s) => v.add(
                &FieldPolynomial::letter(FieldLetter::field(FieldKind::C, l))
                    .scale(GQ::i() * GQ::int(s as i128)),
            ),
        }
    };
    let d = |l: u32, of: u32| total_derivative(&a(of), l);
    let am = a(mu);
    let an = a(nu);
    let comm = am.mul(&an).expect("no ε").sub(&an.mul(&am).expect("no ε"));
    d(mu, nu).sub(&d(nu, mu)).add(&comm.scale(GQ::i())).canonicalize(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lt(l: FieldLetter) -> FieldPolynomial {
        FieldPolynomial::letter(l)
    }

    #[test]
    fn permutations_of_multiset() {
        assert_eq!(distinct_permutations(&[1, 1, 2]).len(), 3);
        assert_eq!(distinct_permutations(&[3, 1, 2]).len(), 6);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }

    #[test]
    fn partials_commute() {
        let a = lt(FieldLetter::field(FieldKind::V, 2).with_derivs(&[0, 1]));
        let b = lt(FieldLetter { kind: FieldKind::V, index: Some(2), derivs: vec![1, 0] });
        assert!(a.equal_exact(&b));
    }

    #[test]
    fn vector_variation() {
        let v = lt(FieldLetter::field(FieldKind::V, 0));
        let dv = gauge_variation_vector(&v).unwrap();
        let mut want = FieldPolynomial::zero();
        want.add_term(GQ::one(), Term::new(vec![FieldLetter::lambda().with_derivs(&[0])]));
        want.add_term(GQ::i(), Term::new(vec![FieldLetter::field(FieldKind::V, 0), FieldLetter::lambda()]));
        want.add_term(-GQ::i(), Term::new(vec![FieldLetter::lambda(), FieldLetter::field(FieldKind::V, 0)]));
        assert!(dv.equal_exact(&want));
    }

    #[test]
    fn constant_parameter() {
        let x = FieldLetter::field(FieldKind::V, 1).with_derivs(&[0]);
        let dv = gauge_variation_vector_constant(&lt(x.clone())).unwrap();
        let mut want = FieldPolynomial::zero();
        want.add_term(GQ::i(), Term::new(vec![x.clone(), FieldLetter::lambda()]));
        want.add_term(-GQ::i(), Term::new(vec![FieldLetter::lambda(), x]));
        assert!(dv.equal_exact(&want));
    }

    #[test]
    fn lambda_input_rejected() {
        assert!(gauge_variation_vector(&lt(FieldLetter::lambda())).is_err());
    }

    #[test]
    fn curvature_squared_is_invariant() {
        let f = field_strength(None, 0, 1);
        // contract both slots: F_{ab} F_{ab}
        let g = field_strength(None, 0, 1);
        let ff = f.mul(&g).unwrap();
        let dv = gauge_variation_vector(&ff).unwrap();
        assert!(dv.canonicalize(true).is_zero());
    }

    #[test]
    fn mass_like_term_is_not_invariant() {
        let vv =
            lt(FieldLetter::field(FieldKind::V, 0)).mul(&lt(FieldLetter::field(FieldKind::V, 0))).unwrap();
        let dv = gauge_variation_vector(&vv).unwrap();
        assert!(!dv.canonicalize(true).is_zero());
    }
}
