use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use serde::Serialize;

use super::field::{FieldKind, FieldLetter, FieldPolynomial};
use super::{label_latex, label_name, Letter, Placement, Poly, Render, Term};
use crate::error::{Error, Result};
use crate::scalar::GQ;

/// Generators of the covariant ring: the covariant derivative and the
/// axial field.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum Gen {
    D,
    C,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct CovLetter {
    pub gen: Gen,
    pub index: u32,
}

impl CovLetter {
    pub fn d(index: u32) -> Self {
        Self { gen: Gen::D, index }
    }

    pub fn c(index: u32) -> Self {
        Self { gen: Gen::C, index }
    }
}

impl Letter for CovLetter {
    fn labels(&self) -> Vec<u32> {
        vec![self.index]
    }

    fn map_labels(&self, f: &dyn Fn(u32) -> u32) -> Self {
        Self { gen: self.gen, index: f(self.index) }
    }
}

impl Render for CovLetter {
    fn render(&self, p: &mut Placement) -> String {
        let g = match self.gen {
            Gen::D => "D",
            Gen::C => "C",
        };
        let pos = if p.upper(self.index) { "^" } else { "_" };
        format!("{g}{pos}{}", label_name(self.index))
    }

    fn render_latex(&self, p: &mut Placement) -> String {
        let g = match self.gen {
            Gen::D => "D",
            Gen::C => "C",
        };
        let pos = if p.upper(self.index) { "^" } else { "_" };
        format!("{g}{pos}{{{}}}", label_latex(self.index))
    }
}

pub type CovariantPolynomial = Poly<CovLetter>;

/// Expression tree over the covariant generators. Index names that occur
/// twice in a product are contracted.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    D(String),
    C(String),
    Scalar(GQ),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Commutator(Box<Expr>, Box<Expr>),
    Scaled(GQ, Box<Expr>),
    Epsilon([String; 4]),
    /// F^±_{μν} = i[D_μ ± iC_μ, D_ν ± iC_ν].
    Fpm {
        plus: bool,
        mu: String,
        nu: String,
    },
    /// J_μ = 2C_μ i[D_ν, C^ν] − 2C^ν i[D_ν, C_μ] + 2i[D_μ, C^ν C_ν].
    J(String),
}

impl Expr {
    pub fn d(n: &str) -> Self {
        Expr::D(n.into())
    }

    pub fn c(n: &str) -> Self {
        Expr::C(n.into())
    }

    pub fn comm(a: Expr, b: Expr) -> Self {
        Expr::Commutator(Box::new(a), Box::new(b))
    }

    pub fn scaled(c: GQ, e: Expr) -> Self {
        Expr::Scaled(c, Box::new(e))
    }

    pub fn prod(v: Vec<Expr>) -> Self {
        Expr::Product(v)
    }

    pub fn sum(v: Vec<Expr>) -> Self {
        Expr::Sum(v)
    }

    pub fn fpm(plus: bool, mu: &str, nu: &str) -> Self {
        Expr::Fpm { plus, mu: mu.into(), nu: nu.into() }
    }

    pub fn j(mu: &str) -> Self {
        Expr::J(mu.into())
    }

    pub fn eps(n: [&str; 4]) -> Self {
        Expr::Epsilon(n.map(String::from))
    }
}

struct Builder {
    labels: HashMap<String, u32>,
    names: HashMap<u32, String>,
    next: u32,
    fresh: u32,
}

impl Builder {
    fn label(&mut self, n: &str) -> u32 {
        if let Some(&l) = self.labels.get(n) {
            return l;
        }
        let l = self.next;
        self.next += 1;
        self.labels.insert(n.to_string(), l);
        self.names.insert(l, n.to_string());
        l
    }

    fn fresh_name(&mut self) -> String {
        self.fresh += 1;
        format!("#{}", self.fresh)
    }

    /// Largest number of times each index name can occur in one term.
    fn occurrences(&mut self, e: &Expr) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        let one = |b: &mut Self, n: &str, out: &mut BTreeMap<u32, usize>| {
            *out.entry(b.label(n)).or_insert(0) += 1;
        };
        match e {
            Expr::D(n) | Expr::C(n) | Expr::J(n) => one(self, n, &mut out),
            Expr::Scalar(_) => {}
            Expr::Epsilon(ns) => ns.iter().for_each(|n| one(self, n, &mut out)),
            Expr::Fpm { mu, nu, .. } => {
                one(self, mu, &mut out);
                one(self, nu, &mut out);
            }
            Expr::Scaled(_, x) => out = self.occurrences(x),
            Expr::Sum(v) => {
                for x in v {
                    for (l, c) in self.occurrences(x) {
                        let e = out.entry(l).or_insert(0);
                        *e = (*e).max(c);
                    }
                }
            }
            Expr::Product(v) => {
                for x in v {
                    for (l, c) in self.occurrences(x) {
                        *out.entry(l).or_insert(0) += c;
                    }
                }
            }
            Expr::Commutator(a, b) => {
                out = self.occurrences(a);
                for (l, c) in self.occurrences(b) {
                    *out.entry(l).or_insert(0) += c;
                }
            }
        }
        out
    }

    fn build(&mut self, e: &Expr) -> Result<CovariantPolynomial> {
        let i = GQ::i();
        Ok(match e {
            Expr::D(n) => Poly::letter(CovLetter::d(self.label(n))),
            Expr::C(n) => Poly::letter(CovLetter::c(self.label(n))),
            Expr::Scalar(c) => Poly::scalar(*c),
            Expr::Sum(v) => {
                let mut acc = Poly::zero();
                for x in v {
                    acc = acc.add(&self.build(x)?);
                }
                acc
            }
            Expr::Product(v) => {
                let mut acc = Poly::one();
                for x in v {
                    acc = acc.mul(&self.build(x)?)?;
                }
                acc
            }
            Expr::Commutator(a, b) => self.build(a)?.commutator(&self.build(b)?)?,
            Expr::Scaled(c, x) => self.build(x)?.scale(*c),
            Expr::Epsilon(n) => {
                let l = [self.label(&n[0]), self.label(&n[1]), self.label(&n[2]), self.label(&n[3])];
                Poly::term(GQ::one(), Term { word: vec![], eps: Some(l) })
            }
            Expr::Fpm { plus, mu, nu } => {
                let s = if *plus { i } else { -i };
                let a = Expr::sum(vec![Expr::D(mu.clone()), Expr::scaled(s, Expr::C(mu.clone()))]);
                let b = Expr::sum(vec![Expr::D(nu.clone()), Expr::scaled(s, Expr::C(nu.clone()))]);
                self.build(&Expr::scaled(i, Expr::comm(a, b)))?
            }
            Expr::J(mu) => {
                let k = self.fresh_name();
                let two_i = GQ::int(2) * i;
                let j = Expr::sum(vec![
                    Expr::scaled(
                        two_i,
                        Expr::prod(vec![Expr::C(mu.clone()), Expr::comm(Expr::d(&k), Expr::c(&k))]),
                    ),
                    Expr::scaled(
                        -two_i,
                        Expr::prod(vec![Expr::c(&k), Expr::comm(Expr::d(&k), Expr::C(mu.clone()))]),
                    ),
                    Expr::scaled(
                        two_i,
                        Expr::comm(Expr::D(mu.clone()), Expr::prod(vec![Expr::c(&k), Expr::c(&k)])),
                    ),
                ]);
                self.build(&j)?
            }
        })
    }
}

/// Expands an expression into generator words. `free` lists the index
/// names that may stay uncontracted; every other name must occur exactly
/// twice in each term. Free names get labels 0, 1, … in order.
pub fn build_expression(e: &Expr, free: &[&str]) -> Result<CovariantPolynomial> {
    let mut b = Builder { labels: HashMap::new(), names: HashMap::new(), next: 0, fresh: 0 };
    for f in free {
        b.label(f);
    }
    b.next = 100;
    for (l, c) in b.occurrences(e) {
        if c > 2 {
            let name = b.names.get(&l).cloned().unwrap_or_default();
            return Err(Error::IndexMultiplicity(format!("index {name} occurs {c} times in one term")));
        }
    }
    let p = b.build(e)?;
    let nfree = free.len() as u32;
    let name = |l: u32| b.names.get(&l).cloned().unwrap_or_else(|| label_name(l));
    for (t, _) in p.terms() {
        let counts = t.label_counts();
        for (&l, &c) in &counts {
            if c > 2 {
                return Err(Error::IndexMultiplicity(format!(
                    "index {} occurs {c} times in one term",
                    name(l)
                )));
            }
            if c == 1 && l >= nfree {
                return Err(Error::UnboundIndex(name(l)));
            }
            if c == 2 && l < nfree {
                return Err(Error::IndexMultiplicity(format!("free index {} is contracted", name(l))));
            }
        }
        for l in 0..nfree {
            if !counts.contains_key(&l) {
                return Err(Error::UnboundIndex(format!("free index {} missing from a term", name(l))));
            }
        }
    }
    Ok(p.canonicalize(false))
}

/// Acts with each word on the constant function 1, right to left:
/// D_a f = −i ∂_a f + V_a f and C_a f = C_a f.
pub fn apply_to_one(p: &CovariantPolynomial) -> FieldPolynomial {
    let mut out = FieldPolynomial::zero();
    for (t, c) in p.terms() {
        let mut acc = FieldPolynomial::term(*c, Term { word: vec![], eps: t.eps });
        for l in t.word.iter().rev() {
            let mul = FieldLetter::field(
                match l.gen {
                    Gen::D => FieldKind::V,
                    Gen::C => FieldKind::C,
                },
                l.index,
            );
            let mut next = FieldPolynomial::zero();
            for (ft, fc) in acc.terms() {
                let mut word = vec![mul.clone()];
                word.extend(ft.word.iter().cloned());
                next.add_term(*fc, Term { word, eps: ft.eps });
            }
            if l.gen == Gen::D {
                let d = super::field::total_derivative(&acc, l.index);
                next = next.add(&d.scale(-GQ::i()));
            }
            acc = next;
        }
        out = out.add(&acc);
    }
    out.canonicalize(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(a: u32, b: u32) -> CovariantPolynomial {
        Poly::term(GQ::one(), Term::new(vec![CovLetter::d(a), CovLetter::d(b)]))
    }

    #[test]
    fn commutator_expands() {
        let p = build_expression(&Expr::comm(Expr::d("m"), Expr::d("n")), &["m", "n"]).unwrap();
        assert_eq!(p, dd(0, 1).sub(&dd(1, 0)));
    }

    #[test]
    fn antisymmetric_sum_vanishes() {
        let e =
            Expr::sum(vec![Expr::comm(Expr::d("m"), Expr::d("n")), Expr::comm(Expr::d("n"), Expr::d("m"))]);
        assert!(build_expression(&e, &["m", "n"]).unwrap().is_zero());
    }

    #[test]
    fn two_letter_rotation() {
        let e = Expr::sum(vec![
            Expr::prod(vec![Expr::d("a"), Expr::c("a")]),
            Expr::scaled(-GQ::one(), Expr::prod(vec![Expr::c("a"), Expr::d("a")])),
        ]);
        let p = build_expression(&e, &[]).unwrap();
        assert!(!p.is_zero());
        assert!(p.canonicalize(true).is_zero());
    }

    #[test]
    fn unbound_and_overused_indices() {
        let e = Expr::prod(vec![Expr::d("a"), Expr::c("b")]);
        assert!(matches!(build_expression(&e, &["a"]), Err(Error::UnboundIndex(_))));
        let e = Expr::prod(vec![Expr::d("a"), Expr::c("a"), Expr::c("a")]);
        assert!(matches!(build_expression(&e, &[]), Err(Error::IndexMultiplicity(_))));
    }

    #[test]
    fn d_on_one() {
        let p = build_expression(&Expr::d("m"), &["m"]).unwrap();
        let f = apply_to_one(&p);
        assert_eq!(f, FieldPolynomial::letter(FieldLetter::field(FieldKind::V, 0)));
    }

    #[test]
    fn dc_on_one() {
        let p = build_expression(&Expr::prod(vec![Expr::d("m"), Expr::c("n")]), &["m", "n"]).unwrap();
        let f = apply_to_one(&p);
        let mut want = FieldPolynomial::zero();
        want.add_term(
            -GQ::i(),
            Term::new(vec![FieldLetter { kind: FieldKind::C, index: Some(1), derivs: vec![0] }]),
        );
        want.add_term(
            GQ::one(),
            Term::new(vec![FieldLetter::field(FieldKind::V, 0), FieldLetter::field(FieldKind::C, 1)]),
        );
        assert_eq!(f, want.canonicalize(false));
    }

    #[test]
    fn epsilon_cycle_vanishes() {
        // ε^{abcd} D_a D_b D_c D_d is odd under rotation by one
        let e = Expr::prod(vec![
            Expr::eps(["a", "b", "c", "d"]),
            Expr::d("a"),
            Expr::d("b"),
            Expr::d("c"),
            Expr::d("d"),
        ]);
        let p = build_expression(&e, &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.canonicalize(true).is_zero());
    }
}
