//! Noncommutative polynomials with contracted Lorentz labels.
//!
//! A term is an ordered word of letters, each carrying Lorentz labels, with
//! an optional ε factor over labels. A label that occurs twice in a term is
//! contracted with the Euclidean metric; a label that occurs once is free.
//! Metric factors are therefore never stored: η^{ab} X_a Y_b is the word
//! `X_a Y_a`.

mod covariant;
mod field;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::GQ;

pub use covariant::{apply_to_one, build_expression, CovLetter, CovariantPolynomial, Expr, Gen};
pub use field::{
    drop_axial, drop_total_derivatives, field_strength, gauge_variation_vector,
    gauge_variation_vector_constant, total_derivative, vector_to_axial, FieldKind, FieldLetter,
    FieldPolynomial,
};

/// Dummy labels are renamed into this range by canonicalization.
pub const DUMMY_BASE: u32 = 1 << 20;

/// A letter of a word: knows its labels and its equivalent spellings.
pub trait Letter: Clone + Ord + Eq + Hash + Debug {
    /// Labels in serialization order.
    fn labels(&self) -> Vec<u32>;
    fn map_labels(&self, f: &dyn Fn(u32) -> u32) -> Self;
    /// Equivalent spellings of the same letter (e.g. reordered partials).
    fn variants(&self) -> Vec<Self> {
        vec![self.clone()]
    }
}

/// Word plus optional ε factor; the coefficient lives in [`Poly`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Term<L> {
    pub word: Vec<L>,
    pub eps: Option<[u32; 4]>,
}

impl<L: Letter> Term<L> {
    pub fn new(word: Vec<L>) -> Self {
        Self { word, eps: None }
    }

    pub fn label_counts(&self) -> BTreeMap<u32, usize> {
        let mut c = BTreeMap::new();
        for l in self.word.iter().flat_map(|l| l.labels()) {
            *c.entry(l).or_insert(0) += 1;
        }
        for l in self.eps.iter().flatten() {
            *c.entry(*l).or_insert(0) += 1;
        }
        c
    }

    pub fn free_labels(&self) -> Vec<u32> {
        self.label_counts().into_iter().filter(|&(_, n)| n == 1).map(|(l, _)| l).collect()
    }

    pub fn dummy_labels(&self) -> Vec<u32> {
        self.label_counts().into_iter().filter(|&(_, n)| n >= 2).map(|(l, _)| l).collect()
    }

    fn map_labels(&self, f: &dyn Fn(u32) -> u32) -> Self {
        Term { word: self.word.iter().map(|l| l.map_labels(f)).collect(), eps: self.eps.map(|e| e.map(f)) }
    }
}

fn sort_eps(e: [u32; 4]) -> Option<(i8, [u32; 4])> {
    crate::tensor::perm_sign(&e).map(|s| {
        let mut sorted = e;
        sorted.sort();
        (s, sorted)
    })
}

fn cartesian<L: Clone>(choices: &[Vec<L>]) -> Vec<Vec<L>> {
    let mut out: Vec<Vec<L>> = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for x in c {
                let mut p = prefix.clone();
                p.push(x.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Normal form of one term: returns the sign picked up from ε reordering,
/// or `None` when the term vanishes identically (ε with a repeated label, or
/// a cyclic symmetry that maps the term to minus itself).
fn canonical_term<L: Letter>(t: &Term<L>, cyclic: bool) -> Option<(i8, Term<L>)> {
    let counts = t.label_counts();
    if let Some(e) = t.eps {
        sort_eps(e)?;
    }
    let n = t.word.len();
    let rotations = if cyclic && n > 1 { n } else { 1 };
    let variant_sets: Vec<Vec<L>> = t.word.iter().map(|l| l.variants()).collect();
    let spellings = cartesian(&variant_sets);
    let mut best: Option<(Term<L>, i8)> = None;
    let mut conflict = false;
    for r in 0..rotations {
        for sp in &spellings {
            let mut word = sp.clone();
            word.rotate_left(r);
            let mut map: HashMap<u32, u32> = HashMap::new();
            let order = word.iter().flat_map(|l| l.labels()).chain(t.eps.iter().flatten().copied());
            for l in order {
                if counts.get(&l).copied().unwrap_or(0) >= 2 && !map.contains_key(&l) {
                    let k = map.len() as u32;
                    map.insert(l, DUMMY_BASE + k);
                }
            }
            let f = |l: u32| map.get(&l).copied().unwrap_or(l);
            let cand = Term { word, eps: t.eps }.map_labels(&f);
            let (sign, eps) = match cand.eps {
                Some(e) => {
                    let (s, e) = sort_eps(e)?;
                    (s, Some(e))
                }
                None => (1, None),
            };
            let cand = Term { word: cand.word, eps };
            match &best {
                None => best = Some((cand, sign)),
                Some((b, s)) => match cand.cmp(b) {
                    std::cmp::Ordering::Less => {
                        best = Some((cand, sign));
                        conflict = false;
                    }
                    std::cmp::Ordering::Equal if *s != sign => conflict = true,
                    _ => {}
                },
            }
        }
    }
    if conflict {
        return None;
    }
    best.map(|(t, s)| (s, t))
}

/// Formal sum of terms with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<L: Letter> {
    terms: BTreeMap<Term<L>, GQ>,
}

impl<L: Letter> Default for Poly<L> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<L: Letter> Poly<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(GQ::one(), Term::new(vec![]))
    }

    pub fn scalar(c: GQ) -> Self {
        Self::term(c, Term::new(vec![]))
    }

    pub fn letter(l: L) -> Self {
        Self::term(GQ::one(), Term::new(vec![l]))
    }

    pub fn term(c: GQ, t: Term<L>) -> Self {
        let mut p = Self::zero();
        p.add_term(c, t);
        p
    }

    pub fn add_term(&mut self, c: GQ, t: Term<L>) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_insert_with(GQ::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term<L>, &GQ)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: GQ) -> Self {
        let mut out = Self::zero();
        for (t, v) in &self.terms {
            out.add_term(*v * c, t.clone());
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (t, v) in &o.terms {
            out.add_term(*v, t.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-GQ::one()))
    }

    /// Product. Dummy labels of both factors are renamed apart first so that
    /// only free labels can contract across the product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (t1, c1) in &self.terms {
            for (t2, c2) in &o.terms {
                if t1.eps.is_some() && t2.eps.is_some() {
                    return Err(Error::IndexMultiplicity("product of two ε factors".into()));
                }
                let d1 = t1.dummy_labels();
                let d2 = t2.dummy_labels();
                let base = 2 * DUMMY_BASE;
                let r1 = |l: u32| d1.iter().position(|&d| d == l).map(|k| base + k as u32).unwrap_or(l);
                let off = d1.len() as u32;
                let r2 = |l: u32| d2.iter().position(|&d| d == l).map(|k| base + off + k as u32).unwrap_or(l);
                let a = t1.map_labels(&r1);
                let b = t2.map_labels(&r2);
                let mut word = a.word;
                word.extend(b.word);
                let t = Term { word, eps: a.eps.or(b.eps) };
                if let Some((s, t)) = canonical_term(&t, false) {
                    out.add_term(*c1 * *c2 * GQ::int(s as i128), t);
                }
            }
        }
        Ok(out)
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(o)?.sub(&o.mul(self)?))
    }

    /// Unique normal form: dummies renamed by first occurrence, ε sorted
    /// with its sign, like terms merged. With `modulo_cyclic` every word is
    /// replaced by its minimal rotation, as under a trace.
    pub fn canonicalize(&self, modulo_cyclic: bool) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            if let Some((s, t)) = canonical_term(t, modulo_cyclic) {
                out.add_term(*c * GQ::int(s as i128), t);
            }
        }
        out
    }

    pub fn equal_modulo_cyclic(&self, o: &Self) -> bool {
        self.sub(o).canonicalize(true).is_zero()
    }

    pub fn equal_exact(&self, o: &Self) -> bool {
        self.sub(o).canonicalize(false).is_zero()
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter(&self, keep: impl Fn(&Term<L>) -> bool) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            if keep(t) {
                out.add_term(*c, t.clone());
            }
        }
        out
    }

    /// Replaces every letter by a polynomial (letters map to sums).
    pub fn substitute(&self, f: impl Fn(&L) -> Poly<L>) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            let mut acc = Poly::term(*c, Term { word: vec![], eps: t.eps });
            for l in &t.word {
                let img = f(l);
                let mut next = Self::zero();
                for (ta, ca) in &acc.terms {
                    for (tb, cb) in &img.terms {
                        let mut word = ta.word.clone();
                        word.extend(tb.word.iter().cloned());
                        next.add_term(*ca * *cb, Term { word, eps: ta.eps.or(tb.eps) });
                    }
                }
                acc = next;
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn max_label(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|t| t.word.iter().flat_map(|l| l.labels()).chain(t.eps.iter().flatten().copied()))
            .max()
            .unwrap_or(0)
    }
}

/// Display names: labels below 8 are free (μ, ν, …); canonical dummies
/// print as a, b, c, ….
pub fn label_name(l: u32) -> String {
    const FREE: [&str; 8] = ["μ", "ν", "ρ", "σ", "τ", "κ", "ω", "χ"];
    if (l as usize) < FREE.len() {
        FREE[l as usize].into()
    } else if l >= DUMMY_BASE {
        let k = l - DUMMY_BASE;
        let ch = (b'a' + (k % 26) as u8) as char;
        if k < 26 {
            ch.to_string()
        } else {
            format!("{ch}{}", k / 26)
        }
    } else {
        format!("i{l}")
    }
}

pub fn label_latex(l: u32) -> String {
    const FREE: [&str; 8] = ["\\mu", "\\nu", "\\rho", "\\sigma", "\\tau", "\\kappa", "\\omega", "\\chi"];
    if (l as usize) < FREE.len() {
        FREE[l as usize].into()
    } else {
        label_name(l)
    }
}

/// Tracks whether a label's next occurrence is the first (raised) one.
#[derive(Default)]
pub struct Placement {
    seen: std::collections::BTreeSet<u32>,
    dummies: std::collections::BTreeSet<u32>,
}

impl Placement {
    pub fn new<L: Letter>(t: &Term<L>) -> Self {
        Self { seen: Default::default(), dummies: t.dummy_labels().into_iter().collect() }
    }

    /// True if this occurrence should be written as a superscript.
    pub fn upper(&mut self, l: u32) -> bool {
        self.dummies.contains(&l) && self.seen.insert(l)
    }
}

/// Pure numbers with a negative real part, or purely imaginary numbers
/// with a negative imaginary part, are written with a leading minus.
fn leading_negative(c: &GQ) -> bool {
    let z = num_traits::Zero::zero();
    (c.is_real() && c.re < z) || (c.is_imaginary() && c.im < z)
}

fn coeff_prefix(c: &GQ, first: bool) -> String {
    let one = GQ::one();
    if *c == one {
        if first {
            String::new()
        } else {
            " + ".into()
        }
    } else if *c == -one {
        if first {
            "-".into()
        } else {
            " - ".into()
        }
    } else if leading_negative(c) {
        format!("{}{}·", if first { "-" } else { " - " }, -*c)
    } else {
        format!("{}{}·", if first { "" } else { " + " }, c)
    }
}

fn coeff_prefix_latex(c: &GQ, first: bool) -> String {
    let one = GQ::one();
    if *c == one {
        if first {
            String::new()
        } else {
            " + ".into()
        }
    } else if *c == -one {
        if first {
            "-".into()
        } else {
            " - ".into()
        }
    } else if leading_negative(c) {
        format!("{}{}\\,", if first { "-" } else { " - " }, (-*c).latex())
    } else {
        format!("{}{}\\,", if first { "" } else { " + " }, c.latex())
    }
}

/// Plain-text and LaTeX rendering for letters.
pub trait Render: Letter {
    fn render(&self, p: &mut Placement) -> String;
    fn render_latex(&self, p: &mut Placement) -> String;
}

impl<L: Render> Poly<L> {
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let mut p = Placement::new(t);
            let mut body = String::new();
            if let Some(e) = t.eps {
                let names: Vec<String> = e
                    .iter()
                    .map(|&l| {
                        p.upper(l);
                        label_name(l)
                    })
                    .collect();
                body.push_str(&format!("ε^({})", names.join(",")));
            }
            for l in &t.word {
                body.push_str(&l.render(&mut p));
            }
            if body.is_empty() {
                body.push('1');
            }
            let pre = coeff_prefix(c, i == 0);
            s.push_str(&pre);
            s.push_str(&body);
        }
        s
    }

    pub fn latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let mut p = Placement::new(t);
            let mut body = String::new();
            if let Some(e) = t.eps {
                let names: Vec<String> = e
                    .iter()
                    .map(|&l| {
                        p.upper(l);
                        label_latex(l)
                    })
                    .collect();
                body.push_str(&format!("\\epsilon^{{{}}}", names.join("")));
            }
            for l in &t.word {
                body.push_str(&l.render_latex(&mut p));
            }
            if body.is_empty() {
                body.push('1');
            }
            s.push_str(&coeff_prefix_latex(c, i == 0));
            s.push_str(&body);
        }
        s
    }
}

/// Stable JSON form: a list of terms with exact coefficients.
#[derive(Serialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
    pub text: String,
}

#[derive(Serialize)]
pub struct TermJson {
    pub coeff: GQ,
    pub eps: Option<Vec<String>>,
    pub word: Vec<String>,
}

impl<L: Render> Poly<L> {
    pub fn to_json(&self) -> PolyJson {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| {
                let mut p = Placement::new(t);
                TermJson {
                    coeff: *c,
                    eps: t.eps.map(|e| e.iter().map(|&l| label_name(l)).collect()),
                    word: t.word.iter().map(|l| l.render(&mut p)).collect(),
                }
            })
            .collect();
        PolyJson { terms, text: self.pretty() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartesian_sizes() {
        let c = cartesian(&[vec![1, 2], vec![3], vec![4, 5, 6]]);
        assert_eq!(c.len(), 6);
        assert_eq!(c[0], vec![1, 3, 4]);
    }

    #[test]
    fn label_names() {
        assert_eq!(label_name(0), "μ");
        assert_eq!(label_name(DUMMY_BASE), "a");
        assert_eq!(label_name(DUMMY_BASE + 27), "b1");
    }
}
