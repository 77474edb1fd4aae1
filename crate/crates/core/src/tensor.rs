//! η/ε index expressions over Euclidean R⁴.
//!
//! A [`TensorExpr`] is a linear combination of monomials, each a product of
//! metric factors η, at most one Levi-Civita factor ε and components ξ_a of
//! the unit vector that is averaged over the 3-sphere. Indices are either
//! symbolic labels or concrete components 1..=4. Because the metric is the
//! identity, raised and lowered indices coincide.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{q, GQ, Q};

/// A tensor index: a concrete component or a symbolic label.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Ix {
    Val(u8),
    Sym(u32),
}

impl Ix {
    pub fn val(v: u8) -> Result<Self> {
        if (1..=4).contains(&v) {
            Ok(Ix::Val(v))
        } else {
            Err(Error::IndexOutOfRange(format!("component {v} not in 1..=4")))
        }
    }

    pub fn is_sym(&self) -> bool {
        matches!(self, Ix::Sym(_))
    }
}

impl fmt::Debug for Ix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ix::Val(v) => write!(f, "{v}"),
            Ix::Sym(s) => write!(f, "a{s}"),
        }
    }
}

/// A slot of ε: an index, or a contraction with ξ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum EpsSlot {
    Ix(Ix),
    Xi,
}

/// One monomial of a [`TensorExpr`] (coefficient stored separately).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize)]
pub struct Monomial {
    pub etas: Vec<(Ix, Ix)>,
    pub eps: Option<[EpsSlot; 4]>,
    pub xis: Vec<Ix>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn eta(a: Ix, b: Ix) -> Self {
        Self { etas: vec![(a, b)], ..Self::default() }
    }

    pub fn epsilon(ix: [Ix; 4]) -> Self {
        Self { eps: Some(ix.map(EpsSlot::Ix)), ..Self::default() }
    }

    pub fn xi(a: Ix) -> Self {
        Self { xis: vec![a], ..Self::default() }
    }

    pub fn is_scalar(&self) -> bool {
        self.etas.is_empty() && self.eps.is_none() && self.xis.is_empty()
    }

    /// Number of ξ factors, counting one contracted into ε.
    pub fn xi_degree(&self) -> usize {
        let in_eps = self.eps.map(|e| e.iter().filter(|s| **s == EpsSlot::Xi).count()).unwrap_or(0);
        self.xis.len() + in_eps
    }

    /// Product of two monomials. Returns `None` when both carry an ε factor.
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        if self.eps.is_some() && other.eps.is_some() {
            return None;
        }
        let mut etas = self.etas.clone();
        etas.extend_from_slice(&other.etas);
        let mut xis = self.xis.clone();
        xis.extend_from_slice(&other.xis);
        Some(Monomial { etas, eps: self.eps.or(other.eps), xis })
    }

    fn map_ix(&self, f: &impl Fn(Ix) -> Ix) -> Monomial {
        Monomial {
            etas: self.etas.iter().map(|&(a, b)| (f(a), f(b))).collect(),
            eps: self.eps.map(|e| {
                e.map(|s| match s {
                    EpsSlot::Ix(i) => EpsSlot::Ix(f(i)),
                    EpsSlot::Xi => EpsSlot::Xi,
                })
            }),
            xis: self.xis.iter().map(|&i| f(i)).collect(),
        }
    }

    fn sym_counts(&self) -> BTreeMap<u32, usize> {
        let mut counts = BTreeMap::new();
        let mut bump = |i: Ix| {
            if let Ix::Sym(s) = i {
                *counts.entry(s).or_insert(0) += 1;
            }
        };
        for &(a, b) in &self.etas {
            bump(a);
            bump(b);
        }
        if let Some(e) = self.eps {
            for s in e {
                if let EpsSlot::Ix(i) = s {
                    bump(i);
                }
            }
        }
        for &x in &self.xis {
            bump(x);
        }
        counts
    }

    /// Symbolic labels that occur exactly once.
    pub fn free_indices(&self) -> Vec<u32> {
        self.sym_counts().into_iter().filter(|&(_, c)| c == 1).map(|(s, _)| s).collect()
    }

    fn max_sym(&self) -> Option<u32> {
        self.sym_counts().keys().next_back().copied()
    }
}

/// Sign of the permutation sorting `v`, or `None` if `v` has repeats.
pub fn perm_sign<T: Ord + Clone>(v: &[T]) -> Option<i8> {
    let mut w: Vec<T> = v.to_vec();
    let mut sign = 1i8;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            match w[j].cmp(&w[j + 1]) {
                std::cmp::Ordering::Greater => {
                    w.swap(j, j + 1);
                    sign = -sign;
                }
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some(sign)
}

/// Levi-Civita symbol on concrete components, ε^{1234} = +1.
pub fn levi_civita(v: [u8; 4]) -> i8 {
    perm_sign(&v).unwrap_or(0)
}

/// Reduces a monomial to normal form: all dummy pairs contracted, factors
/// sorted. Returns the scalar factor produced, or `None` if the monomial
/// vanishes.
fn normalize(mut m: Monomial) -> Result<Option<(GQ, Monomial)>> {
    let mut factor = Q::one();
    loop {
        // concrete metric components are Kronecker deltas
        let mut killed = false;
        m.etas.retain(|&(a, b)| match (a, b) {
            (Ix::Val(x), Ix::Val(y)) => {
                if x != y {
                    killed = true;
                }
                false
            }
            _ => true,
        });
        if killed {
            return Ok(None);
        }
        let counts = m.sym_counts();
        if let Some((s, c)) = counts.iter().find(|&(_, &c)| c > 2) {
            return Err(Error::IndexMultiplicity(format!("index a{s} occurs {c} times in one monomial")));
        }
        let Some(&dummy) = counts.iter().find(|&(_, &c)| c == 2).map(|(s, _)| s) else {
            break;
        };
        let d = Ix::Sym(dummy);
        // trace of the metric
        if let Some(pos) = m.etas.iter().position(|&(a, b)| a == d && b == d) {
            m.etas.remove(pos);
            factor *= q(4);
            continue;
        }
        // metric contracted with anything: substitute
        if let Some(pos) = m.etas.iter().position(|&(a, b)| a == d || b == d) {
            let (a, b) = m.etas.remove(pos);
            let other = if a == d { b } else { a };
            m = m.map_ix(&|i| if i == d { other } else { i });
            continue;
        }
        let xi_hits = m.xis.iter().filter(|&&x| x == d).count();
        if xi_hits == 2 {
            // unit vector
            m.xis.retain(|&x| x != d);
            continue;
        }
        if let Some(e) = m.eps.as_mut() {
            let eps_hits = e.iter().filter(|s| **s == EpsSlot::Ix(d)).count();
            if eps_hits == 2 {
                return Ok(None);
            }
            if eps_hits == 1 && xi_hits == 1 {
                for s in e.iter_mut() {
                    if *s == EpsSlot::Ix(d) {
                        *s = EpsSlot::Xi;
                    }
                }
                m.xis.retain(|&x| x != d);
                continue;
            }
        }
        return Err(Error::IndexMultiplicity(format!("cannot contract a{dummy}")));
    }

    let mut sign = 1i8;
    if let Some(e) = m.eps {
        if e.iter().filter(|s| **s == EpsSlot::Xi).count() > 1 {
            return Ok(None);
        }
        if e.iter().all(|s| matches!(s, EpsSlot::Ix(Ix::Val(_)))) {
            let vals = e.map(|s| match s {
                EpsSlot::Ix(Ix::Val(v)) => v,
                _ => unreachable!(),
            });
            let lc = levi_civita(vals);
            if lc == 0 {
                return Ok(None);
            }
            sign = lc;
            m.eps = None;
        } else {
            match perm_sign(&e) {
                None => return Ok(None),
                Some(s) => {
                    sign = s;
                    let mut sorted = e;
                    sorted.sort();
                    m.eps = Some(sorted);
                }
            }
        }
    }
    for p in m.etas.iter_mut() {
        if p.0 > p.1 {
            *p = (p.1, p.0);
        }
    }
    m.etas.sort();
    m.xis.sort();
    Ok(Some((GQ::real(factor * q(sign as i128)), m)))
}

/// Linear combination of η/ε/ξ monomials with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Default, Serialize)]
pub struct TensorExpr {
    terms: BTreeMap<Monomial, GQ>,
}

impl TensorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: GQ) -> Self {
        let mut t = Self::zero();
        t.add_term(c, Monomial::one());
        t
    }

    pub fn monomial(c: GQ, m: Monomial) -> Self {
        let mut t = Self::zero();
        t.add_term(c, m);
        t
    }

    pub fn eta(a: Ix, b: Ix) -> Self {
        Self::monomial(GQ::one(), Monomial::eta(a, b))
    }

    pub fn epsilon(ix: [Ix; 4]) -> Self {
        Self::monomial(GQ::one(), Monomial::epsilon(ix))
    }

    /// Adds a term without normalizing; call [`TensorExpr::contract`] after.
    pub fn add_term(&mut self, c: GQ, m: Monomial) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(GQ::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GQ)> {
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
        for (m, v) in &self.terms {
            out.add_term(*v * c, m.clone());
        }
        out
    }

    pub fn add(&self, other: &TensorExpr) -> Self {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(*v, m.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorExpr) -> Self {
        self.add(&other.scale(-GQ::one()))
    }

    /// Product, contracted. Fails if both factors carry ε.
    pub fn mul(&self, other: &TensorExpr) -> Result<Self> {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m =
                    m1.mul(m2).ok_or_else(|| Error::IndexMultiplicity("product of two ε factors".into()))?;
                out.add_term(*c1 * *c2, m);
            }
        }
        out.contract()
    }

    /// Resolves every dummy pair: η^{μν}η_{νρ} = δ^μ_ρ, η^μ_μ = 4,
    /// ξ·ξ = 1, ε with a repeated index vanishes.
    pub fn contract(&self) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((f, n)) = normalize(m.clone())? {
                out.add_term(*c * f, n);
            }
        }
        Ok(out)
    }

    /// Renames symbolic labels.
    pub fn relabel(&self, f: impl Fn(Ix) -> Ix) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*c, m.map_ix(&f));
        }
        out
    }

    /// Largest symbolic label in use.
    pub fn max_sym(&self) -> Option<u32> {
        self.terms.keys().filter_map(|m| m.max_sym()).max()
    }

    /// Free symbolic labels (union over terms).
    pub fn free_indices(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().flat_map(|m| m.free_indices()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Coefficient of the empty monomial.
    pub fn scalar_part(&self) -> GQ {
        self.terms.get(&Monomial::one()).copied().unwrap_or_else(GQ::zero)
    }

    pub fn has_xi(&self) -> bool {
        self.terms.keys().any(|m| m.xi_degree() > 0)
    }

    /// Value at a concrete assignment of the free labels. ξ factors are
    /// evaluated against `xi` when given.
    pub fn evaluate(&self, assign: &BTreeMap<u32, u8>, xi: Option<&[Q; 4]>) -> Result<GQ> {
        let sub = self.relabel(|i| match i {
            Ix::Sym(s) => assign.get(&s).map(|&v| Ix::Val(v)).unwrap_or(i),
            v => v,
        });
        let sub = sub.contract()?;
        let mut total = GQ::zero();
        for (m, c) in &sub.terms {
            if !m.etas.is_empty() {
                return Err(Error::UnboundIndex(format!("{m:?} left after evaluation")));
            }
            let mut v = *c;
            if !m.xis.is_empty() || m.eps.is_some() {
                let x = xi.ok_or_else(|| Error::UnboundIndex("ξ factor without a concrete vector".into()))?;
                for &i in &m.xis {
                    match i {
                        Ix::Val(k) => v = v * x[(k - 1) as usize],
                        Ix::Sym(s) => return Err(Error::UnboundIndex(format!("a{s}"))),
                    }
                }
                if let Some(e) = m.eps {
                    let mut acc = Q::zero();
                    for k in 1..=4u8 {
                        let mut vals = [0u8; 4];
                        let mut w = Q::one();
                        for (slot, out) in e.iter().zip(vals.iter_mut()) {
                            match slot {
                                EpsSlot::Ix(Ix::Val(val)) => *out = *val,
                                EpsSlot::Xi => {
                                    *out = k;
                                    w = x[(k - 1) as usize];
                                }
                                EpsSlot::Ix(Ix::Sym(s)) => return Err(Error::UnboundIndex(format!("a{s}"))),
                            }
                        }
                        acc += w * q(levi_civita(vals) as i128);
                    }
                    v = v * acc;
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Angular average over the unit 3-sphere: an odd number of ξ factors
    /// averages to zero; 2m factors become `c_m` times the sum over all
    /// (2m−1)!! pairings of metric factors, `c_m = 1/(2^m (m+1)!)`.
    pub fn angular_average(&self) -> Result<Self> {
        let mut next = self.max_sym().map(|s| s + 1).unwrap_or(0);
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut base = m.clone();
            let mut xis = std::mem::take(&mut base.xis);
            if let Some(e) = base.eps.as_mut() {
                for s in e.iter_mut() {
                    if *s == EpsSlot::Xi {
                        let d = Ix::Sym(next);
                        next += 1;
                        *s = EpsSlot::Ix(d);
                        xis.push(d);
                    }
                }
            }
            if xis.len() % 2 == 1 {
                continue;
            }
            let weight = sphere_moment(xis.len() / 2);
            for pairing in pairings(&xis) {
                let mut t = base.clone();
                t.etas.extend(pairing);
                out.add_term(*c * GQ::real(weight), t);
            }
        }
        out.contract()
    }

    /// Human-readable form, e.g. `4·η(a0,a1) - 4·ε(a0,a1,a2,a3)`.
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut f = Vec::new();
                for (a, b) in &m.etas {
                    f.push(format!("η({a},{b})"));
                }
                if let Some(e) = m.eps {
                    let s: Vec<String> = e
                        .iter()
                        .map(|s| match s {
                            EpsSlot::Ix(i) => i.to_string(),
                            EpsSlot::Xi => "ξ".into(),
                        })
                        .collect();
                    f.push(format!("ε({})", s.join(",")));
                }
                for x in &m.xis {
                    f.push(format!("ξ({x})"));
                }
                if f.is_empty() {
                    c.to_string()
                } else {
                    format!("{}·{}", c, f.join("·"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for TensorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

/// `c_m = ⟨ξ_{μ₁}…ξ_{μ₂ₘ}⟩` per pairing on the unit 3-sphere.
pub fn sphere_moment(m: usize) -> Q {
    let mut d: i128 = 1;
    for j in 0..m {
        // 4·6·8···(2m+2)
        d *= 4 + 2 * j as i128;
    }
    Q::new(1, d)
}

/// All perfect matchings of `items`, in a fixed order.
pub fn pairings<T: Copy>(items: &[T]) -> Vec<Vec<(T, T)>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    if items.len() % 2 == 1 {
        return vec![];
    }
    let first = items[0];
    let mut out = Vec::new();
    for j in 1..items.len() {
        let mut rest: Vec<T> = Vec::with_capacity(items.len() - 2);
        rest.extend_from_slice(&items[1..j]);
        rest.extend_from_slice(&items[j + 1..]);
        for mut p in pairings(&rest) {
            p.insert(0, (first, items[j]));
            out.push(p);
        }
    }
    out
}

/// Coefficients of a rank-4 tensor on
/// `A·η^{12}η^{34} + B·η^{13}η^{24} + C·η^{14}η^{23} + D·ε^{1234}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Rank4Decomposition {
    pub a: GQ,
    pub b: GQ,
    pub c: GQ,
    pub d: GQ,
}

impl Rank4Decomposition {
    pub fn scale(self, s: GQ) -> Self {
        Self { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    pub fn as_array(&self) -> [GQ; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Value of the reconstructed tensor at a concrete tuple.
    pub fn value_at(&self, v: [u8; 4]) -> GQ {
        basis_values(v).iter().zip(self.as_array()).map(|(b, c)| c * GQ::int(*b as i128)).sum()
    }

    /// The reconstruction as a tensor expression in the given indices.
    pub fn to_expr(&self, ix: [Ix; 4]) -> TensorExpr {
        let [n1, n2, n3, n4] = ix;
        let mut t = TensorExpr::zero();
        let mut ee = |c: GQ, p: (Ix, Ix), r: (Ix, Ix)| {
            t.add_term(c, Monomial { etas: vec![p, r], ..Monomial::default() });
        };
        ee(self.a, (n1, n2), (n3, n4));
        ee(self.b, (n1, n3), (n2, n4));
        ee(self.c, (n1, n4), (n2, n3));
        t.add_term(self.d, Monomial::epsilon(ix));
        t.contract().expect("basis tensors are well formed")
    }
}

fn basis_values(v: [u8; 4]) -> [i8; 4] {
    let d = |a: usize, b: usize| (v[a] == v[b]) as i8;
    [d(0, 1) * d(2, 3), d(0, 2) * d(1, 3), d(0, 3) * d(1, 2), levi_civita(v)]
}

/// All 256 concrete index tuples in lexicographic order.
pub fn all_tuples4() -> impl Iterator<Item = [u8; 4]> {
    (0..256u32)
        .map(|n| [(n / 64 % 4) as u8 + 1, (n / 16 % 4) as u8 + 1, (n / 4 % 4) as u8 + 1, (n % 4) as u8 + 1])
}

/// Projects a tensor with free indices `ix` onto the η·η/ε basis by
/// evaluating all 256 components and solving the normal equations exactly.
/// The residual must vanish on every component.
pub fn decompose_rank4(expr: &TensorExpr, ix: [u32; 4]) -> Result<Rank4Decomposition> {
    let mut free = expr.free_indices();
    free.sort();
    let mut want = ix.to_vec();
    want.sort();
    if free.iter().any(|f| !want.contains(f)) {
        return Err(Error::OutsideSpan(format!("free indices {free:?} are not among {ix:?}")));
    }
    if expr.has_xi() {
        return Err(Error::OutsideSpan("expression still depends on ξ".into()));
    }
    let mut values = Vec::with_capacity(256);
    for t in all_tuples4() {
        let assign: BTreeMap<u32, u8> = ix.iter().copied().zip(t).collect();
        values.push((t, expr.evaluate(&assign, None)?));
    }
    // normal equations G x = r with G = BᵀB
    let mut g = [[Q::zero(); 4]; 4];
    let mut r = [GQ::zero(); 4];
    for (t, val) in &values {
        let b = basis_values(*t);
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] += q((b[i] * b[j]) as i128);
            }
            r[i] += *val * q(b[i] as i128);
        }
    }
    let x = solve4(g, r)?;
    let dec = Rank4Decomposition { a: x[0], b: x[1], c: x[2], d: x[3] };
    for (t, val) in &values {
        if dec.value_at(*t) != *val {
            return Err(Error::OutsideSpan(format!(
                "residual at component {t:?}: expected {val}, basis gives {}",
                dec.value_at(*t)
            )));
        }
    }
    Ok(dec)
}

fn solve4(mut g: [[Q; 4]; 4], mut r: [GQ; 4]) -> Result<[GQ; 4]> {
    for col in 0..4 {
        let piv = (col..4)
            .find(|&i| !g[i][col].is_zero())
            .ok_or_else(|| Error::Reconstruction("singular rank-4 Gram matrix".into()))?;
        g.swap(col, piv);
        r.swap(col, piv);
        let p = g[col][col];
        for j in 0..4 {
            g[col][j] /= p;
        }
        r[col] = r[col] * (Q::one() / p);
        for i in 0..4 {
            if i != col && !g[i][col].is_zero() {
                let f = g[i][col];
                for j in 0..4 {
                    let v = g[col][j];
                    g[i][j] -= f * v;
                }
                let rc = r[col];
                r[i] -= rc * f;
            }
        }
    }
    Ok(r)
}
