//! Euclidean Dirac matrices and traces of words in them.
//!
//! Two independent evaluators live here: a symbolic one producing
//! [`TensorExpr`]s, and an explicit 4×4 matrix product used as an oracle.
//! Traces with a surviving γ₅ and six or more plain gammas are obtained by
//! enumerating every concrete index tuple with the matrices and solving for
//! the coefficients on the ε·η·…·η monomial basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Mul;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{GQ, Q};
use crate::tensor::{levi_civita, Ix, Monomial, TensorExpr};

/// One letter of a gamma word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum GammaSymbol {
    Plain(Ix),
    Five,
    SlashedXi,
}

impl fmt::Display for GammaSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSymbol::Plain(i) => write!(f, "γ^{i}"),
            GammaSymbol::Five => write!(f, "γ5"),
            GammaSymbol::SlashedXi => write!(f, "ξ̸"),
        }
    }
}

/// Ordered product of gamma letters with a scalar prefactor. The empty word
/// is the identity.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GammaWord {
    pub prefactor: GQ,
    pub letters: Vec<GammaSymbol>,
}

impl GammaWord {
    pub fn new(letters: Vec<GammaSymbol>) -> Self {
        Self { prefactor: GQ::one(), letters }
    }

    pub fn with_prefactor(prefactor: GQ, letters: Vec<GammaSymbol>) -> Self {
        Self { prefactor, letters }
    }

    /// Word of concrete gammas; 5 stands for γ₅.
    pub fn concrete(ix: &[u8]) -> Result<Self> {
        let letters = ix
            .iter()
            .map(|&v| match v {
                5 => Ok(GammaSymbol::Five),
                v => Ix::val(v).map(GammaSymbol::Plain),
            })
            .collect::<Result<_>>()?;
        Ok(Self::new(letters))
    }

    pub fn validate(&self) -> Result<()> {
        for l in &self.letters {
            if let GammaSymbol::Plain(Ix::Val(v)) = l {
                if !(1..=4).contains(v) {
                    return Err(Error::IndexOutOfRange(format!("γ^{v}")));
                }
            }
        }
        Ok(())
    }

    pub fn rotated(&self, by: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let n = letters.len();
            letters.rotate_left(by % n);
        }
        Self { prefactor: self.prefactor, letters }
    }

    pub fn reversed(&self) -> Self {
        let mut letters = self.letters.clone();
        letters.reverse();
        Self { prefactor: self.prefactor, letters }
    }
}

impl fmt::Display for GammaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}·[{}]", self.prefactor, body.join(" "))
    }
}

/// Exact 4×4 Gaussian-rational matrix.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Mat4(pub [[GQ; 4]; 4]);

impl Mat4 {
    pub fn zero() -> Self {
        Mat4([[GQ::zero(); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = GQ::one();
        }
        m
    }

    pub fn scale(&self, c: GQ) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= c;
            }
        }
        m
    }

    pub fn add(&self, o: &Mat4) -> Self {
        let mut m = *self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] += o.0[i][j];
            }
        }
        m
    }

    pub fn trace(&self) -> GQ {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn diagonal(&self) -> [GQ; 4] {
        [self.0[0][0], self.0[1][1], self.0[2][2], self.0[3][3]]
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, o: Mat4) -> Mat4 {
        let mut m = Mat4::zero();
        for i in 0..4 {
            for k in 0..4 {
                if self.0[i][k].is_zero() {
                    continue;
                }
                for j in 0..4 {
                    m.0[i][j] += self.0[i][k] * o.0[k][j];
                }
            }
        }
        m
    }
}

/// γ¹..γ⁴ (index 0..3) and γ₅.
#[derive(Clone, Copy, Debug)]
pub struct MatrixRep {
    pub gamma: [Mat4; 4],
    pub gamma5: Mat4,
}

impl MatrixRep {
    pub fn letter(&self, s: GammaSymbol, xi: Option<&[Q; 4]>) -> Result<Mat4> {
        match s {
            GammaSymbol::Five => Ok(self.gamma5),
            GammaSymbol::Plain(Ix::Val(v)) if (1..=4).contains(&v) => Ok(self.gamma[(v - 1) as usize]),
            GammaSymbol::Plain(i) => Err(Error::UnboundIndex(format!("γ^{i} is not concrete"))),
            GammaSymbol::SlashedXi => {
                let x = xi.ok_or_else(|| Error::UnboundIndex("ξ̸ needs a concrete vector".into()))?;
                Ok((0..4).fold(Mat4::zero(), |acc, m| acc.add(&self.gamma[m].scale(GQ::real(x[m])))))
            }
        }
    }
}

/// The chiral representation: γʲ = [[0,σⱼ],[σⱼ,0]], γ⁴ = [[0,i],[−i,0]].
pub fn explicit_matrices() -> MatrixRep {
    let z = GQ::zero();
    let o = GQ::one();
    let i = GQ::i();
    let sigma = [[[z, o], [o, z]], [[z, -i], [i, z]], [[o, z], [z, -o]]];
    let block = |b: [[GQ; 2]; 2], c: [[GQ; 2]; 2]| {
        let mut m = Mat4::zero();
        for r in 0..2 {
            for s in 0..2 {
                m.0[r][2 + s] = b[r][s];
                m.0[2 + r][s] = c[r][s];
            }
        }
        m
    };
    let g1 = block(sigma[0], sigma[0]);
    let g2 = block(sigma[1], sigma[1]);
    let g3 = block(sigma[2], sigma[2]);
    let g4 = block([[i, z], [z, i]], [[-i, z], [z, -i]]);
    let mut g5 = Mat4::zero();
    for (k, d) in [1, 1, -1, -1].into_iter().enumerate() {
        g5.0[k][k] = GQ::int(d);
    }
    MatrixRep { gamma: [g1, g2, g3, g4], gamma5: g5 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

/// Checks {γ^μ, γ^ν} = 2η^{μν}, {γ₅, γ^μ} = 0, γ₅² = 1 and γ₅ = γ¹γ²γ³γ⁴.
pub fn clifford_check() -> Vec<IdentityCheck> {
    let m = explicit_matrices();
    let id = Mat4::identity();
    let mut out = Vec::new();
    for mu in 0..4 {
        for nu in 0..4 {
            let ac = (m.gamma[mu] * m.gamma[nu]).add(&(m.gamma[nu] * m.gamma[mu]));
            let want = if mu == nu { id.scale(GQ::int(2)) } else { Mat4::zero() };
            out.push(IdentityCheck {
                name: format!("{{γ^{}, γ^{}}} = {}", mu + 1, nu + 1, if mu == nu { "2" } else { "0" }),
                holds: ac == want,
            });
        }
    }
    for mu in 0..4 {
        let ac = (m.gamma5 * m.gamma[mu]).add(&(m.gamma[mu] * m.gamma5));
        out.push(IdentityCheck { name: format!("{{γ5, γ^{}}} = 0", mu + 1), holds: ac == Mat4::zero() });
    }
    out.push(IdentityCheck { name: "γ5² = 1".into(), holds: m.gamma5 * m.gamma5 == id });
    out.push(IdentityCheck {
        name: "γ5 = γ^1γ^2γ^3γ^4".into(),
        holds: m.gamma[0] * m.gamma[1] * m.gamma[2] * m.gamma[3] == m.gamma5,
    });
    out
}

/// Trace by explicit matrix multiplication. Every index must be concrete;
/// ξ̸ is resolved against `xi`.
pub fn enum_trace_oracle(word: &GammaWord, xi: Option<&[Q; 4]>) -> Result<GQ> {
    let m = explicit_matrices();
    let mut acc = Mat4::identity();
    for &l in &word.letters {
        acc = acc * m.letter(l, xi)?;
    }
    Ok(acc.trace() * word.prefactor)
}

/// A matrix with one entry per row, each a power of i. All Dirac matrices
/// in the chiral representation have this form, which makes long products
/// cheap.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct PhaseMat {
    col: [u8; 4],
    phase: [u8; 4],
}

impl PhaseMat {
    const ID: PhaseMat = PhaseMat { col: [0, 1, 2, 3], phase: [0; 4] };

    fn from_mat(m: &Mat4) -> Option<Self> {
        let mut col = [0u8; 4];
        let mut phase = [0u8; 4];
        for r in 0..4 {
            let nz: Vec<usize> = (0..4).filter(|&c| !m.0[r][c].is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            let c = nz[0];
            col[r] = c as u8;
            phase[r] = (0..4u8).find(|&k| GQ::i_pow(k as i64) == m.0[r][c])?;
        }
        Some(PhaseMat { col, phase })
    }

    fn mul(&self, o: &PhaseMat) -> PhaseMat {
        let mut out = PhaseMat::ID;
        for r in 0..4 {
            let c = self.col[r] as usize;
            out.col[r] = o.col[c];
            out.phase[r] = (self.phase[r] + o.phase[c]) % 4;
        }
        out
    }

    /// Trace as a Gaussian integer (re, im).
    fn trace(&self) -> (i64, i64) {
        let mut t = (0i64, 0i64);
        for r in 0..4 {
            if self.col[r] as usize == r {
                match self.phase[r] {
                    0 => t.0 += 1,
                    1 => t.1 += 1,
                    2 => t.0 -= 1,
                    _ => t.1 -= 1,
                }
            }
        }
        t
    }
}

fn phase_gammas() -> &'static [PhaseMat; 5] {
    static CELL: OnceLock<[PhaseMat; 5]> = OnceLock::new();
    CELL.get_or_init(|| {
        let m = explicit_matrices();
        let f = |x: &Mat4| PhaseMat::from_mat(x).expect("chiral gammas are monomial");
        [f(&m.gamma[0]), f(&m.gamma[1]), f(&m.gamma[2]), f(&m.gamma[3]), f(&m.gamma5)]
    })
}

/// tr(γ^{v₁}…γ^{v_k}γ₅) for concrete components, as a Gaussian integer.
fn fast_trace_with_five(v: &[u8]) -> (i64, i64) {
    let g = phase_gammas();
    let mut acc = PhaseMat::ID;
    for &x in v {
        acc = acc.mul(&g[(x - 1) as usize]);
    }
    acc.mul(&g[4]).trace()
}

/// Trace of a γ₅-free word of plain gammas: 4 times the signed sum over
/// pairings.
fn plain_trace(ix: &[Ix]) -> TensorExpr {
    let mut out = TensorExpr::zero();
    fn rec(rest: &[Ix], acc: &mut Vec<(Ix, Ix)>, sign: i128, out: &mut TensorExpr) {
        if rest.is_empty() {
            out.add_term(GQ::int(4 * sign), Monomial { etas: acc.clone(), ..Monomial::default() });
            return;
        }
        let first = rest[0];
        for j in 1..rest.len() {
            let mut r: Vec<Ix> = Vec::with_capacity(rest.len() - 2);
            r.extend_from_slice(&rest[1..j]);
            r.extend_from_slice(&rest[j + 1..]);
            acc.push((first, rest[j]));
            let s = if j % 2 == 1 { sign } else { -sign };
            rec(&r, acc, s, out);
            acc.pop();
        }
    }
    if ix.len().is_multiple_of(2) {
        rec(ix, &mut Vec::new(), 1, &mut out);
    }
    out
}

/// tr(γ^{a0}…γ^{a(k−1)}γ₅) with symbolic labels a0..a(k−1), reconstructed
/// from the explicit matrices. Cached per rank.
fn five_trace_template(k: usize) -> Result<Arc<TensorExpr>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TensorExpr>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("trace cache poisoned").get(&k) {
        return Ok(t.clone());
    }
    let t = Arc::new(reconstruct_five_trace(k)?);
    cache.lock().expect("trace cache poisoned").insert(k, t.clone());
    Ok(t)
}

struct BasisElem {
    eps: [usize; 4],
    pairs: Vec<(usize, usize)>,
}

impl BasisElem {
    fn value(&self, v: &[u8]) -> i64 {
        for &(a, b) in &self.pairs {
            if v[a] != v[b] {
                return 0;
            }
        }
        levi_civita(self.eps.map(|p| v[p])) as i64
    }
}

fn subsets4(k: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

const P61: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P61 as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn to_mod(x: i64) -> u64 {
    x.rem_euclid(P61 as i64) as u64
}

/// Smallest-height rational congruent to `a` mod p.
fn rational_reconstruct(a: u64) -> Option<Q> {
    let p = P61 as i128;
    let bound = 1i128 << 30;
    let (mut r0, mut r1) = (p, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 >= bound {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    if t1 == 0 || t1.abs() >= bound {
        return None;
    }
    Some(Q::new(r1, t1))
}

fn reconstruct_five_trace(k: usize) -> Result<TensorExpr> {
    if k % 2 == 1 || k < 4 {
        return Ok(TensorExpr::zero());
    }
    // basis: ε on four slots times a pairing of the remaining ones
    let mut basis = Vec::new();
    for s in subsets4(k) {
        let rest: Vec<usize> = (0..k).filter(|i| !s.contains(i)).collect();
        for p in crate::tensor::pairings(&rest) {
            basis.push(BasisElem { eps: s, pairs: p });
        }
    }
    let nb = basis.len();
    let total = 4usize.pow(k as u32);
    let tuple = |mut n: usize| -> Vec<u8> {
        let mut v = vec![0u8; k];
        for slot in (0..k).rev() {
            v[slot] = (n % 4) as u8 + 1;
            n /= 4;
        }
        v
    };
    // a basis element can be nonzero only if every component occurs an odd
    // number of times
    let informative = |v: &[u8]| {
        let mut c = [0usize; 4];
        for &x in v {
            c[(x - 1) as usize] += 1;
        }
        c.iter().all(|n| n % 2 == 1)
    };

    // Gauss-Jordan mod p over informative rows; two right-hand sides (re, im)
    let width = nb + 2;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for n in 0..total {
        let v = tuple(n);
        if !informative(&v) {
            continue;
        }
        let (re, im) = fast_trace_with_five(&v);
        let mut row: Vec<u64> = basis.iter().map(|b| to_mod(b.value(&v))).collect();
        row.push(to_mod(re));
        row.push(to_mod(im));
        for (pr, &pc) in rows.iter().zip(&pivots) {
            let f = row[pc];
            if f != 0 {
                for j in 0..width {
                    if pr[j] != 0 {
                        row[j] = (row[j] + P61 - mulmod(f, pr[j])) % P61;
                    }
                }
            }
        }
        match (0..nb).find(|&j| row[j] != 0) {
            None => {
                if row[nb] != 0 || row[nb + 1] != 0 {
                    return Err(Error::Reconstruction(format!(
                        "rank-{k} γ5 trace at {v:?} is outside the ε·η basis span"
                    )));
                }
            }
            Some(pc) => {
                let inv = powmod(row[pc], P61 - 2);
                for x in row.iter_mut() {
                    *x = mulmod(*x, inv);
                }
                for pr in rows.iter_mut() {
                    let f = pr[pc];
                    if f != 0 {
                        for j in 0..width {
                            if row[j] != 0 {
                                pr[j] = (pr[j] + P61 - mulmod(f, row[j])) % P61;
                            }
                        }
                    }
                }
                rows.push(row);
                pivots.push(pc);
            }
        }
    }

    let mut coeffs: BTreeMap<usize, GQ> = BTreeMap::new();
    for (row, &pc) in rows.iter().zip(&pivots) {
        let re = rational_reconstruct(row[nb]);
        let im = rational_reconstruct(row[nb + 1]);
        let (Some(re), Some(im)) = (re, im) else {
            return Err(Error::Reconstruction(format!(
                "rank-{k} coefficient could not be lifted to a rational"
            )));
        };
        let c = GQ::new(re, im);
        if !c.is_zero() {
            coeffs.insert(pc, c);
        }
    }

    // exact verification against the matrices on every tuple
    let lcm = coeffs.values().fold(1i128, |l, c| l.lcm(c.re.denom()).lcm(c.im.denom()));
    let scaled: Vec<(usize, i128, i128)> = coeffs
        .iter()
        .map(|(&j, c)| (j, (c.re * Q::from(lcm)).to_integer(), (c.im * Q::from(lcm)).to_integer()))
        .collect();
    for n in 0..total {
        let v = tuple(n);
        let (re, im) = fast_trace_with_five(&v);
        let (mut sr, mut si) = (0i128, 0i128);
        if informative(&v) {
            for &(j, cr, ci) in &scaled {
                let b = basis[j].value(&v) as i128;
                sr += cr * b;
                si += ci * b;
            }
        }
        if sr != lcm * re as i128 || si != lcm * im as i128 {
            return Err(Error::Reconstruction(format!(
                "rank-{k} γ5 trace residual at {v:?}: matrices give ({re},{im})"
            )));
        }
    }

    let mut out = TensorExpr::zero();
    for (j, c) in coeffs {
        let b = &basis[j];
        let m = Monomial {
            etas: b.pairs.iter().map(|&(x, y)| (Ix::Sym(x as u32), Ix::Sym(y as u32))).collect(),
            eps: Some(b.eps.map(|p| crate::tensor::EpsSlot::Ix(Ix::Sym(p as u32)))),
            xis: vec![],
        };
        out.add_term(c, m);
    }
    out.contract()
}

/// Symbolic spin trace of a word.
///
/// ξ̸ letters become γ^a ξ_a with a fresh dummy `a`, so the result keeps
/// ξ factors for a later angular average. γ₅ letters are anticommuted to the
/// right end and squared away.
pub fn gamma_trace(word: &GammaWord) -> Result<TensorExpr> {
    word.validate()?;
    let mut next = word
        .letters
        .iter()
        .filter_map(|l| match l {
            GammaSymbol::Plain(Ix::Sym(s)) => Some(*s + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut plain: Vec<Ix> = Vec::new();
    let mut xi_labels: Vec<Ix> = Vec::new();
    let mut fives = 0usize;
    let mut sign = 1i128;
    for l in word.letters.iter().rev() {
        match l {
            GammaSymbol::Five => {
                // every plain letter already seen lies to the right
                if plain.len() % 2 == 1 {
                    sign = -sign;
                }
                fives += 1;
            }
            GammaSymbol::Plain(i) => plain.push(*i),
            GammaSymbol::SlashedXi => {
                let d = Ix::Sym(next);
                next += 1;
                plain.push(d);
                xi_labels.push(d);
            }
        }
    }
    plain.reverse();
    if plain.len() % 2 == 1 {
        return Ok(TensorExpr::zero());
    }
    let core = if fives.is_multiple_of(2) {
        plain_trace(&plain)
    } else if plain.len() < 4 {
        TensorExpr::zero()
    } else if plain.len() == 4 {
        TensorExpr::epsilon([plain[0], plain[1], plain[2], plain[3]]).scale(GQ::int(4))
    } else {
        let t = five_trace_template(plain.len())?;
        let map = plain.clone();
        t.relabel(|i| match i {
            Ix::Sym(s) => map[s as usize],
            v => v,
        })
    };
    let xi = TensorExpr::monomial(
        word.prefactor * GQ::int(sign),
        Monomial { xis: xi_labels, ..Monomial::default() },
    );
    core.mul(&xi)
}
