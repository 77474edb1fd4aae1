use std::collections::BTreeMap;

use diracdet::clifford::{enum_trace_oracle, gamma_trace, GammaSymbol, GammaWord};
use diracdet::ncpoly::{
    apply_to_one, total_derivative, CovLetter, CovariantPolynomial, FieldKind, FieldLetter, FieldPolynomial,
    Gen, Term,
};
use diracdet::tensor::{decompose_rank4, Ix, Rank4Decomposition};
use diracdet::GQ;
use proptest::prelude::*;

fn concrete_word() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1u8..=5, 0..=9)
}

fn sym_trace_value(w: &GammaWord) -> GQ {
    gamma_trace(w).unwrap().evaluate(&BTreeMap::new(), None).unwrap()
}

/// Words whose letters carry labels 0..4, each label used at most twice.
fn cov_term() -> impl Strategy<Value = Vec<CovLetter>> {
    prop::collection::vec((prop::bool::ANY, 0u32..4), 1..=4)
        .prop_filter("label used at most twice", |w| {
            (0..4).all(|l| w.iter().filter(|(_, x)| *x == l).count() <= 2)
        })
        .prop_map(|w| w.into_iter().map(|(d, l)| if d { CovLetter::d(l) } else { CovLetter::c(l) }).collect())
}

fn cov_poly() -> impl Strategy<Value = CovariantPolynomial> {
    prop::collection::vec((cov_term(), -3i128..=3, -2i128..=2), 1..=4).prop_map(|ts| {
        let mut p = CovariantPolynomial::zero();
        for (w, re, im) in ts {
            p.add_term(GQ::int(re) + GQ::int(im) * GQ::i(), Term::new(w));
        }
        p
    })
}

fn gq() -> impl Strategy<Value = GQ> {
    (-5i128..=5, -5i128..=5, 1i128..=4).prop_map(|(a, b, d)| GQ::frac(a, d) + GQ::frac(b, d) * GQ::i())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn symbolic_trace_matches_matrices(v in concrete_word()) {
        let w = GammaWord::concrete(&v).unwrap();
        prop_assert_eq!(sym_trace_value(&w), enum_trace_oracle(&w, None).unwrap());
    }

    #[test]
    fn trace_is_cyclic(v in concrete_word(), by in 0usize..9) {
        let w = GammaWord::concrete(&v).unwrap();
        prop_assert_eq!(sym_trace_value(&w), sym_trace_value(&w.rotated(by)));
    }

    #[test]
    fn trace_is_reversal_invariant(v in concrete_word()) {
        let w = GammaWord::concrete(&v).unwrap();
        prop_assert_eq!(sym_trace_value(&w), sym_trace_value(&w.reversed()));
    }

    #[test]
    fn symbolic_rotation_invariance(n in 2usize..=5, by in 0usize..6, fives in prop::collection::vec(prop::bool::ANY, 6)) {
        let mut letters = Vec::new();
        for j in 0..n {
            letters.push(GammaSymbol::Plain(Ix::Sym(j as u32)));
            if fives[j] {
                letters.push(GammaSymbol::Five);
            }
        }
        let w = GammaWord::new(letters);
        let diff = gamma_trace(&w).unwrap().sub(&gamma_trace(&w.rotated(by)).unwrap());
        // η·ε forms are not unique (Schouten), so compare values
        for t in 0..4usize.pow(n as u32) {
            let assign: BTreeMap<u32, u8> = (0..n).map(|j| (j as u32, (t / 4usize.pow(j as u32) % 4) as u8 + 1)).collect();
            prop_assert!(diff.evaluate(&assign, None).unwrap() == GQ::int(0));
        }
    }

    #[test]
    fn odd_plain_count_traces_vanish(v in prop::collection::vec(1u8..=4, 0..=4), fives in 0usize..3) {
        let mut v = v;
        if v.len() % 2 == 0 {
            v.push(1);
        }
        v.extend(std::iter::repeat_n(5, fives));
        let w = GammaWord::concrete(&v).unwrap();
        prop_assert!(gamma_trace(&w).unwrap().is_zero());
    }

    #[test]
    fn canonicalize_is_idempotent(p in cov_poly(), cyclic in prop::bool::ANY) {
        let c = p.canonicalize(cyclic);
        prop_assert_eq!(c.canonicalize(cyclic), c);
    }

    #[test]
    fn canonicalize_is_a_congruence(p in cov_poly(), q in cov_poly(), k in gq(), cyclic in prop::bool::ANY) {
        let lhs = p.add(&q.scale(k)).canonicalize(cyclic);
        let rhs = p.canonicalize(cyclic).add(&q.canonicalize(cyclic).scale(k)).canonicalize(cyclic);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn renaming_dummies_changes_nothing(w in cov_term(), shift in 10u32..50) {
        let p = CovariantPolynomial::term(GQ::int(1), Term::new(w.clone()));
        let counts = Term::new(w.clone()).label_counts();
        let renamed: Vec<CovLetter> = w
            .iter()
            .map(|l| if counts[&l.index] == 2 { CovLetter { gen: l.gen, index: l.index + shift } } else { *l })
            .collect();
        let q = CovariantPolynomial::term(GQ::int(1), Term::new(renamed));
        prop_assert!(p.equal_exact(&q));
    }

    #[test]
    fn rotations_agree_modulo_cyclic(w in cov_term(), by in 0usize..4) {
        let mut r = w.clone();
        r.rotate_left(by % w.len());
        let p = CovariantPolynomial::term(GQ::int(1), Term::new(w));
        let q = CovariantPolynomial::term(GQ::int(1), Term::new(r));
        prop_assert!(p.equal_modulo_cyclic(&q));
    }

    #[test]
    fn commutators_vanish_modulo_cyclic(p in cov_poly(), q in cov_poly()) {
        // keep the product well formed by shifting the labels of q
        let shifted = q.substitute(|l| CovariantPolynomial::letter(CovLetter { gen: l.gen, index: l.index + 10 }));
        let c = p.commutator(&shifted).unwrap();
        prop_assert!(c.canonicalize(true).is_zero());
    }

    #[test]
    fn apply_to_one_obeys_leibniz(w in cov_term(), gen_d in prop::bool::ANY, a in 20u32..22) {
        let w: Vec<CovLetter> = w.into_iter().take(3).collect();
        let x = CovariantPolynomial::term(GQ::int(1), Term::new(w));
        let f = apply_to_one(&x);
        let (letter, kind) = if gen_d { (CovLetter::d(a), FieldKind::V) } else { (CovLetter::c(a), FieldKind::C) };
        let lhs = apply_to_one(&CovariantPolynomial::letter(letter).mul(&x).unwrap());
        let mut rhs = FieldPolynomial::letter(FieldLetter::field(kind, a)).mul(&f).unwrap();
        if letter.gen == Gen::D {
            rhs = rhs.add(&total_derivative(&f, a).scale(-GQ::i()));
        }
        prop_assert!(lhs.equal_exact(&rhs));
    }

    #[test]
    fn rank4_decomposition_roundtrip(a in gq(), b in gq(), c in gq(), d in gq()) {
        let r = Rank4Decomposition { a, b, c, d };
        let e = r.to_expr([Ix::Sym(1), Ix::Sym(2), Ix::Sym(3), Ix::Sym(4)]);
        prop_assert_eq!(decompose_rank4(&e, [1, 2, 3, 4]).unwrap(), r);
    }
}
