use proptest::prelude::*;
use spinbranch::base::{Characteristic, SignedSet, Weight};
use spinbranch::poly::{x, y, HPoly, HVar, Polynomial};
use spinbranch::raising::*;
use spinbranch::verify::admissible_sets;
use spinbranch::Error;

fn evens(v: &[i64]) -> SignedSet {
    SignedSet::from_parts(v, &[]).unwrap()
}

fn odds(v: &[i64]) -> SignedSet {
    SignedSet::from_parts(&[], v).unwrap()
}

fn h(i: i64) -> U0Element {
    U0Element::h(i)
}

fn hb(i: i64) -> U0Element {
    U0Element::hbar(i)
}

#[test]
fn atoms() {
    let h1 = HPoly::var(HVar(1));
    let h2 = HPoly::var(HVar(2));
    let c = &(&(&h1 * &h1) - &h1) - &(&(&h2 * &h2) - &h2);
    assert_eq!(u0_atom(Atom::C(1, 2), 2).unwrap(), U0Element::scalar(c));
    let b = &(&(&h1 * &h1) - &h1) - &(&(&h2 * &h2) + &h2);
    assert_eq!(u0_atom(Atom::B(1, 2), 2).unwrap(), U0Element::scalar(b));
    assert_eq!(u0_atom(Atom::HEps(3, 1), 3).unwrap(), hb(3));
    assert!(matches!(u0_atom(Atom::H(4), 3), Err(Error::IndexOutOfRange { index: 4, n: 3 })));
}

#[test]
fn odd_relations() {
    assert_eq!(hb(1).mul(&hb(1)), h(1));
    assert_eq!(hb(2).mul(&hb(1)), hb(1).mul(&hb(2)).neg());
    assert_eq!(h(1).add(&hb(1)).mul(&hb(1)), h(1).mul(&hb(1)).add(&h(1)));
    for i in 1..=4 {
        for j in 1..=4 {
            let anti = hb(i).mul(&hb(j)).add(&hb(j).mul(&hb(i)));
            let want = if i == j { h(i).scale(2) } else { U0Element::zero() };
            assert_eq!(anti, want, "({i},{j})");
            assert_eq!(h(i).mul(&hb(j)), hb(j).mul(&h(i)));
        }
    }
}

#[test]
fn bracket_examples() {
    assert_eq!(bracket_hom(&(&x(1) - &y(2)), 2).unwrap(), U0Element::b(1, 2));
    assert_eq!(bracket_hom(&(&x(1) - &x(2)), 2).unwrap(), U0Element::c(1, 2));
    assert_eq!(bracket_hom(&Polynomial::one(), 2).unwrap(), U0Element::one());
    assert!(bracket_hom(&x(3), 2).is_err());
}

#[test]
fn raising_examples() {
    let d0 = Delta::new(1, vec![0]);
    assert_eq!(raising_rec(1, 2, 0, &d0, &odds(&[2])).unwrap(), h(1).sub(&h(2)));
    assert_eq!(raising_rec(1, 2, 0, &d0, &evens(&[2])).unwrap(), U0Element::b(1, 2));
    assert_eq!(raising_rec(1, 2, 1, &d0, &odds(&[2])).unwrap(), hb(1).sub(&hb(2)));
    // Σδ ≠ ε kills the even case
    assert!(raising_rec(1, 2, 1, &d0, &evens(&[2])).unwrap().is_zero());

    assert_eq!(raising_closed(1, 2, 0, &d0, &evens(&[2])).unwrap(), U0Element::b(1, 2));
    assert_eq!(raising_closed(1, 2, 0, &d0, &odds(&[2])).unwrap(), h(1).sub(&h(2)));
    let d1 = Delta::new(1, vec![1]);
    assert!(raising_closed(1, 2, 0, &d1, &evens(&[2])).unwrap().is_zero());

    // only j itself in M: the interval (i..j) survives whole
    let dz = Delta::new(1, vec![0, 0, 0]);
    assert_eq!(raising_closed(1, 4, 0, &dz, &evens(&[4])).unwrap(), U0Element::b(1, 2));

    let two_odd = SignedSet::from_parts(&[], &[2, 3]).unwrap();
    assert!(raising_rec(1, 3, 0, &Delta::new(1, vec![0, 0]), &two_odd).is_ok());
    assert!(matches!(
        raising_closed(1, 3, 0, &Delta::new(1, vec![0, 0]), &two_odd),
        Err(Error::UnsupportedShape(_))
    ));
}

#[test]
fn evaluation_examples() {
    let p5 = Characteristic::new(5).unwrap();
    let w = Weight::new(vec![16, 11]).unwrap();
    assert!(eval_at_weight(&U0Element::c(1, 2), &w, p5).unwrap().is_zero());
    let w3 = Weight::new(vec![1, 2, 3]).unwrap();
    assert_eq!(eval_at_weight(&hb(3), &w3, p5).unwrap(), hb(3));
    let w = Weight::new(vec![2, 1]).unwrap();
    assert!(eval_at_weight(&U0Element::b(1, 2), &w, p5).unwrap().is_zero());
    assert!(matches!(
        eval_at_weight(&h(1), &w, Characteristic::zero()),
        Err(Error::CharacteristicZero)
    ));
}

#[test]
fn closed_forms_agree_on_small_widths() {
    for j in 2..=4 {
        for m in admissible_sets(1, j) {
            for d in Delta::all(1, j) {
                for eps in 0..2 {
                    assert_eq!(
                        raising_rec(1, j, eps, &d, &m).unwrap(),
                        raising_closed(1, j, eps, &d, &m).unwrap(),
                        "j={j} M={m} δ={d:?} ε={eps}"
                    );
                }
            }
        }
    }
}

#[test]
fn term_list_round_trip() {
    let u = h(1).mul(&hb(2)).add(&hb(1).mul(&hb(3))).add(&U0Element::one().scale(4));
    assert_eq!(U0Element::from_terms(&u.to_terms()).unwrap(), u);
}

/// Naive normal form of c·H̄_{w1}⋯H̄_{wk}: bubble sort with a sign flip per
/// swap of distinct letters, squaring equal neighbours into H.
fn naive_word(word: &[i64]) -> U0Element {
    let mut w = word.to_vec();
    let mut sign = 1i64;
    let mut coeff = U0Element::one();
    loop {
        let mut changed = false;
        let mut k = 0;
        while k + 1 < w.len() {
            if w[k] == w[k + 1] {
                coeff = coeff.mul(&h(w[k]));
                w.drain(k..k + 2);
                changed = true;
            } else if w[k] > w[k + 1] {
                w.swap(k, k + 1);
                sign = -sign;
                changed = true;
                k += 1;
            } else {
                k += 1;
            }
        }
        if !changed {
            break;
        }
    }
    U0Element::from_term(w, HPoly::one()).mul(&coeff).scale(sign)
}

fn word_strategy() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(1i64..=4, 0..6)
}

fn arb_u0() -> impl Strategy<Value = U0Element> {
    let term = (-3i64..=3, proptest::collection::vec(1i64..=3, 0..3), word_strategy()).prop_map(|(c, hs, w)| {
        hs.iter().fold(naive_word(&w).scale(c), |acc, &i| acc.mul(&h(i)))
    });
    proptest::collection::vec(term, 0..4).prop_map(|ts| ts.iter().fold(U0Element::zero(), |acc, t| acc.add(t)))
}

fn arb_poly() -> impl Strategy<Value = Polynomial> {
    let var = (any::<bool>(), 1i64..=4).prop_map(|(isx, t)| if isx { x(t) } else { y(t) });
    let term = (-3i64..=3, proptest::collection::vec(var, 0..3))
        .prop_map(|(c, vs)| vs.iter().fold(Polynomial::constant(c), |acc, v| &acc * v));
    proptest::collection::vec(term, 0..4).prop_map(|ts| ts.iter().fold(Polynomial::zero(), |acc, t| &acc + t))
}

proptest! {
    #[test]
    fn words_multiply_like_the_naive_model(a in word_strategy(), b in word_strategy()) {
        let joined: Vec<i64> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(naive_word(&a).mul(&naive_word(&b)), naive_word(&joined));
    }

    #[test]
    fn product_is_associative(a in arb_u0(), b in arb_u0(), c in arb_u0()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn parity_is_multiplicative(a in arb_u0(), b in arb_u0()) {
        for pa in 0..2 {
            for pb in 0..2 {
                let prod = a.parity_part(pa).mul(&b.parity_part(pb));
                prop_assert_eq!(prod.parity_part((pa + pb + 1) % 2), U0Element::zero());
            }
        }
    }

    #[test]
    fn bracket_is_multiplicative(f in arb_poly(), g in arb_poly()) {
        let lhs = bracket_hom(&(&f * &g), 4).unwrap();
        let rhs = bracket_hom(&f, 4).unwrap().mul(&bracket_hom(&g, 4).unwrap());
        prop_assert_eq!(lhs, rhs);
        let sum = bracket_hom(&(&f + &g), 4).unwrap();
        prop_assert_eq!(sum, bracket_hom(&f, 4).unwrap().add(&bracket_hom(&g, 4).unwrap()));
    }

    #[test]
    fn evaluation_respects_products(a in arb_u0(), b in arb_u0(), v in proptest::collection::vec(-20i64..20, 4)) {
        let p = Characteristic::new(7).unwrap();
        let w = Weight::new(v).unwrap();
        // H's are central, so evaluating before or after multiplying by an even element agrees
        let even = a.parity_part(0);
        let lhs = eval_at_weight(&even.mul(&b), &w, p).unwrap();
        let rhs = eval_at_weight(&eval_at_weight(&even, &w, p).unwrap().mul(&eval_at_weight(&b, &w, p).unwrap()), &w, p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
