use proptest::prelude::*;
use spinbranch::base::*;

fn p(v: i64) -> Characteristic {
    Characteristic::new(v).unwrap()
}

fn ss(evens: &[i64], odds: &[i64]) -> SignedSet {
    SignedSet::from_parts(evens, odds).unwrap()
}

#[test]
fn residues_of_small_integers() {
    assert_eq!(res_p(16, p(5)).value(), 0);
    assert_eq!(res_p(0, p(5)).value(), 0);
    assert_eq!(res_p(-1, p(5)).value(), 2);
    // p = 0 keeps j(j-1) as an integer
    assert_eq!(res_p(-3, Characteristic::zero()).value(), 12);
}

#[test]
fn characteristic_rejects_composites_and_two() {
    for bad in [1, 2, 4, 9, 15, -3] {
        assert!(matches!(Characteristic::new(bad), Err(spinbranch::Error::InvalidCharacteristic(_))));
    }
    for good in [0, 3, 5, 7, 11, 13] {
        assert_eq!(Characteristic::new(good).unwrap().get() as i64, good);
    }
}

#[test]
fn measure_of_mixed_set() {
    let m = ss(&[1, 5], &[3, 6, 7]);
    let me = m.measure();
    assert_eq!(me.ht, Height::Finite(22));
    assert_eq!(me.parity, 1);
    assert_eq!(me.min, Some(Signed::Even(1)));
    assert_eq!(me.max, Some(Signed::Odd(7)));
}

#[test]
fn measure_of_empty_and_singleton() {
    let e = SignedSet::new().measure();
    assert_eq!(e.ht, Height::NegInfinity);
    assert_eq!(e.parity, 0);
    assert_eq!(e.min, None);
    let s = ss(&[], &[2]).measure();
    assert_eq!(s.ht, Height::Finite(2));
    assert_eq!(s.parity, 1);
    assert_eq!(s.min, Some(Signed::Odd(2)));
    assert_eq!(s.max, Some(Signed::Odd(2)));
}

#[test]
fn union_replace_restrict() {
    let u = ss(&[2, 5], &[8]).union(&ss(&[9], &[3])).unwrap();
    assert_eq!(u, ss(&[2, 5, 9], &[3, 8]));
    let r = ss(&[1, 5], &[4]).replace(Signed::Odd(4), Signed::Odd(3)).unwrap();
    assert_eq!(r, ss(&[1, 5], &[3]));
    let m = ss(&[1, 3, 6], &[2, 5]).restrict(|k| (2..=5).contains(&k));
    assert_eq!(m, ss(&[3], &[2, 5]));
}

#[test]
fn union_refuses_collisions() {
    assert!(matches!(
        ss(&[4], &[]).union(&ss(&[], &[4])),
        Err(spinbranch::Error::SignedCollision(4))
    ));
}

#[test]
fn barred_sorts_before_plain() {
    assert!(Signed::Odd(3) < Signed::Even(3));
    assert!(Signed::Even(2) < Signed::Odd(3));
}

#[test]
fn dominance_and_dual_weight() {
    let w = Weight::new(vec![5, 5, 3, 0, 0]).unwrap();
    assert!(w.is_dominant_p_strict(p(5)));
    assert!(!w.is_dominant_p_strict(p(3)));
    assert_eq!(w.minus_w0().parts(), &[0, 0, -3, -5, -5]);
    assert_eq!(w.shift(3, -1).parts(), &[5, 5, 2, 0, 0]);
    assert!(Weight::new(vec![]).is_err());
}

fn arb_set() -> impl Strategy<Value = SignedSet> {
    proptest::collection::btree_map(-6i64..12, any::<bool>(), 0..8).prop_map(|m| {
        SignedSet::from_elems(m.into_iter().map(|(k, odd)| if odd { Signed::Odd(k) } else { Signed::Even(k) }))
            .unwrap()
    })
}

proptest! {
    #[test]
    fn residue_symmetry(j in -10_000i64..10_000, pi in 0usize..5) {
        let q = p([0, 3, 5, 7, 11][pi]);
        prop_assert_eq!(res_p(j, q), res_p(1 - j, q));
    }

    #[test]
    fn parity_adds_over_disjoint_union(a in arb_set(), b in arb_set()) {
        let b = b.restrict(|k| a.get(k).is_none());
        let u = a.union(&b).unwrap();
        prop_assert_eq!(u.parity(), (a.parity() + b.parity()) % 2);
    }

    #[test]
    fn restriction_splits_a_set(m in arb_set(), lo in -6i64..12, hi in -6i64..12) {
        let inside = m.restrict(|k| lo <= k && k <= hi);
        let outside = m.restrict(|k| !(lo <= k && k <= hi));
        prop_assert_eq!(inside.union(&outside).unwrap(), m);
    }

    #[test]
    fn height_sums_underlying_integers(m in arb_set()) {
        let want: i64 = m.iter().map(|x| x.value()).sum();
        let got = m.measure().ht;
        if m.is_empty() {
            prop_assert_eq!(got, Height::NegInfinity);
        } else {
            prop_assert_eq!(got, Height::Finite(want));
        }
    }
}
