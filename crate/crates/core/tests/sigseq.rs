use std::collections::BTreeSet;

use proptest::prelude::*;
use spinbranch::base::{Characteristic, Weight};
use spinbranch::sigseq::*;
use spinbranch::Error;

use SignValue::*;

fn seq(s: &[(char, i64)]) -> SigSeq {
    SigSeq(
        s.iter()
            .map(|&(c, m)| if c == '+' { Marked::plus(m) } else { Marked::minus(m) })
            .collect(),
    )
}

fn single(v: &[SignValue]) -> SignMap {
    SignMap::from_slice(Mode::Single, v).unwrap()
}

fn pair(v: &[SignValue]) -> SignMap {
    SignMap::from_slice(Mode::Pair, v).unwrap()
}

fn p5() -> Characteristic {
    Characteristic::new(5).unwrap()
}

fn intro() -> Weight {
    Weight::new(vec![16, 11, 10, 10, 9, 5, 1, 0]).unwrap()
}

#[test]
fn reduce_examples() {
    assert!(reduce(&seq(&[('-', 1), ('+', 2)])).is_empty());
    let u = seq(&[('-', 1), ('-', 2), ('-', 3), ('+', 4), ('+', 5), ('-', 6), ('-', 7)]);
    assert_eq!(reduce(&u), seq(&[('-', 1), ('-', 6), ('-', 7)]));
    let v = seq(&[('+', 1), ('-', 2)]);
    assert_eq!(reduce(&v), v);
    assert_eq!(reduce(&SigSeq::new()).to_string(), "()");
}

#[test]
fn product_of_examples() {
    let u = pair(&[MinusMinus, PlusMinus]);
    let both: BTreeSet<i64> = [1, 2].into();
    assert_eq!(u.product_of(&both).unwrap(), seq(&[('-', 1), ('-', 1), ('+', 2), ('-', 2)]));
    assert_eq!(u.product_of(&[2].into()).unwrap(), seq(&[('+', 2), ('-', 2)]));
    let w = single(&[Empty, Plus]);
    assert_eq!(w.product_of(&both).unwrap(), seq(&[('+', 2)]));
    assert!(w.product_of(&[3].into()).is_err());
}

#[test]
fn r_beta_examples() {
    let u = r_beta(&intro(), p5().reduce(0), p5());
    assert_eq!(u.mode(), Mode::Pair);
    let got: Vec<_> = u.values().values().copied().collect();
    assert_eq!(got, vec![MinusMinus, MinusMinus, PlusMinus, PlusMinus, PlusPlus, PlusMinus, MinusMinus, PlusMinus]);

    let w = Weight::new(vec![2, 1]).unwrap();
    let u = r_beta(&w, p5().reduce(2), p5());
    assert_eq!(u.values().values().copied().collect::<Vec<_>>(), vec![Minus, Plus]);

    // 3·2 = 6 ≡ 1, so λ_1 carries −; Res(4) = 12 ≡ 2 does not give +
    let w = Weight::new(vec![3]).unwrap();
    let u = r_beta(&w, p5().reduce(1), p5());
    assert_eq!(u.values().values().copied().collect::<Vec<_>>(), vec![Minus]);
}

#[test]
fn minus_w0_examples() {
    assert_eq!(minus_w0_seq(&seq(&[('-', 1), ('-', 2)]), 2).unwrap(), seq(&[('+', 1), ('+', 2)]));
    assert!(minus_w0_seq(&SigSeq::new(), 2).unwrap().is_empty());
    let u = seq(&[('-', 1), ('+', 2)]);
    assert_eq!(minus_w0_seq(&u, 2).unwrap(), u);
    assert!(matches!(
        minus_w0_seq(&seq(&[('-', 3)]), 2),
        Err(Error::MarkOutOfRange { mark: 3, n: 2 })
    ));
}

#[test]
fn flow_analyze_examples() {
    let r = flow_analyze(&Flow::from_edges([(1, 2)]), &single(&[Minus, Plus]));
    assert!(r.is_flow && r.coherent && r.fully_coherent);
    assert!(r.buds.is_empty());

    let r = flow_analyze(&Flow::from_edges([(1, 1)]), &pair(&[PlusMinus]));
    assert!(r.is_weak_flow && !r.is_flow);

    let r = flow_analyze(&Flow::new(), &single(&[Minus]));
    assert!(r.is_flow && r.coherent && r.fully_coherent);
    assert_eq!(r.buds, BTreeSet::from([1]));
}

#[test]
fn full_flow_examples() {
    assert_eq!(build_full_flow(&single(&[Minus, Plus])).unwrap(), Flow::from_edges([(1, 2)]));
    let u = pair(&[MinusMinus]);
    let g = build_full_flow(&u).unwrap();
    assert!(g.edges.is_empty());
    assert_eq!(flow_analyze(&g, &u).buds.len(), 1);
    assert_eq!(build_full_flow(&pair(&[MinusMinus, PlusPlus])).unwrap(), Flow::from_edges([(1, 2)]));
    assert!(matches!(build_full_flow(&single(&[Plus])), Err(Error::NotAllMinus(_))));
}

#[test]
fn split_and_lead_plus_examples() {
    assert_eq!(split_index(&pair(&[MinusMinus])).unwrap(), 1);
    assert_eq!(split_index(&pair(&[MinusMinus, PlusMinus])).unwrap(), 1);
    // [+ − − −] keeps its +, so the precondition fails
    assert!(matches!(split_index(&pair(&[PlusMinus, MinusMinus])), Err(Error::PreconditionFailed(_))));

    assert_eq!(lead_plus_index(&pair(&[PlusMinus])).unwrap(), 1);
    assert_eq!(lead_plus_index(&pair(&[MinusMinus, PlusPlus, PlusMinus])).unwrap(), 3);
    assert_eq!(lead_plus_index(&pair(&[PlusMinus, MinusMinus])).unwrap(), 1);
}

#[test]
fn section_and_resolution_examples() {
    assert_eq!(section_of(&pair(&[PlusMinus])).unwrap(), vec![1]);
    assert_eq!(section_of(&pair(&[PlusMinus, PlusMinus])).unwrap(), vec![1, 2]);
    assert_eq!(section_of(&pair(&[MinusMinus, PlusPlus, PlusMinus])).unwrap(), vec![3]);

    assert_eq!(resolution_of(&pair(&[PlusMinus])).unwrap(), Flow::from_edges([(1, 1)]));
    assert_eq!(
        resolution_of(&pair(&[MinusMinus, PlusPlus, PlusMinus])).unwrap(),
        Flow::from_edges([(1, 2), (3, 3)])
    );
    let u = pair(&[PlusMinus, MinusMinus, PlusPlus]);
    let g = resolution_of(&u).unwrap();
    assert_eq!(g, Flow::from_edges([(1, 1), (2, 3)]));
    let r = flow_analyze(&g, &u);
    assert!(r.is_weak_flow && !r.is_flow && r.fully_coherent);
}

#[test]
fn partial_flow_examples() {
    let (j, g) = partial_flow(&single(&[Plus])).unwrap();
    assert_eq!(j, BTreeSet::from([1]));
    assert!(g.edges.is_empty());
    let (j, g) = partial_flow(&pair(&[PlusPlus])).unwrap();
    assert_eq!(j, BTreeSet::from([1]));
    assert!(g.edges.is_empty());

    let u = pair(&[MinusMinus, PlusPlus, PlusPlus]);
    let (j, g) = partial_flow(&u).unwrap();
    assert_eq!(j, BTreeSet::from([1, 2, 3]));
    assert_eq!(g, Flow::from_edges([(1, 2)]));
    assert_eq!(reduce(&u.product_of(&j).unwrap()).signs(), vec![Sign::Plus, Sign::Plus]);
    let r = flow_analyze(&g, &u.restrict(|k| j.contains(&k)));
    assert!(r.is_flow && r.coherent && !r.fully_coherent && r.buds.is_empty());

    assert!(partial_flow(&pair(&[PlusMinus])).is_err());
}

/// Erase one adjacent (−, +) at a time, choosing which pair by `picks`.
fn erase_naive(u: &SigSeq, picks: &[usize]) -> SigSeq {
    let mut v = u.0.clone();
    let mut k = 0;
    loop {
        let spots: Vec<usize> = (0..v.len().saturating_sub(1))
            .filter(|&t| v[t].sign == Sign::Minus && v[t + 1].sign == Sign::Plus)
            .collect();
        if spots.is_empty() {
            return SigSeq(v);
        }
        let t = spots[picks.get(k).copied().unwrap_or(0) % spots.len()];
        v.drain(t..t + 2);
        k += 1;
    }
}

fn arb_seq() -> impl Strategy<Value = SigSeq> {
    proptest::collection::vec((any::<bool>(), 1i64..=8), 0..24).prop_map(|v| {
        SigSeq(v.into_iter().map(|(plus, m)| if plus { Marked::plus(m) } else { Marked::minus(m) }).collect())
    })
}

fn arb_pair_map() -> impl Strategy<Value = SignMap> {
    proptest::collection::vec(0usize..4, 1..10)
        .prop_map(|v| pair(&v.into_iter().map(|k| SignValue::PAIR[k]).collect::<Vec<_>>()))
}

proptest! {
    #[test]
    fn any_erasure_order_agrees(u in arb_seq(), picks in proptest::collection::vec(any::<usize>(), 12)) {
        prop_assert_eq!(reduce(&u), erase_naive(&u, &picks));
    }

    #[test]
    fn reduce_is_idempotent(u in arb_seq()) {
        let r = reduce(&u);
        prop_assert_eq!(reduce(&r), r);
    }

    #[test]
    fn reduce_absorbs_into_concatenation(u in arb_seq(), v in arb_seq()) {
        let whole = reduce(&u.concat(&v));
        prop_assert_eq!(&reduce(&reduce(&u).concat(&v)), &whole);
        prop_assert_eq!(&reduce(&u.concat(&reduce(&v))), &whole);
    }

    #[test]
    fn reduced_shape_keeps_sign_balance(u in arb_seq()) {
        let r = reduce(&u);
        prop_assert!(r.is_plus_then_minus());
        let (s, m) = r.shape();
        let plus = u.count(Sign::Plus) as i64;
        let minus = u.count(Sign::Minus) as i64;
        prop_assert_eq!(s as i64 - m as i64, plus - minus);
    }

    #[test]
    fn pair_maps_reduce_to_even_excess(u in arb_pair_map()) {
        let (s, r) = u.reduced().shape();
        prop_assert_eq!(s % 2, r % 2);
    }

    #[test]
    fn dual_commutes_with_reduction(u in arb_seq()) {
        let lhs = reduce(&minus_w0_seq(&u, 8).unwrap());
        let rhs = minus_w0_seq(&reduce(&u), 8).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn full_flow_has_expected_buds(u in arb_pair_map()) {
        let r = u.reduced();
        match build_full_flow(&u) {
            Ok(g) => {
                prop_assert!(r.is_all_minus());
                let rep = flow_analyze(&g, &u);
                prop_assert!(rep.is_flow && rep.fully_coherent);
                prop_assert_eq!(rep.buds.len() * 2, r.len());
            }
            Err(_) => prop_assert!(r.has_plus()),
        }
    }
}
