use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use spinbranch::poly::*;
use spinbranch::Error;

fn set(v: &[i64]) -> BTreeSet<i64> {
    v.iter().copied().collect()
}

fn prod(fs: &[Polynomial]) -> Polynomial {
    fs.iter().fold(Polynomial::one(), |acc, f| &acc * f)
}

#[test]
fn sigma_examples() {
    assert_eq!(sigma_apply(1, 2, 3, &x(3)).unwrap(), &(&x(3) + &x(1)) - &x(2));
    assert_eq!(sigma_apply(1, 2, 3, &y(2)).unwrap(), y(2));
    let lhs = sigma_apply(1, 2, 3, &sigma_apply(1, 3, 4, &x(4)).unwrap()).unwrap();
    let rhs = sigma_apply(2, 3, 4, &sigma_apply(1, 2, 3, &x(4)).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert!(matches!(sigma_apply(2, 2, 3, &x(1)), Err(Error::BadIndices { a: 2, b: 2 })));
}

#[test]
fn division_examples() {
    let f = &(&x(1) - &x(2)) * &(&x(1) - &y(2));
    assert_eq!(exact_div(&f, 1, 2).unwrap(), &x(1) - &y(2));
    assert!(exact_div(&Polynomial::zero(), 1, 2).unwrap().is_zero());
    let g = &x(1) - &y(3);
    let num = &g - &sigma_apply(1, 2, 3, &g).unwrap();
    assert!(exact_div(&num, 1, 2).unwrap().is_one());
    assert!(matches!(exact_div(&x(1), 1, 2), Err(Error::NotDivisible { .. })));
}

#[test]
fn u_examples() {
    assert_eq!(u_poly(1, 5, &set(&[])), prod(&[&x(1) - &y(2), &x(1) - &y(3), &x(1) - &y(4), &x(1) - &y(5)]));
    assert_eq!(u_poly(1, 5, &set(&[3])), prod(&[&x(1) - &y(2), &x(1) - &y(3), &x(3) - &y(4), &x(3) - &y(5)]));
    assert!(u_poly(4, 4, &set(&[2, 7])).is_one());
}

#[test]
fn f_examples() {
    let l = LFunction::constant(1, 3, 1);
    assert_eq!(f_poly(1, 3, &set(&[]), &l, &set(&[2])).unwrap(), &x(1) - &y(2));
    assert_eq!(f_poly(1, 3, &set(&[]), &l, &set(&[])).unwrap(), u_poly(1, 3, &set(&[])));
    // σ fixes x_1 - y_2 when k = 3, so the numerator vanishes
    let l = LFunction::constant(1, 2, 1);
    assert!(f_poly(1, 2, &set(&[]), &l, &set(&[2])).unwrap().is_zero());
}

#[test]
fn g_examples() {
    for (i, j) in [(1, 3), (1, 5), (2, 6)] {
        let inner: BTreeSet<i64> = (i + 1..j).collect();
        assert_eq!(g_family(&GKind::G1 { i, j }, &inner).unwrap(), &x(i) - &y(i + 1));
        let closed: BTreeSet<i64> = (i + 1..=j).collect();
        assert!(g_family(&GKind::G2 { i, k: i, q: j, j }, &closed).unwrap().is_one());
        assert!(g_family(&GKind::G2 { i, k: i + 1, q: j, j }, &closed).unwrap().is_one());
    }
    assert!(matches!(g_family(&GKind::G1 { i: 1, j: 3 }, &set(&[3])), Err(Error::BadParameters(_))));
    assert!(matches!(g_family(&GKind::G2 { i: 2, k: 1, q: 3, j: 4 }, &set(&[])), Err(Error::BadParameters(_))));
}

#[test]
fn lin_reduce_examples() {
    assert_eq!(lin_reduce(&(&x(1) - &y(3)), &[(3, 2)]).unwrap(), &x(1) - &x(2));
    let f = u_poly(1, 4, &set(&[]));
    assert_eq!(lin_reduce(&f, &[]).unwrap(), f);
    // y_2 ↦ x_1 kills the factor x_1 - y_2
    assert!(lin_reduce(&f, &[(2, 1)]).unwrap().is_zero());
    assert!(matches!(lin_reduce(&f, &[(2, 1), (2, 3)]), Err(Error::ConflictingSubstitution(2))));
}

#[test]
fn text_format() {
    let f = Polynomial::parse("3*x1*y2^2 - x3").unwrap();
    assert_eq!(f, &(&x(1) * &y(2).pow(2)).scale(&BigInt::from(3)) - &x(3));
    assert_eq!(Polynomial::parse(&f.to_string()).unwrap(), f);
    assert!(Polynomial::parse("x1 +* 2").is_err());
}

const LO: i64 = 0;
const HI: i64 = 6;

fn arb_poly() -> impl Strategy<Value = Polynomial> {
    let var = (any::<bool>(), LO..=HI).prop_map(|(isx, t)| if isx { x(t) } else { y(t) });
    let term = (-4i64..=4, proptest::collection::vec(var, 0..3))
        .prop_map(|(c, vs)| vs.iter().fold(Polynomial::constant(c), |acc, v| &acc * v));
    proptest::collection::vec(term, 0..5).prop_map(|ts| ts.iter().fold(Polynomial::zero(), |acc, t| &acc + t))
}

/// A point: values of x_t and y_t for t in LO..=HI.
fn arb_point() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    let n = (HI - LO + 1) as usize;
    (proptest::collection::vec(-9i64..=9, n), proptest::collection::vec(-9i64..=9, n))
}

fn eval_at(f: &Polynomial, pt: &(Vec<i64>, Vec<i64>)) -> BigInt {
    f.eval(|v| {
        let k = (v.index - LO) as usize;
        BigInt::from(if v.axis == Axis::X { pt.0[k] } else { pt.1[k] })
    })
}

/// The point moved by σ_{a,b}^k: every coordinate with index ≥ k gains x_a - x_b.
fn sigma_point(a: i64, b: i64, k: i64, pt: &(Vec<i64>, Vec<i64>)) -> (Vec<i64>, Vec<i64>) {
    let d = pt.0[(a - LO) as usize] - pt.0[(b - LO) as usize];
    let shift = |v: &Vec<i64>| v.iter().enumerate().map(|(t, &z)| if t as i64 + LO >= k { z + d } else { z }).collect();
    (shift(&pt.0), shift(&pt.1))
}

fn sig(a: i64, b: i64, k: i64, f: &Polynomial) -> Polynomial {
    sigma_apply(a, b, k, f).unwrap()
}

proptest! {
    #[test]
    fn evaluation_is_a_ring_map(f in arb_poly(), g in arb_poly(), pt in arb_point()) {
        prop_assert_eq!(eval_at(&(&f * &g), &pt), eval_at(&f, &pt) * eval_at(&g, &pt));
        prop_assert_eq!(eval_at(&(&f - &g), &pt), eval_at(&f, &pt) - eval_at(&g, &pt));
    }

    #[test]
    fn sigma_is_a_change_of_point(f in arb_poly(), pt in arb_point(), a in LO..HI, db in 1i64..3, k in LO..=HI) {
        let b = (a + db).min(HI);
        prop_assume!(a < b);
        prop_assert_eq!(eval_at(&sig(a, b, k, &f), &pt), eval_at(&f, &sigma_point(a, b, k, &pt)));
    }

    #[test]
    fn sigma_braid(f in arb_poly(), a in 0i64..2, db in 1i64..3, dc in 1i64..3, e in 0i64..2, h in 0i64..2) {
        let (b, c) = (a + db, a + db + dc);
        let lhs = sig(a, b, b + e, &sig(a, c, c + h, &f));
        let rhs = sig(b, c, c + h, &sig(a, b, b + e, &f));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sigma_commute(f in arb_poly(), a in 0i64..2, db in 1i64..3, gap in 0i64..2, dd in 1i64..3, e in 0i64..2, h in 0i64..2) {
        let b = a + db;
        let c = b + gap;
        let d = c + dd;
        prop_assume!(b + e <= c);
        prop_assert_eq!(sig(a, b, b + e, &sig(c, d, d + h, &f)), sig(c, d, d + h, &sig(a, b, b + e, &f)));
    }

    #[test]
    fn division_undoes_multiplication(f in arb_poly(), a in LO..=HI, b in LO..=HI) {
        prop_assume!(a != b);
        let g = &f * &(&x(a) - &x(b));
        prop_assert_eq!(exact_div(&g, a, b).unwrap(), f);
    }

    #[test]
    fn parse_round_trip(f in arb_poly()) {
        prop_assert_eq!(Polynomial::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn recursion_numerators_divide(j in 2i64..6, lbits in any::<u8>(), dbits in any::<u8>(), sbits in any::<u8>()) {
        // every step of the f-recursion divides exactly, for arbitrary D and l
        let i = 1;
        let l = LFunction::new(i, (i + 1..=j).map(|t| (lbits >> (t - i - 1)) as u8 & 1).collect()).unwrap();
        let d: BTreeSet<i64> = (i + 1..=j).filter(|t| dbits >> (t - i - 1) & 1 == 1).collect();
        let s: BTreeSet<i64> = (i + 1..=j).filter(|t| sbits >> (t - i - 1) & 1 == 1).collect();
        prop_assert!(f_poly(i, j, &d, &l, &s).is_ok());
    }
}
