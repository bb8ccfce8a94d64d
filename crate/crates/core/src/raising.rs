//! The degree-zero algebra: H_i central, H̄_i odd with H̄_i² = H_i and
//! distinct H̄'s anticommuting. Raising coefficients live here.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::base::{Characteristic, Signed, SignedSet, Weight};
use crate::error::{Error, Result};
use crate::poly::{Axis, GCache, HPoly, HVar, Monomial, Polynomial};

/// Σ_B c_B(H) · H̄_{b1} ⋯ H̄_{bk}, with b1 < ... < bk.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct U0Element {
    terms: BTreeMap<Vec<i64>, HPoly>,
}

fn h(i: i64) -> HPoly {
    HPoly::var(HVar(i))
}

impl U0Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(HPoly::one())
    }

    /// An element with no odd part.
    pub fn scalar(p: HPoly) -> Self {
        Self::from_term(Vec::new(), p)
    }

    pub fn from_term(odd: Vec<i64>, p: HPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(odd, p);
        e
    }

    pub fn h(i: i64) -> Self {
        Self::scalar(h(i))
    }

    pub fn hbar(i: i64) -> Self {
        Self::from_term(vec![i], HPoly::one())
    }

    /// H_i^ε: H_i for ε = 0, H̄_i for ε = 1.
    pub fn h_eps(i: i64, eps: u8) -> Self {
        if eps % 2 == 0 {
            Self::h(i)
        } else {
            Self::hbar(i)
        }
    }

    /// C(i,j) = H_i(H_i - 1) - H_j(H_j - 1).
    pub fn c(i: i64, j: i64) -> Self {
        Self::scalar(&(&(&h(i) * &h(i)) - &h(i)) - &(&(&h(j) * &h(j)) - &h(j)))
    }

    /// B(i,j) = H_i(H_i - 1) - (H_j + 1)H_j.
    pub fn b(i: i64, j: i64) -> Self {
        Self::scalar(&(&(&h(i) * &h(i)) - &h(i)) - &(&(&h(j) * &h(j)) + &h(j)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &HPoly)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, odd: Vec<i64>, p: HPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(odd.clone()).or_default();
        *slot += &p;
        if slot.is_zero() {
            self.terms.remove(&odd);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, p) in &other.terms {
            out.add_term(b.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        U0Element {
            terms: self.terms.iter().map(|(b, p)| (b.clone(), -p)).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = BigInt::from(c);
        let mut out = Self::zero();
        for (b, p) in &self.terms {
            out.add_term(b.clone(), p.scale(&c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (b1, p1) in &self.terms {
            for (b2, p2) in &other.terms {
                let (sign, odd, extra) = odd_product(b1, b2);
                let mut coeff = p1 * p2;
                if !extra.is_one() {
                    coeff = &coeff * &extra;
                }
                if sign < 0 {
                    coeff = -coeff;
                }
                out.add_term(odd, coeff);
            }
        }
        out
    }

    /// Terms whose odd part has the given parity.
    pub fn parity_part(&self, parity: usize) -> Self {
        U0Element {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.len() % 2 == parity)
                .map(|(b, p)| (b.clone(), p.clone()))
                .collect(),
        }
    }
}

/// Normal form of H̄_{b1}⋯ · H̄_{c1}⋯: sign, sorted odd indices, and the
/// product of H_c for each index that squared away.
fn odd_product(left: &[i64], right: &[i64]) -> (i32, Vec<i64>, HPoly) {
    let mut l = left.to_vec();
    let mut sign = 1;
    let mut extra = HPoly::one();
    for &c in right {
        let bigger = l.iter().filter(|&&x| x > c).count();
        if bigger % 2 == 1 {
            sign = -sign;
        }
        match l.binary_search(&c) {
            Ok(pos) => {
                l.remove(pos);
                extra = &extra * &h(c);
            }
            Err(pos) => l.insert(pos, c),
        }
    }
    (sign, l, extra)
}

impl fmt::Display for U0Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let bare = b.is_empty() || p.len() > 1 || p != &HPoly::one();
            if bare {
                if b.is_empty() {
                    write!(f, "{p}")?;
                } else {
                    write!(f, "({p})")?;
                }
            }
            for (t, i) in b.iter().enumerate() {
                if bare || t > 0 {
                    f.write_str("*")?;
                }
                if *i < 0 {
                    write!(f, "Hb{{{i}}}")?;
                } else {
                    write!(f, "Hb{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// One term in the JSON term list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct U0Term {
    pub odd: Vec<i64>,
    pub coeff: String,
}

impl U0Element {
    pub fn to_terms(&self) -> Vec<U0Term> {
        self.terms
            .iter()
            .map(|(b, p)| U0Term {
                odd: b.clone(),
                coeff: p.to_string(),
            })
            .collect()
    }

    pub fn from_terms(terms: &[U0Term]) -> Result<Self> {
        let mut out = Self::zero();
        for t in terms {
            let mut odd = t.odd.clone();
            odd.sort_unstable();
            odd.dedup();
            if odd.len() != t.odd.len() {
                return Err(Error::Parse(format!("repeated odd index in {:?}", t.odd)));
            }
            out.add_term(odd, HPoly::parse(&t.coeff)?);
        }
        Ok(out)
    }
}

/// Named atoms of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    H(i64),
    Hbar(i64),
    HEps(i64, u8),
    C(i64, i64),
    B(i64, i64),
}

pub fn u0_atom(atom: Atom, n: usize) -> Result<U0Element> {
    let check = |i: i64| {
        if i < 1 || i > n as i64 {
            Err(Error::IndexOutOfRange { index: i, n })
        } else {
            Ok(())
        }
    };
    Ok(match atom {
        Atom::H(i) => {
            check(i)?;
            U0Element::h(i)
        }
        Atom::Hbar(i) => {
            check(i)?;
            U0Element::hbar(i)
        }
        Atom::HEps(i, e) => {
            check(i)?;
            U0Element::h_eps(i, e)
        }
        Atom::C(i, j) => {
            check(i)?;
            check(j)?;
            U0Element::c(i, j)
        }
        Atom::B(i, j) => {
            check(i)?;
            check(j)?;
            U0Element::b(i, j)
        }
    })
}

/// ⟦f⟧ with x_i ↦ H_i² - H_i and y_i ↦ H_i² + H_i, checking indices lie in [1..n].
pub fn bracket_hom(f: &Polynomial, n: usize) -> Result<U0Element> {
    if let Some(v) = f
        .variables()
        .into_iter()
        .find(|v| v.index < 1 || v.index > n as i64)
    {
        return Err(Error::IndexOutOfRange { index: v.index, n });
    }
    Ok(bracket(f))
}

fn bracket(f: &Polynomial) -> U0Element {
    let img = f.substitute(
        |v| {
            let hi = h(v.index);
            let sq = &hi * &hi;
            Some(match v.axis {
                Axis::X => &sq - &hi,
                Axis::Y => &sq + &hi,
            })
        },
        |v| HVar(v.index),
    );
    U0Element::scalar(img)
}

/// A 0/1 function on [i..j-1].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Delta {
    lo: i64,
    values: Vec<u8>,
}

impl Delta {
    /// Values for i, i+1, ..., j-1.
    pub fn new(i: i64, values: Vec<u8>) -> Self {
        Delta {
            lo: i,
            values: values.into_iter().map(|v| v & 1).collect(),
        }
    }

    /// All 2^(j-i) functions on [i..j-1].
    pub fn all(i: i64, j: i64) -> Vec<Delta> {
        let w = (j - i) as usize;
        (0..1u32 << w)
            .map(|m| Delta::new(i, (0..w).map(|b| (m >> b & 1) as u8).collect()))
            .collect()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// One past the last point of the domain.
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64
    }

    pub fn at(&self, t: i64) -> u8 {
        self.values[(t - self.lo) as usize]
    }

    /// Σ δ_t for a ≤ t < b, mod 2.
    pub fn sum(&self, a: i64, b: i64) -> u8 {
        (a.max(self.lo)..b.min(self.hi())).fold(0, |s, t| s ^ self.at(t))
    }

    pub fn total(&self) -> u8 {
        self.sum(self.lo, self.hi())
    }

    /// Restriction to [a..b-1].
    pub fn slice(&self, a: i64, b: i64) -> Delta {
        Delta::new(a, (a..b).map(|t| self.at(t)).collect())
    }

    /// The same function with the value at t replaced.
    pub fn with(&self, t: i64, v: u8) -> Delta {
        let mut d = self.clone();
        d.values[(t - self.lo) as usize] = v & 1;
        d
    }
}

fn sgn(e: u8) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn parity_of(m: &SignedSet, lo: i64, hi: i64) -> u8 {
    // ‖M_{(lo..hi]}‖
    (m.odds().filter(|&k| k > lo && k <= hi).count() % 2) as u8
}

type Key = (i64, i64, u8, Delta, SignedSet);

/// Evaluates raising coefficients by the inductive rules, memoized.
#[derive(Default)]
pub struct Raising {
    memo: HashMap<Key, U0Element>,
}

impl Raising {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn p(&mut self, i: i64, j: i64, eps: u8, delta: &Delta, m: &SignedSet) -> Result<U0Element> {
        validate(i, j, delta, m)?;
        self.rec(i, j, eps & 1, delta, m)
    }

    fn rec(&mut self, i: i64, j: i64, eps: u8, delta: &Delta, m: &SignedSet) -> Result<U0Element> {
        let key = (i, j, eps, delta.clone(), m.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute(i, j, eps, delta, m)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    fn compute(&mut self, i: i64, j: i64, eps: u8, d: &Delta, m: &SignedSet) -> Result<U0Element> {
        let sd = d.total();
        let min = m.min().expect("validated nonempty");
        if m.len() == 1 {
            return Ok(match min {
                Signed::Odd(_) => {
                    let e = eps ^ sd;
                    let s = d.at(i) * (eps ^ d.sum(i + 1, j));
                    U0Element::h_eps(i, e).sub(&U0Element::h_eps(i + 1, e).scale(sgn(s)))
                }
                Signed::Even(_) => {
                    if sd == eps {
                        U0Element::b(i, i + 1)
                    } else {
                        U0Element::zero()
                    }
                }
            });
        }
        let mv = min.value();
        let tail = m.restrict(|k| k > mv);
        let pt = parity_of(m, mv, j);
        let mut out = U0Element::zero();
        if mv == i + 1 {
            let di = d.at(i);
            let inner = d.sum(i + 1, j);
            match min {
                Signed::Odd(_) => {
                    for gamma in 0..2u8 {
                        let sigma = eps ^ gamma;
                        let e = gamma * (1 ^ eps ^ pt ^ inner);
                        let a = self.rec(i, i + 1, gamma, &d.slice(i, i + 1), &single_odd(i + 1))?;
                        let b = self.rec(i + 1, j, sigma, &d.slice(i + 1, j), &tail)?;
                        out = out.add(&a.mul(&b).scale(sgn(e)));
                    }
                    for gamma in 0..2u8 {
                        let sigma = eps ^ gamma;
                        let e = sigma * (1 ^ m.parity());
                        let rest = m.remove(min);
                        let a = self.rec(i, j, gamma, d, &rest)?;
                        out = out.add(&a.mul(&U0Element::h_eps(i, sigma)).scale(sgn(e)));
                    }
                }
                Signed::Even(_) => {
                    let e = di * (1 ^ eps ^ pt ^ inner);
                    let b = self.rec(i + 1, j, eps ^ di, &d.slice(i + 1, j), &tail)?;
                    out = out.add(&U0Element::b(i, i + 1).mul(&b).scale(sgn(e)));
                    let d1 = d.at(i + 1);
                    for xi in 0..2u8 {
                        for tau in 0..2u8 {
                            let sigma = eps ^ d1 ^ xi ^ tau;
                            let e = (xi ^ tau ^ d1) * (1 ^ eps ^ pt ^ inner ^ xi);
                            let a = self.rec(i, i + 1, xi, &d.slice(i, i + 1), &single_odd(i + 1))?;
                            let b = self.rec(i + 1, j, sigma, &d.slice(i + 1, j).with(i + 1, tau), &tail)?;
                            out = out.sub(&a.mul(&b).scale(sgn(e)));
                        }
                    }
                    let rest = m.remove(min);
                    out = out.add(&self.rec(i, j, eps, d, &rest)?.mul(&U0Element::c(i, i + 1)));
                }
            }
        } else {
            let lower = d.sum(i, mv);
            let upper = d.sum(mv, j);
            match min {
                Signed::Odd(_) => {
                    for gamma in 0..2u8 {
                        let sigma = eps ^ gamma;
                        let e = gamma * (1 ^ eps ^ pt ^ upper);
                        let a = self.rec(i, mv, gamma, &d.slice(i, mv), &single_odd(mv))?;
                        let b = self.rec(mv, j, sigma, &d.slice(mv, j), &tail)?;
                        out = out.add(&a.mul(&b).scale(sgn(e)));
                    }
                    let moved = m.replace(min, Signed::Odd(mv - 1))?;
                    out = out.add(&self.rec(i, j, eps, d, &moved)?);
                }
                Signed::Even(_) => {
                    let e = lower * (1 ^ eps ^ pt ^ upper);
                    let b = self.rec(mv, j, eps ^ lower, &d.slice(mv, j), &tail)?;
                    out = out.add(&U0Element::b(i, i + 1).mul(&b).scale(sgn(e)));
                    let dm = d.at(mv);
                    for xi in 0..2u8 {
                        for tau in 0..2u8 {
                            let sigma = eps ^ dm ^ xi ^ tau;
                            let e = (xi ^ tau ^ dm) * (1 ^ eps ^ pt ^ upper ^ xi);
                            let a = self.rec(i, mv, xi, &d.slice(i, mv), &single_odd(mv))?;
                            let b = self.rec(mv, j, sigma, &d.slice(mv, j).with(mv, tau), &tail)?;
                            out = out.sub(&a.mul(&b).scale(sgn(e)));
                        }
                    }
                    let moved = m.replace(min, Signed::Even(mv - 1))?;
                    out = out.add(&self.rec(i, j, eps, d, &moved)?);
                    let rest = m.remove(min);
                    out = out.add(&self.rec(i, j, eps, d, &rest)?.mul(&U0Element::c(mv - 1, mv)));
                }
            }
        }
        Ok(out)
    }
}

fn single_odd(k: i64) -> SignedSet {
    SignedSet::from_parts(&[], &[k]).expect("singleton")
}

fn validate(i: i64, j: i64, delta: &Delta, m: &SignedSet) -> Result<()> {
    if i >= j {
        return Err(Error::BadSignedSet(format!("need i < j, got ({i},{j})")));
    }
    if delta.lo() != i || delta.hi() != j {
        return Err(Error::BadSignedSet(format!(
            "delta must live on [{i}..{}]",
            j - 1
        )));
    }
    if m.iter().any(|x| x.value() <= i || x.value() > j) {
        return Err(Error::BadSignedSet(format!("{m} is not inside ({i}..{j}]")));
    }
    if m.get(j).is_none() {
        return Err(Error::BadSignedSet(format!("{m} contains neither {j} nor its bar")));
    }
    Ok(())
}

/// P_{i,j}^{ε,δ}(M) by the inductive rules.
pub fn raising_rec(i: i64, j: i64, eps: u8, delta: &Delta, m: &SignedSet) -> Result<U0Element> {
    Raising::new().p(i, j, eps, delta, m)
}

/// The closed forms for all-even M and for M with one odd element.
pub fn raising_closed_with(
    cache: &mut GCache,
    i: i64,
    j: i64,
    eps: u8,
    delta: &Delta,
    m: &SignedSet,
) -> Result<U0Element> {
    validate(i, j, delta, m)?;
    let sd = delta.total();
    let eps = eps & 1;
    match m.odd_count() {
        0 => {
            if eps != sd {
                return Ok(U0Element::zero());
            }
            let s = (i + 1..j).filter(|&t| m.get(t).is_none()).collect();
            Ok(bracket(&cache.g1(i, j, &s)?))
        }
        1 => {
            let q = m.odds().next().unwrap();
            // only the even elements are removed from (i..j]
            let s = (i + 1..=j).filter(|&t| !m.contains(Signed::Even(t))).collect();
            let e = eps ^ sd;
            let mut out = U0Element::zero();
            for k in i..=q {
                if m.contains(Signed::Even(k)) {
                    continue;
                }
                let prev_ok = k - 1 == i - 1 || k - 1 == i || m.contains(Signed::Even(k - 1));
                if !prev_ok {
                    continue;
                }
                let exp = ((k > i) as u8) ^ ((1 ^ e) * delta.sum(i, k));
                let g = bracket(&cache.g2(i, k, q, j, &s)?);
                out = out.add(&g.mul(&U0Element::h_eps(k, e)).scale(sgn(exp)));
            }
            Ok(out)
        }
        c => Err(Error::UnsupportedShape(c)),
    }
}

pub fn raising_closed(i: i64, j: i64, eps: u8, delta: &Delta, m: &SignedSet) -> Result<U0Element> {
    raising_closed_with(&mut GCache::new(), i, j, eps, delta, m)
}

/// ev_λ: substitute H_i = λ_i and reduce coefficients mod p; odd
/// generators stay formal.
pub fn eval_at_weight(u: &U0Element, lambda: &Weight, p: Characteristic) -> Result<U0Element> {
    if p.is_zero() {
        return Err(Error::CharacteristicZero);
    }
    let pm = BigInt::from(p.get());
    let mut out = U0Element::zero();
    for (b, c) in &u.terms {
        if let Some(v) = c.variables().into_iter().find(|v| v.0 < 1 || v.0 > lambda.n() as i64) {
            return Err(Error::IndexOutOfRange {
                index: v.0,
                n: lambda.n(),
            });
        }
        let val = c.eval(|v| BigInt::from(lambda.at(v.0 as usize)));
        let r = ((val % &pm) + &pm) % &pm;
        if !r.is_zero() {
            out.add_term(b.clone(), HPoly::term(r, Monomial::one()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_sums() {
        let d = Delta::new(2, vec![1, 0, 1, 1]);
        assert_eq!(d.total(), 1);
        assert_eq!(d.sum(3, 5), 1);
        assert_eq!(d.sum(2, 2), 0);
        assert_eq!(d.slice(3, 6), Delta::new(3, vec![0, 1, 1]));
    }

    #[test]
    fn rejects_sets_without_top() {
        let m = SignedSet::from_parts(&[2], &[]).unwrap();
        assert!(raising_rec(1, 3, 0, &Delta::new(1, vec![0, 0]), &m).is_err());
    }
}
