//! Residues, weights and signed sets.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The characteristic: 0 or an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Characteristic(u32);

impl Characteristic {
    pub fn new(p: i64) -> Result<Self> {
        if p == 0 || (p >= 3 && p <= u32::MAX as i64 && is_odd_prime(p as u64)) {
            Ok(Characteristic(p as u32))
        } else {
            Err(Error::InvalidCharacteristic(p))
        }
    }

    pub fn zero() -> Self {
        Characteristic(0)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// (p - 1) / 2, or `None` when p = 0 and contents are unbounded.
    pub fn ell(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some((self.0 - 1) / 2)
        }
    }

    /// Reduce an integer to its class; the identity when p = 0.
    pub fn reduce(self, v: i128) -> Residue {
        if self.0 == 0 {
            Residue(v)
        } else {
            Residue(v.rem_euclid(self.0 as i128))
        }
    }

    /// a ≡ b (mod p); plain equality when p = 0.
    pub fn congruent(self, a: i64, b: i64) -> bool {
        self.reduce(a as i128) == self.reduce(b as i128)
    }

    /// p | a; for p = 0 this means a = 0.
    pub fn divides(self, a: i64) -> bool {
        self.congruent(a, 0)
    }
}

impl TryFrom<i64> for Characteristic {
    type Error = Error;
    fn try_from(p: i64) -> Result<Self> {
        Characteristic::new(p)
    }
}

impl From<Characteristic> for i64 {
    fn from(p: Characteristic) -> i64 {
        p.0 as i64
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of Z/pZ, stored as its least non-negative representative
/// (or as an integer when p = 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Residue(i128);

impl Residue {
    pub fn value(self) -> i128 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn sub(self, other: Residue, p: Characteristic) -> Residue {
        p.reduce(self.0 - other.0)
    }

    pub fn mul(self, other: Residue, p: Characteristic) -> Residue {
        p.reduce(self.0 * other.0)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Res_p j = j(j - 1) mod p.
pub fn res_p(j: i64, p: Characteristic) -> Residue {
    let j = j as i128;
    p.reduce(j * (j - 1))
}

/// Iverson bracket.
pub fn iverson(cond: bool) -> u8 {
    cond as u8
}

/// An integer sequence (λ_1, ..., λ_n), n ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    parts: Vec<i64>,
}

impl Weight {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyWeight);
        }
        Ok(Weight { parts })
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    /// λ_i, 1-based.
    pub fn at(&self, i: usize) -> i64 {
        self.parts[i - 1]
    }

    /// Membership in X_p^+(n): weakly decreasing, equal neighbours divisible by p.
    pub fn is_dominant_p_strict(&self, p: Characteristic) -> bool {
        self.parts
            .windows(2)
            .all(|w| w[0] > w[1] || (w[0] == w[1] && p.divides(w[0])))
    }

    pub fn require_dominant_p_strict(&self, p: Characteristic) -> Result<()> {
        if self.is_dominant_p_strict(p) {
            Ok(())
        } else {
            Err(Error::NotDominantPStrict(self.to_string()))
        }
    }

    /// -w_0 λ = (-λ_n, ..., -λ_1).
    pub fn minus_w0(&self) -> Weight {
        Weight {
            parts: self.parts.iter().rev().map(|&x| -x).collect(),
        }
    }

    /// λ + c·ε_i.
    pub fn shift(&self, i: usize, c: i64) -> Weight {
        let mut parts = self.parts.clone();
        parts[i - 1] += c;
        Weight { parts }
    }

    pub fn residue(&self, i: usize, p: Characteristic) -> Residue {
        res_p(self.at(i), p)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// JSON form of a weight together with its characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRecord {
    pub p: Characteristic,
    pub parts: Vec<i64>,
}

impl WeightRecord {
    pub fn into_parts(self) -> Result<(Weight, Characteristic)> {
        Ok((Weight::new(self.parts)?, self.p))
    }
}

/// One element of a signed set: k or k̄.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signed {
    Even(i64),
    Odd(i64),
}

impl Signed {
    pub fn value(self) -> i64 {
        match self {
            Signed::Even(k) | Signed::Odd(k) => k,
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Signed::Odd(_))
    }

    fn key(self) -> (i64, u8) {
        // k̄ < k when both would be compared
        match self {
            Signed::Odd(k) => (k, 0),
            Signed::Even(k) => (k, 1),
        }
    }
}

impl Ord for Signed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Signed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Signed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signed::Even(k) => write!(f, "{k}"),
            Signed::Odd(k) => write!(f, "{k}'"),
        }
    }
}

/// ht S; the empty set has height −∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Height {
    NegInfinity,
    Finite(i64),
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::NegInfinity => write!(f, "-inf"),
            Height::Finite(h) => write!(f, "{h}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measure {
    pub ht: Height,
    pub parity: u8,
    pub min: Option<Signed>,
    pub max: Option<Signed>,
}

/// A finite set of integers, each either even (plain) or odd (barred).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SignedSetRepr", into = "SignedSetRepr")]
pub struct SignedSet {
    // value -> is odd
    elems: BTreeMap<i64, bool>,
}

#[derive(Serialize, Deserialize)]
struct SignedSetRepr {
    even: Vec<i64>,
    odd: Vec<i64>,
}

impl TryFrom<SignedSetRepr> for SignedSet {
    type Error = Error;
    fn try_from(r: SignedSetRepr) -> Result<Self> {
        SignedSet::from_parts(&r.even, &r.odd)
    }
}

impl From<SignedSet> for SignedSetRepr {
    fn from(s: SignedSet) -> Self {
        SignedSetRepr {
            even: s.evens().collect(),
            odd: s.odds().collect(),
        }
    }
}

impl SignedSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(evens: &[i64], odds: &[i64]) -> Result<Self> {
        let mut s = SignedSet::new();
        for &k in evens {
            s.insert(Signed::Even(k))?;
        }
        for &k in odds {
            s.insert(Signed::Odd(k))?;
        }
        Ok(s)
    }

    pub fn from_elems<I: IntoIterator<Item = Signed>>(it: I) -> Result<Self> {
        let mut s = SignedSet::new();
        for x in it {
            s.insert(x)?;
        }
        Ok(s)
    }

    /// Inserting an element already present is a no-op; inserting the
    /// opposite parity of a present integer is an error.
    pub fn insert(&mut self, x: Signed) -> Result<()> {
        match self.elems.get(&x.value()) {
            Some(&odd) if odd != x.is_odd() => Err(Error::SignedCollision(x.value())),
            _ => {
                self.elems.insert(x.value(), x.is_odd());
                Ok(())
            }
        }
    }

    pub fn contains(&self, x: Signed) -> bool {
        self.elems.get(&x.value()) == Some(&x.is_odd())
    }

    /// The element with underlying integer k, if any.
    pub fn get(&self, k: i64) -> Option<Signed> {
        self.elems.get(&k).map(|&odd| mk(k, odd))
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Signed> + '_ {
        self.elems.iter().map(|(&k, &odd)| mk(k, odd))
    }

    pub fn evens(&self) -> impl Iterator<Item = i64> + '_ {
        self.elems.iter().filter(|e| !*e.1).map(|e| *e.0)
    }

    pub fn odds(&self) -> impl Iterator<Item = i64> + '_ {
        self.elems.iter().filter(|e| *e.1).map(|e| *e.0)
    }

    pub fn odd_count(&self) -> usize {
        self.odds().count()
    }

    /// ‖S‖, the number of odd elements mod 2.
    pub fn parity(&self) -> u8 {
        (self.odd_count() % 2) as u8
    }

    pub fn height(&self) -> Height {
        if self.is_empty() {
            Height::NegInfinity
        } else {
            Height::Finite(self.elems.keys().sum())
        }
    }

    pub fn min(&self) -> Option<Signed> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<Signed> {
        self.iter().next_back()
    }

    pub fn measure(&self) -> Measure {
        Measure {
            ht: self.height(),
            parity: self.parity(),
            min: self.min(),
            max: self.max(),
        }
    }

    pub fn union(&self, other: &SignedSet) -> Result<SignedSet> {
        let mut s = self.clone();
        for x in other.iter() {
            s.insert(x)?;
        }
        Ok(s)
    }

    /// Elements of `self` not in `other` (parity must match to be removed).
    pub fn difference(&self, other: &SignedSet) -> SignedSet {
        SignedSet {
            elems: self
                .elems
                .iter()
                .filter(|(&k, &odd)| !other.contains(mk(k, odd)))
                .map(|(&k, &odd)| (k, odd))
                .collect(),
        }
    }

    /// M_S: keep the elements whose underlying integer satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(i64) -> bool) -> SignedSet {
        SignedSet {
            elems: self
                .elems
                .iter()
                .filter(|(&k, _)| keep(k))
                .map(|(&k, &odd)| (k, odd))
                .collect(),
        }
    }

    /// M_{x→y}.
    pub fn replace(&self, x: Signed, y: Signed) -> Result<SignedSet> {
        if !self.contains(x) {
            return Err(Error::InvalidReplace(format!("{x} is not in {self}")));
        }
        let mut s = self.clone();
        s.elems.remove(&x.value());
        s.insert(y)
            .map_err(|_| Error::InvalidReplace(format!("{y} collides in {self}")))?;
        Ok(s)
    }

    pub fn remove(&self, x: Signed) -> SignedSet {
        let mut s = self.clone();
        if s.contains(x) {
            s.elems.remove(&x.value());
        }
        s
    }
}

fn mk(k: i64, odd: bool) -> Signed {
    if odd {
        Signed::Odd(k)
    } else {
        Signed::Even(k)
    }
}

impl fmt::Display for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_validation() {
        assert!(Characteristic::new(0).is_ok());
        assert!(Characteristic::new(3).is_ok());
        assert!(Characteristic::new(2).is_err());
        assert!(Characteristic::new(9).is_err());
        assert!(Characteristic::new(-5).is_err());
        assert_eq!(Characteristic::new(7).unwrap().ell(), Some(3));
    }

    #[test]
    fn replace_errors() {
        let m = SignedSet::from_parts(&[1, 5], &[4]).unwrap();
        assert!(m.replace(Signed::Even(4), Signed::Even(3)).is_err());
        // y already present with the same parity is an ordinary set union
        assert_eq!(
            m.replace(Signed::Odd(4), Signed::Even(5)).unwrap(),
            SignedSet::from_parts(&[1, 5], &[]).unwrap()
        );
        assert!(m.replace(Signed::Odd(4), Signed::Odd(5)).is_err());
    }

    #[test]
    fn height_of_empty_is_below_everything() {
        assert!(Height::NegInfinity < Height::Finite(i64::MIN));
    }
}
