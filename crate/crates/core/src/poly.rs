//! Sparse multivariate polynomials over Z, the σ operators and the
//! f, g1, g2 families.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed as _, Zero};

use crate::error::{Error, Result};

/// A polynomial variable.
pub trait Var: Copy + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Parse a full variable name such as "x3" or "H{-1}".
    fn parse_name(s: &str) -> Option<Self>;
}

fn split_name(s: &str) -> Option<(&str, i64)> {
    let cut = s.find(|c: char| !c.is_ascii_alphabetic())?;
    let (head, tail) = s.split_at(cut);
    let idx = if let Some(inner) = tail.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        inner.parse().ok()?
    } else if tail.bytes().all(|b| b.is_ascii_digit()) {
        tail.parse().ok()?
    } else {
        return None;
    };
    Some((head, idx))
}

fn fmt_index(f: &mut fmt::Formatter<'_>, head: &str, idx: i64) -> fmt::Result {
    if idx < 0 {
        write!(f, "{head}{{{idx}}}")
    } else {
        write!(f, "{head}{idx}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

/// x_i or y_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XyVar {
    pub axis: Axis,
    pub index: i64,
}

impl XyVar {
    pub fn x(index: i64) -> Self {
        XyVar { axis: Axis::X, index }
    }
    pub fn y(index: i64) -> Self {
        XyVar { axis: Axis::Y, index }
    }
}

impl fmt::Display for XyVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = match self.axis {
            Axis::X => "x",
            Axis::Y => "y",
        };
        fmt_index(f, head, self.index)
    }
}

impl Var for XyVar {
    fn parse_name(s: &str) -> Option<Self> {
        match split_name(s)? {
            ("x", i) => Some(XyVar::x(i)),
            ("y", i) => Some(XyVar::y(i)),
            _ => None,
        }
    }
}

/// The even Cartan generator H_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HVar(pub i64);

impl fmt::Display for HVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_index(f, "H", self.0)
    }
}

impl Var for HVar {
    fn parse_name(s: &str) -> Option<Self> {
        match split_name(s)? {
            ("H", i) => Some(HVar(i)),
            _ => None,
        }
    }
}

/// A product of variable powers, sorted by variable, exponents positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial<V>(Vec<(V, u32)>);

impl<V: Var> Monomial<V> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: V) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(V, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|f| f.1).sum()
    }

    pub fn exponent(&self, v: V) -> u32 {
        self.0
            .binary_search_by(|f| f.0.cmp(&v))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Split off the power of `v`.
    pub fn take(&self, v: V) -> (u32, Monomial<V>) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|f| {
                if f.0 == v {
                    e = f.1;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (e, Monomial(rest))
    }
}

impl<V: Var> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with integer coefficients; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<V: Var> {
    terms: BTreeMap<Monomial<V>, BigInt>,
}

pub type Polynomial = Poly<XyVar>;
pub type HPoly = Poly<HVar>;

impl<V: Var> Default for Poly<V> {
    fn default() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }
}

impl<V: Var> Poly<V> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: V) -> Self {
        Self::term(1, Monomial::var(v))
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial<V>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &BigInt)> {
        self.terms.iter()
    }

    /// The constant term.
    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial<V>) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, k)| (n.mul(m), k.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn variables(&self) -> BTreeSet<V> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|f| f.0))
            .collect()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Apply the ring endomorphism sending each variable `v` to `f(v)`,
    /// where `None` means `v` is fixed.
    pub fn substitute<W: Var>(&self, f: impl Fn(V) -> Option<Poly<W>>, lift: impl Fn(V) -> W) -> Poly<W> {
        let mut images: HashMap<V, Option<Vec<Poly<W>>>> = HashMap::new();
        let mut out = Poly::<W>::zero();
        for (m, c) in &self.terms {
            let mut fixed = Vec::new();
            let mut acc = Poly::<W>::constant(c.clone());
            for &(v, e) in &m.0 {
                let entry = images.entry(v).or_insert_with(|| f(v).map(|p| vec![Poly::one(), p]));
                match entry {
                    None => fixed.push((lift(v), e)),
                    Some(powers) => {
                        while powers.len() <= e as usize {
                            let next = &powers[powers.len() - 1] * &powers[1];
                            powers.push(next);
                        }
                        acc = &acc * &powers[e as usize];
                    }
                }
            }
            fixed.sort();
            let mono = Monomial(fixed);
            for (n, k) in acc.terms {
                out.add_term(n.mul(&mono), k);
            }
        }
        out
    }

    /// Substitute within the same variable set.
    pub fn subst(&self, f: impl Fn(V) -> Option<Poly<V>>) -> Self {
        self.substitute(f, |v| v)
    }

    /// Divide by (a - b) exactly, viewing the polynomial in `a`.
    /// On failure the nonzero remainder is returned.
    pub fn div_linear(&self, a: V, b: V) -> std::result::Result<Self, Self> {
        let mut by_deg: BTreeMap<u32, Poly<V>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.take(a);
            by_deg.entry(e).or_default().add_term(rest, c.clone());
        }
        let d = match by_deg.keys().next_back() {
            None => return Ok(Self::zero()),
            Some(&d) => d,
        };
        let bm = Monomial::var(b);
        // q_{k-1} = c_k + b q_k
        let mut q: Vec<Poly<V>> = vec![Poly::zero(); d as usize];
        let mut carry = Poly::zero();
        for k in (1..=d).rev() {
            let mut qk = carry.mul_monomial(&bm);
            if let Some(ck) = by_deg.get(&k) {
                qk += ck;
            }
            q[k as usize - 1] = qk.clone();
            carry = qk;
        }
        let mut rem = carry.mul_monomial(&bm);
        if let Some(c0) = by_deg.get(&0) {
            rem += c0;
        }
        if !rem.is_zero() {
            return Err(rem);
        }
        let mut out = Poly::zero();
        for (k, qk) in q.into_iter().enumerate() {
            let am = if k == 0 {
                Monomial::one()
            } else {
                Monomial(vec![(a, k as u32)])
            };
            for (n, c) in qk.terms {
                out.add_term(n.mul(&am), c);
            }
        }
        Ok(out)
    }

    /// Evaluate every variable to an integer.
    pub fn eval(&self, f: impl Fn(V) -> BigInt) -> BigInt {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                t *= num_traits::pow(f(v), e as usize);
            }
            total += t;
        }
        total
    }

    pub fn parse(s: &str) -> Result<Self> {
        Parser::new(s).parse_all()
    }
}

impl<V: Var> fmt::Display for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // graded: higher degree first
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(a.0.cmp(b.0)));
        for (k, (m, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.0.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<V: Var> AddAssign<&Poly<V>> for Poly<V> {
    fn add_assign(&mut self, rhs: &Poly<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<V: Var> SubAssign<&Poly<V>> for Poly<V> {
    fn sub_assign(&mut self, rhs: &Poly<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl<V: Var> Add for &Poly<V> {
    type Output = Poly<V>;
    fn add(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<V: Var> Sub for &Poly<V> {
    type Output = Poly<V>;
    fn sub(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<V: Var> Add for Poly<V> {
    type Output = Poly<V>;
    fn add(mut self, rhs: Poly<V>) -> Poly<V> {
        self += &rhs;
        self
    }
}

impl<V: Var> Sub for Poly<V> {
    type Output = Poly<V>;
    fn sub(mut self, rhs: Poly<V>) -> Poly<V> {
        self -= &rhs;
        self
    }
}

impl<V: Var> Neg for &Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl<V: Var> Neg for Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        -&self
    }
}

impl<V: Var> Mul for &Poly<V> {
    type Output = Poly<V>;
    fn mul(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl<V: Var> Mul for Poly<V> {
    type Output = Poly<V>;
    fn mul(self, rhs: Poly<V>) -> Poly<V> {
        &self * &rhs
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at byte {} of {:?}", self.pos, self.src)))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn is_minus(c: char) -> bool {
        c == '-' || c == '−'
    }

    fn parse_all<V: Var>(mut self) -> Result<Poly<V>> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("trailing input");
        }
        Ok(p)
    }

    fn expr<V: Var>(&mut self) -> Result<Poly<V>> {
        let mut acc = self.product()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc += &self.product()?;
                }
                Some(c) if Self::is_minus(c) => {
                    self.bump();
                    acc -= &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product<V: Var>(&mut self) -> Result<Poly<V>> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') | Some('·') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary<V: Var>(&mut self) -> Result<Poly<V>> {
        self.skip_ws();
        match self.peek() {
            Some(c) if Self::is_minus(c) => {
                self.bump();
                Ok(-self.unary::<V>()?)
            }
            Some('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power<V: Var>(&mut self) -> Result<Poly<V>> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let e = self.digits()?;
            let e: u32 = e.parse().or_else(|_| self.err("bad exponent"))?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(&self.src[start..self.pos])
    }

    fn atom<V: Var>(&mut self) -> Result<Poly<V>> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let p = self.expr()?;
                self.skip_ws();
                if self.bump() != Some(')') {
                    return self.err("expected ')'");
                }
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                let n: BigInt = d.parse().or_else(|_| self.err("bad integer"))?;
                Ok(Poly::constant(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                    self.bump();
                }
                if self.peek() == Some('{') {
                    while let Some(c) = self.bump() {
                        if c == '}' {
                            break;
                        }
                    }
                } else {
                    while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        self.bump();
                    }
                }
                let name = &self.src[start..self.pos];
                match V::parse_name(name) {
                    Some(v) => Ok(Poly::var(v)),
                    None => self.err(&format!("unknown variable {name:?}")),
                }
            }
            _ => self.err("expected a term"),
        }
    }
}

pub fn x(i: i64) -> Polynomial {
    Polynomial::var(XyVar::x(i))
}

pub fn y(i: i64) -> Polynomial {
    Polynomial::var(XyVar::y(i))
}

/// σ_{a,b}^k: z_t ↦ z_t + x_a - x_b for t ≥ k, z ∈ {x, y}.
pub fn sigma_apply(a: i64, b: i64, k: i64, f: &Polynomial) -> Result<Polynomial> {
    if a >= b {
        return Err(Error::BadIndices { a, b });
    }
    let shift = &x(a) - &x(b);
    Ok(f.subst(|v| {
        if v.index >= k {
            Some(&Polynomial::var(v) + &shift)
        } else {
            None
        }
    }))
}

/// f / (x_a - x_b), failing with the remainder when not exact.
pub fn exact_div(f: &Polynomial, a: i64, b: i64) -> Result<Polynomial> {
    if a == b {
        return Err(Error::BadIndices { a, b });
    }
    f.div_linear(XyVar::x(a), XyVar::x(b))
        .map_err(|rem| Error::NotDivisible {
            a,
            b,
            remainder: rem.to_string(),
        })
}

/// D_t^i = max((D ∪ {i}) ∩ (−∞..t)).
pub fn d_max(d: &BTreeSet<i64>, i: i64, t: i64) -> i64 {
    let from_d = d.range(..t).next_back().copied();
    match from_d {
        Some(m) if i < t => m.max(i),
        Some(m) => m,
        None => i,
    }
}

/// u_{i,j}^D = ∏_{t=i+1}^{j} (x_{D_t^i} - y_t).
pub fn u_poly(i: i64, j: i64, d: &BTreeSet<i64>) -> Polynomial {
    let mut out = Polynomial::one();
    for t in i + 1..=j {
        out = &out * &(&x(d_max(d, i, t)) - &y(t));
    }
    out
}

/// A 0/1 function on (i..j].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LFunction {
    lo: i64,
    values: Vec<u8>,
}

impl LFunction {
    /// Values for t = i+1, ..., j in order.
    pub fn new(i: i64, values: Vec<u8>) -> Result<Self> {
        if values.iter().any(|&v| v > 1) {
            return Err(Error::BadParameters("l takes values 0 or 1".into()));
        }
        Ok(LFunction { lo: i, values })
    }

    pub fn constant(i: i64, j: i64, v: u8) -> Self {
        LFunction {
            lo: i,
            values: vec![v; (j - i).max(0) as usize],
        }
    }

    /// l(t) = 1 if i < t < k or q < t < j, else 0.
    pub fn l2(i: i64, k: i64, q: i64, j: i64) -> Self {
        LFunction {
            lo: i,
            values: (i + 1..=j)
                .map(|t| ((i < t && t < k) || (q < t && t < j)) as u8)
                .collect(),
        }
    }

    pub fn at(&self, t: i64) -> u8 {
        let k = t - self.lo - 1;
        assert!(k >= 0 && (k as usize) < self.values.len(), "l({t}) outside its domain");
        self.values[k as usize]
    }

    /// The right end j of the domain (i..j].
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64
    }
}

/// The family S ↦ f_{i,j}^{D,l}(S), memoized on S.
pub struct FFamily {
    i: i64,
    j: i64,
    d: BTreeSet<i64>,
    l: LFunction,
    memo: HashMap<u64, Polynomial>,
}

impl FFamily {
    pub fn new(i: i64, j: i64, d: BTreeSet<i64>, l: LFunction) -> Result<Self> {
        if i > j || j - i > 62 {
            return Err(Error::BadParameters(format!("need i ≤ j, got ({i},{j})")));
        }
        if l.lo != i || l.hi() != j {
            return Err(Error::BadParameters("l must live on (i..j]".into()));
        }
        Ok(FFamily {
            i,
            j,
            d,
            l,
            memo: HashMap::new(),
        })
    }

    pub fn g1(i: i64, j: i64) -> Result<Self> {
        if i >= j {
            return Err(Error::BadParameters(format!("g1 needs i < j, got ({i},{j})")));
        }
        Self::new(i, j, BTreeSet::new(), LFunction::constant(i, j, 1))
    }

    pub fn g2(i: i64, k: i64, q: i64, j: i64) -> Result<Self> {
        if !(i <= k && k <= q && q <= j && i < q) {
            return Err(Error::BadParameters(format!(
                "g2 needs i ≤ k ≤ q ≤ j and i < q, got ({i},{k},{q},{j})"
            )));
        }
        Self::new(i, j, BTreeSet::from([k]), LFunction::l2(i, k, q, j))
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.i, self.j)
    }

    fn mask(&self, s: &BTreeSet<i64>) -> Result<u64> {
        let mut m = 0u64;
        for &t in s {
            if t <= self.i || t > self.j {
                return Err(Error::BadParameters(format!(
                    "{t} is outside ({}..{}]",
                    self.i, self.j
                )));
            }
            m |= 1 << (t - self.i - 1);
        }
        Ok(m)
    }

    fn eval_mask(&mut self, m: u64) -> Result<Polynomial> {
        if let Some(p) = self.memo.get(&m) {
            return Ok(p.clone());
        }
        let out = if m == 0 {
            u_poly(self.i, self.j, &self.d)
        } else {
            let s = self.i + 1 + m.trailing_zeros() as i64;
            let prev = self.eval_mask(m & (m - 1))?;
            let a = d_max(&self.d, self.i, s);
            let moved = sigma_apply(a, s, s + self.l.at(s) as i64, &prev)?;
            exact_div(&(&prev - &moved), a, s)?
        };
        self.memo.insert(m, out.clone());
        Ok(out)
    }

    pub fn eval(&mut self, s: &BTreeSet<i64>) -> Result<Polynomial> {
        let m = self.mask(s)?;
        self.eval_mask(m)
    }
}

/// f_{i,j}^{D,l}(S), computed from scratch.
pub fn f_poly(i: i64, j: i64, d: &BTreeSet<i64>, l: &LFunction, s: &BTreeSet<i64>) -> Result<Polynomial> {
    FFamily::new(i, j, d.clone(), l.clone())?.eval(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GKind {
    G1 { i: i64, j: i64 },
    G2 { i: i64, k: i64, q: i64, j: i64 },
}

/// g1_{i,j}(S) or g2_{i,k,q,j}(S).
pub fn g_family(kind: &GKind, s: &BTreeSet<i64>) -> Result<Polynomial> {
    match *kind {
        GKind::G1 { i, j } => {
            if s.iter().any(|&t| t >= j) {
                return Err(Error::BadParameters("g1 needs S inside (i..j)".into()));
            }
            FFamily::g1(i, j)?.eval(s)
        }
        GKind::G2 { i, k, q, j } => FFamily::g2(i, k, q, j)?.eval(s),
    }
}

/// Memoized g1 and g2 families keyed by their parameters.
#[derive(Default)]
pub struct GCache {
    g1: HashMap<(i64, i64), FFamily>,
    g2: HashMap<(i64, i64, i64, i64), FFamily>,
}

impl GCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn g1(&mut self, i: i64, j: i64, s: &BTreeSet<i64>) -> Result<Polynomial> {
        if s.iter().any(|&t| t >= j) {
            return Err(Error::BadParameters("g1 needs S inside (i..j)".into()));
        }
        let fam = match self.g1.entry((i, j)) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(FFamily::g1(i, j)?),
        };
        fam.eval(s)
    }

    pub fn g2(&mut self, i: i64, k: i64, q: i64, j: i64, s: &BTreeSet<i64>) -> Result<Polynomial> {
        let fam = match self.g2.entry((i, k, q, j)) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(FFamily::g2(i, k, q, j)?),
        };
        fam.eval(s)
    }
}

/// Replace each listed y_b by x_a; pairs are (b, a).
pub fn lin_reduce(f: &Polynomial, subst: &[(i64, i64)]) -> Result<Polynomial> {
    let mut map: BTreeMap<i64, i64> = BTreeMap::new();
    for &(b, a) in subst {
        if map.insert(b, a).is_some() {
            return Err(Error::ConflictingSubstitution(b));
        }
    }
    Ok(f.subst(|v| match v.axis {
        Axis::Y => map.get(&v.index).map(|&a| x(a)),
        Axis::X => None,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn div_reports_remainder() {
        let f = &x(1) * &y(2);
        assert!(matches!(exact_div(&f, 1, 2), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn negative_indices_round_trip() {
        let f = &x(-2) - &(&y(3) * &y(3));
        let s = f.to_string();
        assert_eq!(Polynomial::parse(&s).unwrap(), f);
    }

    #[test]
    fn d_max_prefers_largest_below() {
        let d = BTreeSet::from([3]);
        assert_eq!(d_max(&d, 1, 3), 1);
        assert_eq!(d_max(&d, 1, 4), 3);
        assert_eq!(d_max(&BTreeSet::new(), 1, 5), 1);
    }
}
