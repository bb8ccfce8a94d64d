//! Marked signature sequences, their reduction, sign maps and flows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::base::{res_p, Characteristic, Residue, Weight};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A sign carrying an integer mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(Sign, i64)", into = "(Sign, i64)")]
pub struct Marked {
    pub sign: Sign,
    pub mark: i64,
}

impl Marked {
    pub fn plus(mark: i64) -> Self {
        Marked { sign: Sign::Plus, mark }
    }
    pub fn minus(mark: i64) -> Self {
        Marked { sign: Sign::Minus, mark }
    }
}

impl From<(Sign, i64)> for Marked {
    fn from((sign, mark): (Sign, i64)) -> Self {
        Marked { sign, mark }
    }
}

impl From<Marked> for (Sign, i64) {
    fn from(m: Marked) -> Self {
        (m.sign, m.mark)
    }
}

impl fmt::Display for Marked {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign, self.mark)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SigSeq(pub Vec<Marked>);

impl SigSeq {
    pub fn new() -> Self {
        SigSeq(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Marked> {
        self.0.iter()
    }

    pub fn concat(&self, other: &SigSeq) -> SigSeq {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SigSeq(v)
    }

    pub fn count(&self, sign: Sign) -> usize {
        self.0.iter().filter(|m| m.sign == sign).count()
    }

    pub fn contains(&self, m: Marked) -> bool {
        self.0.contains(&m)
    }

    pub fn signs(&self) -> Vec<Sign> {
        self.0.iter().map(|m| m.sign).collect()
    }

    /// (s, r) for a sequence already of the form +^s -^r.
    pub fn shape(&self) -> (usize, usize) {
        (self.count(Sign::Plus), self.count(Sign::Minus))
    }

    pub fn is_all_minus(&self) -> bool {
        self.0.iter().all(|m| m.sign == Sign::Minus)
    }

    pub fn has_plus(&self) -> bool {
        self.0.iter().any(|m| m.sign == Sign::Plus)
    }

    /// Whether the signs read +^s -^r.
    pub fn is_plus_then_minus(&self) -> bool {
        self.0
            .windows(2)
            .all(|w| !(w[0].sign == Sign::Minus && w[1].sign == Sign::Plus))
    }
}

impl fmt::Display for SigSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        write!(f, "(")?;
        for (k, m) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// Positions (into the input) of every erased (-, +) pair, in erasure order,
/// together with the surviving positions.
pub fn reduce_trace(u: &SigSeq) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut stack: Vec<usize> = Vec::with_capacity(u.len());
    let mut pairs = Vec::new();
    for (pos, m) in u.0.iter().enumerate() {
        if m.sign == Sign::Plus {
            if let Some(&top) = stack.last() {
                if u.0[top].sign == Sign::Minus {
                    stack.pop();
                    pairs.push((top, pos));
                    continue;
                }
            }
        }
        stack.push(pos);
    }
    (pairs, stack)
}

/// [u]: erase adjacent (-, +) pairs until none remain.
pub fn reduce(u: &SigSeq) -> SigSeq {
    let (_, keep) = reduce_trace(u);
    SigSeq(keep.into_iter().map(|k| u.0[k]).collect())
}

/// -w_0 u: swap signs, send mark i to n+1-i, reverse.
pub fn minus_w0_seq(u: &SigSeq, n: i64) -> Result<SigSeq> {
    u.0.iter()
        .rev()
        .map(|m| {
            if m.mark < 1 || m.mark > n {
                Err(Error::MarkOutOfRange { mark: m.mark, n })
            } else {
                Ok(Marked {
                    sign: m.sign.flip(),
                    mark: n + 1 - m.mark,
                })
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(SigSeq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Single,
    Pair,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Single => "single",
            Mode::Pair => "pair",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SignValue {
    #[serde(rename = "", alias = "∅")]
    Empty,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "--")]
    MinusMinus,
    #[serde(rename = "+-")]
    PlusMinus,
    #[serde(rename = "++")]
    PlusPlus,
}

impl SignValue {
    pub const SINGLE: [SignValue; 3] = [SignValue::Empty, SignValue::Minus, SignValue::Plus];
    pub const PAIR: [SignValue; 4] = [
        SignValue::Empty,
        SignValue::MinusMinus,
        SignValue::PlusMinus,
        SignValue::PlusPlus,
    ];

    pub fn signs(self) -> &'static [Sign] {
        use Sign::*;
        match self {
            SignValue::Empty => &[],
            SignValue::Minus => &[Minus],
            SignValue::Plus => &[Plus],
            SignValue::MinusMinus => &[Minus, Minus],
            SignValue::PlusMinus => &[Plus, Minus],
            SignValue::PlusPlus => &[Plus, Plus],
        }
    }

    pub fn has_minus(self) -> bool {
        self.signs().contains(&Sign::Minus)
    }

    pub fn has_plus(self) -> bool {
        self.signs().contains(&Sign::Plus)
    }

    pub fn fits(self, mode: Mode) -> bool {
        match mode {
            Mode::Single => Self::SINGLE.contains(&self),
            Mode::Pair => Self::PAIR.contains(&self),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SignValue::Empty => "∅",
            SignValue::Minus => "-",
            SignValue::Plus => "+",
            SignValue::MinusMinus => "--",
            SignValue::PlusMinus => "+-",
            SignValue::PlusPlus => "++",
        }
    }
}

/// A map from a finite index set to sign values of one mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SignMapRepr", into = "SignMapRepr")]
pub struct SignMap {
    mode: Mode,
    values: BTreeMap<i64, SignValue>,
}

#[derive(Serialize, Deserialize)]
struct SignMapRepr {
    mode: Mode,
    values: BTreeMap<i64, SignValue>,
}

impl TryFrom<SignMapRepr> for SignMap {
    type Error = Error;
    fn try_from(r: SignMapRepr) -> Result<Self> {
        SignMap::new(r.mode, r.values)
    }
}

impl From<SignMap> for SignMapRepr {
    fn from(m: SignMap) -> Self {
        SignMapRepr {
            mode: m.mode,
            values: m.values,
        }
    }
}

impl SignMap {
    pub fn new(mode: Mode, values: BTreeMap<i64, SignValue>) -> Result<Self> {
        if let Some(v) = values.values().find(|v| !v.fits(mode)) {
            return Err(Error::ModeMismatch {
                value: v.symbol().to_string(),
                mode: mode.name(),
            });
        }
        Ok(SignMap { mode, values })
    }

    /// Values on the consecutive domain [1..len].
    pub fn from_slice(mode: Mode, vals: &[SignValue]) -> Result<Self> {
        Self::new(
            mode,
            vals.iter()
                .enumerate()
                .map(|(k, &v)| (k as i64 + 1, v))
                .collect(),
        )
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn values(&self) -> &BTreeMap<i64, SignValue> {
        &self.values
    }

    pub fn domain(&self) -> impl DoubleEndedIterator<Item = i64> + '_ {
        self.values.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: i64) -> Option<SignValue> {
        self.values.get(&i).copied()
    }

    pub fn restrict(&self, keep: impl Fn(i64) -> bool) -> SignMap {
        SignMap {
            mode: self.mode,
            values: self
                .values
                .iter()
                .filter(|(&k, _)| keep(k))
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    /// ∏_{i∈J} u_i over the domain elements selected by `keep`.
    pub fn product_where(&self, keep: impl Fn(i64) -> bool) -> SigSeq {
        let mut v = Vec::new();
        for (&k, &val) in &self.values {
            if keep(k) {
                v.extend(val.signs().iter().map(|&sign| Marked { sign, mark: k }));
            }
        }
        SigSeq(v)
    }

    pub fn product(&self) -> SigSeq {
        self.product_where(|_| true)
    }

    /// ∏ over an explicit J, which must lie in the domain.
    pub fn product_of(&self, j: &BTreeSet<i64>) -> Result<SigSeq> {
        if let Some(k) = j.iter().find(|k| !self.values.contains_key(k)) {
            return Err(Error::PreconditionFailed(format!(
                "index {k} is outside the domain"
            )));
        }
        Ok(self.product_where(|k| j.contains(&k)))
    }

    pub fn reduced(&self) -> SigSeq {
        reduce(&self.product())
    }
}

impl fmt::Display for SignMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, (i, v)) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}:{}", v.symbol())?;
        }
        write!(f, ")")
    }
}

/// r_β(λ): pair mode when β = 0, single mode otherwise.
pub fn r_beta(lambda: &Weight, beta: Residue, p: Characteristic) -> SignMap {
    let mut values = BTreeMap::new();
    let zero = beta.is_zero();
    for k in 1..=lambda.n() {
        let l = lambda.at(k);
        let v = if zero {
            if p.congruent(l, 1) {
                SignValue::MinusMinus
            } else if p.congruent(l, 0) {
                SignValue::PlusMinus
            } else if p.congruent(l, -1) {
                SignValue::PlusPlus
            } else {
                SignValue::Empty
            }
        } else if res_p(l, p) == beta {
            SignValue::Minus
        } else if res_p(l + 1, p) == beta {
            SignValue::Plus
        } else {
            SignValue::Empty
        };
        values.insert(k as i64, v);
    }
    SignMap {
        mode: if zero { Mode::Pair } else { Mode::Single },
        values,
    }
}

/// A set of pairs of integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flow {
    pub edges: BTreeSet<(i64, i64)>,
}

impl Flow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Self {
        Flow {
            edges: it.into_iter().collect(),
        }
    }

    pub fn sources(&self) -> BTreeSet<i64> {
        self.edges.iter().map(|e| e.0).collect()
    }

    pub fn targets(&self) -> BTreeSet<i64> {
        self.edges.iter().map(|e| e.1).collect()
    }

    pub fn union(&self, other: &Flow) -> Flow {
        Flow {
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }

    /// The target of the edge leaving `a`, if exactly one.
    pub fn target_of(&self, a: i64) -> Option<i64> {
        self.edges.iter().find(|e| e.0 == a).map(|e| e.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowReport {
    pub is_weak_flow: bool,
    pub is_flow: bool,
    pub coherent: bool,
    pub fully_coherent: bool,
    pub buds: BTreeSet<i64>,
}

/// Evaluate the flow, coherence and bud conditions of `g` against `u`,
/// with carrier set the domain of `u`.
pub fn flow_analyze(g: &Flow, u: &SignMap) -> FlowReport {
    let in_domain = g
        .edges
        .iter()
        .all(|&(a, b)| u.values.contains_key(&a) && u.values.contains_key(&b));
    let distinct = g.sources().len() == g.edges.len() && g.targets().len() == g.edges.len();
    let weak = g.edges.iter().all(|&(a, b)| a <= b);
    let strict = g.edges.iter().all(|&(a, b)| a < b);
    let is_weak_flow = in_domain && distinct && weak;
    let is_flow = is_weak_flow && strict;

    let val = |k: i64| u.get(k).unwrap_or(SignValue::Empty);
    let coherent = g
        .edges
        .iter()
        .all(|&(a, b)| val(a).has_minus() && val(b).has_plus());
    let targets = g.targets();
    let covered = u
        .values
        .iter()
        .filter(|(_, v)| v.has_plus())
        .all(|(k, _)| targets.contains(k));
    let sources = g.sources();
    let buds = u
        .values
        .iter()
        .filter(|(k, v)| v.has_minus() && !sources.contains(k))
        .map(|(&k, _)| k)
        .collect();
    FlowReport {
        is_weak_flow,
        is_flow,
        coherent,
        fully_coherent: coherent && covered,
        buds,
    }
}

fn require_pair(u: &SignMap, what: &str) -> Result<()> {
    if u.mode != Mode::Pair {
        return Err(Error::PreconditionFailed(format!("{what} needs a pair-mode map")));
    }
    Ok(())
}

/// A flow fully coherent with `u`, with m buds (single mode) or m/2 buds
/// (pair mode), where [∏u] = -^m.
pub fn build_full_flow(u: &SignMap) -> Result<Flow> {
    let red = u.reduced();
    if !red.is_all_minus() {
        return Err(Error::NotAllMinus(red.to_string()));
    }
    match u.mode {
        Mode::Single => {
            let seq = u.product();
            let (pairs, _) = reduce_trace(&seq);
            Ok(Flow::from_edges(
                pairs.into_iter().map(|(a, b)| (seq.0[a].mark, seq.0[b].mark)),
            ))
        }
        Mode::Pair => {
            let mut flow = Flow::new();
            let mut buds: BTreeSet<i64> = BTreeSet::new();
            for (&e, &v) in &u.values {
                match v {
                    SignValue::Empty => {}
                    SignValue::MinusMinus => {
                        buds.insert(e);
                    }
                    SignValue::PlusMinus | SignValue::PlusPlus => {
                        let d = buds.pop_last().ok_or_else(|| {
                            Error::Unreachable(format!("no bud before {e} in {u}"))
                        })?;
                        flow.edges.insert((d, e));
                        if v == SignValue::PlusMinus {
                            buds.insert(e);
                        }
                    }
                    _ => unreachable!("mode checked at construction"),
                }
            }
            Ok(flow)
        }
    }
}

fn split_rec(u: &SignMap) -> Result<i64> {
    let e = match u.domain().next_back() {
        Some(e) => e,
        None => return Err(Error::Unreachable("empty domain in split".into())),
    };
    match u.get(e).unwrap() {
        SignValue::MinusMinus => Ok(e),
        SignValue::Empty | SignValue::PlusMinus => split_rec(&u.restrict(|k| k < e)),
        SignValue::PlusPlus => {
            let b = split_rec(&u.restrict(|k| k < e))?;
            split_rec(&u.restrict(|k| k < b))
        }
        _ => unreachable!(),
    }
}

/// An index a with u_a = --, [∏_{i>a}] ∈ {∅, +-} and [∏_{i≤a}] = [∏u],
/// for a pair-mode map with [∏u] = -^m, m > 0.
pub fn split_index(u: &SignMap) -> Result<i64> {
    require_pair(u, "split")?;
    let red = u.reduced();
    if !red.is_all_minus() || red.is_empty() {
        return Err(Error::PreconditionFailed(format!(
            "split needs a nonempty all-minus reduction, got {red}"
        )));
    }
    split_rec(u)
}

fn is_plus_minus_power(red: &SigSeq) -> bool {
    red.shape().0 == 1 && red.is_plus_then_minus()
}

fn lead_plus_rec(u: &SignMap) -> Result<i64> {
    let e = match u.domain().next_back() {
        Some(e) => e,
        None => return Err(Error::Unreachable("empty domain in lead plus".into())),
    };
    let rest = u.restrict(|k| k < e);
    let (s, r) = rest.reduced().shape();
    if s == 1 {
        lead_plus_rec(&rest)
    } else if s == 0 && r == 0 && u.get(e) == Some(SignValue::PlusMinus) {
        Ok(e)
    } else {
        Err(Error::Unreachable(format!("lead plus fell through on {u}")))
    }
}

/// An index a with u_a = +- and [∏_{i<a}] = ∅, for [∏u] = +-^m.
pub fn lead_plus_index(u: &SignMap) -> Result<i64> {
    require_pair(u, "lead plus")?;
    let red = u.reduced();
    if !is_plus_minus_power(&red) {
        return Err(Error::PreconditionFailed(format!(
            "lead plus needs a reduction +-^m, got {red}"
        )));
    }
    lead_plus_rec(u)
}

fn section_rec(u: &SignMap) -> Result<Vec<i64>> {
    let a = lead_plus_rec(u)?;
    let rest = u.restrict(|k| k > a);
    let (s, _) = rest.reduced().shape();
    let mut out = vec![a];
    if s > 0 {
        out.extend(section_rec(&rest)?);
    }
    Ok(out)
}

/// A section a_1 < ... < a_h of a pair-mode map with [∏u] = +-^m.
pub fn section_of(u: &SignMap) -> Result<Vec<i64>> {
    require_pair(u, "section")?;
    let red = u.reduced();
    if !is_plus_minus_power(&red) {
        return Err(Error::PreconditionFailed(format!(
            "section needs a reduction +-^m, got {red}"
        )));
    }
    section_rec(u)
}

/// Fully coherent flows on every gap of a section, with the gaps taken
/// inside `carrier`.
fn gap_flows(u: &SignMap, section: &[i64]) -> Result<Flow> {
    let mut flow = Flow::new();
    let mut lo = i64::MIN;
    for &a in section.iter().chain(std::iter::once(&i64::MAX)) {
        let gap = u.restrict(|k| k > lo && k < a);
        flow = flow.union(&build_full_flow(&gap)?);
        lo = a;
    }
    Ok(flow)
}

/// Loops at a section plus fully coherent flows on its gaps.
pub fn resolution_of(u: &SignMap) -> Result<Flow> {
    let section = section_of(u)?;
    let mut flow = gap_flows(u, &section)?;
    flow.edges.extend(section.iter().map(|&a| (a, a)));
    Ok(flow)
}

fn partial_single(u: &SignMap) -> Result<(BTreeSet<i64>, Flow)> {
    let e = u.domain().next_back().ok_or_else(|| {
        Error::Unreachable("empty domain in partial flow".into())
    })?;
    let rest = u.restrict(|k| k < e);
    let (s, _) = rest.reduced().shape();
    if s > 0 {
        partial_single(&rest)
    } else {
        Ok((u.domain().collect(), build_full_flow(&rest)?))
    }
}

fn partial_pair(u: &SignMap) -> Result<(BTreeSet<i64>, Flow)> {
    let e = u.domain().next_back().ok_or_else(|| {
        Error::Unreachable("empty domain in partial flow".into())
    })?;
    let rest = u.restrict(|k| k < e);
    let (s, _) = rest.reduced().shape();
    let whole: BTreeSet<i64> = u.domain().collect();
    match s {
        0 => Ok((whole, build_full_flow(&rest)?)),
        1 => {
            let section = section_rec(&rest)?;
            let mut flow = gap_flows(&rest, &section)?;
            for w in section.windows(2) {
                flow.edges.insert((w[0], w[1]));
            }
            flow.edges.insert((*section.last().unwrap(), e));
            Ok((whole, flow))
        }
        _ => partial_pair(&rest),
    }
}

/// A beginning J of the domain with [∏_J] = + (single) or ++ (pair), and a
/// flow on J coherent but not fully coherent with u|_J, without buds on J.
pub fn partial_flow(u: &SignMap) -> Result<(BTreeSet<i64>, Flow)> {
    let (s, _) = u.reduced().shape();
    match u.mode {
        Mode::Single if s >= 1 => partial_single(u),
        Mode::Pair if s >= 2 => partial_pair(u),
        _ => Err(Error::PreconditionFailed(format!(
            "partial flow needs more pluses in the reduction of {u}"
        ))),
    }
}
