//! Normal, good, conormal and cogood indices of a weight, certificates for
//! non-normal indices, and the step plans behind primitive vectors.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};

use crate::base::{res_p, Characteristic, Residue, Signed, SignedSet, Weight};
use crate::error::{Error, Result};
use crate::sigseq::{
    build_full_flow, flow_analyze, partial_flow, r_beta, resolution_of, section_of, split_index,
    Flow, Marked, SigSeq, SignMap, SignValue,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexClassification {
    pub tensor_normal: bool,
    /// Always false for i = n.
    pub normal: bool,
    pub tensor_conormal: bool,
    /// Always false for i = n.
    pub good: bool,
    pub tensor_good: bool,
    pub tensor_cogood: bool,
    pub residue: Residue,
}

fn check_index(lambda: &Weight, i: usize) -> Result<()> {
    if i == 0 || i > lambda.n() {
        return Err(Error::IndexOutOfRange {
            index: i as i64,
            n: lambda.n(),
        });
    }
    Ok(())
}

/// [∏_{k ∈ range} r_β(λ)_k].
fn reduced_on(lambda: &Weight, beta: Residue, p: Characteristic, keep: impl Fn(i64) -> bool) -> SigSeq {
    r_beta(lambda, beta, p).restrict(keep).reduced()
}

pub fn is_tensor_normal(lambda: &Weight, i: usize, p: Characteristic) -> bool {
    let beta = lambda.residue(i, p);
    r_beta(lambda, beta, p)
        .reduced()
        .contains(Marked::minus(i as i64))
}

pub fn is_normal(lambda: &Weight, i: usize, p: Characteristic) -> bool {
    let n = lambda.n();
    if i >= n {
        return false;
    }
    let beta = lambda.residue(i, p);
    let u = r_beta(lambda, beta, p);
    let (ii, nn) = (i as i64, n as i64);
    if !u.restrict(|k| k < nn).reduced().contains(Marked::minus(ii)) {
        return false;
    }
    let gap_empty = u.restrict(|k| k > ii && k < nn).reduced().is_empty();
    !(gap_empty && p.divides(lambda.at(i)) && p.divides(lambda.at(n)))
}

pub fn is_tensor_conormal(lambda: &Weight, i: usize, p: Characteristic) -> bool {
    let beta = res_p(lambda.at(i) + 1, p);
    r_beta(lambda, beta, p)
        .reduced()
        .contains(Marked::plus(i as i64))
}

/// All six predicates for every index 1..=n.
pub fn classify_all(lambda: &Weight, p: Characteristic) -> Vec<IndexClassification> {
    let n = lambda.n();
    let mut out: Vec<IndexClassification> = (1..=n)
        .map(|i| IndexClassification {
            tensor_normal: is_tensor_normal(lambda, i, p),
            normal: is_normal(lambda, i, p),
            tensor_conormal: is_tensor_conormal(lambda, i, p),
            good: false,
            tensor_good: false,
            tensor_cogood: false,
            residue: lambda.residue(i, p),
        })
        .collect();
    let co: Vec<Residue> = (1..=n).map(|i| res_p(lambda.at(i) + 1, p)).collect();
    for i in 0..n {
        let r = out[i].residue;
        out[i].good = out[i].normal && !(0..i).any(|h| out[h].normal && out[h].residue == r);
        out[i].tensor_good =
            out[i].tensor_normal && !(0..i).any(|h| out[h].tensor_normal && out[h].residue == r);
        out[i].tensor_cogood = out[i].tensor_conormal
            && !(i + 1..n).any(|h| out[h].tensor_conormal && co[h] == co[i]);
    }
    out
}

pub fn classify_index(lambda: &Weight, i: usize, p: Characteristic) -> Result<IndexClassification> {
    check_index(lambda, i)?;
    Ok(classify_all(lambda, p)[i - 1])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueGroup {
    pub residue: Residue,
    pub indices: Vec<usize>,
    pub normal: Vec<usize>,
    pub good: Option<usize>,
    pub tensor_normal: Vec<usize>,
    pub tensor_good: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub weight: Vec<i64>,
    pub p: Characteristic,
    pub indices: BTreeMap<usize, IndexClassification>,
    pub groups: Vec<ResidueGroup>,
}

pub fn index_report(lambda: &Weight, p: Characteristic) -> IndexReport {
    let all = classify_all(lambda, p);
    let mut by_res: BTreeMap<Residue, Vec<usize>> = BTreeMap::new();
    for (k, c) in all.iter().enumerate() {
        by_res.entry(c.residue).or_default().push(k + 1);
    }
    let groups = by_res
        .into_iter()
        .map(|(residue, indices)| {
            let pick = |f: fn(&IndexClassification) -> bool| -> Vec<usize> {
                indices.iter().copied().filter(|&i| f(&all[i - 1])).collect()
            };
            ResidueGroup {
                residue,
                normal: pick(|c| c.normal),
                good: pick(|c| c.good).first().copied(),
                tensor_normal: pick(|c| c.tensor_normal),
                tensor_good: pick(|c| c.tensor_good).first().copied(),
                indices,
            }
        })
        .collect();
    IndexReport {
        weight: lambda.parts().to_vec(),
        p,
        indices: all.into_iter().enumerate().map(|(k, c)| (k + 1, c)).collect(),
        groups,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    A,
    B,
    C,
    D,
}

fn edges_only<S: Serializer>(flow: &Flow, s: S) -> std::result::Result<S::Ok, S::Error> {
    flow.edges.serialize(s)
}

/// Combinatorial witness that an index is not normal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    #[serde(rename = "case")]
    pub case_tag: CaseTag,
    pub j: i64,
    #[serde(serialize_with = "edges_only")]
    pub flow: Flow,
    #[serde(rename = "M")]
    pub m: SignedSet,
    pub sources: BTreeSet<i64>,
    pub c: Residue,
}

/// ∏_{t ∈ ts} (β - Res_p λ_t).
fn residue_product(lambda: &Weight, beta: Residue, p: Characteristic, ts: impl Iterator<Item = i64>) -> Residue {
    ts.fold(p.reduce(1), |acc, t| {
        acc.mul(beta.sub(lambda.residue(t as usize, p), p), p)
    })
}

fn gap_map(lambda: &Weight, beta: Residue, p: Characteristic, lo: i64, hi: i64) -> SignMap {
    r_beta(lambda, beta, p).restrict(|k| k > lo && k < hi)
}

pub fn non_normal_certificate(lambda: &Weight, i: usize, p: Characteristic) -> Result<Certificate> {
    check_index(lambda, i)?;
    let n = lambda.n();
    if i >= n {
        return Err(Error::PreconditionFailed(format!("certificates need i < n, got i = {i}")));
    }
    if is_normal(lambda, i, p) {
        return Err(Error::IsNormal(i));
    }
    let beta = lambda.residue(i, p);
    let (ii, nn) = (i as i64, n as i64);
    let u = gap_map(lambda, beta, p, ii, nn);
    let (s, _) = u.reduced().shape();
    let r_i = r_beta(lambda, beta, p).get(ii);

    let tag = if !beta.is_zero() && s >= 1 {
        CaseTag::A
    } else if beta.is_zero() && s >= 2 {
        CaseTag::B
    } else if r_i == Some(SignValue::PlusMinus) && s == 1 {
        CaseTag::C
    } else if u.reduced().is_empty() && p.divides(lambda.at(i)) && p.divides(lambda.at(n)) {
        CaseTag::D
    } else {
        return Err(Error::Unreachable(format!("no certificate case for i = {i} in {lambda}")));
    };

    match tag {
        CaseTag::A | CaseTag::B => {
            let (jset, flow) = partial_flow(&u)?;
            let j = *jset.last().ok_or_else(|| Error::Unreachable("empty beginning".into()))?;
            let sources = flow.sources();
            let rest: Vec<i64> = jset.difference(&sources).copied().collect();
            let mut m = SignedSet::from_parts(&rest, &[])?;
            m.insert(Signed::Odd(j + 1))?;
            let c = residue_product(lambda, beta, p, rest.iter().copied());
            Ok(Certificate { case_tag: tag, j, flow, m, sources, c })
        }
        CaseTag::C | CaseTag::D => {
            let j = if tag == CaseTag::C { section_of(&u)?[0] } else { nn };
            let inner = gap_map(lambda, beta, p, ii, j);
            let flow = build_full_flow(&inner)?;
            let sources = flow.sources();
            let rest: Vec<i64> = (ii + 1..j).filter(|t| !sources.contains(t)).collect();
            let mut m = SignedSet::from_parts(&rest, &[])?;
            m.insert(Signed::Odd(j))?;
            let c = residue_product(lambda, beta, p, rest.iter().copied());
            Ok(Certificate { case_tag: tag, j, flow, m, sources, c })
        }
    }
}

impl Certificate {
    /// Recheck the certificate from scratch against λ and i.
    pub fn validate(&self, lambda: &Weight, i: usize, p: Characteristic) -> Result<()> {
        let fail = |msg: &str| Err(Error::PreconditionFailed(format!("certificate: {msg}")));
        let beta = lambda.residue(i, p);
        let ii = i as i64;
        let (hi, top) = match self.case_tag {
            CaseTag::A | CaseTag::B => (self.j + 1, Signed::Odd(self.j + 1)),
            CaseTag::C | CaseTag::D => (self.j, Signed::Odd(self.j)),
        };
        let u = gap_map(lambda, beta, p, ii, hi);
        let rep = flow_analyze(&self.flow, &u);
        if !rep.is_flow || !rep.coherent || !rep.buds.is_empty() {
            return fail("flow is not a coherent flow without buds");
        }
        let full_expected = matches!(self.case_tag, CaseTag::C | CaseTag::D);
        if rep.fully_coherent != full_expected {
            return fail("wrong coherence profile");
        }
        if self.sources != self.flow.sources() {
            return fail("sources do not match the flow");
        }
        let rest: Vec<i64> = (ii + 1..hi).filter(|t| !self.sources.contains(t)).collect();
        let mut m = SignedSet::from_parts(&rest, &[])?;
        m.insert(top)?;
        if m != self.m {
            return fail("M does not match the flow");
        }
        let c = residue_product(lambda, beta, p, rest.into_iter());
        if c != self.c || c.is_zero() {
            return fail("bad constant");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    #[serde(rename = "T6.1.3")]
    FullFlowTail,
    #[serde(rename = "T6.2.3")]
    FullFlowGap,
    #[serde(rename = "T6.3.3")]
    Resolution,
    #[serde(rename = "T6.4.2")]
    ZeroToOne,
    #[serde(rename = "T6.5.2")]
    SameResidue,
    #[serde(rename = "T6.6.2")]
    OneToZero,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::FullFlowTail => "T6.1.3",
            Theorem::FullFlowGap => "T6.2.3",
            Theorem::Resolution => "T6.3.3",
            Theorem::ZeroToOne => "T6.4.2",
            Theorem::SameResidue => "T6.5.2",
            Theorem::OneToZero => "T6.6.2",
        }
    }

    pub fn is_base(self) -> bool {
        matches!(self, Theorem::FullFlowTail | Theorem::FullFlowGap | Theorem::Resolution)
    }
}

/// Data consumed by one construction step. Base steps go from λ to
/// λ - α(lo, n) (`hi` = n); extension steps go from λ - α(hi, n) to
/// λ - α(lo, n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepData {
    pub lo: usize,
    pub hi: usize,
    pub beta: Residue,
    pub reduction: SigSeq,
    #[serde(serialize_with = "edges_only")]
    pub flow: Flow,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_flow: Option<Flow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub section: Vec<i64>,
    pub sources: BTreeSet<i64>,
    #[serde(rename = "M")]
    pub m: SignedSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanStep {
    pub theorem: Theorem,
    pub data: StepData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionPlan {
    pub steps: Vec<PlanStep>,
}

impl ConstructionPlan {
    /// The index i of the final weight λ - α(i, n).
    pub fn target(&self) -> Option<usize> {
        self.steps.last().map(|s| s.data.lo)
    }

    /// Validate every step and the way consecutive steps chain.
    pub fn validate(&self, lambda: &Weight, p: Characteristic) -> Result<()> {
        let mut cur: Option<usize> = None;
        for step in &self.steps {
            step.validate(lambda, p)?;
            match (cur, step.theorem.is_base()) {
                (None, _) | (Some(_), true) => {}
                (Some(c), false) if c == step.data.hi => {}
                _ => {
                    return Err(Error::PreconditionFailed(format!(
                        "step {} does not continue from index {:?}",
                        step.theorem.tag(),
                        cur
                    )))
                }
            }
            cur = Some(step.data.lo);
        }
        Ok(())
    }
}

fn evens(ts: impl Iterator<Item = i64>) -> Result<SignedSet> {
    SignedSet::from_elems(ts.map(Signed::Even))
}

/// Build the payload of one step from scratch.
pub fn make_step(lambda: &Weight, p: Characteristic, theorem: Theorem, lo: usize, hi: usize) -> Result<PlanStep> {
    let beta = lambda.residue(lo, p);
    let (l, h) = (lo as i64, hi as i64);
    let rb = r_beta(lambda, beta, p);
    let half = rb.restrict(|k| k > l && k <= h);
    let open = rb.restrict(|k| k > l && k < h);
    let mut weak_flow = None;
    let mut section = Vec::new();
    let (flow, m, reduction) = match theorem {
        Theorem::FullFlowTail | Theorem::SameResidue => {
            let flow = build_full_flow(&half)?;
            let s = flow.sources();
            let m = evens((l + 1..=h).filter(|t| !s.contains(t)))?;
            (flow, m, half.reduced())
        }
        Theorem::FullFlowGap => {
            let flow = build_full_flow(&open)?;
            let s = flow.sources();
            let mut m = evens((l + 1..h).filter(|t| !s.contains(t)))?;
            m.insert(Signed::Odd(h))?;
            (flow, m, open.reduced())
        }
        Theorem::Resolution => {
            section = section_of(&half)?;
            let flow = resolution_of(&half)?;
            let s = flow.sources();
            let q = flow
                .edges
                .iter()
                .filter(|e| e.0 == e.1)
                .map(|e| e.0)
                .max()
                .ok_or_else(|| Error::Unreachable("resolution without loops".into()))?;
            let mut m = evens((l + 1..=h).filter(|t| !s.contains(t)))?;
            m.insert(Signed::Odd(q))?;
            (flow, m, half.reduced())
        }
        Theorem::ZeroToOne => {
            let flow = build_full_flow(&half)?;
            let s = flow.sources();
            let mut m = evens((l + 1..h).filter(|t| !s.contains(t)))?;
            m.insert(Signed::Even(h))?;
            (flow, m, half.reduced())
        }
        Theorem::OneToZero => {
            let (gamma, delta) = if open.reduced().is_empty() {
                let g0 = build_full_flow(&open)?;
                let mut g = g0.clone();
                g.edges.insert((l, h));
                let mut d = g0;
                d.edges.insert((h, h));
                (g, d)
            } else {
                section = section_of(&open)?;
                let mut d = resolution_of(&open)?;
                let mut g = Flow::from_edges(d.edges.iter().copied().filter(|e| e.0 != e.1));
                let chain: Vec<i64> = std::iter::once(l)
                    .chain(section.iter().copied())
                    .chain(std::iter::once(h))
                    .collect();
                g.edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
                d.edges.insert((h, h));
                (g, d)
            };
            let mut s = gamma.sources();
            s.remove(&l);
            let m = evens((l + 1..h).filter(|t| !s.contains(t)))?;
            weak_flow = Some(delta);
            (gamma, m, half.reduced())
        }
    };
    let mut sources = flow.sources();
    if theorem == Theorem::OneToZero {
        sources.remove(&l);
    }
    Ok(PlanStep {
        theorem,
        data: StepData {
            lo,
            hi,
            beta,
            reduction,
            flow,
            weak_flow,
            section,
            sources,
            m,
        },
    })
}

fn is_plus_minus_power(red: &SigSeq) -> bool {
    red.shape().0 == 1 && red.is_plus_then_minus()
}

impl PlanStep {
    /// Check the hypotheses of the step's theorem and the shape of its payload.
    pub fn validate(&self, lambda: &Weight, p: Characteristic) -> Result<()> {
        let d = &self.data;
        let n = lambda.n();
        let fail = |msg: &str| {
            Err(Error::PreconditionFailed(format!(
                "{} step ({}, {}): {msg}",
                self.theorem.tag(),
                d.lo,
                d.hi
            )))
        };
        if d.lo == 0 || d.lo >= d.hi || d.hi > n {
            return fail("indices out of order");
        }
        if self.theorem.is_base() && d.hi != n {
            return fail("base steps end at n");
        }
        if !self.theorem.is_base() && d.hi >= n {
            return fail("extension steps need hi < n");
        }
        let (l, h) = (d.lo as i64, d.hi as i64);
        let (xl, xh) = (lambda.at(d.lo), lambda.at(d.hi));
        let beta = lambda.residue(d.lo, p);
        if beta != d.beta {
            return fail("residue mismatch");
        }
        let rb = r_beta(lambda, beta, p);
        let half = rb.restrict(|k| k > l && k <= h);
        let open = rb.restrict(|k| k > l && k < h);
        let red_half = half.reduced();
        let red_open = open.reduced();
        let zero = beta.is_zero();
        let ok = match self.theorem {
            Theorem::FullFlowTail => red_half.is_all_minus(),
            Theorem::FullFlowGap => {
                red_open.is_all_minus() && !(p.divides(xl) && p.divides(xh))
            }
            Theorem::Resolution => zero && p.congruent(xl, 1) && is_plus_minus_power(&red_half),
            Theorem::ZeroToOne => {
                p.divides(xl) && p.congruent(xh, 1) && red_half.is_all_minus()
            }
            Theorem::SameResidue => {
                !p.divides(xh)
                    && (!p.divides(xl) || !p.congruent(xh, 1))
                    && lambda.residue(d.hi, p) == beta
                    && red_half.is_all_minus()
            }
            Theorem::OneToZero => {
                p.congruent(xl, 1) && p.divides(xh) && is_plus_minus_power(&red_half)
            }
        };
        if !ok {
            return fail("hypotheses do not hold");
        }
        let expected = match self.theorem {
            Theorem::FullFlowGap => red_open,
            _ => red_half,
        };
        if expected != d.reduction {
            return fail("recorded reduction is wrong");
        }
        match self.theorem {
            Theorem::FullFlowTail | Theorem::SameResidue | Theorem::ZeroToOne => {
                let r = flow_analyze(&d.flow, &half);
                if !(r.is_flow && r.fully_coherent) {
                    return fail("flow is not fully coherent");
                }
            }
            Theorem::FullFlowGap => {
                let r = flow_analyze(&d.flow, &open);
                if !(r.is_flow && r.fully_coherent) {
                    return fail("flow is not fully coherent");
                }
            }
            Theorem::Resolution => {
                let r = flow_analyze(&d.flow, &half);
                if !(r.is_weak_flow && !r.is_flow && r.fully_coherent) {
                    return fail("not a resolution");
                }
            }
            Theorem::OneToZero => {
                let closed = rb.restrict(|k| k >= l && k <= h);
                let r = flow_analyze(&d.flow, &closed);
                if !(r.is_flow && r.coherent) {
                    return fail("chain flow is not a coherent flow");
                }
                let delta = d.weak_flow.as_ref().ok_or_else(|| {
                    Error::PreconditionFailed("missing weak flow".into())
                })?;
                let r = flow_analyze(delta, &half);
                if !(r.is_weak_flow && r.coherent) {
                    return fail("loop flow is not a coherent weak flow");
                }
            }
        }
        let rebuilt = make_step(lambda, p, self.theorem, d.lo, d.hi)?;
        if rebuilt.data != *d {
            return fail("payload differs from its construction");
        }
        Ok(())
    }
}

/// The one or two base steps giving λ - α(i, n) from the highest weight.
fn base_steps(lambda: &Weight, i: usize, p: Characteristic, steps: &mut Vec<PlanStep>) -> Result<()> {
    let n = lambda.n();
    let beta = lambda.residue(i, p);
    let (ii, nn) = (i as i64, n as i64);
    let gap = reduced_on(lambda, beta, p, |k| k > ii && k < nn);
    let (s, r) = gap.shape();
    let (xi, xn) = (lambda.at(i), lambda.at(n));
    let unreachable = || Error::Unreachable(format!("base case for i = {i} in {lambda}"));
    if !beta.is_zero() {
        let t = match (s, r) {
            (0, r) if r > 0 => Theorem::FullFlowTail,
            (0, 0) => Theorem::FullFlowGap,
            _ => return Err(unreachable()),
        };
        steps.push(make_step(lambda, p, t, i, n)?);
        return Ok(());
    }
    if s == 0 && r >= 2 {
        steps.push(make_step(lambda, p, Theorem::FullFlowTail, i, n)?);
    } else if s == 0 && r == 0 {
        steps.push(make_step(lambda, p, Theorem::FullFlowGap, i, n)?);
    } else if p.congruent(xi, 1) && is_plus_minus_power(&gap) && !p.congruent(xn, -1) {
        steps.push(make_step(lambda, p, Theorem::Resolution, i, n)?);
    } else if p.congruent(xi, 1) && is_plus_minus_power(&gap) {
        let sec = section_of(&gap_map(lambda, beta, p, ii, nn))?;
        let a = *sec.last().ok_or_else(unreachable)? as usize;
        base_steps(lambda, a, p, steps)?;
        steps.push(make_step(lambda, p, Theorem::OneToZero, i, a)?);
    } else {
        return Err(unreachable());
    }
    Ok(())
}

/// Steps producing a primitive vector of weight λ - α(i, n) for a normal i.
pub fn primitive_plan(lambda: &Weight, i: usize, p: Characteristic) -> Result<ConstructionPlan> {
    check_index(lambda, i)?;
    if !is_normal(lambda, i, p) {
        return Err(Error::NotNormal(i));
    }
    let mut steps = Vec::new();
    base_steps(lambda, i, p, &mut steps)?;
    Ok(ConstructionPlan { steps })
}

fn extension_steps(lambda: &Weight, h: usize, i: usize, p: Characteristic, steps: &mut Vec<PlanStep>) -> Result<()> {
    let beta = lambda.residue(i, p);
    let (hh, ii) = (h as i64, i as i64);
    let (xh, xi) = (lambda.at(h), lambda.at(i));
    let unreachable = || Error::Unreachable(format!("extension case for ({h}, {i}) in {lambda}"));
    if !beta.is_zero() {
        steps.push(make_step(lambda, p, Theorem::SameResidue, h, i)?);
        return Ok(());
    }
    let g = reduced_on(lambda, beta, p, |k| k > hh && k <= ii);
    let one = |x| p.congruent(x, 1);
    let zero = |x| p.divides(x);
    if g.is_all_minus() {
        if one(xh) && one(xi) {
            steps.push(make_step(lambda, p, Theorem::SameResidue, h, i)?);
        } else if zero(xh) && one(xi) {
            steps.push(make_step(lambda, p, Theorem::ZeroToOne, h, i)?);
        } else if zero(xi) {
            let a = split_index(&gap_map(lambda, beta, p, hh, ii))? as usize;
            steps.push(make_step(lambda, p, Theorem::OneToZero, a, i)?);
            extension_steps(lambda, h, a, p, steps)?;
        } else {
            return Err(unreachable());
        }
    } else if is_plus_minus_power(&g) {
        if one(xi) {
            let half = r_beta(lambda, beta, p).restrict(|k| k > hh && k <= ii);
            let a = *section_of(&half)?.last().ok_or_else(unreachable)? as usize;
            steps.push(make_step(lambda, p, Theorem::ZeroToOne, a, i)?);
            steps.push(make_step(lambda, p, Theorem::OneToZero, h, a)?);
        } else if zero(xi) {
            steps.push(make_step(lambda, p, Theorem::OneToZero, h, i)?);
        } else {
            return Err(unreachable());
        }
    } else {
        return Err(unreachable());
    }
    Ok(())
}

/// Steps moving a primitive vector of weight λ - α(i, n) to one of weight
/// λ - α(h, n), for a normal h < i < n of the same residue.
pub fn extension_plan(lambda: &Weight, h: usize, i: usize, p: Characteristic) -> Result<ConstructionPlan> {
    check_index(lambda, i)?;
    check_index(lambda, h)?;
    let n = lambda.n();
    if !(h < i && i < n) {
        return Err(Error::PreconditionFailed(format!("need h < i < n, got h = {h}, i = {i}, n = {n}")));
    }
    if !is_normal(lambda, h, p) {
        return Err(Error::PreconditionFailed(format!("{h} is not normal")));
    }
    if lambda.residue(h, p) != lambda.residue(i, p) {
        return Err(Error::PreconditionFailed(format!("residues of {h} and {i} differ")));
    }
    let mut steps = Vec::new();
    extension_steps(lambda, h, i, p, &mut steps)?;
    Ok(ConstructionPlan { steps })
}
