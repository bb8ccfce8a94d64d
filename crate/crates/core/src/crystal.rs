//! p-strict partitions, their i-signatures, the crystal operators and
//! the colored crystal graph, plus the node-level signatures of dominant
//! p-strict weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::base::{res_p, Characteristic, Residue, Weight};
use crate::error::{Error, Result};
use crate::sigseq::{reduce_trace, Marked, SigSeq, Sign};

/// Content of column `col` (1-based): the folded pattern 0, 1, .., ℓ, .., 1, 0.
pub fn cont_p(col: i64, p: Characteristic) -> u32 {
    if p.is_zero() {
        return (col - 1) as u32;
    }
    let q = p.get() as i64;
    let t = (col - 1).rem_euclid(q);
    t.min(q - 1 - t) as u32
}

/// β(i) = i² + i.
pub fn beta_of(i: u32, p: Characteristic) -> Residue {
    let i = i as i128;
    p.reduce(i * i + i)
}

/// The contents I = {0, .., ℓ}; for p = 0 the contents up to `cap`.
pub fn contents(p: Characteristic, cap: u32) -> Vec<u32> {
    match p.ell() {
        Some(l) => (0..=l).collect(),
        None => (0..cap).collect(),
    }
}

fn is_p_strict_seq(parts: &[i64], p: Characteristic) -> bool {
    parts.iter().all(|&x| x >= 0)
        && parts
            .windows(2)
            .all(|w| w[0] > w[1] || (w[0] == w[1] && (w[0] == 0 || p.divides(w[0]))))
}

/// A partition in which equal nonzero parts are divisible by p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PStrictPartition {
    parts: Vec<i64>,
    p: Characteristic,
}

impl Serialize for PStrictPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl PStrictPartition {
    /// Trailing zeros are dropped.
    pub fn new(mut parts: Vec<i64>, p: Characteristic) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.iter().any(|&x| x < 0) {
            return Err(Error::NotPStrict(format!("{parts:?} has a negative part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotPStrict(format!("{parts:?} is not weakly decreasing")));
        }
        if !is_p_strict_seq(&parts, p) {
            return Err(Error::NotPStrict(format!(
                "{parts:?} repeats a part not divisible by {p}"
            )));
        }
        Ok(PStrictPartition { parts, p })
    }

    pub fn empty(p: Characteristic) -> Self {
        PStrictPartition { parts: Vec::new(), p }
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn p(&self) -> Characteristic {
        self.p
    }

    pub fn size(&self) -> i64 {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// λ_r, zero beyond the last part.
    pub fn row(&self, r: i64) -> i64 {
        if r >= 1 {
            self.parts.get(r as usize - 1).copied().unwrap_or(0)
        } else {
            0
        }
    }

    pub fn is_restricted(&self) -> bool {
        if self.p.is_zero() {
            return true;
        }
        let q = self.p.get() as i64;
        (1..=self.parts.len() as i64).all(|r| {
            let d = self.row(r) - self.row(r + 1);
            if self.p.divides(self.row(r)) {
                d < q
            } else {
                d <= q
            }
        })
    }

    pub fn require_restricted(&self) -> Result<()> {
        if self.is_restricted() {
            Ok(())
        } else {
            Err(Error::NotRestricted(self.to_string()))
        }
    }

    /// The partition with row r changed by `delta`, if still p-strict.
    fn adjust(&self, r: i64, delta: i64) -> Option<PStrictPartition> {
        let mut parts = self.parts.clone();
        let idx = r as usize - 1;
        if idx > parts.len() {
            return None;
        }
        if idx == parts.len() {
            parts.push(0);
        }
        parts[idx] += delta;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        PStrictPartition::new(parts, self.p).ok()
    }

    /// Zero-padded weight (λ_1, .., λ_k, 0).
    pub fn pad(&self) -> Weight {
        let mut v = self.parts.clone();
        v.push(0);
        Weight::new(v).expect("nonempty")
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &l)| (1..=l).map(move |c| Node::new(r as i64 + 1, c)))
    }
}

impl fmt::Display for PStrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        let s: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Node {
    pub row: i64,
    pub col: i64,
}

impl Node {
    pub fn new(row: i64, col: i64) -> Self {
        Node { row, col }
    }
}

/// Reading order: rows top to bottom, right to left within a row.
impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.row.cmp(&other.row).then(other.col.cmp(&self.col))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct NodeLists {
    pub removable: Vec<Node>,
    pub addable: Vec<Node>,
}

impl NodeLists {
    /// Signs in reading order, marked by row, with their nodes.
    pub fn signed(&self) -> Vec<(Sign, Node)> {
        let mut v: Vec<(Sign, Node)> = self
            .removable
            .iter()
            .map(|&a| (Sign::Minus, a))
            .chain(self.addable.iter().map(|&b| (Sign::Plus, b)))
            .collect();
        v.sort_by_key(|x| x.1);
        v
    }

    pub fn signature(&self) -> SigSeq {
        SigSeq(
            self.signed()
                .into_iter()
                .map(|(s, a)| Marked { sign: s, mark: a.row })
                .collect(),
        )
    }
}

/// i-removable and i-addable nodes of a p-strict partition.
pub fn intro_nodes(lambda: &PStrictPartition, i: u32) -> NodeLists {
    let p = lambda.p;
    let mut out = NodeLists::default();
    for r in 1..=lambda.len() as i64 + 1 {
        let l = lambda.row(r);
        if l >= 1 && cont_p(l, p) == i && lambda.adjust(r, -1).is_some() {
            out.removable.push(Node::new(r, l));
        }
        if l >= 2
            && cont_p(l, p) == i
            && cont_p(l - 1, p) == i
            && lambda.adjust(r, -1).is_some()
            && lambda.adjust(r, -2).is_some()
        {
            out.removable.push(Node::new(r, l - 1));
        }
        if cont_p(l + 1, p) == i && lambda.adjust(r, 1).is_some() {
            out.addable.push(Node::new(r, l + 1));
        }
        if cont_p(l + 1, p) == i
            && cont_p(l + 2, p) == i
            && lambda.adjust(r, 1).is_some()
            && lambda.adjust(r, 2).is_some()
        {
            out.addable.push(Node::new(r, l + 2));
        }
    }
    out.removable.sort();
    out.addable.sort();
    out
}

pub fn intro_signature(lambda: &PStrictPartition, i: u32, reduced: bool) -> SigSeq {
    let sig = intro_nodes(lambda, i).signature();
    if reduced {
        crate::sigseq::reduce(&sig)
    } else {
        sig
    }
}

fn in_x_plus(parts: &[i64], p: Characteristic) -> bool {
    parts
        .windows(2)
        .all(|w| w[0] > w[1] || (w[0] == w[1] && p.divides(w[0])))
}

/// β-removable and β-addable nodes of a dominant p-strict weight, on the
/// diagram extending infinitely to the left.
pub fn body_nodes(lambda: &Weight, beta: Residue, p: Characteristic) -> Result<NodeLists> {
    lambda.require_dominant_p_strict(p)?;
    let ok = |r: usize, delta: i64| {
        let mut v = lambda.parts().to_vec();
        v[r - 1] += delta;
        in_x_plus(&v, p)
    };
    let res = |j: i64| res_p(j, p);
    let mut out = NodeLists::default();
    for r in 1..=lambda.n() {
        let l = lambda.at(r);
        let row = r as i64;
        if res(l) == beta && ok(r, -1) {
            out.removable.push(Node::new(row, l));
        }
        if res(l - 1) == beta && res(l) == beta && ok(r, -1) && ok(r, -2) {
            out.removable.push(Node::new(row, l - 1));
        }
        if res(l + 1) == beta && ok(r, 1) {
            out.addable.push(Node::new(row, l + 1));
        }
        if res(l + 2) == beta && res(l + 1) == beta && ok(r, 1) && ok(r, 2) {
            out.addable.push(Node::new(row, l + 2));
        }
    }
    out.removable.sort();
    out.addable.sort();
    Ok(out)
}

pub fn beta_signature(lambda: &Weight, beta: Residue, p: Characteristic, reduced: bool) -> Result<SigSeq> {
    let sig = body_nodes(lambda, beta, p)?.signature();
    Ok(if reduced { crate::sigseq::reduce(&sig) } else { sig })
}

/// Surviving signs of the reduced i-signature with their nodes.
pub fn reduced_nodes(lambda: &PStrictPartition, i: u32) -> Vec<(Sign, Node)> {
    let lists = intro_nodes(lambda, i);
    let signed = lists.signed();
    let (_, keep) = reduce_trace(&lists.signature());
    keep.into_iter().map(|k| signed[k]).collect()
}

pub fn normal_nodes(lambda: &PStrictPartition, i: u32) -> Vec<Node> {
    reduced_nodes(lambda, i)
        .into_iter()
        .filter(|x| x.0 == Sign::Minus)
        .map(|x| x.1)
        .collect()
}

pub fn conormal_nodes(lambda: &PStrictPartition, i: u32) -> Vec<Node> {
    reduced_nodes(lambda, i)
        .into_iter()
        .filter(|x| x.0 == Sign::Plus)
        .map(|x| x.1)
        .collect()
}

pub fn good_node(lambda: &PStrictPartition, i: u32) -> Option<Node> {
    normal_nodes(lambda, i).first().copied()
}

pub fn cogood_node(lambda: &PStrictPartition, i: u32) -> Option<Node> {
    conormal_nodes(lambda, i).last().copied()
}

/// λ with node `a` removed, when that is again a p-strict partition.
pub fn remove_node(lambda: &PStrictPartition, a: Node) -> Option<PStrictPartition> {
    if a.col != lambda.row(a.row) {
        return None;
    }
    lambda.adjust(a.row, -1)
}

/// λ with node `b` added, when that is again a p-strict partition.
pub fn add_node(lambda: &PStrictPartition, b: Node) -> Option<PStrictPartition> {
    if is_next_in_row(lambda, b) {
        lambda.adjust(b.row, 1)
    } else {
        None
    }
}

fn is_next_in_row(lambda: &PStrictPartition, b: Node) -> bool {
    b.row >= 1 && b.col == lambda.row(b.row) + 1
}

/// ẽ_i: remove the i-good node; None stands for zero.
pub fn e_tilde(i: u32, lambda: &PStrictPartition) -> Option<PStrictPartition> {
    good_node(lambda, i).and_then(|a| remove_node(lambda, a))
}

/// f̃_i: add the i-cogood node; None stands for zero.
pub fn f_tilde(i: u32, lambda: &PStrictPartition) -> Option<PStrictPartition> {
    cogood_node(lambda, i).and_then(|b| add_node(lambda, b))
}

/// All p-strict partitions of `size`, in lexicographic order.
pub fn p_strict_partitions(size: i64, p: Characteristic) -> Vec<PStrictPartition> {
    fn go(rest: i64, max: i64, prev: Option<i64>, p: Characteristic, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for x in 1..=max.min(rest) {
            if prev == Some(x) && !p.divides(x) {
                continue;
            }
            cur.push(x);
            go(rest - x, x, Some(x), p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(size, size, None, p, &mut Vec::new(), &mut out);
    out.sort();
    out.into_iter()
        .map(|parts| PStrictPartition { parts, p })
        .collect()
}

pub fn restricted_partitions(size: i64, p: Characteristic) -> Vec<PStrictPartition> {
    p_strict_partitions(size, p)
        .into_iter()
        .filter(|l| l.is_restricted())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrystalEdge(pub PStrictPartition, pub u32, pub PStrictPartition);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrystalGraph {
    pub vertices: Vec<PStrictPartition>,
    pub edges: Vec<CrystalEdge>,
}

/// Vertices: restricted p-strict partitions of sizes 0..=max. Edge
/// λ →i μ whenever λ = ẽ_i μ.
pub fn crystal_graph(p: Characteristic, max: i64) -> CrystalGraph {
    let levels: Vec<Vec<PStrictPartition>> = (0..=max)
        .into_par_iter()
        .map(|k| restricted_partitions(k, p))
        .collect();
    let cap = max.max(1) as u32;
    let edges: Vec<Vec<CrystalEdge>> = levels
        .par_iter()
        .map(|level| {
            let mut es = Vec::new();
            for mu in level {
                for i in contents(p, cap) {
                    if let Some(l) = e_tilde(i, mu) {
                        es.push(CrystalEdge(l, i, mu.clone()));
                    }
                }
            }
            es
        })
        .collect();
    let mut edges: Vec<CrystalEdge> = edges.into_iter().flatten().collect();
    edges.sort_by(|a, b| key(&a.2).cmp(&key(&b.2)).then(a.1.cmp(&b.1)));
    CrystalGraph {
        vertices: levels.into_iter().flatten().collect(),
        edges,
    }
}

fn key(l: &PStrictPartition) -> (i64, &[i64]) {
    (l.size(), l.parts())
}

impl CrystalGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph crystal {\n");
        let name = |l: &PStrictPartition| format!("\"{l}\"");
        for v in &self.vertices {
            s.push_str(&format!("  {};\n", name(v)));
        }
        for CrystalEdge(a, i, b) in &self.edges {
            s.push_str(&format!("  {} -> {} [label=\"{i}\"];\n", name(a), name(b)));
        }
        s.push_str("}\n");
        s
    }

    /// Vertices from which ∅ is reached by following edges backwards.
    pub fn connected_to_empty(&self) -> bool {
        let has_parent: BTreeSet<&PStrictPartition> = self.edges.iter().map(|e| &e.2).collect();
        self.vertices
            .iter()
            .all(|v| v.is_empty() || has_parent.contains(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpinType {
    M,
    Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpinStats {
    pub h_p_prime: usize,
    #[serde(rename = "type")]
    pub spin_type: SpinType,
    /// Node counts by content.
    pub gamma: Vec<usize>,
}

pub fn spin_stats(lambda: &PStrictPartition) -> SpinStats {
    let p = lambda.p;
    let h = lambda.parts.iter().filter(|&&x| !p.divides(x)).count();
    let width = match p.ell() {
        Some(l) => l as usize + 1,
        None => lambda.row(1) as usize,
    };
    let mut gamma = vec![0; width];
    for a in lambda.nodes() {
        gamma[cont_p(a.col, p) as usize] += 1;
    }
    SpinStats {
        h_p_prime: h,
        spin_type: if h % 2 == 0 { SpinType::M } else { SpinType::Q },
        gamma,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchEntry {
    pub partition: PStrictPartition,
    pub node: Node,
    pub content: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchingTables {
    pub restriction_socle: Vec<BranchEntry>,
    pub restriction_specht: Vec<BranchEntry>,
    pub induction_socle: Vec<BranchEntry>,
    pub induction_specht: Vec<BranchEntry>,
}

/// Removals of good/normal nodes and additions of cogood/conormal nodes;
/// only restricted results are listed.
pub fn branching_tables(lambda: &PStrictPartition) -> Result<BranchingTables> {
    lambda.require_restricted()?;
    let p = lambda.p;
    let cap = lambda.row(1) as u32 + 2;
    let mut t = BranchingTables {
        restriction_socle: vec![],
        restriction_specht: vec![],
        induction_socle: vec![],
        induction_specht: vec![],
    };
    let entry = |mu: Option<PStrictPartition>, node: Node, i: u32| {
        mu.filter(|m| m.is_restricted()).map(|partition| BranchEntry {
            partition,
            node,
            content: i,
        })
    };
    for i in contents(p, cap) {
        for a in normal_nodes(lambda, i) {
            if let Some(e) = entry(remove_node(lambda, a), a, i) {
                if Some(a) == good_node(lambda, i) {
                    t.restriction_socle.push(e.clone());
                }
                t.restriction_specht.push(e);
            }
        }
        for b in conormal_nodes(lambda, i) {
            if let Some(e) = entry(add_node(lambda, b), b, i) {
                if Some(b) == cogood_node(lambda, i) {
                    t.induction_socle.push(e.clone());
                }
                t.induction_specht.push(e);
            }
        }
    }
    Ok(t)
}

/// Contents with their reduced signatures and distinguished nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContentReport {
    pub content: u32,
    pub signature: SigSeq,
    pub reduced: SigSeq,
    pub normal: Vec<Node>,
    pub good: Option<Node>,
    pub conormal: Vec<Node>,
    pub cogood: Option<Node>,
}

pub fn content_reports(lambda: &PStrictPartition) -> BTreeMap<u32, ContentReport> {
    let cap = lambda.row(1) as u32 + 2;
    contents(lambda.p, cap)
        .into_iter()
        .map(|i| {
            (
                i,
                ContentReport {
                    content: i,
                    signature: intro_signature(lambda, i, false),
                    reduced: intro_signature(lambda, i, true),
                    normal: normal_nodes(lambda, i),
                    good: good_node(lambda, i),
                    conormal: conormal_nodes(lambda, i),
                    cogood: cogood_node(lambda, i),
                },
            )
        })
        .collect()
}
