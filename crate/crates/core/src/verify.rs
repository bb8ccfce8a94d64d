//! Property suites behind `spinbranch verify`. Each suite sweeps a range
//! of inputs, rechecks the library's outputs against independent
//! computations and collects every mismatch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::base::{Characteristic, Signed, SignedSet, Weight};
use crate::crystal::beta_signature;
use crate::error::{Error, Result};
use crate::indices::{classify_all, extension_plan, non_normal_certificate, primitive_plan};
use crate::poly::{d_max, exact_div, lin_reduce, sigma_apply, x, y, FFamily, GCache, LFunction, Polynomial};
use crate::raising::{bracket_hom, raising_closed_with, Delta, Raising, U0Element};
use crate::sigseq::{
    build_full_flow, flow_analyze, lead_plus_index, partial_flow, r_beta, reduce, resolution_of,
    section_of, split_index, Flow, Marked, Mode, Sign, SigSeq, SignMap, SignValue,
};

pub const SUITES: [&str; 7] = [
    "reduction",
    "flows",
    "poly-identities",
    "raising-oracle",
    "signature-bridge",
    "duality",
    "certificates",
];

pub const DEFAULT_SEED: u64 = 0x5b1d_2019;

/// Ranges requested on the command line; `None` picks the suite default.
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub p: Option<i64>,
    pub n: Option<usize>,
    pub max: Option<i64>,
    pub width: Option<i64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub case: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub suite: String,
    pub parameters: BTreeMap<String, Value>,
    pub cases: u64,
    pub failures: Vec<Failure>,
    pub pass: bool,
}

#[derive(Debug, Default)]
struct Tally {
    cases: u64,
    failures: Vec<Failure>,
}

impl Tally {
    fn check<T: PartialEq + Display>(&mut self, case: impl FnOnce() -> String, expected: &T, actual: &T) {
        self.cases += 1;
        if expected != actual {
            self.failures.push(Failure {
                case: case(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    fn check_res<T: PartialEq + Display>(&mut self, case: impl FnOnce() -> String, r: Result<(T, T)>) {
        match r {
            Ok((e, a)) => self.check(case, &e, &a),
            Err(err) => {
                self.cases += 1;
                self.failures.push(Failure {
                    case: case(),
                    expected: "a value".into(),
                    actual: format!("error: {err}"),
                });
            }
        }
    }

    fn fail(&mut self, case: String, expected: impl Display, actual: impl Display) {
        self.failures.push(Failure {
            case,
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self
    }
}

fn par_tally<T: Send, F>(items: Vec<T>, f: F) -> Tally
where
    F: Fn(T) -> Tally + Sync + Send,
{
    items
        .into_par_iter()
        .map(f)
        .reduce(Tally::default, Tally::merge)
}

fn finish(suite: &str, parameters: BTreeMap<String, Value>, mut t: Tally) -> VerdictReport {
    t.failures.sort();
    VerdictReport {
        suite: suite.to_string(),
        parameters,
        cases: t.cases,
        pass: t.failures.is_empty(),
        failures: t.failures,
    }
}

/// Run one named suite.
pub fn run(suite: &str, opts: &VerifyOptions) -> Result<VerdictReport> {
    match suite {
        "reduction" => reduction(opts),
        "flows" => flows(opts),
        "poly-identities" => poly_identities(opts),
        "raising-oracle" => raising_oracle(opts),
        "signature-bridge" => signature_bridge(opts),
        "duality" => duality(opts),
        "certificates" => certificates(opts),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

fn primes(opts: &VerifyOptions) -> Result<Vec<Characteristic>> {
    match opts.p {
        Some(p) => Ok(vec![Characteristic::new(p)?]),
        None => [3, 5, 7].iter().map(|&p| Characteristic::new(p)).collect(),
    }
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn plist(ps: &[Characteristic]) -> Value {
    Value::from(ps.iter().map(|p| p.get()).collect::<Vec<_>>())
}

fn seq_string(u: &SigSeq) -> String {
    if u.is_empty() {
        "∅".into()
    } else {
        u.to_string()
    }
}

// ---------------------------------------------------------------- reduction

/// Erase adjacent (-, +) pairs in random order until none is left.
fn erase_randomly(u: &SigSeq, rng: &mut ChaCha8Rng) -> SigSeq {
    let mut v = u.0.clone();
    loop {
        let spots: Vec<usize> = (0..v.len().saturating_sub(1))
            .filter(|&k| v[k].sign == Sign::Minus && v[k + 1].sign == Sign::Plus)
            .collect();
        if spots.is_empty() {
            return SigSeq(v);
        }
        let k = spots[rng.gen_range(0..spots.len())];
        v.drain(k..k + 2);
    }
}

fn reduction(opts: &VerifyOptions) -> Result<VerdictReport> {
    let samples = opts.samples.unwrap_or(10_000);
    let max_len = opts.max.unwrap_or(20).max(0) as usize;
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(SigSeq, u64)> = (0..samples)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            let seq = (1..=len as i64)
                .map(|k| if rng.gen_bool(0.5) { Marked::plus(k) } else { Marked::minus(k) })
                .collect();
            (SigSeq(seq), rng.gen())
        })
        .collect();
    let t = par_tally(cases, |(u, sub_seed)| {
        let mut t = Tally::default();
        let canon = reduce(&u);
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
        for k in 0..10 {
            let other = erase_randomly(&u, &mut rng);
            t.check(|| format!("{} order {k}", seq_string(&u)), &seq_string(&canon), &seq_string(&other));
        }
        let (s, r) = canon.shape();
        let plus = u.count(Sign::Plus) as i64;
        let minus = u.count(Sign::Minus) as i64;
        t.check(
            || format!("{} shape", seq_string(&u)),
            &format!("+^s-^r with s-r={}", plus - minus),
            &if canon.is_plus_then_minus() {
                format!("+^s-^r with s-r={}", s as i64 - r as i64)
            } else {
                format!("unsorted {}", seq_string(&canon))
            },
        );
        t
    });
    Ok(finish(
        "reduction",
        params(&[
            ("samples", samples.into()),
            ("max", max_len.into()),
            ("seed", seed.into()),
            ("orders", 10.into()),
        ]),
        t,
    ))
}

// -------------------------------------------------------------------- flows

fn all_maps(mode: Mode, size: usize) -> Vec<SignMap> {
    let alphabet: &[SignValue] = match mode {
        Mode::Single => &SignValue::SINGLE,
        Mode::Pair => &SignValue::PAIR,
    };
    let mut out = vec![vec![]];
    for _ in 0..size {
        out = out
            .into_iter()
            .flat_map(|v: Vec<SignValue>| {
                alphabet.iter().map(move |&a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|v| SignMap::from_slice(mode, &v).expect("alphabet fits mode"))
        .collect()
}

fn flow_string(g: &Flow) -> String {
    let parts: Vec<String> = g.edges.iter().map(|(a, b)| format!("({a},{b})")).collect();
    format!("{{{}}}", parts.join(","))
}

/// Checks the outcome of one constructive operation: an error exactly when
/// the precondition fails, and otherwise a list of postcondition failures.
fn expect_op<T>(
    t: &mut Tally,
    case: &str,
    pre: bool,
    out: Result<T>,
    post: impl FnOnce(T) -> Vec<String>,
) {
    t.cases += 1;
    match (pre, out) {
        (true, Ok(v)) => {
            for msg in post(v) {
                t.fail(case.to_string(), "postcondition", msg);
            }
        }
        (true, Err(e)) => t.fail(case.to_string(), "a result", format!("error: {e}")),
        (false, Ok(_)) => t.fail(case.to_string(), "a precondition error", "a result"),
        (false, Err(_)) => {}
    }
}

fn check_map(u: &SignMap) -> Tally {
    let mut t = Tally::default();
    let red = u.reduced();
    let (s, r) = red.shape();
    let pair = u.mode() == Mode::Pair;
    let name = |op: &str| format!("{op} on {u}");

    expect_op(&mut t, &name("full flow"), s == 0, build_full_flow(u), |g| {
        let rep = flow_analyze(&g, u);
        let want = if pair { r / 2 } else { r };
        let mut bad = vec![];
        if !rep.is_flow || !rep.fully_coherent {
            bad.push(format!("{} is not a fully coherent flow", flow_string(&g)));
        }
        if rep.buds.len() != want {
            bad.push(format!("{} buds, wanted {want}", rep.buds.len()));
        }
        bad
    });

    if pair {
        expect_op(&mut t, &name("split"), s == 0 && r > 0, split_index(u), |a| {
            let mut bad = vec![];
            if u.get(a) != Some(SignValue::MinusMinus) {
                bad.push(format!("u_{a} is not --"));
            }
            let after = u.restrict(|k| k > a).reduced();
            if !(after.is_empty() || (after.shape() == (1, 1) && after.is_plus_then_minus())) {
                bad.push(format!("tail after {a} reduces to {}", seq_string(&after)));
            }
            let upto = u.restrict(|k| k <= a).reduced();
            if upto.shape() != (0, r) {
                bad.push(format!("head up to {a} reduces to {}", seq_string(&upto)));
            }
            bad
        });

        let plus_minus = s == 1;
        expect_op(&mut t, &name("lead plus"), plus_minus, lead_plus_index(u), |a| {
            let mut bad = vec![];
            if u.get(a) != Some(SignValue::PlusMinus) {
                bad.push(format!("u_{a} is not +-"));
            }
            if !u.restrict(|k| k < a).reduced().is_empty() {
                bad.push(format!("prefix before {a} does not cancel"));
            }
            bad
        });

        expect_op(&mut t, &name("section"), plus_minus, section_of(u), |sec| {
            let mut bad = vec![];
            if sec.is_empty() || sec.windows(2).any(|w| w[0] >= w[1]) {
                bad.push(format!("section {sec:?} is not a nonempty increasing sequence"));
                return bad;
            }
            let mut lo = i64::MIN;
            for &a in &sec {
                if u.get(a) != Some(SignValue::PlusMinus) {
                    bad.push(format!("u_{a} is not +-"));
                }
                if !u.restrict(|k| k > lo && k < a).reduced().is_empty() {
                    bad.push(format!("gap before {a} does not cancel"));
                }
                lo = a;
            }
            let tail = u.restrict(|k| k > lo).reduced();
            if tail.shape() != (0, r - 1) {
                bad.push(format!("tail reduces to {}", seq_string(&tail)));
            }
            bad
        });

        expect_op(&mut t, &name("resolution"), plus_minus, resolution_of(u), |g| {
            let rep = flow_analyze(&g, u);
            let mut bad = vec![];
            if !rep.is_weak_flow || !rep.fully_coherent || rep.is_flow {
                bad.push(format!("{} has profile {rep:?}", flow_string(&g)));
            }
            if let Ok(sec) = section_of(u) {
                let loops: BTreeSet<(i64, i64)> = g.edges.iter().copied().filter(|e| e.0 == e.1).collect();
                let want: BTreeSet<(i64, i64)> = sec.iter().map(|&a| (a, a)).collect();
                if loops != want {
                    bad.push(format!("loops {loops:?} differ from the section {sec:?}"));
                }
            }
            bad
        });
    }

    let need = if pair { 2 } else { 1 };
    expect_op(&mut t, &name("partial flow"), s >= need, partial_flow(u), |(j, g)| {
        let mut bad = vec![];
        let top = j.iter().next_back().copied();
        let beginning = u.domain().filter(|&k| top.is_some_and(|m| k <= m)).collect::<BTreeSet<_>>();
        if j.is_empty() || j != beginning {
            bad.push(format!("{j:?} is not a beginning of the domain"));
            return bad;
        }
        let uj = u.restrict(|k| j.contains(&k));
        let rj = uj.reduced();
        if rj.shape() != (need, 0) {
            bad.push(format!("J reduces to {}", seq_string(&rj)));
        }
        let rep = flow_analyze(&g, &uj);
        if !rep.is_flow || !rep.coherent || rep.fully_coherent || !rep.buds.is_empty() {
            bad.push(format!("{} has profile {rep:?}", flow_string(&g)));
        }
        bad
    });
    t
}

fn flows(opts: &VerifyOptions) -> Result<VerdictReport> {
    let n = opts.n.unwrap_or(6);
    let mut maps = vec![];
    for size in 0..=n {
        maps.extend(all_maps(Mode::Single, size));
        maps.extend(all_maps(Mode::Pair, size));
    }
    let t = par_tally(maps, |u| check_map(&u));
    Ok(finish("flows", params(&[("n", n.into())]), t))
}

// ---------------------------------------------------------- poly-identities

type Set = BTreeSet<i64>;

fn subsets(lo: i64, hi: i64) -> Vec<Set> {
    let n = (hi - lo + 1).max(0);
    (0..1u64 << n)
        .map(|m| (0..n).filter(|b| m >> b & 1 == 1).map(|b| lo + b).collect())
        .collect()
}

fn rng(a: i64, b: i64) -> Set {
    (a..=b).collect()
}

fn uni(a: &Set, b: &Set) -> Set {
    a.union(b).copied().collect()
}

fn set_str(s: &Set) -> String {
    let v: Vec<String> = s.iter().map(|t| t.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

#[derive(Debug, Clone, Copy)]
enum PolyGroup {
    Sigma,
    Division,
    Ideal,
    Invariance,
    G1,
    G2Base,
    G2Shift,
    G2Tail,
}

fn sigma_generators(lo: i64, hi: i64) -> Vec<Polynomial> {
    (lo..=hi).flat_map(|t| [x(t), y(t)]).collect()
}

fn compose(ops: &[(i64, i64, i64)], f: &Polynomial) -> Result<Polynomial> {
    // ops applied right to left, as written
    let mut g = f.clone();
    for &(a, b, k) in ops.iter().rev() {
        g = sigma_apply(a, b, k, &g)?;
    }
    Ok(g)
}

fn poly_sigma(i: i64, j: i64, t: &mut Tally) {
    let gens = sigma_generators(i, j + 1);
    // a < b < c = j
    let c = j;
    for a in i..c {
        for b in a + 1..c {
            for e in 0..2 {
                for h in 0..2 {
                    for z in &gens {
                        t.check_res(
                            || format!("sigma braid a={a} b={b} c={c} e={e} h={h} on {z}"),
                            (|| {
                                let l = compose(&[(a, b, b + e), (a, c, c + h)], z)?;
                                let r = compose(&[(b, c, c + h), (a, b, b + e)], z)?;
                                Ok((r, l))
                            })(),
                        );
                    }
                }
            }
        }
    }
    // a < b ≤ c < d = j, b + e ≤ c
    let d = j;
    for a in i..d {
        for b in a + 1..d {
            for c in b..d {
                for e in 0..2 {
                    if b + e > c {
                        continue;
                    }
                    for h in 0..2 {
                        for z in &gens {
                            t.check_res(
                                || format!("sigma commute a={a} b={b} c={c} d={d} e={e} h={h} on {z}"),
                                (|| {
                                    let l = compose(&[(a, b, b + e), (c, d, d + h)], z)?;
                                    let r = compose(&[(c, d, d + h), (a, b, b + e)], z)?;
                                    Ok((r, l))
                                })(),
                            );
                        }
                    }
                }
            }
        }
    }
}

fn poly_division(i: i64, j: i64, t: &mut Tally) {
    // (id - σ_{a,j}^k) f is divisible by x_a - x_j for quadratic f
    let gens = sigma_generators(i, j);
    let b = j;
    for a in i..b {
        for k in a..=b + 1 {
            for (u, f1) in gens.iter().enumerate() {
                for f2 in &gens[u..] {
                    let f = f1 * f2;
                    t.cases += 1;
                    let res = sigma_apply(a, b, k, &f).and_then(|g| exact_div(&(&f - &g), a, b));
                    if let Err(e) = res {
                        t.fail(format!("division a={a} b={b} k={k} f={f}"), "exact quotient", e);
                    }
                }
            }
        }
    }
}

/// (D, l) pairs of the g1 and g2 families on (i..j].
fn families(i: i64, j: i64) -> Vec<(String, Set, LFunction)> {
    let mut out = vec![(format!("g1_{{{i},{j}}}"), Set::new(), LFunction::constant(i, j, 1))];
    for q in i + 1..=j {
        for k in i..=q {
            out.push((format!("g2_{{{i},{k},{q},{j}}}"), Set::from([k]), LFunction::l2(i, k, q, j)));
        }
    }
    out
}

fn injections(dom: &[i64], targets: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if cur.len() == dom.len() {
        out.push(cur.clone());
        return;
    }
    for &v in targets {
        if !cur.contains(&v) {
            cur.push(v);
            injections(dom, targets, cur, out);
            cur.pop();
        }
    }
}

fn poly_ideal(i: i64, j: i64, t: &mut Tally) {
    // f(S) modulo the ideal generated by linear forms in y_{φ(t)}
    for (name, d, l) in families(i, j) {
        let mut fam = match FFamily::new(i, j, d.clone(), l.clone()) {
            Ok(f) => f,
            Err(e) => {
                t.fail(format!("ideal {name}"), "a family", e);
                continue;
            }
        };
        let targets: Vec<i64> = (i + 1..=j).collect();
        for s in subsets(i + 1, j) {
            let f = match fam.eval(&s) {
                Ok(f) => f,
                Err(e) => {
                    t.fail(format!("ideal {name} S={}", set_str(&s)), "a polynomial", e);
                    continue;
                }
            };
            let sv: Vec<i64> = s.iter().copied().collect();
            for cut in 0..=sv.len() {
                let r = &sv[cut..];
                if r.iter().any(|&u| d.contains(&u) && l.at(u) == 1) {
                    continue;
                }
                let mut phis = vec![];
                injections(r, &targets, &mut vec![], &mut phis);
                for phi in phis {
                    if r.iter().zip(&phi).any(|(&u, &v)| v < u + l.at(u) as i64) {
                        continue;
                    }
                    let mut sub = vec![];
                    let mut hit = false;
                    for (&u, &v) in r.iter().zip(&phi) {
                        if (u + l.at(u) as i64..v).any(|z| d.contains(&z)) {
                            hit = true;
                            sub.push((v, d_max(&d, i, v)));
                        } else if u != j {
                            sub.push((v, u));
                        }
                    }
                    let expected = if hit {
                        Polynomial::zero()
                    } else if cut == 0 {
                        let image: Set = phi.iter().copied().collect();
                        let mut prod = Polynomial::one();
                        for u in i + 1..=j {
                            if !image.contains(&u) {
                                prod = &prod * &(&x(d_max(&d, i, u)) - &y(u));
                            }
                        }
                        prod
                    } else {
                        continue;
                    };
                    t.check_res(
                        || format!("ideal {name} S={} R={r:?} phi={phi:?}", set_str(&s)),
                        (|| Ok((lin_reduce(&expected, &sub)?, lin_reduce(&f, &sub)?)))(),
                    );
                }
            }
        }
    }
}

fn poly_invariance(i: i64, j: i64, t: &mut Tally) {
    // σ_{a,b}^{b+e} fixes f_{c,d}(S) when b + e ≤ c; here c = i, d = j
    let c = i;
    for (name, d, l) in families(i, j) {
        let mut fam = match FFamily::new(i, j, d, l) {
            Ok(f) => f,
            Err(e) => {
                t.fail(format!("invariance {name}"), "a family", e);
                continue;
            }
        };
        for s in subsets(i + 1, j) {
            let f = match fam.eval(&s) {
                Ok(f) => f,
                Err(e) => {
                    t.fail(format!("invariance {name} S={}", set_str(&s)), "a polynomial", e);
                    continue;
                }
            };
            for a in c - 3..c {
                for b in a + 1..=c {
                    for e in 0..2 {
                        if b + e > c {
                            continue;
                        }
                        t.check_res(
                            || format!("invariance {name} S={} a={a} b={b} e={e}", set_str(&s)),
                            sigma_apply(a, b, b + e, &f).map(|g| (f.clone(), g)),
                        );
                    }
                }
            }
        }
    }
}

fn poly_g1(i: i64, j: i64, t: &mut Tally) {
    let mut c = GCache::new();
    let f0 = &x(i) - &y(i + 1);
    t.check_res(
        || format!("g1 full i={i} j={j}"),
        c.g1(i, j, &rng(i + 1, j - 1)).map(|g| (f0.clone(), g)),
    );
    if i + 1 < j {
        for s in subsets(i + 2, j - 1) {
            let s1 = uni(&s, &rng(i + 1, i + 1));
            t.check_res(
                || format!("g1 step i={i} j={j} S={}", set_str(&s)),
                (|| {
                    let l = &(&f0 * &c.g1(i + 1, j, &s)?) + &(&(&x(i) - &x(i + 1)) * &c.g1(i, j, &s1)?);
                    Ok((c.g1(i, j, &s)?, l))
                })(),
            );
        }
    }
    for m in i + 2..j {
        for s in subsets(m + 1, j - 1) {
            let x2 = uni(&uni(&rng(i + 1, m - 2), &rng(m, m)), &s);
            let x3 = uni(&rng(i + 1, m), &s);
            let rhs = uni(&rng(i + 1, m - 1), &s);
            t.check_res(
                || format!("g1 middle i={i} m={m} j={j} S={}", set_str(&s)),
                (|| {
                    let l = &(&(&f0 * &c.g1(m, j, &s)?) + &c.g1(i, j, &x2)?)
                        + &(&(&x(m - 1) - &x(m)) * &c.g1(i, j, &x3)?);
                    Ok((c.g1(i, j, &rhs)?, l))
                })(),
            );
        }
    }
}

fn poly_g2_base(i: i64, j: i64, t: &mut Tally) {
    let mut c = GCache::new();
    let full = rng(i + 1, j);
    for k in [i, i + 1] {
        t.check_res(
            || format!("g2 unit i={i} k={k} j={j}"),
            c.g2(i, k, j, j, &full).map(|g| (Polynomial::one(), g)),
        );
    }
    if i + 1 < j {
        for s in subsets(i + 2, j - 1) {
            let s1 = uni(&s, &rng(i + 1, i + 1));
            t.check_res(
                || format!("g2 from g1 sum i={i} j={j} S={}", set_str(&s)),
                (|| {
                    let l = &c.g1(i + 1, j, &s)? + &c.g1(i, j, &s1)?;
                    Ok((c.g2(i, i, i + 1, j, &s1)?, l))
                })(),
            );
            t.check_res(
                || format!("g2 from g1 i={i} j={j} S={}", set_str(&s)),
                (|| Ok((c.g2(i, i + 1, i + 1, j, &s1)?, c.g1(i + 1, j, &s)?)))(),
            );
        }
    }
}

fn poly_g2_shift(i: i64, j: i64, t: &mut Tally) {
    let mut c = GCache::new();
    let f0 = &x(i) - &y(i + 1);
    let dx = &x(i) - &x(i + 1);
    for q in i + 2..=j {
        for s in subsets(i + 2, j) {
            let s1 = uni(&s, &rng(i + 1, i + 1));
            let ss = set_str(&s);
            t.check_res(
                || format!("g2 shift a q={q} j={j} S={ss}"),
                (|| {
                    let l = &(&(&x(i + 1) - &y(i + 1)) * &c.g2(i + 1, i + 1, q, j, &s)?)
                        + &(&dx * &c.g2(i, i, q, j, &s1)?);
                    Ok((c.g2(i, i, q, j, &s)?, l))
                })(),
            );
            t.check_res(
                || format!("g2 shift b q={q} j={j} S={ss}"),
                (|| Ok((c.g2(i, i + 1, q, j, &s1)?, c.g2(i + 1, i + 1, q, j, &s)?)))(),
            );
            if s.contains(&(i + 2)) {
                t.check_res(
                    || format!("g2 shift c q={q} j={j} S={ss}"),
                    (|| Ok((c.g2(i, i + 2, q, j, &s)?, &f0 * &c.g2(i + 1, i + 2, q, j, &s)?)))(),
                );
            }
            for k in i + 2..=q {
                t.check_res(
                    || format!("g2 shift d k={k} q={q} j={j} S={ss}"),
                    (|| {
                        let l = &(&f0 * &c.g2(i + 1, k, q, j, &s)?) + &(&dx * &c.g2(i, k, q, j, &s1)?);
                        Ok((c.g2(i, k, q, j, &s)?, l))
                    })(),
                );
            }
        }
    }
}

fn poly_g2_tail(i: i64, j: i64, t: &mut Tally) {
    let mut c = GCache::new();
    let f0 = &x(i) - &y(i + 1);
    for q in i + 2..j {
        for s in subsets(q + 1, j - 1) {
            let big = uni(&rng(i + 1, q), &s);
            for ip in [i, i + 1] {
                t.check_res(
                    || format!("g2 tail i'={ip} q={q} j={j} S={}", set_str(&s)),
                    (|| {
                        let l = &c.g1(q, j, &s)? + &c.g2(i, ip, q - 1, j, &big)?;
                        Ok((c.g2(i, ip, q, j, &big)?, l))
                    })(),
                );
            }
        }
    }
    for q in i + 3..=j {
        for m in i + 2..q {
            let dm = &x(m - 1) - &x(m);
            for s in subsets(m + 1, j) {
                let x2 = uni(&uni(&rng(i + 1, m - 2), &rng(m, m)), &s);
                let x3 = uni(&rng(i + 1, m), &s);
                let rhs = uni(&rng(i + 1, m - 1), &s);
                let ss = set_str(&s);
                for (tag, k, lead, with_x2) in [
                    ("a", i, &x(m) - &y(m), true),
                    ("b", i + 1, &x(m) - &y(m), i + 1 < m - 1),
                ] {
                    t.check_res(
                        || format!("g2 middle {tag} m={m} q={q} j={j} S={ss}"),
                        (|| {
                            let mut l = &lead * &c.g2(m, m, q, j, &s)?;
                            if with_x2 {
                                l += &c.g2(i, k, q, j, &x2)?;
                            }
                            l += &(&dm * &c.g2(i, k, q, j, &x3)?);
                            Ok((c.g2(i, k, q, j, &rhs)?, l))
                        })(),
                    );
                }
                t.check_res(
                    || format!("g2 middle c m={m} q={q} j={j} S={ss}"),
                    (|| Ok((c.g2(i, m, q, j, &x2)?, &f0 * &c.g2(m, m, q, j, &s)?)))(),
                );
                if s.contains(&(m + 1)) && m < q {
                    t.check_res(
                        || format!("g2 middle d m={m} q={q} j={j} S={ss}"),
                        (|| Ok((c.g2(i, m + 1, q, j, &rhs)?, &f0 * &c.g2(m, m + 1, q, j, &s)?)))(),
                    );
                }
                for k in m + 2..=q {
                    t.check_res(
                        || format!("g2 middle e k={k} m={m} q={q} j={j} S={ss}"),
                        (|| {
                            let l = &(&(&f0 * &c.g2(m, k, q, j, &s)?) + &c.g2(i, k, q, j, &x2)?)
                                + &(&dm * &c.g2(i, k, q, j, &x3)?);
                            Ok((c.g2(i, k, q, j, &rhs)?, l))
                        })(),
                    );
                }
            }
        }
    }
}

fn poly_identities(opts: &VerifyOptions) -> Result<VerdictReport> {
    let width = opts.width.unwrap_or(4);
    if !(1..=12).contains(&width) {
        return Err(Error::BadParameters(format!("width must be in 1..=12, got {width}")));
    }
    let i = 1;
    let groups = [
        PolyGroup::Sigma,
        PolyGroup::Division,
        PolyGroup::Ideal,
        PolyGroup::Invariance,
        PolyGroup::G1,
        PolyGroup::G2Base,
        PolyGroup::G2Shift,
        PolyGroup::G2Tail,
    ];
    let jobs: Vec<(PolyGroup, i64)> = groups
        .iter()
        .flat_map(|&g| (i + 1..=i + width).map(move |j| (g, j)))
        .collect();
    let t = par_tally(jobs, |(g, j)| {
        let mut t = Tally::default();
        match g {
            PolyGroup::Sigma => poly_sigma(i, j, &mut t),
            PolyGroup::Division => poly_division(i, j, &mut t),
            PolyGroup::Ideal => poly_ideal(i, j, &mut t),
            PolyGroup::Invariance => poly_invariance(i, j, &mut t),
            PolyGroup::G1 => poly_g1(i, j, &mut t),
            PolyGroup::G2Base => poly_g2_base(i, j, &mut t),
            PolyGroup::G2Shift => poly_g2_shift(i, j, &mut t),
            PolyGroup::G2Tail => poly_g2_tail(i, j, &mut t),
        }
        t
    });
    Ok(finish("poly-identities", params(&[("width", width.into())]), t))
}

// ----------------------------------------------------------- raising-oracle

/// Signed (i..j]-sets containing j or j̄, all even or with one odd element.
pub fn admissible_sets(i: i64, j: i64) -> Vec<SignedSet> {
    let inner: Vec<i64> = (i + 1..j).collect();
    let mut out = vec![];
    for mask in 0..1u32 << inner.len() {
        let mut all: Vec<i64> = inner
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &t)| t)
            .collect();
        all.push(j);
        out.push(SignedSet::from_parts(&all, &[]).expect("distinct elements"));
        for &q in &all {
            let ev: Vec<i64> = all.iter().copied().filter(|&t| t != q).collect();
            out.push(SignedSet::from_parts(&ev, &[q]).expect("distinct elements"));
        }
    }
    out
}

fn raising_case(i: i64, j: i64, m: &SignedSet) -> Tally {
    let mut t = Tally::default();
    let mut rec = Raising::new();
    let mut cache = GCache::new();
    for eps in 0..2u8 {
        for d in Delta::all(i, j) {
            t.check_res(
                || format!("i={i} j={j} M={m} eps={eps} delta={d:?}"),
                (|| {
                    let a = rec.p(i, j, eps, &d, m)?;
                    let b = raising_closed_with(&mut cache, i, j, eps, &d, m)?;
                    Ok((b, a))
                })(),
            );
        }
    }
    // the τ-sum identity, for a single odd element q̄
    let q = match m.odds().next() {
        Some(q) if m.odd_count() == 1 => q,
        _ => return t,
    };
    let s: Set = (i + 1..=j).filter(|&u| !m.contains(Signed::Even(u))).collect();
    let base = match cache
        .g2(i, i, q, j, &s)
        .and_then(|g| bracket_hom(&g, j as usize))
    {
        Ok(b) => b.mul(&U0Element::h(i)),
        Err(e) => {
            t.fail(format!("i={i} j={j} N={m} sum"), "a polynomial", e);
            return t;
        }
    };
    for eps in 0..2u8 {
        for xi in 0..2u8 {
            for d in Delta::all(i, j) {
                let sd = d.total();
                t.check_res(
                    || format!("i={i} j={j} N={m} sum eps={eps} xi={xi} delta={d:?}"),
                    (|| {
                        let mut lhs = U0Element::zero();
                        for tau in 0..2u8 {
                            let sigma = eps ^ d.at(i) ^ xi ^ tau;
                            let sign = (xi ^ tau ^ d.at(i)) & (eps ^ sd ^ xi);
                            let p = rec.p(i, j, sigma, &d.with(i, tau), m)?;
                            lhs = lhs.add(&p.scale(if sign == 1 { -1 } else { 1 }));
                        }
                        let rhs = if xi == eps ^ sd { base.scale(2) } else { U0Element::zero() };
                        Ok((rhs, lhs))
                    })(),
                );
            }
        }
    }
    t
}

fn raising_oracle(opts: &VerifyOptions) -> Result<VerdictReport> {
    let width = opts.width.unwrap_or(4);
    if !(1..=8).contains(&width) {
        return Err(Error::BadParameters(format!("width must be in 1..=8, got {width}")));
    }
    let i = 1;
    let jobs: Vec<(i64, SignedSet)> = (i + 1..=i + width)
        .flat_map(|j| admissible_sets(i, j).into_iter().map(move |m| (j, m)))
        .collect();
    let t = par_tally(jobs, |(j, m)| raising_case(i, j, &m));
    Ok(finish("raising-oracle", params(&[("width", width.into())]), t))
}

// --------------------------------------------------------- signature-bridge

fn random_weight(rng: &mut ChaCha8Rng, n_max: usize, lo: i64, hi: i64) -> Weight {
    let n = rng.gen_range(1..=n_max.max(1));
    Weight::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect()).expect("nonempty")
}

fn random_dominant(rng: &mut ChaCha8Rng, p: Characteristic, n_max: usize, hi: i64) -> Weight {
    loop {
        let w = random_weight(rng, n_max, 0, hi);
        let mut parts = w.parts().to_vec();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let w = Weight::new(parts).expect("nonempty");
        if w.is_dominant_p_strict(p) {
            return w;
        }
    }
}

fn signature_bridge(opts: &VerifyOptions) -> Result<VerdictReport> {
    let ps = primes(opts)?;
    let n = opts.n.unwrap_or(6);
    let hi = opts.max.unwrap_or(12);
    let samples = opts.samples.unwrap_or(10_000);
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = vec![];
    for &p in &ps {
        if p.is_zero() {
            return Err(Error::CharacteristicZero);
        }
        for _ in 0..samples {
            jobs.push((p, random_dominant(&mut rng, p, n, hi)));
        }
    }
    let t = par_tally(jobs, |(p, w)| {
        let mut t = Tally::default();
        for b in 0..p.get() as i128 {
            let beta = p.reduce(b);
            t.check_res(
                || format!("p={p} λ={w} β={beta}"),
                beta_signature(&w, beta, p, true).map(|nodes| {
                    (seq_string(&r_beta(&w, beta, p).reduced()), seq_string(&nodes))
                }),
            );
        }
        t
    });
    Ok(finish(
        "signature-bridge",
        params(&[
            ("p", plist(&ps)),
            ("n", n.into()),
            ("max", hi.into()),
            ("samples", samples.into()),
            ("seed", seed.into()),
        ]),
        t,
    ))
}

// ------------------------------------------------------------------ duality

fn random_jobs(opts: &VerifyOptions) -> Result<(Vec<Characteristic>, usize, i64, usize, u64, Vec<(Characteristic, Weight)>)> {
    let ps = primes(opts)?;
    let n = opts.n.unwrap_or(6);
    let hi = opts.max.unwrap_or(12);
    let samples = opts.samples.unwrap_or(10_000);
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jobs = (0..samples)
        .map(|_| {
            let p = ps[rng.gen_range(0..ps.len())];
            (p, random_weight(&mut rng, n, -hi, hi))
        })
        .collect();
    Ok((ps, n, hi, samples, seed, jobs))
}

fn duality_case(p: Characteristic, w: &Weight) -> Tally {
    let mut t = Tally::default();
    let n = w.n();
    let cl = classify_all(w, p);
    let dual = classify_all(&w.minus_w0(), p);
    for i in 1..=n {
        let c = cl[i - 1];
        let case = |what: &str| format!("p={p} λ={w} i={i} {what}");
        let beta = w.residue(i, p);
        let u = r_beta(w, beta, p);
        let whole = u.reduced();
        t.check(|| case("tensor normal"), &whole.contains(Marked::minus(i as i64)), &c.tensor_normal);
        if i < n {
            let nn = n as i64;
            let head = u.restrict(|k| k < nn).reduced();
            let has = head.contains(Marked::minus(i as i64));
            let last = head.0.last() == Some(&Marked::minus(i as i64));
            let both_zero = p.divides(w.at(i)) && p.divides(w.at(n));
            t.check(|| case("normal"), &(has && !(both_zero && last)), &c.normal);
            if p.divides(w.at(n)) {
                t.check(|| case("normal vs tensor normal"), &c.tensor_normal, &c.normal);
            }
        }
        let wi = n - i;
        t.check(|| case("conormal duality"), &dual[wi].tensor_normal, &c.tensor_conormal);
        t.check(|| case("cogood duality"), &dual[wi].tensor_cogood, &c.tensor_good);
        let lower = classify_all(&w.shift(i, -1), p);
        let upper = classify_all(&w.shift(i, 1), p);
        t.check(
            || case("good via lowered weight"),
            &(c.tensor_normal && lower[i - 1].tensor_conormal),
            &c.tensor_good,
        );
        t.check(
            || case("cogood via raised weight"),
            &(c.tensor_conormal && upper[i - 1].tensor_normal),
            &c.tensor_cogood,
        );
        t.check(|| case("good is cogood below"), &lower[i - 1].tensor_cogood, &c.tensor_good);
    }
    // at most one good and one tensor good index per residue, the first normal one
    let mut seen: BTreeMap<crate::base::Residue, (Option<usize>, Option<usize>)> = BTreeMap::new();
    for (k, c) in cl.iter().enumerate() {
        let e = seen.entry(c.residue).or_default();
        let want_good = c.normal && e.0.is_none();
        let want_tgood = c.tensor_normal && e.1.is_none();
        t.check(|| format!("p={p} λ={w} i={} good", k + 1), &want_good, &c.good);
        t.check(|| format!("p={p} λ={w} i={} tensor good", k + 1), &want_tgood, &c.tensor_good);
        if c.normal && e.0.is_none() {
            e.0 = Some(k);
        }
        if c.tensor_normal && e.1.is_none() {
            e.1 = Some(k);
        }
    }
    t
}

fn duality(opts: &VerifyOptions) -> Result<VerdictReport> {
    let (ps, n, hi, samples, seed, jobs) = random_jobs(opts)?;
    let t = par_tally(jobs, |(p, w)| duality_case(p, &w));
    Ok(finish(
        "duality",
        params(&[
            ("p", plist(&ps)),
            ("n", n.into()),
            ("max", hi.into()),
            ("samples", samples.into()),
            ("seed", seed.into()),
        ]),
        t,
    ))
}

// ------------------------------------------------------------- certificates

fn certificate_case(p: Characteristic, w: &Weight) -> Tally {
    let mut t = Tally::default();
    let n = w.n();
    let cl = classify_all(w, p);
    for i in 1..n {
        let normal = cl[i - 1].normal;
        let case = |what: &str| format!("p={p} λ={w} i={i} {what}");
        t.cases += 1;
        match non_normal_certificate(w, i, p) {
            Ok(c) if normal => t.fail(case("certificate"), "no certificate", format!("case {:?}", c.case_tag)),
            Ok(c) => {
                if c.c.is_zero() {
                    t.fail(case("certificate"), "c ≠ 0", "c = 0");
                }
                if let Err(e) = c.validate(w, i, p) {
                    t.fail(case("certificate"), "valid", e);
                }
            }
            Err(e) if !normal => t.fail(case("certificate"), "a certificate", e),
            Err(_) => {}
        }
        t.cases += 1;
        match primitive_plan(w, i, p) {
            Ok(_) if !normal => t.fail(case("primitive plan"), "an error", "a plan"),
            Ok(pl) => {
                if let Err(e) = pl.validate(w, p) {
                    t.fail(case("primitive plan"), "valid", e);
                } else if pl.target() != Some(i) {
                    t.fail(case("primitive plan"), format!("target {i}"), format!("{:?}", pl.target()));
                }
            }
            Err(e) if normal => t.fail(case("primitive plan"), "a plan", e),
            Err(_) => {}
        }
        for h in 1..i {
            let pre = cl[h - 1].normal && cl[h - 1].residue == cl[i - 1].residue;
            let case = || format!("p={p} λ={w} h={h} i={i} extension plan");
            t.cases += 1;
            match extension_plan(w, h, i, p) {
                Ok(_) if !pre => t.fail(case(), "an error", "a plan"),
                Ok(pl) => {
                    if let Err(e) = pl.validate(w, p) {
                        t.fail(case(), "valid", e);
                    } else if pl.target() != Some(h) {
                        t.fail(case(), format!("target {h}"), format!("{:?}", pl.target()));
                    }
                }
                Err(e) if pre => t.fail(case(), "a plan", e),
                Err(_) => {}
            }
        }
    }
    t
}

fn certificates(opts: &VerifyOptions) -> Result<VerdictReport> {
    let (ps, n, hi, samples, seed, jobs) = random_jobs(opts)?;
    let t = par_tally(jobs, |(p, w)| certificate_case(p, &w));
    Ok(finish(
        "certificates",
        params(&[
            ("p", plist(&ps)),
            ("n", n.into()),
            ("max", hi.into()),
            ("samples", samples.into()),
            ("seed", seed.into()),
        ]),
        t,
    ))
}
