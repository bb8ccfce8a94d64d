//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::{BTreeSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use spinbranch::base::Characteristic;
use spinbranch::crystal::*;
use spinbranch::sigseq::{Marked, Sign, SigSeq};
use spinbranch::verify::{run, VerifyOptions};

type Outcome = Result<(), String>;

fn ch(p: i64) -> Characteristic {
    Characteristic::new(p).unwrap()
}

fn signs(s: &SigSeq) -> String {
    s.iter().map(|m| if m.sign == Sign::Plus { '+' } else { '-' }).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn worked_example() -> Outcome {
    let p = ch(5);
    let lam = PStrictPartition::new(vec![16, 11, 10, 10, 9, 5, 1], p).map_err(|e| e.to_string())?;
    let pattern = [0, 1, 2, 1, 0];
    for col in 1..=16 {
        let want = pattern[(col as usize - 1) % 5];
        ensure(cont_p(col, p) == want, || format!("content of column {col}"))?;
    }
    let raw = intro_signature(&lam, 0, false);
    ensure(signs(&raw) == "---++--", || format!("raw signature {raw}"))?;
    let red = intro_signature(&lam, 0, true);
    ensure(signs(&red) == "---", || format!("reduced signature {red}"))?;
    ensure(good_node(&lam, 0) == Some(Node::new(1, 16)), || "good node".into())?;
    let e = e_tilde(0, &lam).map(|m| m.parts().to_vec());
    ensure(e == Some(vec![15, 11, 10, 10, 9, 5, 1]), || format!("ẽ_0 gave {e:?}"))?;
    ensure(conormal_nodes(&lam, 0).is_empty(), || "found a 0-conormal node".into())
}

fn suite(name: &str, opts: VerifyOptions) -> Outcome {
    let r = run(name, &opts).map_err(|e| e.to_string())?;
    ensure(r.pass && r.cases > 0, || {
        format!("{} of {} cases failed, first: {:?}", r.failures.len(), r.cases, r.failures.first())
    })
}

fn dictionary() -> Outcome {
    for p in [3, 5] {
        let c = ch(p);
        for n in 0..=12 {
            for parts in common::partitions(n) {
                let strict = parts.windows(2).all(|w| w[0] != w[1] || w[0] % p == 0);
                if !strict {
                    continue;
                }
                let lam = PStrictPartition::new(parts, c).map_err(|e| e.to_string())?;
                let w = lam.pad();
                for i in contents(c, 0) {
                    let mut want = intro_signature(&lam, i, true);
                    if i == 0 {
                        want.0.push(Marked::minus(w.n() as i64));
                    }
                    let got = beta_signature(&w, beta_of(i, c), c, true).map_err(|e| e.to_string())?;
                    ensure(got == want, || format!("p={p} λ={lam} i={i}: {got} vs {want}"))?;
                }
            }
        }
    }
    Ok(())
}

fn crystal_consistency() -> Outcome {
    for p in [3, 5] {
        let c = ch(p);
        let is = contents(c, 0);
        let mut seen: BTreeSet<PStrictPartition> = BTreeSet::new();
        let mut queue = VecDeque::from([PStrictPartition::empty(c)]);
        while let Some(l) = queue.pop_front() {
            if l.size() > 10 || !seen.insert(l.clone()) {
                continue;
            }
            for &i in &is {
                if let Some(m) = f_tilde(i, &l) {
                    ensure(e_tilde(i, &m).as_ref() == Some(&l), || format!("p={p}: ẽ_{i} f̃_{i} {l} ≠ {l}"))?;
                    queue.push_back(m);
                }
            }
        }
        for n in 0..=10 {
            let reached: Vec<Vec<i64>> = seen.iter().filter(|l| l.size() == n).map(|l| l.parts().to_vec()).collect();
            let mut reached = reached;
            reached.sort();
            let direct = common::restricted_p_strict(n, p);
            ensure(reached == direct, || {
                format!("p={p} n={n}: reached {} partitions, enumerated {}", reached.len(), direct.len())
            })?;
            for l in restricted_partitions(n, c) {
                if n > 0 {
                    ensure(is.iter().any(|&i| good_node(&l, i).is_some()), || format!("p={p}: {l} has no good node"))?;
                }
                for &i in &is {
                    if let Some(m) = f_tilde(i, &l) {
                        ensure(e_tilde(i, &m).as_ref() == Some(&l), || format!("p={p}: ẽ_{i} f̃_{i} {l}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let samples = Some(10_000);
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome>)> = vec![
        ("worked example", Duration::from_secs(1), Box::new(worked_example)),
        (
            "signature bridge",
            Duration::from_secs(120),
            Box::new(move || suite("signature-bridge", VerifyOptions { n: Some(6), max: Some(12), samples, ..Default::default() })),
        ),
        ("content dictionary", Duration::from_secs(60), Box::new(dictionary)),
        (
            "reduction",
            Duration::MAX,
            Box::new(move || suite("reduction", VerifyOptions { max: Some(20), samples, ..Default::default() })),
        ),
        (
            "flow constructions",
            Duration::from_secs(300),
            Box::new(|| suite("flows", VerifyOptions { n: Some(6), ..Default::default() })),
        ),
        (
            "polynomial identities",
            Duration::from_secs(600),
            Box::new(|| suite("poly-identities", VerifyOptions { width: Some(6), ..Default::default() })),
        ),
        (
            "raising coefficients",
            Duration::from_secs(600),
            Box::new(|| suite("raising-oracle", VerifyOptions { width: Some(5), ..Default::default() })),
        ),
        (
            "index duality",
            Duration::MAX,
            Box::new(move || suite("duality", VerifyOptions { samples, ..Default::default() })),
        ),
        (
            "certificates and plans",
            Duration::MAX,
            Box::new(move || suite("certificates", VerifyOptions { samples, ..Default::default() })),
        ),
        ("crystal consistency", Duration::from_secs(120), Box::new(crystal_consistency)),
    ];
    let mut all = true;
    for (k, (name, limit, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let dt = t.elapsed();
        let res = res.and_then(|()| ensure(dt < *limit, || format!("took {dt:.2?}, limit {limit:?}")));
        match res {
            Ok(()) => println!("criterion {:>2} {name}: PASS ({dt:.2?})", k + 1),
            Err(msg) => {
                all = false;
                println!("criterion {:>2} {name}: FAIL ({dt:.2?}) {msg}", k + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
