//! Oracles shared by the integration tests and the acceptance harness.

#![allow(dead_code)]

/// All partitions of `n` as weakly decreasing vectors, built by peeling off
/// the largest part (no p-strictness logic involved).
pub fn partitions(n: i64) -> Vec<Vec<i64>> {
    fn go(n: i64, cap: i64) -> Vec<Vec<i64>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = vec![];
        for first in (1..=cap.min(n)).rev() {
            for mut tail in go(n - first, first) {
                tail.insert(0, first);
                out.push(tail);
            }
        }
        out
    }
    go(n, n)
}

/// Restricted p-strict partitions of `n`, checked clause by clause.
pub fn restricted_p_strict(n: i64, p: i64) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = partitions(n)
        .into_iter()
        .filter(|l| {
            let at = |r: usize| l.get(r).copied().unwrap_or(0);
            (0..l.len()).all(|r| {
                let repeat_ok = at(r) != at(r + 1) || at(r) % p == 0;
                let gap = at(r) - at(r + 1);
                let gap_ok = if at(r) % p == 0 { gap < p } else { gap <= p };
                repeat_ok && gap_ok
            })
        })
        .collect();
    v.sort();
    v
}
