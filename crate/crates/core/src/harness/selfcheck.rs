//! Exact/oracle/enumeration identities at small sizes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::exact;
use crate::metrics::{clustering_formula, GraphView};
use crate::oracle::{
    enumerate_all, enumerate_laws, recur_descendants, recur_outdegree, recur_root_outdegree, EnumeratedLaws,
};
use crate::schedule::Schedule;
use crate::table::{NodeSelector, Parameter};
use crate::tree::format::{deserialize, serialize};
use crate::tree::{replay, NodeId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, failures: Vec<String>, checked: usize) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{checked} comparisons")
        } else {
            let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
            format!("{} of {checked} failed; first: {}", failures.len(), shown.join("; "))
        };
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

fn prob(laws: &EnumeratedLaws, node: NodeSelector, m: u64) -> Result<BigRational> {
    Ok(laws.table(node)?.pmf.get(&m).cloned().unwrap_or_else(BigRational::zero))
}

fn count_prob(counts: &crate::oracle::CountTable, m: u64) -> BigRational {
    BigRational::new(counts.get(m), exact::count_trees(counts.k, counts.n))
}

/// Run the suite for one `k` and every size `1..=max_n`. Sizes whose tree
/// count exceeds `cap` are skipped and reported as such.
pub fn selfcheck(k: usize, max_n: usize, cap: u64, schedule: Schedule) -> Result<Vec<CheckResult>> {
    let mut results = Vec::new();
    for n in 1..=max_n {
        let nn = n as u64;
        let total = exact::count_trees(k, nn);
        if total > BigInt::from(cap) {
            results.push(CheckResult {
                name: format!("n={n}: enumeration"),
                passed: true,
                detail: format!("skipped: {total} trees exceed the cap {cap}"),
            });
            continue;
        }

        // counting
        let mut failures = Vec::new();
        let mut round_trips = 0usize;
        let mut clustering_checked = 0usize;
        let visited = enumerate_all(k, n, cap, |t| {
            if deserialize(&serialize(t)).as_ref() != Ok(t) {
                failures.push(format!("text round trip of {:?}", t.trace().choices));
            }
            if replay(k, &t.trace()).as_ref() != Ok(t) {
                failures.push(format!("trace round trip of {:?}", t.trace().choices));
            }
            round_trips += 1;
            if k >= 2 {
                let view = GraphView::new(t);
                for u in 0..t.node_count() as NodeId {
                    let d = t.degree(u);
                    if d >= k {
                        clustering_checked += 1;
                        if clustering_formula(k, d).ok() != Some(view.clustering(u)) {
                            failures.push(format!("clustering of node {}", t.label_of(u)));
                        }
                    }
                }
            }
        })?;
        let mut count_fail = Vec::new();
        if BigInt::from(visited) != total {
            count_fail.push(format!("enumerated {visited}, formula {total}"));
        }
        if exact::count_trees_gbin(k, nn) != total {
            count_fail.push("product and binomial forms differ".into());
        }
        results.push(CheckResult::new(format!("n={n}: tree count"), count_fail, 2));
        results.push(CheckResult::new(
            format!("n={n}: serialization, traces, clustering"),
            failures,
            round_trips * 2 + clustering_checked,
        ));

        let out = enumerate_laws(k, n, Parameter::Outdegree, cap, schedule)?;
        let desc = enumerate_laws(k, n, Parameter::Descendants, cap, schedule)?;

        // out-degree of node j, all three ways
        let mut failures = Vec::new();
        let mut checked = 0;
        for j in 1..=nn {
            let recur = recur_outdegree(k, nn, j)?;
            for m in 0..=nn {
                let closed = exact::pmf_outdegree(k, nn, j, m)?.into_inner();
                let r = count_prob(&recur, m);
                let e = prob(&out, NodeSelector::Fixed(j as u32), m)?;
                checked += 1;
                if closed != r || closed != e {
                    failures.push(format!("j={j} m={m}: closed {closed}, recurrence {r}, enumeration {e}"));
                }
            }
        }
        results.push(CheckResult::new(format!("n={n}: out-degree of node j"), failures, checked));

        // root out-degree
        let mut failures = Vec::new();
        let recur = recur_root_outdegree(k, nn)?;
        for m in 0..=nn + 1 {
            let closed = exact::pmf_root_outdegree(k, nn, m)?.into_inner();
            let r = count_prob(&recur, m);
            let e = prob(&out, NodeSelector::Root, m)?;
            if closed != r || closed != e {
                failures.push(format!("m={m}: closed {closed}, recurrence {r}, enumeration {e}"));
            }
        }
        results.push(CheckResult::new(format!("n={n}: root out-degree"), failures, n + 2));

        // descendants of node j
        let mut failures = Vec::new();
        let mut checked = 0;
        for j in 1..=nn {
            let recur = recur_descendants(k, nn, j)?;
            for m in 0..=nn + 1 {
                let closed = exact::pmf_descendants(k, nn, j, m)?.into_inner();
                let r = count_prob(&recur, m);
                let e = prob(&desc, NodeSelector::Fixed(j as u32), m)?;
                checked += 1;
                if closed != r || closed != e {
                    failures.push(format!("j={j} m={m}: closed {closed}, recurrence {r}, enumeration {e}"));
                }
            }
        }
        results.push(CheckResult::new(format!("n={n}: descendants of node j"), failures, checked));

        // random node = average over j
        let mut failures = Vec::new();
        let nr = BigRational::from_integer(BigInt::from(nn));
        for m in 0..=nn + 1 {
            let avg_out: BigRational = (1..=nn)
                .map(|j| exact::pmf_outdegree(k, nn, j, m).map(|p| p.into_inner()))
                .sum::<Result<BigRational>>()?
                / &nr;
            let avg_desc: BigRational = (1..=nn)
                .map(|j| exact::pmf_descendants(k, nn, j, m).map(|p| p.into_inner()))
                .sum::<Result<BigRational>>()?
                / &nr;
            let ro = exact::pmf_random_outdegree(k, nn, m)?.into_inner();
            let rd = exact::pmf_random_descendants(k, nn, m)?.into_inner();
            if ro != avg_out || ro != prob(&out, NodeSelector::Random, m)? {
                failures.push(format!("out-degree m={m}: closed {ro}, average {avg_out}"));
            }
            if rd != avg_desc || rd != prob(&desc, NodeSelector::Random, m)? {
                failures.push(format!("descendants m={m}: closed {rd}, average {avg_desc}"));
            }
        }
        results.push(CheckResult::new(format!("n={n}: random node averages"), failures, 2 * (n + 2)));
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_at_small_sizes() {
        for k in 1..=3 {
            let results = selfcheck(k, 4, 100_000, Schedule::default()).unwrap();
            for r in &results {
                assert!(r.passed, "k={k}: {} — {}", r.name, r.detail);
            }
        }
        let skipped = selfcheck(2, 9, 1_000, Schedule::Serial).unwrap();
        assert!(skipped.iter().any(|r| r.detail.starts_with("skipped")));
    }
}
