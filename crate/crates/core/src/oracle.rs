//! Ground truth independent of the closed forms: growth recurrences and
//! exhaustive enumeration of every tree of a given size.
//!
//! The recurrences follow one insertion at a time. A tree of size `n - 1` has
//! `1 + (k+1)(n-1)` slots; a node of out-degree `m` sits in `k + m(k-1)`
//! cliques whose slots number `(m+1)k`, the root `0_1` touches `1 + km` slots,
//! and a descendant set of size `m` touches `(k+1)m - 1` slots. Choosing one of
//! those slots raises the parameter by one; any other slot leaves it alone.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::count_trees;
use crate::metrics::{integer_values, Clustering, GraphView};
use crate::schedule::{map_reduce, Schedule};
use crate::table::{DistributionTable, ExactTable, NodeSelector, Parameter, TableMeta};
use crate::tree::{slots_before_insertion, KTree, NodeId};

/// Enumeration refuses to walk more trees than this unless asked.
pub const DEFAULT_ENUMERATION_CAP: u64 = 5_000_000;

/// Number of trees of size `n` per parameter value, `counts[m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub k: usize,
    pub n: u64,
    pub counts: Vec<BigInt>,
}

impl CountTable {
    pub fn get(&self, m: u64) -> BigInt {
        self.counts.get(m as usize).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigInt {
        self.counts.iter().sum()
    }

    /// Divide by the number of trees `T_n`.
    pub fn to_pmf(&self, parameter: Parameter, node: NodeSelector) -> ExactTable {
        let total = count_trees(self.k, self.n);
        let mut table = DistributionTable::new(TableMeta {
            k: self.k,
            n: self.n as usize,
            parameter,
            node,
            source: "recurrence".into(),
        });
        for (m, c) in self.counts.iter().enumerate() {
            if !c.is_zero() {
                table.pmf.insert(m as u64, BigRational::new(c.clone(), total.clone()));
            }
        }
        table
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,count\n");
        for (m, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{m},{c}\n"));
        }
        out
    }
}

fn check_node(k: usize, n: u64, j: u64) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    if j < 1 || j > n {
        return Err(Error::InvalidParameter(format!("need n >= j >= 1, got n={n}, j={j}")));
    }
    Ok(())
}

/// Grow `base` (a table for size `from`) up to size `n`. `touching(m)` is the
/// number of slots whose choice moves the parameter from `m` to `m + 1`.
fn grow(k: usize, from: u64, n: u64, base: Vec<BigInt>, touching: impl Fn(u64) -> u64) -> Vec<BigInt> {
    let mut cur = base;
    for size in from + 1..=n {
        let total = slots_before_insertion(k, size);
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (m, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let up = touching(m as u64);
            next[m] += c * BigInt::from(total - up);
            next[m + 1] += c * BigInt::from(up);
        }
        cur = next;
    }
    cur
}

/// Out-degree of node `j`: `T_{n,j,m}` for `m = 0..=n-j`.
pub fn recur_outdegree(k: usize, n: u64, j: u64) -> Result<CountTable> {
    check_node(k, n, j)?;
    let ku = k as u64;
    let counts = grow(k, j, n, vec![count_trees(k, j)], |m| (m + 1) * ku);
    Ok(CountTable { k, n, counts })
}

/// The out-degree recurrence weight written as `(k+1)n - km - 2k`: the number
/// of slots leaving a node of out-degree `m` unchanged when node `n` arrives.
pub fn printed_outdegree_weight(k: usize, n: u64, m: u64) -> i64 {
    let (k, n, m) = (k as i64, n as i64, m as i64);
    (k + 1) * n - k * m - 2 * k
}

/// Out-degree of the root node `0_1`: counts for `m = 0..=n`.
pub fn recur_root_outdegree(k: usize, n: u64) -> Result<CountTable> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    let ku = k as u64;
    let counts = grow(k, 0, n, vec![BigInt::from(1)], |m| 1 + ku * m);
    Ok(CountTable { k, n, counts })
}

/// Descendants of node `j` (itself included): counts for `m = 0..=n-j+1`, zero at `m = 0`.
pub fn recur_descendants(k: usize, n: u64, j: u64) -> Result<CountTable> {
    check_node(k, n, j)?;
    let q = k as u64 + 1;
    let base = vec![BigInt::zero(), count_trees(k, j)];
    let counts = grow(k, j, n, base, |m| if m == 0 { 0 } else { q * m - 1 });
    Ok(CountTable { k, n, counts })
}

fn check_budget(k: usize, n: usize, cap: u64) -> Result<u64> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    let total = count_trees(k, n as u64);
    match total.to_u64() {
        Some(t) if t <= cap => Ok(t),
        _ => Err(Error::BudgetExceeded {
            count: total.to_string(),
            cap,
        }),
    }
}

fn walk<F: FnMut(&KTree)>(tree: &mut KTree, n: usize, visit: &mut F) {
    if tree.size() == n {
        visit(tree);
        return;
    }
    for slot in 1..=tree.slot_count() {
        tree.insert_at(slot).expect("slot in range");
        walk(tree, n, visit);
        tree.pop_last();
    }
}

/// Visit every tree of size `n` once, in trace-lexicographic order. Returns
/// the number of trees visited. Fails with [`Error::BudgetExceeded`] when
/// there are more than `cap` trees.
pub fn enumerate_all<F: FnMut(&KTree)>(k: usize, n: usize, cap: u64, mut visit: F) -> Result<u64> {
    check_budget(k, n, cap)?;
    let mut tree = KTree::new(k)?;
    let mut visited = 0u64;
    walk(&mut tree, n, &mut |t: &KTree| {
        visited += 1;
        visit(t)
    });
    Ok(visited)
}

/// Enumerate with per-worker accumulators: the trees are split by their first
/// few slot choices, each part is folded into its own accumulator, and the
/// parts are merged with `merge`.
pub fn enumerate_fold<A, I, V, M>(
    k: usize,
    n: usize,
    cap: u64,
    schedule: Schedule,
    identity: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &KTree) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    check_budget(k, n, cap)?;
    // enough prefixes to keep a pool busy
    let mut depth = 0;
    let mut parts = 1u64;
    while depth < n && parts < 64 {
        parts *= slots_before_insertion(k, depth as u64 + 1);
        depth += 1;
    }
    let mut prefixes: Vec<Vec<u64>> = vec![vec![]];
    for d in 0..depth {
        let slots = slots_before_insertion(k, d as u64 + 1);
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                (1..=slots).map(move |s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    let result = map_reduce(
        schedule,
        prefixes,
        &identity,
        |prefix| {
            let mut acc = identity();
            let mut tree = KTree::new(k).expect("k checked");
            for s in prefix {
                tree.insert_at(s).expect("prefix slot in range");
            }
            walk(&mut tree, n, &mut |t: &KTree| visit(&mut acc, t));
            acc
        },
        &merge,
    );
    Ok(result)
}

/// Joint tally of a parameter over every tree of size `n`: for each node, how
/// many trees give it each value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedLaws<K = u64> {
    pub k: usize,
    pub n: usize,
    pub parameter: Parameter,
    pub trees: u64,
    /// Indexed by [`NodeId`]: roots first, then inserted nodes `1..=n`.
    pub per_node: Vec<BTreeMap<K, u64>>,
}

impl<K: Ord + Clone> EnumeratedLaws<K> {
    fn empty(k: usize, n: usize, parameter: Parameter) -> Self {
        Self {
            k,
            n,
            parameter,
            trees: 0,
            per_node: vec![BTreeMap::new(); k + n],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.trees += other.trees;
        for (mine, theirs) in self.per_node.iter_mut().zip(other.per_node) {
            for (v, c) in theirs {
                *mine.entry(v).or_insert(0) += c;
            }
        }
        self
    }

    fn record(&mut self, values: impl IntoIterator<Item = K>) {
        self.trees += 1;
        for (slot, v) in self.per_node.iter_mut().zip(values) {
            *slot.entry(v).or_insert(0) += 1;
        }
    }

    /// Exact pmf of the parameter at the selected node.
    pub fn table(&self, node: NodeSelector) -> Result<ExactTable<K>> {
        let meta = TableMeta {
            k: self.k,
            n: self.n,
            parameter: self.parameter,
            node,
            source: "enumeration".into(),
        };
        let mut table = DistributionTable::new(meta);
        let trees = BigInt::from(self.trees);
        let single = |id: usize| -> BTreeMap<K, BigRational> {
            self.per_node[id]
                .iter()
                .map(|(v, &c)| (v.clone(), BigRational::new(BigInt::from(c), trees.clone())))
                .collect()
        };
        table.pmf = match node {
            NodeSelector::Root => single(0),
            NodeSelector::Fixed(j) if j >= 1 && (j as usize) <= self.n => single(self.k + j as usize - 1),
            NodeSelector::Last if self.n >= 1 => single(self.k + self.n - 1),
            NodeSelector::Random if self.n >= 1 => {
                let mut sum: BTreeMap<K, u64> = BTreeMap::new();
                for counts in &self.per_node[self.k..] {
                    for (v, &c) in counts {
                        *sum.entry(v.clone()).or_insert(0) += c;
                    }
                }
                let denom = trees * BigInt::from(self.n);
                sum.into_iter()
                    .map(|(v, c)| (v, BigRational::new(BigInt::from(c), denom.clone())))
                    .collect()
            }
            _ => return Err(Error::InvalidSelector(format!("node {node} in a tree of size {}", self.n))),
        };
        Ok(table)
    }
}

/// Tally an integer-valued parameter over all trees of size `n`.
pub fn enumerate_laws(
    k: usize,
    n: usize,
    parameter: Parameter,
    cap: u64,
    schedule: Schedule,
) -> Result<EnumeratedLaws> {
    if parameter == Parameter::Clustering {
        return Err(Error::InvalidParameter(
            "clustering is not integer-valued; use enumerate_clustering".into(),
        ));
    }
    enumerate_fold(
        k,
        n,
        cap,
        schedule,
        || EnumeratedLaws::empty(k, n, parameter),
        |acc, tree| acc.record(integer_values(tree, parameter).expect("integer parameter")),
        EnumeratedLaws::merge,
    )
}

/// Tally the clustering coefficient over all trees of size `n`.
pub fn enumerate_clustering(k: usize, n: usize, cap: u64, schedule: Schedule) -> Result<EnumeratedLaws<Clustering>> {
    enumerate_fold(
        k,
        n,
        cap,
        schedule,
        || EnumeratedLaws::empty(k, n, Parameter::Clustering),
        |acc, tree| {
            let view = GraphView::new(tree);
            acc.record((0..tree.node_count() as NodeId).map(|u| view.clustering(u)))
        },
        EnumeratedLaws::merge,
    )
}

/// Exact pmf of one parameter at one node, by enumeration.
pub fn exact_empirical_distribution(
    k: usize,
    n: usize,
    parameter: Parameter,
    node: NodeSelector,
    cap: u64,
) -> Result<ExactTable> {
    enumerate_laws(k, n, parameter, cap, Schedule::default())?.table(node)
}
