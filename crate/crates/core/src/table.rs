//! Probability tables: exact, floating point and empirical.

use std::collections::BTreeMap;
use std::fmt::{self, Display, Write as _};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::numeric::rational_to_f64;

/// Node parameter measured or evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Outdegree,
    Descendants,
    Clustering,
    Dist01,
    DistK0,
}

impl Parameter {
    pub const ALL: [Parameter; 5] = [
        Parameter::Outdegree,
        Parameter::Descendants,
        Parameter::Clustering,
        Parameter::Dist01,
        Parameter::DistK0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parameter::Outdegree => "outdegree",
            Parameter::Descendants => "descendants",
            Parameter::Clustering => "clustering",
            Parameter::Dist01 => "dist01",
            Parameter::DistK0 => "distK0",
        }
    }
}

impl Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Parameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parameter::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown parameter `{s}` (outdegree, descendants, clustering, dist01, distK0)"))
    }
}

/// Which node of the tree a parameter is read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeSelector {
    /// Inserted node `j`.
    Fixed(u32),
    /// Uniformly chosen inserted node.
    Random,
    /// Root node `0_1`.
    Root,
    /// The last inserted node `n`.
    Last,
}

impl Display for NodeSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeSelector::Fixed(j) => write!(f, "{j}"),
            NodeSelector::Random => f.write_str("random"),
            NodeSelector::Root => f.write_str("root"),
            NodeSelector::Last => f.write_str("last"),
        }
    }
}

impl FromStr for NodeSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(NodeSelector::Random),
            "root" => Ok(NodeSelector::Root),
            "last" => Ok(NodeSelector::Last),
            _ => s
                .parse::<u32>()
                .ok()
                .filter(|&j| j >= 1)
                .map(NodeSelector::Fixed)
                .ok_or_else(|| format!("bad node selector `{s}` (a label >= 1, random, root or last)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMeta {
    pub k: usize,
    pub n: usize,
    pub parameter: Parameter,
    pub node: NodeSelector,
    pub source: String,
}

/// Probability mass function keyed by outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionTable<V, K = u64> {
    pub meta: TableMeta,
    pub pmf: BTreeMap<K, V>,
}

pub type ExactTable<K = u64> = DistributionTable<BigRational, K>;
pub type FloatTable<K = u64> = DistributionTable<f64, K>;

impl<K: Ord + Clone> ExactTable<K> {
    pub fn total(&self) -> BigRational {
        self.pmf.values().sum()
    }

    pub fn to_float(&self) -> FloatTable<K> {
        DistributionTable {
            meta: self.meta.clone(),
            pmf: self.pmf.iter().map(|(m, p)| (m.clone(), rational_to_f64(p))).collect(),
        }
    }

    /// CSV with columns `m,prob_num,prob_den,prob_float`.
    pub fn to_csv(&self) -> String
    where
        K: Display,
    {
        let mut out = String::from("m,prob_num,prob_den,prob_float\n");
        for (m, p) in &self.pmf {
            writeln!(out, "{m},{},{},{:e}", p.numer(), p.denom(), rational_to_f64(p)).unwrap();
        }
        out
    }
}

impl<K: Ord + Clone> FloatTable<K> {
    pub fn total(&self) -> f64 {
        self.pmf.values().sum()
    }

    pub fn get(&self, m: &K) -> f64 {
        self.pmf.get(m).copied().unwrap_or(0.0)
    }

    pub fn to_csv(&self) -> String
    where
        K: Display,
    {
        let mut out = String::from("m,prob\n");
        for (m, p) in &self.pmf {
            writeln!(out, "{m},{p:e}").unwrap();
        }
        out
    }
}

impl<V, K: Ord> DistributionTable<V, K> {
    pub fn new(meta: TableMeta) -> Self {
        Self { meta, pmf: BTreeMap::new() }
    }
}

/// Observed counts from a Monte Carlo run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalTable<K = u64> {
    pub meta: TableMeta,
    pub counts: BTreeMap<K, u64>,
}

impl<K: Ord + Clone> EmpiricalTable<K> {
    pub fn new(meta: TableMeta) -> Self {
        Self { meta, counts: BTreeMap::new() }
    }

    pub fn record(&mut self, outcome: K) {
        *self.counts.entry(outcome).or_insert(0) += 1;
    }

    pub fn sample_size(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Add another table's counts; the result does not depend on merge order.
    pub fn merge(&mut self, other: &EmpiricalTable<K>) {
        for (m, c) in &other.counts {
            *self.counts.entry(m.clone()).or_insert(0) += c;
        }
    }

    pub fn to_float(&self) -> FloatTable<K> {
        let total = self.sample_size() as f64;
        DistributionTable {
            meta: self.meta.clone(),
            pmf: self.counts.iter().map(|(m, &c)| (m.clone(), c as f64 / total)).collect(),
        }
    }

    /// CSV with columns `m,count,freq`.
    pub fn to_csv(&self) -> String
    where
        K: Display,
    {
        let total = self.sample_size() as f64;
        let mut out = String::from("m,count,freq\n");
        for (m, c) in &self.counts {
            writeln!(out, "{m},{c},{:e}", *c as f64 / total).unwrap();
        }
        out
    }
}

impl EmpiricalTable<u64> {
    pub fn mean(&self) -> f64 {
        self.raw_moment(1)
    }

    /// Sample `E[X^s]`.
    pub fn raw_moment(&self, s: i32) -> f64 {
        let total = self.sample_size() as f64;
        self.counts.iter().map(|(&m, &c)| (m as f64).powi(s) * c as f64).sum::<f64>() / total
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let n = self.sample_size() as f64;
        let mean = self.mean();
        let ss: f64 = self.counts.iter().map(|(&m, &c)| (m as f64 - mean).powi(2) * c as f64).sum();
        ss / (n - 1.0)
    }
}

/// Drop zero entries.
pub fn prune_zeros<K: Ord + Clone>(table: &mut ExactTable<K>) {
    table.pmf.retain(|_, p| !p.is_zero());
}
