//! Experiment plumbing: configuration, Monte Carlo sampling, distribution
//! comparison, the distance experiment and the self-check suite.

pub mod compare;
pub mod distance;
pub mod mc;
pub mod selfcheck;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact;
use crate::numeric::rational_to_f64;
use crate::schedule::Schedule;
use crate::table::{DistributionTable, ExactTable, FloatTable, NodeSelector, Parameter, TableMeta};

pub use compare::{compare, compare_tables, ks_discrete_normal, ComparisonReport, Reference, TableDistance};
pub use distance::{distance_experiment, geometric_ladder, DistanceReport, DistanceSampler};
pub use mc::{mc_clustering, mc_distribution, mc_node_laws};
pub use selfcheck::{selfcheck, CheckResult};

/// How closed-form tables are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Reduced rationals.
    #[default]
    Exact,
    /// Floating point, for sizes where rationals get slow.
    Float,
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            _ => Err(format!("unknown backend `{s}` (exact or float)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub k: usize,
    pub n: usize,
    pub parameter: Parameter,
    pub node: NodeSelector,
    pub replicates: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub backend: Backend,
    pub schedule: Schedule,
}

impl ExperimentConfig {
    pub fn new(k: usize, n: usize, parameter: Parameter, node: NodeSelector) -> Self {
        Self {
            k,
            n,
            parameter,
            node,
            replicates: 10_000,
            seed: 0,
            output: None,
            backend: Backend::Exact,
            schedule: Schedule::default(),
        }
    }

    pub fn replicates(mut self, replicates: u64) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidParameter(format!("k must be >= 1, got {}", self.k)));
        }
        if self.replicates < 1 {
            return Err(Error::InvalidParameter("replicates must be >= 1".into()));
        }
        match self.node {
            NodeSelector::Fixed(j) if j as usize > self.n => Err(Error::InvalidSelector(format!(
                "node {j} does not exist in a tree of size {}",
                self.n
            ))),
            NodeSelector::Random | NodeSelector::Last if self.n == 0 => Err(Error::InvalidSelector(format!(
                "`{}` needs at least one inserted node",
                self.node
            ))),
            _ => Ok(()),
        }
    }

    pub fn meta(&self, source: &str) -> TableMeta {
        TableMeta {
            k: self.k,
            n: self.n,
            parameter: self.parameter,
            node: self.node,
            source: source.into(),
        }
    }
}

/// Flat `key = value` configuration, one pair per line; `#` starts a comment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KvConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                column: 1,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            let key = key.trim().replace('_', "-");
            if key.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    column: 1,
                    message: "empty key".into(),
                });
            }
            entries.insert(key, (i + 1, value.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    /// Parse the value under `key`, if present.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|e: T::Err| Error::Parse {
                line: *line,
                column: 1,
                message: format!("bad value for `{key}`: {e}"),
            }),
        }
    }
}

/// JSON record written after every CLI run.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub command: String,
    pub run_id: String,
    pub config: serde_json::Value,
    pub wall_clock_seconds: f64,
    pub status: String,
    pub results: serde_json::Value,
}

/// Short content hash of a command and its configuration.
pub fn run_id(command: &str, config: &serde_json::Value) -> String {
    let mut hasher = Sha256::new();
    hasher.update(command.as_bytes());
    hasher.update([0u8]);
    hasher.update(config.to_string().as_bytes());
    hasher.finalize().iter().take(6).map(|b| format!("{b:02x}")).collect()
}

/// The closed-form distributions selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// Out-degree of node `j` (selector 1).
    Outdegree,
    /// Out-degree of the root `0_1` (selector 2).
    RootOutdegree,
    /// Out-degree of a random inserted node (selector 3).
    RandomOutdegree,
    /// Descendants of node `j` (selector 5).
    Descendants,
    /// Descendants of a random inserted node (selector 6).
    RandomDescendants,
}

impl Formula {
    pub fn from_number(number: u32) -> Result<Self> {
        Ok(match number {
            1 => Formula::Outdegree,
            2 => Formula::RootOutdegree,
            3 => Formula::RandomOutdegree,
            5 => Formula::Descendants,
            6 => Formula::RandomDescendants,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "no closed form numbered {number} (1, 2, 3, 5 or 6)"
                )))
            }
        })
    }

    pub fn needs_node(self) -> bool {
        matches!(self, Formula::Outdegree | Formula::Descendants)
    }

    pub fn parameter(self) -> Parameter {
        match self {
            Formula::Outdegree | Formula::RootOutdegree | Formula::RandomOutdegree => Parameter::Outdegree,
            Formula::Descendants | Formula::RandomDescendants => Parameter::Descendants,
        }
    }

    fn selector(self, j: Option<u64>) -> NodeSelector {
        match self {
            Formula::Outdegree | Formula::Descendants => NodeSelector::Fixed(j.unwrap_or(0) as u32),
            Formula::RootOutdegree => NodeSelector::Root,
            Formula::RandomOutdegree | Formula::RandomDescendants => NodeSelector::Random,
        }
    }

    /// Values the distribution can take in a tree of size `n`.
    fn support(self, n: u64, j: u64) -> std::ops::RangeInclusive<u64> {
        match self {
            Formula::Outdegree => 0..=n - j,
            Formula::RootOutdegree => 0..=n,
            Formula::RandomOutdegree => 0..=n.saturating_sub(1),
            Formula::Descendants => 1..=n - j + 1,
            Formula::RandomDescendants => 1..=n,
        }
    }

    fn check(self, n: u64, j: Option<u64>) -> Result<u64> {
        if self.needs_node() {
            let j = j.ok_or_else(|| Error::InvalidParameter("this distribution needs a node label j".into()))?;
            if j < 1 || j > n {
                return Err(Error::InvalidParameter(format!("need n >= j >= 1, got n={n}, j={j}")));
            }
            Ok(j)
        } else {
            if matches!(self, Formula::RandomOutdegree | Formula::RandomDescendants) && n < 1 {
                return Err(Error::InvalidParameter("a random inserted node needs n >= 1".into()));
            }
            Ok(1)
        }
    }

    fn meta(self, k: usize, n: u64, j: Option<u64>, source: &str) -> TableMeta {
        TableMeta {
            k,
            n: n as usize,
            parameter: self.parameter(),
            node: self.selector(j),
            source: source.into(),
        }
    }
}

/// Exact pmf over the whole support.
pub fn exact_table(formula: Formula, k: usize, n: u64, j: Option<u64>) -> Result<ExactTable> {
    let jj = formula.check(n, j)?;
    let mut table = DistributionTable::new(formula.meta(k, n, j, "closed form (exact)"));
    for m in formula.support(n, jj) {
        let p = match formula {
            Formula::Outdegree => exact::pmf_outdegree(k, n, jj, m)?,
            Formula::RootOutdegree => exact::pmf_root_outdegree(k, n, m)?,
            Formula::RandomOutdegree => exact::pmf_random_outdegree(k, n, m)?,
            Formula::Descendants => exact::pmf_descendants(k, n, jj, m)?,
            Formula::RandomDescendants => exact::pmf_random_descendants(k, n, m)?,
        };
        table.pmf.insert(m, p.into_inner());
    }
    Ok(table)
}

/// Floating-point pmf over the whole support.
pub fn float_table(formula: Formula, k: usize, n: u64, j: Option<u64>) -> Result<FloatTable> {
    let jj = formula.check(n, j)?;
    let support = formula.support(n, jj);
    let (lo, hi) = (*support.start(), *support.end());
    let values: Vec<f64> = match formula {
        Formula::Outdegree => exact::pmf_outdegree_f64(k, n, jj, hi)?,
        Formula::RootOutdegree => exact::pmf_root_outdegree_f64(k, n, hi)?,
        Formula::RandomOutdegree => exact::pmf_random_outdegree_f64(k, n, hi)?,
        Formula::Descendants => (lo..=hi)
            .map(|m| exact::pmf_descendants_f64(k, n, jj, m))
            .collect::<Result<_>>()?,
        Formula::RandomDescendants => exact::pmf_random_descendants_f64(k, n, hi)?,
    };
    let mut table = DistributionTable::new(formula.meta(k, n, j, "closed form (float)"));
    for (i, p) in values.into_iter().enumerate() {
        // the descendant vectors start at m = 1, the others at m = 0
        table.pmf.insert(lo + i as u64, p);
    }
    Ok(table)
}

/// Float view of an exact table, or the float table itself.
pub fn reference_table(formula: Formula, k: usize, n: u64, j: Option<u64>, backend: Backend) -> Result<FloatTable> {
    match backend {
        Backend::Exact => {
            let t = exact_table(formula, k, n, j)?;
            Ok(DistributionTable {
                meta: t.meta.clone(),
                pmf: t.pmf.iter().map(|(m, p)| (*m, rational_to_f64(p))).collect(),
            })
        }
        Backend::Float => float_table(formula, k, n, j),
    }
}
