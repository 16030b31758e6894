//! Goodness of fit between an empirical table and a reference distribution.

use std::collections::BTreeSet;

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::asymptotics::LawDescriptor;
use crate::error::{Error, Result};
use crate::table::{EmpiricalTable, FloatTable};

/// Expected count each chi-square cell must reach; thinner cells are pooled
/// with their neighbours.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    /// Total variation distance, in `[0, 1]`.
    pub tv: f64,
    pub chi2: f64,
    pub dof: u64,
    pub p_value: f64,
    pub max_abs_dev: f64,
    pub sample_size: u64,
    /// Chi-square cells after pooling.
    pub cells: usize,
}

/// What an empirical table is compared against.
#[derive(Clone, Copy, Debug)]
pub enum Reference<'a> {
    Table(&'a FloatTable),
    /// A discrete law on the non-negative integers.
    Law(&'a LawDescriptor),
}

impl<'a> From<&'a FloatTable> for Reference<'a> {
    fn from(t: &'a FloatTable) -> Self {
        Reference::Table(t)
    }
}

impl<'a> From<&'a LawDescriptor> for Reference<'a> {
    fn from(l: &'a LawDescriptor) -> Self {
        Reference::Law(l)
    }
}

/// `(outcome, observed, reference probability)` over the union of supports, in
/// outcome order, plus the reference mass not listed.
fn cells(empirical: &EmpiricalTable, reference: Reference<'_>) -> Result<(Vec<(u64, u64, f64)>, f64)> {
    let mut outcomes: BTreeSet<u64> = empirical.counts.keys().copied().collect();
    match reference {
        Reference::Table(t) => outcomes.extend(t.pmf.iter().filter(|(_, &p)| p > 0.0).map(|(&m, _)| m)),
        Reference::Law(law) => {
            if !law.is_discrete() {
                return Err(Error::Domain(format!(
                    "cannot bin integer samples against a {} law",
                    law.family()
                )));
            }
            let mut cdf = 0.0;
            let mut m = 0;
            while cdf < 1.0 - 1e-13 && m < 10_000_000 {
                let p = law.pmf(m)?;
                if p > 0.0 {
                    outcomes.insert(m);
                }
                cdf += p;
                m += 1;
            }
        }
    }
    let prob = |m: u64| -> Result<f64> {
        Ok(match reference {
            Reference::Table(t) => t.get(&m),
            Reference::Law(law) => law.pmf(m)?,
        })
    };
    let mut out = Vec::with_capacity(outcomes.len());
    let mut listed = 0.0;
    for m in outcomes {
        let p = prob(m)?;
        listed += p;
        out.push((m, empirical.counts.get(&m).copied().unwrap_or(0), p));
    }
    Ok((out, (1.0 - listed).max(0.0)))
}

pub fn compare<'a>(empirical: &EmpiricalTable, reference: impl Into<Reference<'a>>) -> Result<ComparisonReport> {
    let n = empirical.sample_size();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let nf = n as f64;
    let (cells, unlisted) = cells(empirical, reference.into())?;

    let mut tv = unlisted;
    let mut max_abs_dev = 0.0f64;
    for &(_, obs, p) in &cells {
        let d = (obs as f64 / nf - p).abs();
        tv += d;
        max_abs_dev = max_abs_dev.max(d);
    }
    tv = (tv / 2.0).min(1.0);

    // an outcome the reference rules out is an outright failure
    if cells.iter().any(|&(_, obs, p)| obs > 0 && p <= 0.0) {
        return Ok(ComparisonReport {
            tv,
            chi2: f64::INFINITY,
            dof: 0,
            p_value: 0.0,
            max_abs_dev,
            sample_size: n,
            cells: cells.len(),
        });
    }

    // pool adjacent cells until each expects at least MIN_EXPECTED; the
    // unlisted reference mass joins the last cell
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs_acc, mut exp_acc) = (0.0, 0.0);
    let last = cells.len().saturating_sub(1);
    for (i, &(_, obs, p)) in cells.iter().enumerate() {
        obs_acc += obs as f64;
        exp_acc += p * nf;
        if i == last {
            exp_acc += unlisted * nf;
        }
        if exp_acc >= MIN_EXPECTED {
            bins.push((obs_acc, exp_acc));
            obs_acc = 0.0;
            exp_acc = 0.0;
        }
    }
    if obs_acc > 0.0 || exp_acc > 0.0 {
        match bins.last_mut() {
            Some(b) => {
                b.0 += obs_acc;
                b.1 += exp_acc;
            }
            None => bins.push((obs_acc, exp_acc)),
        }
    }
    let chi2: f64 = bins.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len().saturating_sub(1) as u64;
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?.sf(chi2)
    };
    Ok(ComparisonReport {
        tv,
        chi2,
        dof,
        p_value,
        max_abs_dev,
        sample_size: n,
        cells: bins.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TableDistance {
    pub tv: f64,
    pub max_abs_dev: f64,
}

/// Distance between two probability tables over the union of their supports.
pub fn compare_tables(a: &FloatTable, b: &FloatTable) -> TableDistance {
    let keys: BTreeSet<u64> = a.pmf.keys().chain(b.pmf.keys()).copied().collect();
    let mut tv = 0.0;
    let mut max_abs_dev = 0.0f64;
    for m in keys {
        let d = (a.get(&m) - b.get(&m)).abs();
        tv += d;
        max_abs_dev = max_abs_dev.max(d);
    }
    TableDistance {
        tv: (tv / 2.0).min(1.0),
        max_abs_dev,
    }
}

/// Kolmogorov–Smirnov distance between an integer sample, standardized by
/// `mean` and `sd`, and the standard normal. The normal CDF is evaluated at
/// the half-integers between lattice points (a continuity correction);
/// otherwise the lattice jumps alone would dominate the statistic.
pub fn ks_discrete_normal(sample: &EmpiricalTable, mean: f64, sd: f64) -> Result<f64> {
    let n = sample.sample_size();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let normal = Normal::new(mean, sd).map_err(|e| Error::Domain(e.to_string()))?;
    let (&lo, _) = sample.counts.first_key_value().unwrap();
    let (&hi, _) = sample.counts.last_key_value().unwrap();
    let mut d = normal.cdf(lo as f64 - 0.5);
    let mut cum = 0u64;
    for m in lo..=hi {
        cum += sample.counts.get(&m).copied().unwrap_or(0);
        let f = cum as f64 / n as f64;
        d = d.max((f - normal.cdf(m as f64 + 0.5)).abs());
    }
    Ok(d)
}
