//! Root distances in large trees.
//!
//! [`DistanceSampler`] grows trees without child order or slot numbering: a
//! clique with `d` children appears `d + 1` times in a flat owner list, so a
//! uniform entry of that list is a uniformly chosen slot. A new node is
//! adjacent only to the members of its parent clique, which are pairwise
//! adjacent already, so it never shortens an existing distance; its own
//! distance is one more than the nearest parent. One trajectory grown to the
//! largest ladder size therefore yields node `n`'s distance for every size `n`
//! on the ladder.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::asymptotics::{distance_params, DistanceParams};
use crate::error::{Error, Result};
use crate::rng::replicate_stream;
use crate::schedule::{fold_chunks, Schedule};
use crate::table::{EmpiricalTable, NodeSelector, Parameter, TableMeta};

use super::compare::ks_discrete_normal;

/// Minimal tree state for distance sampling.
#[derive(Clone, Debug)]
pub struct DistanceSampler {
    k: usize,
    /// Clique id per slot.
    owner: Vec<u32>,
    /// `k` members per clique.
    members: Vec<u32>,
    /// Distance to `0_1` per node.
    dist01: Vec<u32>,
    /// Distance to the nearest root node per node.
    dist_k0: Vec<u32>,
}

impl DistanceSampler {
    pub fn new(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
        }
        let mut s = Self {
            k,
            owner: Vec::new(),
            members: Vec::new(),
            dist01: Vec::new(),
            dist_k0: Vec::new(),
        };
        s.reset();
        Ok(s)
    }

    /// Back to the root clique, keeping allocations.
    pub fn reset(&mut self) {
        self.owner.clear();
        self.owner.push(0);
        self.members.clear();
        self.members.extend(0..self.k as u32);
        self.dist01.clear();
        self.dist01.push(0);
        self.dist01.extend(std::iter::repeat_n(1, self.k - 1));
        self.dist_k0.clear();
        self.dist_k0.extend(std::iter::repeat_n(0, self.k));
    }

    pub fn reserve(&mut self, n: usize) {
        let k = self.k;
        self.owner.reserve((k + 1) * n + 1);
        self.members.reserve(k * (k * n + 1));
        self.dist01.reserve(n + k);
        self.dist_k0.reserve(n + k);
    }

    pub fn size(&self) -> usize {
        self.dist01.len() - self.k
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Insert the next node at a uniformly chosen slot.
    pub fn grow<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let k = self.k;
        let c = self.owner[rng.random_range(0..self.owner.len())] as usize;
        let id = self.dist01.len() as u32;
        let first_new = (self.members.len() / k) as u32;
        let (mut d01, mut dk0) = (u32::MAX, u32::MAX);
        for i in 0..k {
            let m = self.members[c * k + i] as usize;
            d01 = d01.min(self.dist01[m]);
            dk0 = dk0.min(self.dist_k0[m]);
        }
        self.dist01.push(d01 + 1);
        self.dist_k0.push(dk0 + 1);
        self.owner.push(c as u32);
        for drop in 0..k {
            for i in 0..k {
                if i != drop {
                    let m = self.members[c * k + i];
                    self.members.push(m);
                }
            }
            self.members.push(id);
            self.owner.push(first_new + drop as u32);
        }
    }

    /// Distance from `0_1` to inserted node `j`.
    pub fn dist01(&self, j: usize) -> u32 {
        self.dist01[self.k + j - 1]
    }

    /// Distance from the root clique to inserted node `j`.
    pub fn dist_to_root_clique(&self, j: usize) -> u32 {
        self.dist_k0[self.k + j - 1]
    }

    /// Clique member lists in creation order.
    pub fn cliques(&self) -> impl Iterator<Item = &[u32]> {
        self.members.chunks(self.k)
    }

    /// Number of slots per clique, from the owner list.
    pub fn slot_weights(&self) -> Vec<u64> {
        let mut w = vec![0u64; self.members.len() / self.k];
        for &c in &self.owner {
            w[c as usize] += 1;
        }
        w
    }
}

/// `2^from, 2^(from+1), ..., 2^to`.
pub fn geometric_ladder(from_exp: u32, to_exp: u32) -> Vec<u64> {
    (from_exp..=to_exp).map(|e| 1u64 << e).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderPoint {
    pub n: u64,
    /// Sample mean and variance of the distance of node `n`.
    pub mean: f64,
    pub variance: f64,
    /// The same for a uniformly chosen inserted node.
    pub bar_mean: f64,
    pub bar_variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceReport {
    pub k: usize,
    pub replicates: u64,
    pub seed: u64,
    pub params: DistanceParams,
    pub ladder: Vec<LadderPoint>,
    /// Least-squares slopes against `ln n`.
    pub mean_slope: f64,
    pub variance_slope: f64,
    pub bar_mean_slope: f64,
    pub bar_variance_slope: f64,
    /// Continuity-corrected KS distance to the normal at the largest size,
    /// standardized by the sample mean and standard deviation.
    pub ks: f64,
    pub bar_ks: f64,
}

impl DistanceReport {
    /// `|slope / coefficient - 1|` for the four slopes, in the order mean,
    /// variance, bar mean, bar variance.
    pub fn relative_errors(&self) -> [f64; 4] {
        let rel = |s: f64, c: f64| (s / c - 1.0).abs();
        [
            rel(self.mean_slope, self.params.mean_coefficient),
            rel(self.variance_slope, self.params.variance_coefficient),
            rel(self.bar_mean_slope, self.params.mean_coefficient),
            rel(self.bar_variance_slope, self.params.variance_coefficient),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,ln_n,mean,variance,bar_mean,bar_variance\n");
        for p in &self.ladder {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                p.n,
                (p.n as f64).ln(),
                p.mean,
                p.variance,
                p.bar_mean,
                p.bar_variance
            ));
        }
        out
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn check_ladder(ladder: &[u64]) -> Result<()> {
    if ladder.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "a ladder needs at least 4 sizes, got {}",
            ladder.len()
        )));
    }
    if ladder[0] < 1 || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("ladder sizes must be positive and increasing".into()));
    }
    let ratio = ladder[1] as f64 / ladder[0] as f64;
    if ladder.windows(2).any(|w| ((w[1] as f64 / w[0] as f64) / ratio - 1.0).abs() > 1e-9) {
        return Err(Error::InvalidParameter("ladder sizes must be geometrically spaced".into()));
    }
    Ok(())
}

/// Distance of node `n` and of a random inserted node from `0_1`, over a
/// geometric ladder of sizes.
pub fn distance_experiment(
    k: usize,
    ladder: &[u64],
    replicates: u64,
    seed: u64,
    schedule: Schedule,
) -> Result<DistanceReport> {
    check_ladder(ladder)?;
    let params = distance_params(k)?;
    if replicates < 2 {
        return Err(Error::InvalidParameter("need at least 2 replicates".into()));
    }
    let n_max = *ladder.last().unwrap() as usize;
    let sizes = ladder.len();
    // per ladder size: counts of D_n (rows 0..sizes) and of the random-node
    // distance (rows sizes..2 sizes)
    let hist = fold_chunks(
        schedule,
        replicates,
        64,
        || vec![BTreeMap::<u64, u64>::new(); 2 * sizes],
        |range| {
            let mut hist = vec![BTreeMap::<u64, u64>::new(); 2 * sizes];
            let mut sampler = DistanceSampler::new(k).expect("k checked");
            sampler.reserve(n_max);
            for r in range {
                let mut rng = replicate_stream(seed, r);
                sampler.reset();
                for _ in 0..n_max {
                    sampler.grow(&mut rng);
                }
                for (i, &n) in ladder.iter().enumerate() {
                    let d = sampler.dist01(n as usize) as u64;
                    *hist[i].entry(d).or_insert(0) += 1;
                    let j = rng.random_range(1..=n as usize);
                    let d = sampler.dist01(j) as u64;
                    *hist[sizes + i].entry(d).or_insert(0) += 1;
                }
            }
            hist
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                for (d, c) in y {
                    *x.entry(d).or_insert(0) += c;
                }
            }
            a
        },
    );

    let table = |row: usize, n: u64, node: NodeSelector| EmpiricalTable {
        meta: TableMeta {
            k,
            n: n as usize,
            parameter: Parameter::Dist01,
            node,
            source: "distance sampler".into(),
        },
        counts: hist[row].clone(),
    };
    let mut points = Vec::with_capacity(sizes);
    let mut last = None;
    for (i, &n) in ladder.iter().enumerate() {
        let d = table(i, n, NodeSelector::Last);
        let bar = table(sizes + i, n, NodeSelector::Random);
        points.push(LadderPoint {
            n,
            mean: d.mean(),
            variance: d.variance(),
            bar_mean: bar.mean(),
            bar_variance: bar.variance(),
        });
        last = Some((d, bar));
    }
    let (d, bar) = last.unwrap();
    let ks = ks_discrete_normal(&d, d.mean(), d.variance().sqrt())?;
    let bar_ks = ks_discrete_normal(&bar, bar.mean(), bar.variance().sqrt())?;
    let xs: Vec<f64> = ladder.iter().map(|&n| (n as f64).ln()).collect();
    let col = |f: fn(&LadderPoint) -> f64| points.iter().map(f).collect::<Vec<f64>>();
    Ok(DistanceReport {
        k,
        replicates,
        seed,
        params,
        mean_slope: slope(&xs, &col(|p| p.mean)),
        variance_slope: slope(&xs, &col(|p| p.variance)),
        bar_mean_slope: slope(&xs, &col(|p| p.bar_mean)),
        bar_variance_slope: slope(&xs, &col(|p| p.bar_variance)),
        ks,
        bar_ks,
        ladder: points,
    })
}
