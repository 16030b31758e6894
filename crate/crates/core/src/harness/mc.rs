//! Monte Carlo sampling of node parameters.
//!
//! Replicate `i` grows its tree from stream `i` of the experiment seed and,
//! for a random node, draws the node from the same stream afterwards. Work is
//! split into fixed chunks of replicates whose count tables are summed, so the
//! merged result is the same for every schedule and thread count.

use rand::Rng;

use crate::error::{Error, Result};
use crate::metrics::{integer_values, measure_integer, Clustering, GraphView};
use crate::rng::{replicate_stream, ExperimentRng};
use crate::schedule::{fold_chunks, Schedule};
use crate::table::{EmpiricalTable, NodeSelector, Parameter, TableMeta};
use crate::tree::{evolve_with, KTree, NodeId};

use super::ExperimentConfig;

const CHUNK: u64 = 1024;

fn select_node(tree: &KTree, node: NodeSelector, rng: &mut ExperimentRng) -> NodeId {
    match node {
        NodeSelector::Root => 0,
        NodeSelector::Fixed(j) => tree.inserted(j).expect("validated selector"),
        NodeSelector::Last => tree.inserted(tree.size() as u32).expect("validated selector"),
        NodeSelector::Random => {
            let j = rng.random_range(1..=tree.size() as u32);
            tree.inserted(j).expect("label in range")
        }
    }
}

/// Tree and selected node of replicate `index`.
pub fn sample_replicate(config: &ExperimentConfig, index: u64) -> Result<(KTree, NodeId)> {
    config.validate()?;
    let mut rng = replicate_stream(config.seed, index);
    let (tree, _) = evolve_with(config.k, config.n, &mut rng)?;
    let u = select_node(&tree, config.node, &mut rng);
    Ok((tree, u))
}

fn run<K, F>(config: &ExperimentConfig, measure: F) -> Result<EmpiricalTable<K>>
where
    K: Ord + Clone + Send,
    F: Fn(&KTree, NodeId) -> K + Sync + Send,
{
    config.validate()?;
    let meta = config.meta("monte carlo");
    let table = fold_chunks(
        config.schedule,
        config.replicates,
        CHUNK,
        || EmpiricalTable::new(meta.clone()),
        |range| {
            let mut part = EmpiricalTable::new(meta.clone());
            for i in range {
                let mut rng = replicate_stream(config.seed, i);
                let (tree, _) = evolve_with(config.k, config.n, &mut rng).expect("validated config");
                let u = select_node(&tree, config.node, &mut rng);
                part.record(measure(&tree, u));
            }
            part
        },
        |mut a, b| {
            a.merge(&b);
            a
        },
    );
    Ok(table)
}

/// Empirical distribution of an integer-valued parameter.
pub fn mc_distribution(config: &ExperimentConfig) -> Result<EmpiricalTable> {
    if config.parameter == Parameter::Clustering {
        return Err(Error::InvalidParameter(
            "clustering is rational-valued; use mc_clustering".into(),
        ));
    }
    let parameter = config.parameter;
    run(config, move |tree, u| measure_integer(tree, parameter, u).expect("integer parameter"))
}

/// Empirical distribution of the clustering coefficient.
pub fn mc_clustering(config: &ExperimentConfig) -> Result<EmpiricalTable<Clustering>> {
    run(config, |tree, u| GraphView::new(tree).clustering(u))
}

/// One empirical table per node (indexed by [`NodeId`], roots first) from a
/// single batch of trees: every tree contributes a value at every node.
pub fn mc_node_laws(
    k: usize,
    n: usize,
    parameter: Parameter,
    replicates: u64,
    seed: u64,
    schedule: Schedule,
) -> Result<Vec<EmpiricalTable>> {
    let probe = ExperimentConfig::new(k, n, parameter, NodeSelector::Root).replicates(replicates);
    probe.validate()?;
    if parameter == Parameter::Clustering {
        return Err(Error::InvalidParameter("clustering is rational-valued".into()));
    }
    let nodes = k + n;
    // dense histograms: every parameter here is at most n + k
    let width = n + k + 2;
    let counts = fold_chunks(
        schedule,
        replicates,
        CHUNK,
        || vec![0u64; nodes * width],
        |range| {
            let mut hist = vec![0u64; nodes * width];
            for i in range {
                let mut rng = replicate_stream(seed, i);
                let (tree, _) = evolve_with(k, n, &mut rng).expect("validated config");
                for (u, v) in integer_values(&tree, parameter).expect("integer parameter").into_iter().enumerate() {
                    hist[u * width + v as usize] += 1;
                }
            }
            hist
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    Ok((0..nodes)
        .map(|u| {
            let node = if u < k { NodeSelector::Root } else { NodeSelector::Fixed((u - k + 1) as u32) };
            let mut table = EmpiricalTable::new(TableMeta {
                k,
                n,
                parameter,
                node,
                source: "monte carlo".into(),
            });
            for (v, &c) in counts[u * width..(u + 1) * width].iter().enumerate() {
                if c > 0 {
                    table.counts.insert(v as u64, c);
                }
            }
            table
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_node_has_no_children() {
        for seed in 0..3 {
            let c = ExperimentConfig::new(3, 20, Parameter::Outdegree, NodeSelector::Last)
                .replicates(500)
                .seed(seed);
            let t = mc_distribution(&c).unwrap();
            assert_eq!(t.counts.len(), 1);
            assert_eq!(t.counts.get(&0), Some(&500));
        }
    }

    #[test]
    fn schedules_give_identical_tables() {
        let c = ExperimentConfig::new(2, 12, Parameter::Descendants, NodeSelector::Random).replicates(3000).seed(9);
        let serial = mc_distribution(&c.clone().schedule(Schedule::Serial)).unwrap();
        let parallel = mc_distribution(&c.schedule(Schedule::Parallel)).unwrap();
        assert_eq!(serial, parallel);
        let a = mc_node_laws(2, 8, Parameter::Dist01, 2500, 4, Schedule::Serial).unwrap();
        let b = mc_node_laws(2, 8, Parameter::Dist01, 2500, 4, Schedule::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn node_laws_match_single_node_runs() {
        let laws = mc_node_laws(2, 10, Parameter::Outdegree, 2000, 5, Schedule::default()).unwrap();
        let single = mc_distribution(
            &ExperimentConfig::new(2, 10, Parameter::Outdegree, NodeSelector::Fixed(4)).replicates(2000).seed(5),
        )
        .unwrap();
        assert_eq!(laws[2 + 3].counts, single.counts);
        let root = mc_distribution(
            &ExperimentConfig::new(2, 10, Parameter::Outdegree, NodeSelector::Root).replicates(2000).seed(5),
        )
        .unwrap();
        assert_eq!(laws[0].counts, root.counts);
    }

    #[test]
    fn replicate_reproduces_from_index() {
        let c = ExperimentConfig::new(2, 15, Parameter::Outdegree, NodeSelector::Random).seed(3);
        let (a, ua) = sample_replicate(&c, 17).unwrap();
        let (b, ub) = sample_replicate(&c, 17).unwrap();
        assert_eq!((a, ua), (b, ub));
    }

    #[test]
    fn clustering_of_last_node_is_one() {
        let c = ExperimentConfig::new(3, 10, Parameter::Clustering, NodeSelector::Last).replicates(100);
        let t = mc_clustering(&c).unwrap();
        assert_eq!(t.counts.get(&Clustering::new(1, 1)), Some(&100));
        assert!(mc_distribution(&c).is_err());
    }
}
