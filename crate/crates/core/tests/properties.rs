use proptest::prelude::*;
use rand::Rng;

use ktree_lab::harness::{compare, mc_distribution, mc_node_laws, DistanceSampler, ExperimentConfig};
use ktree_lab::metrics::{descendant_counts, descendants_of, GraphView};
use ktree_lab::oracle::enumerate_laws;
use ktree_lab::rng::{replicate_stream, seeded};
use ktree_lab::schedule::Schedule;
use ktree_lab::table::{EmpiricalTable, NodeSelector, Parameter, TableMeta};
use ktree_lab::tree::format::{deserialize, format_trace, parse_trace, serialize};
use ktree_lab::tree::NodeId;
use ktree_lab::{evolve, replay};

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn text_and_trace_round_trips(k in 1usize..5, n in 0usize..60, seed in any::<u64>()) {
        let (tree, trace) = evolve(k, n, seed).unwrap();
        prop_assert_eq!(&deserialize(&serialize(&tree)).unwrap(), &tree);
        prop_assert_eq!(&parse_trace(&format_trace(&trace)).unwrap(), &trace);
        prop_assert_eq!(&replay(k, &trace).unwrap(), &tree);
        prop_assert_eq!(tree.trace(), trace);
    }

    #[test]
    fn structural_invariants(k in 1usize..5, n in 1usize..80, seed in any::<u64>()) {
        let (tree, _) = evolve(k, n, seed).unwrap();
        prop_assert_eq!(tree.clique_count(), 1 + k * n);
        prop_assert_eq!(tree.slot_count(), 1 + (k as u64 + 1) * n as u64);
        let adjacency_edges: usize = tree.adjacency().iter().map(Vec::len).sum::<usize>() / 2;
        prop_assert_eq!(adjacency_edges, k * (k - 1) / 2 + k * n);
        prop_assert_eq!(tree.edge_count(), adjacency_edges);
        let counts = descendant_counts(&tree);
        let view = GraphView::new(&tree);
        for u in 0..tree.node_count() as NodeId {
            prop_assert_eq!(counts[u as usize], descendants_of(&tree, u));
            if !tree.is_root(u) {
                prop_assert_eq!(tree.degree(u), k + tree.out_degree(u));
                // no triangles when k = 1
                prop_assert_eq!(view.clustering(u) > num_rational::Ratio::new(0, 1), k >= 2);
            }
        }
    }

    #[test]
    fn schedules_agree(seed in any::<u64>(), reps in 1u64..3000) {
        let c = ExperimentConfig::new(2, 15, Parameter::Outdegree, NodeSelector::Random).replicates(reps).seed(seed);
        let serial = mc_distribution(&c.clone().schedule(Schedule::Serial)).unwrap();
        let parallel = mc_distribution(&c.schedule(Schedule::Parallel)).unwrap();
        prop_assert_eq!(serial.sample_size(), reps);
        prop_assert_eq!(serial, parallel);
    }
}

fn table(k: usize, n: usize, node: NodeSelector) -> EmpiricalTable {
    EmpiricalTable::new(TableMeta {
        k,
        n,
        parameter: Parameter::Dist01,
        node,
        source: "distance sampler".into(),
    })
}

/// The reduced distance sampler has the law of the full tree model.
#[test]
fn distance_sampler_matches_enumeration() {
    for (k, n) in [(1usize, 7usize), (2, 6), (3, 5)] {
        let laws = enumerate_laws(k, n, Parameter::Dist01, u64::MAX, Schedule::default()).unwrap();
        let mut last = table(k, n, NodeSelector::Last);
        let mut random = table(k, n, NodeSelector::Random);
        let mut sampler = DistanceSampler::new(k).unwrap();
        for r in 0..200_000 {
            let mut rng = replicate_stream(99, r);
            sampler.reset();
            for _ in 0..n {
                sampler.grow(&mut rng);
            }
            last.record(sampler.dist01(n) as u64);
            random.record(sampler.dist01(rng.random_range(1..=n)) as u64);
        }
        for (empirical, node) in [(&last, NodeSelector::Fixed(n as u32)), (&random, NodeSelector::Random)] {
            let exact = laws.table(node).unwrap().to_float();
            let r = compare(empirical, &exact).unwrap();
            assert!(r.p_value > 1e-4, "k={k} n={n} {node}: {r:?}");
        }
    }
}

/// Monte Carlo on full trees against enumeration for the distance laws.
#[test]
fn tree_distances_match_enumeration() {
    let (k, n) = (2, 6);
    let laws = enumerate_laws(k, n, Parameter::DistK0, u64::MAX, Schedule::default()).unwrap();
    let mc = mc_node_laws(k, n, Parameter::DistK0, 100_000, 5, Schedule::default()).unwrap();
    for j in 1..=n {
        let exact = laws.table(NodeSelector::Fixed(j as u32)).unwrap().to_float();
        let r = compare(&mc[k + j - 1], &exact).unwrap();
        assert!(r.p_value > 1e-4, "j={j}: {r:?}");
    }
}

#[test]
fn sampler_grows_like_the_tree() {
    let mut s = DistanceSampler::new(3).unwrap();
    let mut rng = seeded(2);
    for _ in 0..1000 {
        s.grow(&mut rng);
    }
    assert_eq!(s.size(), 1000);
    assert_eq!(s.slot_weights().iter().sum::<u64>(), 1 + 4 * 1000);
    assert_eq!(s.cliques().count(), 1 + 3 * 1000);
}
