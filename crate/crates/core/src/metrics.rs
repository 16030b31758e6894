//! Per-node parameters measured on a concrete tree: out-degree, degree,
//! local clustering coefficient, descendant count and distances to the root.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::Parameter;
use crate::tree::{KTree, Label, NodeId};

/// Exact clustering coefficient; reduced `num/den`.
pub type Clustering = Ratio<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeMetrics {
    #[serde(serialize_with = "label_as_string")]
    pub label: Label,
    pub out_degree: usize,
    pub degree: usize,
    #[serde(serialize_with = "ratio_as_pair")]
    pub clustering: Clustering,
    pub descendants: usize,
    pub dist_to_01: u32,
    pub dist_to_root_clique: u32,
}

fn label_as_string<S: serde::Serializer>(l: &Label, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&l.to_string())
}

fn ratio_as_pair<S: serde::Serializer>(r: &Clustering, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize as _;
    (*r.numer(), *r.denom()).serialize(s)
}

/// Distances from every node to `0_1` and to the root clique, indexed by [`NodeId`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDistances {
    pub to_01: Vec<u32>,
    pub to_root_clique: Vec<u32>,
}

/// Read-only view of a tree with cached sorted adjacency lists.
pub struct GraphView<'a> {
    tree: &'a KTree,
    adjacency: Vec<Vec<NodeId>>,
}

impl<'a> GraphView<'a> {
    pub fn new(tree: &'a KTree) -> Self {
        Self {
            tree,
            adjacency: tree.adjacency(),
        }
    }

    pub fn tree(&self) -> &KTree {
        self.tree
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u as usize]
    }

    /// Number of edges among the neighbours of `u`.
    pub fn neighbor_edges(&self, u: NodeId) -> u64 {
        let nb = self.neighbors(u);
        let twice: usize = nb
            .iter()
            .map(|&x| sorted_intersection_len(self.neighbors(x), nb))
            .sum();
        (twice / 2) as u64
    }

    /// `C(u)`: edges among neighbours over `C(d(u), 2)`, or 0 when `d(u) <= 1`.
    pub fn clustering(&self, u: NodeId) -> Clustering {
        let d = self.neighbors(u).len() as u64;
        if d <= 1 {
            return Ratio::from_integer(0);
        }
        Ratio::new(self.neighbor_edges(u), d * (d - 1) / 2)
    }

    pub fn descendants(&self, u: NodeId) -> usize {
        descendants_of(self.tree, u)
    }

    pub fn root_distances(&self) -> RootDistances {
        RootDistances {
            to_01: self.bfs(&[0]),
            to_root_clique: self.bfs(&(0..self.tree.k() as NodeId).collect::<Vec<_>>()),
        }
    }

    fn bfs(&self, sources: &[NodeId]) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.tree.node_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &w in self.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Every metric for every node, roots first then inserted nodes by label.
    pub fn all(&self) -> Vec<NodeMetrics> {
        let dist = self.root_distances();
        let desc = descendant_counts(self.tree);
        (0..self.tree.node_count() as NodeId)
            .map(|u| NodeMetrics {
                label: self.tree.label_of(u),
                out_degree: self.tree.out_degree(u),
                degree: self.tree.degree(u),
                clustering: self.clustering(u),
                descendants: desc[u as usize],
                dist_to_01: dist.to_01[u as usize],
                dist_to_root_clique: dist.to_root_clique[u as usize],
            })
            .collect()
    }
}

/// Descendant count of `u`, counting `u` itself. A node is a descendant
/// when one of its parents is; labels increase along parent links, so a
/// single pass in label order suffices.
pub fn descendants_of(tree: &KTree, u: NodeId) -> usize {
    let mut marked = vec![false; tree.node_count()];
    marked[u as usize] = true;
    let mut count = 1;
    let start = (u as usize + 1).max(tree.k());
    for w in start..tree.node_count() {
        if tree.parents(w as NodeId).iter().any(|&p| marked[p as usize]) {
            marked[w] = true;
            count += 1;
        }
    }
    count
}

/// Descendant counts of all nodes, 64 candidate ancestors per pass.
pub fn descendant_counts(tree: &KTree) -> Vec<usize> {
    let total = tree.node_count();
    let mut counts = vec![0usize; total];
    let mut mask = vec![0u64; total];
    for block in (0..total).step_by(64) {
        let end = (block + 64).min(total);
        for w in 0..total {
            let mut bits = if (block..end).contains(&w) { 1u64 << (w - block) } else { 0 };
            for &p in tree.parents(w as NodeId) {
                bits |= mask[p as usize];
            }
            mask[w] = bits;
            while bits != 0 {
                counts[block + bits.trailing_zeros() as usize] += 1;
                bits &= bits - 1;
            }
        }
    }
    counts
}

/// Integer-valued parameter for every node, indexed by [`NodeId`].
pub fn integer_values(tree: &KTree, parameter: Parameter) -> Result<Vec<u64>> {
    let all = 0..tree.node_count() as NodeId;
    Ok(match parameter {
        Parameter::Outdegree => all.map(|u| tree.out_degree(u) as u64).collect(),
        Parameter::Descendants => descendant_counts(tree).into_iter().map(|x| x as u64).collect(),
        Parameter::Dist01 => distances_from_root(tree).to_01.into_iter().map(u64::from).collect(),
        Parameter::DistK0 => distances_from_root(tree).to_root_clique.into_iter().map(u64::from).collect(),
        Parameter::Clustering => return Err(Error::InvalidParameter("clustering is not integer-valued".into())),
    })
}

/// Integer-valued parameter of a single node.
pub fn measure_integer(tree: &KTree, parameter: Parameter, u: NodeId) -> Result<u64> {
    Ok(match parameter {
        Parameter::Outdegree => tree.out_degree(u) as u64,
        Parameter::Descendants => descendants_of(tree, u) as u64,
        Parameter::Dist01 => distances_from_root(tree).to_01[u as usize] as u64,
        Parameter::DistK0 => distances_from_root(tree).to_root_clique[u as usize] as u64,
        Parameter::Clustering => return Err(Error::InvalidParameter("clustering is not integer-valued".into())),
    })
}

fn sorted_intersection_len(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub fn out_degree(tree: &KTree, label: Label) -> Result<usize> {
    Ok(tree.out_degree(tree.node_id(label)?))
}

pub fn degree(tree: &KTree, label: Label) -> Result<usize> {
    Ok(tree.degree(tree.node_id(label)?))
}

pub fn clustering_direct(tree: &KTree, label: Label) -> Result<Clustering> {
    let u = tree.node_id(label)?;
    Ok(GraphView::new(tree).clustering(u))
}

/// Clustering coefficient as a function of the degree alone:
/// `2(k-1)/d - (k-1)(k-2)/(d(d-1))`, defined for `d >= k >= 2`.
pub fn clustering_formula(k: usize, d: usize) -> Result<Clustering> {
    if k < 2 || d < k {
        return Err(Error::Domain(format!("clustering formula needs d >= k >= 2, got k={k}, d={d}")));
    }
    let (k, d) = (k as u64, d as u64);
    Ok(Ratio::new(2 * (k - 1) * (d - 1) - (k - 1) * (k - 2), d * (d - 1)))
}

pub fn descendants(tree: &KTree, label: Label) -> Result<usize> {
    let u = tree.node_id(label)?;
    Ok(GraphView::new(tree).descendants(u))
}

pub fn distances_from_root(tree: &KTree) -> RootDistances {
    GraphView::new(tree).root_distances()
}

pub const METRICS_CSV_HEADER: &str = "label,outdeg,deg,clustering_num,clustering_den,descendants,dist01,distK0";

pub fn metrics_csv(rows: &[NodeMetrics]) -> String {
    let mut out = String::from(METRICS_CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.label,
            r.out_degree,
            r.degree,
            r.clustering.numer(),
            r.clustering.denom(),
            r.descendants,
            r.dist_to_01,
            r.dist_to_root_clique
        )
        .unwrap();
    }
    out
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::tree::{evolve, format};

    #[test]
    fn worked_example_parameters() {
        let t = worked_example();
        assert_eq!(t.size(), 11);
        assert_eq!(t.clique_count(), 23);
        let four = Label::Inserted(4);
        assert_eq!(out_degree(&t, four).unwrap(), 3);
        assert_eq!(descendants(&t, four).unwrap(), 5);
        assert_eq!(clustering_direct(&t, four).unwrap(), Ratio::new(2, 5));
        let d = distances_from_root(&t);
        let id = t.node_id(four).unwrap() as usize;
        assert_eq!(d.to_01[id], 1);
        assert_eq!(d.to_root_clique[id], 1);
        let text = format::serialize(&t);
        assert_eq!(text.lines().filter(|l| l.starts_with("node ")).count(), 11);
        assert_eq!(text.lines().filter(|l| l.starts_with("clique ")).count(), 23);
    }

    #[test]
    fn simple_cases() {
        let (t, _) = evolve(3, 40, 11).unwrap();
        assert_eq!(out_degree(&t, Label::Inserted(40)).unwrap(), 0);
        assert_eq!(descendants(&t, Label::Inserted(40)).unwrap(), 1);
        let root = KTree::new(2).unwrap();
        assert_eq!(out_degree(&root, Label::Root(1)).unwrap(), 0);
        assert!(matches!(out_degree(&root, Label::Inserted(1)), Err(Error::UnknownLabel(_))));
        let d = distances_from_root(&t);
        assert_eq!(&d.to_01[..3], &[0, 1, 1]);
        assert_eq!(&d.to_root_clique[..3], &[0, 0, 0]);
        assert_eq!(d.to_root_clique[t.inserted(1).unwrap() as usize], 1);
    }

    #[test]
    fn fresh_endnode_in_two_tree_has_clustering_one() {
        let (t, _) = evolve(2, 25, 4).unwrap();
        let last = t.inserted(25).unwrap();
        assert_eq!(t.degree(last), 2);
        assert_eq!(GraphView::new(&t).clustering(last), Ratio::from_integer(1));
    }

    #[test]
    fn port_clustering_is_zero() {
        let (t, _) = evolve(1, 60, 2).unwrap();
        let g = GraphView::new(&t);
        assert!((0..t.node_count() as NodeId).all(|u| g.clustering(u) == Ratio::from_integer(0)));
    }

    #[test]
    fn formula_values() {
        assert_eq!(clustering_formula(2, 5).unwrap(), Ratio::new(2, 5));
        assert_eq!(clustering_formula(3, 3).unwrap(), Ratio::from_integer(1));
        assert_eq!(clustering_formula(2, 2).unwrap(), Ratio::from_integer(1));
        assert!(clustering_formula(1, 4).is_err());
        assert!(clustering_formula(3, 2).is_err());
    }

    #[test]
    fn chain_descendants() {
        for k in 1..4 {
            let t = chain(k, 12);
            assert_eq!(descendants(&t, Label::Inserted(1)).unwrap(), 12);
            assert_eq!(descendants(&t, Label::Inserted(7)).unwrap(), 6);
        }
    }

    #[test]
    fn structural_invariants_on_random_trees() {
        for k in 1..=4usize {
            for seed in 0..5 {
                let (t, _) = evolve(k, 150, seed).unwrap();
                let g = GraphView::new(&t);
                let dist = g.root_distances();
                let total_edges: usize = (0..t.node_count()).map(|u| g.neighbors(u as NodeId).len()).sum();
                assert_eq!(total_edges / 2, t.edge_count());
                for u in 0..t.node_count() as NodeId {
                    let d = t.degree(u);
                    assert_eq!(d, g.neighbors(u).len());
                    if k >= 2 {
                        let expect = ((k - 1) * (k - 2) / 2 + (k - 1) * (d + 1 - k)) as u64;
                        assert_eq!(g.neighbor_edges(u), expect);
                        if d >= k {
                            assert_eq!(g.clustering(u), clustering_formula(k, d).unwrap());
                        }
                    }
                    let gap = dist.to_01[u as usize] - dist.to_root_clique[u as usize];
                    assert!(gap <= 1);
                }
            }
        }
    }

    #[test]
    fn descendants_match_independent_dfs() {
        // reachability along parent -> child links, computed by explicit DFS
        let (t, _) = evolve(3, 150, 8).unwrap();
        let mut kids: Vec<Vec<NodeId>> = vec![Vec::new(); t.node_count()];
        for w in t.k()..t.node_count() {
            for &p in t.parents(w as NodeId) {
                kids[p as usize].push(w as NodeId);
            }
        }
        let g = GraphView::new(&t);
        for u in 0..t.node_count() as NodeId {
            let mut seen = vec![false; t.node_count()];
            let mut stack = vec![u];
            seen[u as usize] = true;
            let mut count = 0;
            while let Some(x) = stack.pop() {
                count += 1;
                for &y in &kids[x as usize] {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y);
                    }
                }
            }
            assert_eq!(g.descendants(u), count);
        }
        let all = descendant_counts(&t);
        assert!((0..t.node_count()).all(|u| all[u] == g.descendants(u as NodeId)));
    }

    #[test]
    fn csv_layout() {
        let t = worked_example();
        let csv = metrics_csv(&GraphView::new(&t).all());
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), METRICS_CSV_HEADER);
        let row4 = csv.lines().find(|l| l.starts_with("4,")).unwrap();
        assert_eq!(row4, "4,3,5,2,5,5,1,1");
        assert!(csv.lines().nth(1).unwrap().starts_with("0_1,"));
    }
}
