//! Ordered increasing k-trees grown by preferential attachment.
//!
//! A tree starts from the root clique `{0_1, ..., 0_k}`. Each insertion
//! attaches the next node to every member of one existing k-clique and at one
//! position among that clique's ordered children. Every such
//! `(clique, position)` pair is a *slot*; a clique with `d` children offers
//! `d + 1` slots, so choosing a slot uniformly attaches to clique `K` with
//! probability `(d⁺(K) + 1) / (1 + (k+1)(n-1))`.
//!
//! Slots are numbered canonically: cliques in creation order (the root clique
//! first, then the `k` cliques of each insertion ordered by which parent member
//! was dropped, lowest index first), and within a clique by child position.
//! Under that numbering a sequence of slot choices ([`InsertionTrace`]) and a
//! tree determine each other.

mod fenwick;
pub mod format;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;
use fenwick::Fenwick;

/// Index of a node inside a [`KTree`]: root nodes occupy `0..k`, inserted
/// node `j` sits at `k + j - 1`.
pub type NodeId = u32;

/// Index of a clique in creation order; the root clique is `0`.
pub type CliqueId = u32;

/// Node label. All root labels carry the numeric value 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// `0_l` with `1 <= l <= k`.
    Root(u32),
    /// Inserted node `j >= 1`.
    Inserted(u32),
}

impl Label {
    pub fn value(self) -> u32 {
        match self {
            Label::Root(_) => 0,
            Label::Inserted(j) => j,
        }
    }

    pub fn is_root(self) -> bool {
        matches!(self, Label::Root(_))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Root(l) => write!(f, "0_{l}"),
            Label::Inserted(j) => write!(f, "{j}"),
        }
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("0_") {
            let l: u32 = rest.parse().map_err(|_| format!("bad root label `{s}`"))?;
            if l == 0 {
                return Err(format!("root labels start at 0_1, got `{s}`"));
            }
            return Ok(Label::Root(l));
        }
        let j: u32 = s.parse().map_err(|_| format!("bad node label `{s}`"))?;
        if j == 0 {
            return Err("inserted labels start at 1; write root nodes as 0_l".into());
        }
        Ok(Label::Inserted(j))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeRecord {
    pub label: Label,
    /// Clique the node was attached to; `None` for root nodes.
    pub parent_clique: Option<CliqueId>,
    /// Adjacent nodes with a larger label, in insertion order.
    pub out_neighbors: Vec<NodeId>,
}

impl NodeRecord {
    pub fn out_degree(&self) -> usize {
        self.out_neighbors.len()
    }
}

/// Borrowed view of one k-clique.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliqueRecord<'a> {
    pub id: CliqueId,
    pub members: &'a [NodeId],
    /// Labels of the nodes attached to this clique, in child order.
    pub children: &'a [u32],
}

impl CliqueRecord<'_> {
    pub fn child_count(&self) -> usize {
        self.children.len()
    }

    pub fn slot_count(&self) -> usize {
        self.children.len() + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KTree {
    k: usize,
    nodes: Vec<NodeRecord>,
    /// Clique members, `k` entries per clique.
    members: Vec<NodeId>,
    children: Vec<Vec<u32>>,
    weights: Fenwick,
}

/// Slot choices `s_1, ..., s_n` with `1 <= s_i <= 1 + (k+1)(i-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InsertionTrace {
    pub k: usize,
    pub choices: Vec<u64>,
}

impl InsertionTrace {
    pub fn new(k: usize, choices: Vec<u64>) -> Self {
        Self { k, choices }
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }
}

/// Number of slots available when inserting node `i` (i.e. in a tree of size `i - 1`).
pub fn slots_before_insertion(k: usize, i: u64) -> u64 {
    1 + (k as u64 + 1) * (i - 1)
}

impl KTree {
    pub fn new(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
        }
        let nodes = (0..k)
            .map(|l| NodeRecord {
                label: Label::Root(l as u32 + 1),
                parent_clique: None,
                out_neighbors: Vec::new(),
            })
            .collect();
        let mut weights = Fenwick::default();
        weights.push(1);
        Ok(Self {
            k,
            nodes,
            members: (0..k as NodeId).collect(),
            children: vec![Vec::new()],
            weights,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of inserted (non-root) nodes.
    pub fn size(&self) -> usize {
        self.nodes.len() - self.k
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn clique_count(&self) -> usize {
        self.children.len()
    }

    /// `1 + (k+1) n`, the sum over cliques of `d⁺(K) + 1`.
    pub fn slot_count(&self) -> u64 {
        1 + (self.k as u64 + 1) * self.size() as u64
    }

    pub fn edge_count(&self) -> usize {
        self.k * self.size() + self.k * (self.k - 1) / 2
    }

    pub fn nodes(&self) -> &[NodeRecord] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &NodeRecord {
        &self.nodes[id as usize]
    }

    pub fn label_of(&self, id: NodeId) -> Label {
        self.nodes[id as usize].label
    }

    pub fn node_id(&self, label: Label) -> Result<NodeId> {
        let id = match label {
            Label::Root(l) if l >= 1 && (l as usize) <= self.k => l - 1,
            Label::Inserted(j) if j >= 1 && (j as usize) <= self.size() => self.k as u32 + j - 1,
            _ => return Err(Error::UnknownLabel(label.to_string())),
        };
        Ok(id)
    }

    /// Node id of inserted node `j`.
    pub fn inserted(&self, j: u32) -> Result<NodeId> {
        self.node_id(Label::Inserted(j))
    }

    pub fn is_root(&self, id: NodeId) -> bool {
        (id as usize) < self.k
    }

    pub fn clique(&self, id: CliqueId) -> CliqueRecord<'_> {
        let i = id as usize;
        CliqueRecord {
            id,
            members: &self.members[i * self.k..(i + 1) * self.k],
            children: &self.children[i],
        }
    }

    pub fn cliques(&self) -> impl Iterator<Item = CliqueRecord<'_>> + '_ {
        (0..self.clique_count() as CliqueId).map(move |c| self.clique(c))
    }

    /// Parents of an inserted node (the members of its parent clique); empty for roots.
    pub fn parents(&self, id: NodeId) -> &[NodeId] {
        match self.nodes[id as usize].parent_clique {
            Some(c) => self.clique(c).members,
            None => &[],
        }
    }

    pub fn out_degree(&self, id: NodeId) -> usize {
        self.nodes[id as usize].out_neighbors.len()
    }

    /// `d⁺(u) + k` for inserted nodes, `d⁺(u) + k - 1` for root nodes.
    pub fn degree(&self, id: NodeId) -> usize {
        let base = if self.is_root(id) { self.k - 1 } else { self.k };
        self.out_degree(id) + base
    }

    /// All neighbours of a node in the underlying simple graph.
    pub fn neighbors(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.degree(id));
        if self.is_root(id) {
            out.extend((0..self.k as NodeId).filter(|&r| r != id));
        } else {
            out.extend_from_slice(self.parents(id));
        }
        out.extend_from_slice(&self.nodes[id as usize].out_neighbors);
        out
    }

    /// Sorted adjacency lists for every node.
    pub fn adjacency(&self) -> Vec<Vec<NodeId>> {
        (0..self.nodes.len() as NodeId)
            .map(|u| {
                let mut nb = self.neighbors(u);
                nb.sort_unstable();
                nb
            })
            .collect()
    }

    /// Resolve a canonical slot number into `(clique, child position)`, both
    /// 1-based in the position and 0-based in the clique.
    pub fn locate_slot(&self, slot: u64) -> Result<(CliqueId, usize)> {
        let max = self.slot_count();
        if slot < 1 || slot > max {
            return Err(Error::InvalidSlot { slot, max });
        }
        let idx = self.weights.lower_bound(slot);
        let before = self.weights.prefix(idx);
        Ok((idx as CliqueId, (slot - before) as usize))
    }

    /// Canonical slot number of `(clique, position)`.
    pub fn slot_of(&self, clique: CliqueId, position: usize) -> Result<u64> {
        let c = clique as usize;
        if c >= self.clique_count() || position < 1 || position > self.children[c].len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "no slot at clique {clique}, position {position}"
            )));
        }
        Ok(self.weights.prefix(c) + position as u64)
    }

    /// Insert node `n + 1` at the given canonical slot and return its label.
    pub fn insert_at(&mut self, slot: u64) -> Result<u32> {
        let (clique, position) = self.locate_slot(slot)?;
        Ok(self.attach(clique, position))
    }

    fn attach(&mut self, clique: CliqueId, position: usize) -> u32 {
        let k = self.k;
        let label = self.size() as u32 + 1;
        let id = self.nodes.len() as NodeId;
        let c = clique as usize;

        self.children[c].insert(position - 1, label);
        self.weights.add(c, 1);
        for i in 0..k {
            let m = self.members[c * k + i];
            self.nodes[m as usize].out_neighbors.push(id);
        }
        self.nodes.push(NodeRecord {
            label: Label::Inserted(label),
            parent_clique: Some(clique),
            out_neighbors: Vec::new(),
        });
        for drop in 0..k {
            for i in 0..k {
                if i != drop {
                    let m = self.members[c * k + i];
                    self.members.push(m);
                }
            }
            self.members.push(id);
            self.children.push(Vec::new());
            self.weights.push(1);
        }
        label
    }

    /// Undo the most recent insertion. Used for backtracking enumeration.
    pub(crate) fn pop_last(&mut self) {
        let k = self.k;
        assert!(self.size() > 0, "pop_last on a root-only tree");
        let node = self.nodes.pop().unwrap();
        let label = match node.label {
            Label::Inserted(j) => j,
            Label::Root(_) => unreachable!(),
        };
        let c = node.parent_clique.unwrap() as usize;
        let new_len = self.children.len() - k;
        self.children.truncate(new_len);
        self.members.truncate(new_len * k);
        self.weights.truncate(new_len);
        let pos = self.children[c].iter().position(|&x| x == label).unwrap();
        self.children[c].remove(pos);
        self.weights.sub(c, 1);
        for i in 0..k {
            let m = self.members[c * k + i];
            let popped = self.nodes[m as usize].out_neighbors.pop();
            debug_assert_eq!(popped as Option<NodeId>, Some(self.nodes.len() as NodeId));
        }
    }

    /// Recover the trace that builds this tree.
    pub fn trace(&self) -> InsertionTrace {
        let mut rebuilt = KTree::new(self.k).unwrap();
        let mut choices = Vec::with_capacity(self.size());
        for j in 1..=self.size() as u32 {
            let node = &self.nodes[self.k + j as usize - 1];
            let c = node.parent_clique.unwrap();
            let position = 1 + self.children[c as usize]
                .iter()
                .take_while(|&&x| x != j)
                .filter(|&&x| x < j)
                .count();
            let slot = rebuilt.slot_of(c, position).unwrap();
            rebuilt.attach(c, position);
            choices.push(slot);
        }
        InsertionTrace::new(self.k, choices)
    }
}

/// Grow a tree of size `n` with a caller-supplied generator.
pub fn evolve_with<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> Result<(KTree, InsertionTrace)> {
    let mut tree = KTree::new(k)?;
    let mut choices = Vec::with_capacity(n);
    for _ in 0..n {
        let slot = rng.random_range(1..=tree.slot_count());
        tree.insert_at(slot)?;
        choices.push(slot);
    }
    Ok((tree, InsertionTrace::new(k, choices)))
}

/// Grow a uniformly random ordered increasing k-tree of size `n`.
pub fn evolve(k: usize, n: usize, seed: u64) -> Result<(KTree, InsertionTrace)> {
    evolve_with(k, n, &mut rng::seeded(seed))
}

/// Rebuild the tree encoded by a trace.
pub fn replay(k: usize, trace: &InsertionTrace) -> Result<KTree> {
    if trace.k != k {
        return Err(Error::InvalidParameter(format!(
            "trace is for k={}, requested k={k}",
            trace.k
        )));
    }
    let mut tree = KTree::new(k)?;
    for (step, &choice) in trace.choices.iter().enumerate() {
        let max = tree.slot_count();
        if choice < 1 || choice > max {
            return Err(Error::InvalidTrace {
                step: step + 1,
                choice,
                max,
            });
        }
        tree.insert_at(choice)?;
    }
    Ok(tree)
}
