/// Growable Fenwick tree over clique slot weights.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct Fenwick {
    // 1-based; tree[0] is unused
    tree: Vec<u64>,
}

fn lowbit(i: usize) -> usize {
    i & i.wrapping_neg()
}

impl Fenwick {
    pub fn len(&self) -> usize {
        self.tree.len().saturating_sub(1)
    }

    pub fn push(&mut self, weight: u64) {
        if self.tree.is_empty() {
            self.tree.push(0);
        }
        let i = self.tree.len();
        let covered = self.prefix(i - 1) - self.prefix(i - lowbit(i));
        self.tree.push(weight + covered);
    }

    /// Add to the weight at 0-based position `pos`.
    pub fn add(&mut self, pos: usize, delta: u64) {
        let mut i = pos + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += lowbit(i);
        }
    }

    pub fn sub(&mut self, pos: usize, delta: u64) {
        let mut i = pos + 1;
        while i < self.tree.len() {
            self.tree[i] -= delta;
            i += lowbit(i);
        }
    }

    /// Sum of the first `count` weights.
    pub fn prefix(&self, count: usize) -> u64 {
        let mut i = count;
        let mut acc = 0;
        while i > 0 {
            acc += self.tree[i];
            i -= lowbit(i);
        }
        acc
    }

    /// Smallest 0-based position whose inclusive prefix sum reaches `target`.
    pub fn lower_bound(&self, target: u64) -> usize {
        let n = self.len();
        let mut pos = 0;
        let mut remaining = target;
        let mut step = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] < remaining {
                pos = next;
                remaining -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }

    pub fn truncate(&mut self, len: usize) {
        self.tree.truncate(len + 1);
    }
}
