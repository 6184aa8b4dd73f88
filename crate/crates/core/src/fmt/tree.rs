use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::nnindex::NodeId;

/// Which query endpoint a tree grows from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootLabel {
    Init,
    Goal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Membership {
    /// Not a sample this tree knows about (a node resampled into the other
    /// tree).
    Absent,
    /// Not reached yet.
    Unvisited,
    /// In the tree and on the wavefront.
    Open,
    /// In the tree, already expanded.
    Closed,
}

#[derive(Debug, Clone, Copy)]
struct CostKey(f64);

impl PartialEq for CostKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for CostKey {}
impl PartialOrd for CostKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for CostKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

const NO_PARENT: NodeId = NodeId::MAX;

/// A search tree over a shared sample id space.
///
/// Every id is unvisited, in the tree, or unknown to it. The wavefront is the
/// part of the tree not yet expanded, ordered by cost-to-root with ties
/// broken by the smaller id.
#[derive(Debug, Clone)]
pub struct Tree {
    root: NodeId,
    label: RootLabel,
    state: Vec<Membership>,
    parent: Vec<NodeId>,
    cost: Vec<f64>,
    open: BTreeSet<(CostKey, NodeId)>,
    visited: usize,
}

impl Tree {
    /// A tree whose unvisited set is every id in `0..sample_count` except
    /// `root`, which starts on the wavefront with cost 0.
    pub fn new(root: NodeId, label: RootLabel, sample_count: usize) -> Self {
        assert!(root < sample_count, "root {root} outside 0..{sample_count}");
        let mut t = Tree {
            root,
            label,
            state: vec![Membership::Unvisited; sample_count],
            parent: vec![NO_PARENT; sample_count],
            cost: vec![f64::INFINITY; sample_count],
            open: BTreeSet::new(),
            visited: 0,
        };
        t.attach(root, NO_PARENT, 0.0);
        t.open(root);
        t
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn label(&self) -> RootLabel {
        self.label
    }

    fn state(&self, id: NodeId) -> Membership {
        self.state.get(id).copied().unwrap_or(Membership::Absent)
    }

    /// Whether `id` is in the tree, open or closed.
    pub fn contains(&self, id: NodeId) -> bool {
        matches!(self.state(id), Membership::Open | Membership::Closed)
    }

    pub fn is_unvisited(&self, id: NodeId) -> bool {
        self.state(id) == Membership::Unvisited
    }

    /// On the wavefront.
    pub fn is_open(&self, id: NodeId) -> bool {
        self.state(id) == Membership::Open
    }

    /// In the tree and off the wavefront.
    pub fn is_closed(&self, id: NodeId) -> bool {
        self.state(id) == Membership::Closed
    }

    pub fn cost(&self, id: NodeId) -> Option<f64> {
        self.contains(id).then(|| self.cost[id])
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        if self.contains(id) && self.parent[id] != NO_PARENT {
            Some(self.parent[id])
        } else {
            None
        }
    }

    /// `|V|`.
    pub fn len(&self) -> usize {
        self.visited
    }

    pub fn is_empty(&self) -> bool {
        self.visited == 0
    }

    pub fn open_len(&self) -> usize {
        self.open.len()
    }

    pub fn open_is_empty(&self) -> bool {
        self.open.is_empty()
    }

    /// The cheapest wavefront node and its cost.
    pub fn min_open(&self) -> Option<(f64, NodeId)> {
        self.open.first().map(|&(c, id)| (c.0, id))
    }

    pub fn visited(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.state.len()).filter(|&i| self.contains(i))
    }

    pub fn open_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.open.iter().map(|&(_, id)| id)
    }

    /// Ids from `id` back to the root, inclusive.
    pub fn path_to_root(&self, id: NodeId) -> Option<Vec<NodeId>> {
        if !self.contains(id) {
            return None;
        }
        let mut out = vec![id];
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            out.push(p);
            cur = p;
        }
        Some(out)
    }

    /// Adds `id` to V as a closed node. Callers open it separately.
    pub(crate) fn attach(&mut self, id: NodeId, parent: NodeId, cost: f64) {
        if id >= self.state.len() {
            self.state.resize(id + 1, Membership::Absent);
            self.parent.resize(id + 1, NO_PARENT);
            self.cost.resize(id + 1, f64::INFINITY);
        }
        debug_assert!(!self.contains(id));
        self.state[id] = Membership::Closed;
        self.parent[id] = parent;
        self.cost[id] = cost;
        self.visited += 1;
    }

    pub(crate) fn open(&mut self, id: NodeId) {
        debug_assert!(self.is_closed(id));
        self.state[id] = Membership::Open;
        self.open.insert((CostKey(self.cost[id]), id));
    }

    pub(crate) fn close(&mut self, id: NodeId) {
        debug_assert!(self.is_open(id));
        self.state[id] = Membership::Closed;
        self.open.remove(&(CostKey(self.cost[id]), id));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_tree_layout() {
        let t = Tree::new(1, RootLabel::Goal, 4);
        assert_eq!(t.len(), 1);
        assert!(t.is_open(1) && t.contains(1));
        assert!(t.is_unvisited(0) && t.is_unvisited(3));
        assert!(!t.contains(7) && !t.is_unvisited(7));
        assert_eq!(t.min_open(), Some((0.0, 1)));
        assert_eq!(t.path_to_root(1), Some(vec![1]));
    }

    #[test]
    fn wavefront_orders_by_cost_then_id() {
        let mut t = Tree::new(0, RootLabel::Init, 5);
        for (id, c) in [(3, 0.5), (2, 0.5), (4, 0.2)] {
            t.attach(id, 0, c);
            t.open(id);
        }
        t.close(0);
        let order: Vec<_> = t.open_nodes().collect();
        assert_eq!(order, vec![4, 2, 3]);
        assert_eq!(t.path_to_root(3), Some(vec![3, 0]));
    }

    #[test]
    fn attach_beyond_sample_count() {
        let mut t = Tree::new(0, RootLabel::Init, 2);
        t.attach(5, 0, 1.0);
        assert!(t.contains(5));
        assert!(!t.is_unvisited(3) && !t.contains(3));
    }
}
