//! Radial neighbor queries over a growing point set.
//!
//! `near` returns exactly `{x ∈ A : ‖x − z‖ < r}` (open ball), where the
//! member set `A` is given as a filter over node ids. Points live in a static
//! k-d tree; points appended after the last build sit in a short linear tail
//! that is folded into the tree once it grows.

use crate::error::Result;
use crate::geom::{check_dim, dist, Config};

pub type NodeId = usize;

const LEAF_SIZE: usize = 12;
/// Axis-gap pruning is widened by this relative amount so it never drops a
/// point whose computed distance is below `r`.
const PRUNE_SLACK: f64 = 1e-9;

/// A growable set of node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdSet {
    words: Vec<u64>,
}

impl IdSet {
    pub fn new() -> Self {
        IdSet::default()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.words
            .get(id / 64)
            .is_some_and(|w| w & (1 << (id % 64)) != 0)
    }

    pub fn insert(&mut self, id: NodeId) {
        let w = id / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (id % 64);
    }

    pub fn remove(&mut self, id: NodeId) {
        if let Some(w) = self.words.get_mut(id / 64) {
            *w &= !(1 << (id % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| wi * 64 + b)
        })
    }
}

impl FromIterator<NodeId> for IdSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut s = IdSet::new();
        for id in iter {
            s.insert(id);
        }
        s
    }
}

#[derive(Debug, Clone)]
enum KdNode {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub struct PointIndex {
    dim: usize,
    /// Row-major coordinates, one row per node id.
    coords: Vec<f64>,
    /// Ids covered by the k-d tree, permuted so leaves are contiguous.
    perm: Vec<NodeId>,
    nodes: Vec<KdNode>,
    /// Ids `indexed..len()` are scanned linearly.
    indexed: usize,
}

impl PointIndex {
    /// Builds an index over `points`; node ids follow insertion order.
    pub fn build(points: &[Config]) -> Result<Self> {
        let dim = points.first().map_or(0, Config::dim);
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            check_dim(dim, p.dim())?;
            coords.extend_from_slice(p);
        }
        let mut idx = PointIndex {
            dim,
            coords,
            perm: Vec::new(),
            nodes: Vec::new(),
            indexed: 0,
        };
        idx.rebuild();
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.coords.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, id: NodeId) -> &[f64] {
        &self.coords[id * self.dim..(id + 1) * self.dim]
    }

    pub fn config(&self, id: NodeId) -> Config {
        Config::from_vec_unchecked(self.point(id).to_vec())
    }

    /// Appends a point and returns its id.
    pub fn insert(&mut self, p: &Config) -> Result<NodeId> {
        if self.is_empty() && self.dim == 0 {
            self.dim = p.dim();
        }
        check_dim(self.dim, p.dim())?;
        let id = self.len();
        self.coords.extend_from_slice(p);
        let tail = self.len() - self.indexed;
        if tail > 64 && tail * 8 > self.indexed {
            self.rebuild();
        }
        Ok(id)
    }

    fn rebuild(&mut self) {
        let n = self.len();
        self.perm = (0..n).collect();
        self.nodes.clear();
        self.indexed = n;
        if n > 0 {
            self.build_node(0, n);
        }
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(KdNode::Leaf { start, end });
        if end - start <= LEAF_SIZE {
            return id;
        }
        let (dim, coords) = (self.dim, &self.coords);
        let coord = |p: NodeId, a: usize| coords[p * dim + a];
        let axis = (0..dim)
            .map(|a| {
                let (mn, mx) = self.perm[start..end]
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(mn, mx), &p| {
                        (mn.min(coord(p, a)), mx.max(coord(p, a)))
                    });
                (a, mx - mn)
            })
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
            .0;
        let mid = (start + end) / 2;
        self.perm[start..end].select_nth_unstable_by(mid - start, |&p, &q| {
            coord(p, axis).total_cmp(&coord(q, axis))
        });
        let value = coord(self.perm[mid], axis);
        // Left holds coordinates <= value, right >= value.
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[id] = KdNode::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    /// Appends to `out`, in ascending id order, every id accepted by `member`
    /// whose point lies strictly within `r` of `z`. `out` is cleared first.
    pub fn near_where(
        &self,
        z: &[f64],
        r: f64,
        mut member: impl FnMut(NodeId) -> bool,
        out: &mut Vec<NodeId>,
    ) {
        out.clear();
        debug_assert_eq!(z.len(), self.dim);
        let reach = r * (1.0 + PRUNE_SLACK);
        if !self.nodes.is_empty() {
            let mut stack = vec![0usize];
            while let Some(n) = stack.pop() {
                match self.nodes[n] {
                    KdNode::Leaf { start, end } => {
                        for &p in &self.perm[start..end] {
                            if member(p) && dist(self.point(p), z) < r {
                                out.push(p);
                            }
                        }
                    }
                    KdNode::Split {
                        axis,
                        value,
                        left,
                        right,
                    } => {
                        let gap = z[axis] - value;
                        if gap < reach {
                            stack.push(left);
                        }
                        if -gap < reach {
                            stack.push(right);
                        }
                    }
                }
            }
        }
        for p in self.indexed..self.len() {
            if member(p) && dist(self.point(p), z) < r {
                out.push(p);
            }
        }
        out.sort_unstable();
    }

    /// Members of `members` within the open ball of radius `r` around `z`.
    pub fn near(&self, members: &IdSet, z: &Config, r: f64) -> Result<Vec<NodeId>> {
        check_dim(self.dim, z.dim())?;
        let mut out = Vec::new();
        self.near_where(z, r, |id| members.contains(id), &mut out);
        Ok(out)
    }

    /// Every indexed point within the open ball.
    pub fn near_all(&self, z: &[f64], r: f64) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.near_where(z, r, |_| true, &mut out);
        out
    }
}
