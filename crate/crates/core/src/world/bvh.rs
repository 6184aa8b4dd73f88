//! Bounding-volume hierarchy over the obstacle boxes, used as a broad phase
//! for segment queries.

use super::aabb::Aabb;

const LEAF_SIZE: usize = 4;
/// Node boxes are widened by this much so that rounding in the broad phase
/// can never hide a hit found by the exact test.
const MARGIN: f64 = 1e-9;

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: usize, end: usize },
    Inner { left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct ObstacleBvh {
    bounds: Vec<Aabb>,
    nodes: Vec<Node>,
    /// Obstacle indices, permuted so each leaf covers a contiguous range.
    order: Vec<usize>,
}

impl ObstacleBvh {
    pub(crate) fn build(obstacles: &[Aabb]) -> Self {
        let mut bvh = ObstacleBvh {
            bounds: Vec::new(),
            nodes: Vec::new(),
            order: (0..obstacles.len()).collect(),
        };
        if !obstacles.is_empty() {
            bvh.build_range(obstacles, 0, obstacles.len());
        }
        bvh
    }

    fn build_range(&mut self, obstacles: &[Aabb], start: usize, end: usize) -> usize {
        let bounds = self.order[start + 1..end]
            .iter()
            .fold(obstacles[self.order[start]].clone(), |acc, &i| {
                acc.union(&obstacles[i])
            });
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { start, end });
        self.bounds.push(bounds);
        if end - start <= LEAF_SIZE {
            return id;
        }

        // Split at the median centroid along the widest centroid axis.
        let dim = obstacles[0].dim();
        let centroid = |i: usize, axis: usize| obstacles[i].lo()[axis] + obstacles[i].hi()[axis];
        let axis = (0..dim)
            .max_by(|&a, &b| {
                let spread = |ax| {
                    let (mn, mx) = self.order[start..end].iter().fold(
                        (f64::INFINITY, f64::NEG_INFINITY),
                        |(mn, mx), &i| (mn.min(centroid(i, ax)), mx.max(centroid(i, ax))),
                    );
                    mx - mn
                };
                spread(a).total_cmp(&spread(b))
            })
            .unwrap_or(0);
        let mid = (start + end) / 2;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            centroid(a, axis)
                .total_cmp(&centroid(b, axis))
                .then(a.cmp(&b))
        });

        let left = self.build_range(obstacles, start, mid);
        let right = self.build_range(obstacles, mid, end);
        self.nodes[id] = Node::Inner { left, right };
        id
    }

    /// Visits every obstacle whose widened box the segment touches, stopping
    /// early when `hit` returns true. Returns whether any call did.
    pub(crate) fn any_along_segment(
        &self,
        a: &[f64],
        b: &[f64],
        mut hit: impl FnMut(usize) -> bool,
    ) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            if !self.bounds[id].segment_touches(a, b, MARGIN) {
                continue;
            }
            match self.nodes[id] {
                Node::Leaf { start, end } => {
                    if self.order[start..end].iter().any(|&i| hit(i)) {
                        return true;
                    }
                }
                Node::Inner { left, right } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        false
    }

    /// Visits every obstacle whose widened box contains `x`.
    pub(crate) fn any_at_point(&self, x: &[f64], hit: impl FnMut(usize) -> bool) -> bool {
        self.any_along_segment(x, x, hit)
    }
}
