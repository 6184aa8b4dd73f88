//! Ground truth for planner outputs: exact shortest paths on the
//! collision-checked `r`-disk graph, and a certificate check for
//! `(ε, r)`-traces of a reference path.
//!
//! Edges are collision-checked from the smaller id to the larger, and path
//! costs are accumulated left to right from the source, exactly as the
//! planners do. A planner's cost over the same samples and radius is
//! therefore never below [`dijkstra_optimum`], with no floating-point slack.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geom::{check_dim, dist, path_cost, Config, Polyline};
use crate::nnindex::{NodeId, PointIndex};
use crate::world::World;

/// The collision-free subgraph of the open `r`-disk graph over `samples`.
#[derive(Debug, Clone)]
pub struct DiskGraph {
    samples: Vec<Config>,
    r: f64,
    /// Neighbor lists sorted by id, with edge lengths.
    adj: Vec<Vec<(NodeId, f64)>>,
}

impl DiskGraph {
    /// Builds the graph using a neighbor index.
    pub fn build(w: &World, samples: &[Config], r: f64) -> Result<Self> {
        let mut stop = |_: u64| false;
        Ok(DiskGraph::build_until(w, samples, r, &mut stop)?.expect("never stopped"))
    }

    /// Builds the graph, calling `stop` with the running collision-check
    /// count after every check. Returns `None` if `stop` ever answers true.
    pub(crate) fn build_until(
        w: &World,
        samples: &[Config],
        r: f64,
        stop: &mut dyn FnMut(u64) -> bool,
    ) -> Result<Option<Self>> {
        check_samples(w, samples)?;
        let index = PointIndex::build(samples)?;
        let mut adj = vec![Vec::new(); samples.len()];
        let mut checks = 0u64;
        for i in 0..samples.len() {
            for j in index.near_all(&samples[i], r) {
                if j <= i {
                    continue;
                }
                checks += 1;
                if w.segment_free_raw(&samples[i], &samples[j]) {
                    let d = dist(&samples[i], &samples[j]);
                    adj[i].push((j, d));
                    adj[j].push((i, d));
                }
                if stop(checks) {
                    return Ok(None);
                }
            }
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
        }
        Ok(Some(DiskGraph {
            samples: samples.to_vec(),
            r,
            adj,
        }))
    }

    /// Builds the graph by testing every pair.
    pub fn build_brute_force(w: &World, samples: &[Config], r: f64) -> Result<Self> {
        check_samples(w, samples)?;
        let n = samples.len();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                let d = dist(&samples[i], &samples[j]);
                if d < r && w.segment_free_raw(&samples[i], &samples[j]) {
                    adj[i].push((j, d));
                    adj[j].push((i, d));
                }
            }
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
        }
        Ok(DiskGraph {
            samples: samples.to_vec(),
            r,
            adj,
        })
    }

    pub fn samples(&self) -> &[Config] {
        &self.samples
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, f64)] {
        &self.adj[id]
    }

    /// Every edge once as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&(v, _)| v > u).map(|&(v, _)| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}

fn check_samples(w: &World, samples: &[Config]) -> Result<()> {
    for s in samples {
        check_dim(w.dim(), s.dim())?;
        if !w.bounds().contains(s) {
            return Err(Error::OutOfBounds);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapEntry(f64, NodeId);

impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Shortest `src → dst` path, or `None` when they are disconnected.
///
/// Among equal-cost relaxations the smaller predecessor id wins.
pub fn dijkstra_optimum(g: &DiskGraph, src: NodeId, dst: NodeId) -> Option<(f64, Polyline)> {
    assert!(src < g.len() && dst < g.len(), "node id out of range");
    let n = g.len();
    let mut best = vec![f64::INFINITY; n];
    let mut pred = vec![NodeId::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[src] = 0.0;
    heap.push(Reverse(HeapEntry(0.0, src)));
    while let Some(Reverse(HeapEntry(c, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == dst {
            break;
        }
        for &(v, w) in g.neighbors(u) {
            if done[v] {
                continue;
            }
            let cand = c + w;
            if cand < best[v] || (cand == best[v] && u < pred[v]) {
                if cand < best[v] {
                    heap.push(Reverse(HeapEntry(cand, v)));
                }
                best[v] = cand;
                pred[v] = u;
            }
        }
    }
    if !done[dst] {
        return None;
    }
    let mut ids = vec![dst];
    while *ids.last().unwrap() != src {
        ids.push(pred[*ids.last().unwrap()]);
    }
    ids.reverse();
    let path = Polyline::new(ids.iter().map(|&i| g.samples[i].clone()).collect()).ok()?;
    debug_assert_eq!(path_cost(&path), best[dst]);
    Some((best[dst], path))
}

/// A condition of the `(ε, r)`-trace definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceClause {
    /// (i) consecutive waypoints at most `r` apart.
    Gap,
    /// (ii) waypoint path cost at most `(1 + ε)` times the reference cost.
    Cost,
    /// (iii) every point of the waypoint path within `r` of the reference.
    Deviation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    /// Violated clauses in order (i), (ii), (iii).
    pub violations: Vec<TraceClause>,
}

impl TraceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<TraceClause> {
        self.violations.first().copied()
    }

    pub fn violates(&self, clause: TraceClause) -> bool {
        self.violations.contains(&clause)
    }
}

/// Checks whether `waypoints` form an `(eps, r)`-trace of `sigma`.
///
/// Clause (iii) is discretized: both paths are sampled every `step` of arc
/// length (plus their vertices) and each waypoint-path sample must lie within
/// `r` of some reference sample.
pub fn check_trace(
    waypoints: &[Config],
    sigma: &Polyline,
    eps: f64,
    r: f64,
    step: f64,
) -> Result<TraceReport> {
    if !(step > 0.0) || !(eps >= 0.0) || !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "trace check needs step > 0, eps >= 0, r >= 0 (got {step}, {eps}, {r})"
        )));
    }
    let y = Polyline::new(waypoints.to_vec())?;
    check_dim(sigma.dim(), y.dim())?;

    let mut violations = Vec::new();
    if y.segments().any(|(a, b)| dist(a, b) > r) {
        violations.push(TraceClause::Gap);
    }
    if path_cost(&y) > (1.0 + eps) * path_cost(sigma) {
        violations.push(TraceClause::Cost);
    }
    let reference = sigma.sample_by_arc_length(step);
    let deviates = y.sample_by_arc_length(step).iter().any(|p| {
        !reference.iter().any(|q| dist(p, q) <= r)
    });
    if deviates {
        violations.push(TraceClause::Deviation);
    }
    Ok(TraceReport { violations })
}
