use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Config, Polyline};
use crate::nnindex::{NodeId, PointIndex};
use crate::world::World;

/// External stopping rule shared by all planners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminationBudget {
    pub max_wall_time: Duration,
    /// Fresh samples drawn while a wavefront is empty.
    pub max_resample_attempts: u64,
    /// Wavefront expansions (or RRT* iterations).
    pub max_iterations: u64,
}

impl Default for TerminationBudget {
    fn default() -> Self {
        TerminationBudget {
            max_wall_time: Duration::from_secs(60),
            max_resample_attempts: 20_000,
            max_iterations: 10_000_000,
        }
    }
}

impl TerminationBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_wall_time.is_zero() || self.max_resample_attempts == 0 || self.max_iterations == 0
        {
            return Err(Error::InvalidParameter(format!(
                "termination budget must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanStats {
    /// Segment checks actually evaluated; memoized repeats are not counted.
    pub collision_checks: u64,
    pub near_queries: u64,
    pub iterations: u64,
    pub resamples: u64,
    pub wall_time: Duration,
}

/// Per-query state shared by the trees of one planning query: the sample
/// points, their cached `r`-neighborhoods, a collision-check memo and the
/// budget.
#[derive(Debug)]
pub struct PlanContext<'w> {
    world: &'w World,
    index: PointIndex,
    radius: f64,
    /// Every other id strictly within `radius`, ascending; filled lazily.
    neighbors: Vec<Option<Vec<NodeId>>>,
    memo: HashMap<(NodeId, NodeId), bool>,
    budget: TerminationBudget,
    started: Instant,
    pub(crate) stats: PlanStats,
}

impl<'w> PlanContext<'w> {
    pub fn new(
        world: &'w World,
        samples: &[Config],
        radius: f64,
        budget: TerminationBudget,
    ) -> Result<Self> {
        budget.validate()?;
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
        }
        let index = PointIndex::build(samples)?;
        Ok(PlanContext {
            world,
            neighbors: vec![None; index.len()],
            index,
            radius,
            memo: HashMap::new(),
            budget,
            started: Instant::now(),
            stats: PlanStats::default(),
        })
    }

    pub fn world(&self) -> &'w World {
        self.world
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn sample_count(&self) -> usize {
        self.index.len()
    }

    pub fn point(&self, id: NodeId) -> &[f64] {
        self.index.point(id)
    }

    pub fn samples(&self) -> Vec<Config> {
        (0..self.index.len()).map(|i| self.index.config(i)).collect()
    }

    pub(crate) fn index(&self) -> &PointIndex {
        &self.index
    }

    pub fn stats(&self) -> PlanStats {
        PlanStats {
            wall_time: self.started.elapsed(),
            ..self.stats.clone()
        }
    }

    /// The external termination criterion.
    pub fn exhausted(&self) -> bool {
        self.stats.iterations >= self.budget.max_iterations
            || self.stats.resamples >= self.budget.max_resample_attempts
            || self.started.elapsed() >= self.budget.max_wall_time
    }

    /// Memoized check of the segment between two samples. The segment is
    /// always tested from the smaller id to the larger.
    pub fn collision_free(&mut self, a: NodeId, b: NodeId) -> bool {
        let key = (a.min(b), a.max(b));
        if let Some(&free) = self.memo.get(&key) {
            return free;
        }
        self.stats.collision_checks += 1;
        let free = self
            .world
            .segment_free_raw(self.index.point(key.0), self.index.point(key.1));
        self.memo.insert(key, free);
        free
    }

    pub(crate) fn ensure_neighbors(&mut self, id: NodeId) {
        if self.neighbors[id].is_none() {
            let mut near = self.index.near_all(self.index.point(id), self.radius);
            near.retain(|&j| j != id);
            self.neighbors[id] = Some(near);
        }
    }

    /// Requires a prior [`ensure_neighbors`](Self::ensure_neighbors).
    pub(crate) fn cached_neighbors(&self, id: NodeId) -> &[NodeId] {
        self.neighbors[id].as_deref().expect("neighbors cached")
    }

    /// Appends a new sample to the id space. `checked_free` lists ids whose
    /// segment to the new point is already known to be collision-free.
    pub(crate) fn insert_sample(&mut self, s: &Config, checked_free: &[NodeId]) -> Result<NodeId> {
        let near = self.index.near_all(s, self.radius);
        let id = self.index.insert(s)?;
        for &j in &near {
            if let Some(list) = &mut self.neighbors[j] {
                list.push(id);
            }
        }
        self.neighbors.push(Some(near));
        for &j in checked_free {
            self.memo.insert((j.min(id), j.max(id)), true);
        }
        Ok(id)
    }

    pub(crate) fn note_check(&mut self) {
        self.stats.collision_checks += 1;
    }

    pub fn polyline(&self, ids: &[NodeId]) -> Polyline {
        Polyline::new(ids.iter().map(|&i| self.index.config(i)).collect())
            .expect("path has at least one vertex")
    }
}
