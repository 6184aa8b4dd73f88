//! The Fast Marching Tree and the machinery it shares with the
//! bi-directional planner: the search tree, the lazy expansion step and the
//! plan result.
//!
//! Sample ids are fixed per query: `0` is `x_init`, `1` is `x_goal`, then the
//! `n` free-space samples, then any points drawn by resampling.

mod context;
mod tree;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use context::{PlanContext, PlanStats, TerminationBudget};
pub use tree::{RootLabel, Tree};

use crate::bfmt::insert_new_sample;
use crate::error::{Error, Result};
use crate::geom::{check_dim, dist, path_cost, Config, Polyline};
use crate::nnindex::NodeId;
use crate::radius::{connection_radius, RadiusParams};
use crate::world::{sample_free, RngStream, World};

pub const INIT_ID: NodeId = 0;
pub const GOAL_ID: NodeId = 1;

/// Best connection found between two trees so far.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeetState {
    pub x_meet: Option<NodeId>,
    /// `+∞` while there is no meeting point.
    pub combined_cost: f64,
}

impl Default for MeetState {
    fn default() -> Self {
        MeetState {
            x_meet: None,
            combined_cost: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub path: Option<Polyline>,
    /// `path_cost(path)`, or `+∞` on failure.
    pub cost: f64,
    pub succeeded: bool,
    /// The budget ran out before the termination rule fired; `path` holds the
    /// best solution found up to then, if any.
    pub early_stop: bool,
    pub stats: PlanStats,
    /// The final sample set indexed by node id, including resampled points.
    /// For RRT* these are the tree vertices.
    pub samples: Vec<Config>,
    /// Connection radius used (for RRT*, the last rewiring radius).
    pub radius: f64,
}

impl PlanResult {
    pub(crate) fn found(path: Polyline, stats: PlanStats, samples: Vec<Config>, radius: f64) -> Self {
        PlanResult {
            cost: path_cost(&path),
            path: Some(path),
            succeeded: true,
            early_stop: false,
            stats,
            samples,
            radius,
        }
    }

    pub(crate) fn failed(stats: PlanStats, samples: Vec<Config>, radius: f64) -> Self {
        PlanResult {
            path: None,
            cost: f64::INFINITY,
            succeeded: false,
            early_stop: false,
            stats,
            samples,
            radius,
        }
    }

    /// The `x_init = x_goal` answer: a single-vertex path of cost 0.
    pub(crate) fn trivial(x: &Config, started: Instant, radius: f64) -> Self {
        let path = Polyline::new(vec![x.clone()]).expect("one vertex");
        let stats = PlanStats {
            wall_time: started.elapsed(),
            ..PlanStats::default()
        };
        PlanResult::found(path, stats, vec![x.clone(), x.clone()], radius)
    }
}

/// Dimension and free-space checks on a query.
pub(crate) fn check_query(w: &World, x_init: &Config, x_goal: &Config) -> Result<()> {
    check_dim(w.dim(), x_init.dim())?;
    check_dim(w.dim(), x_goal.dim())?;
    if !w.point_free(x_init)? {
        return Err(Error::BlockedEndpoint("x_init"));
    }
    if !w.point_free(x_goal)? {
        return Err(Error::BlockedEndpoint("x_goal"));
    }
    Ok(())
}

/// `{x_init, x_goal} ∪ sample_free(n)` in id order.
pub(crate) fn sample_set(
    w: &World,
    x_init: &Config,
    x_goal: &Config,
    n: usize,
    rng: &mut RngStream,
) -> Result<Vec<Config>> {
    let mut s = Vec::with_capacity(n + 2);
    s.push(x_init.clone());
    s.push(x_goal.clone());
    s.extend(sample_free(w, rng, n)?);
    Ok(s)
}

/// Radius for `n` samples; `n` is clamped to 2 so tiny sample sets still get
/// a finite radius.
pub(crate) fn radius_for(rp: &RadiusParams, n: usize) -> Result<f64> {
    connection_radius(rp, n.max(2))
}

/// One lazy expansion of `t` from its wavefront node `z`.
///
/// Each unvisited sample near `z` (in ascending id order) is connected to
/// its cheapest neighbor on the wavefront, ignoring obstacles in the choice;
/// only that single edge is collision-checked, and the sample is skipped if
/// it is blocked. Connected samples that already belong to `other` update
/// `meet` when they improve on it. Finally `z` leaves the wavefront and the
/// newly connected samples join it.
pub fn expand_tree_from_node(
    ctx: &mut PlanContext<'_>,
    t: &mut Tree,
    other: Option<&Tree>,
    z: NodeId,
    meet: &mut MeetState,
) -> Result<()> {
    if !t.is_open(z) {
        return Err(Error::NotInWavefront(z));
    }
    ctx.ensure_neighbors(z);
    ctx.stats.near_queries += 1;
    let candidates: Vec<NodeId> = ctx
        .cached_neighbors(z)
        .iter()
        .copied()
        .filter(|&x| t.is_unvisited(x))
        .collect();

    let mut added = Vec::new();
    for x in candidates {
        ctx.ensure_neighbors(x);
        ctx.stats.near_queries += 1;
        // New nodes are attached closed until the loop ends, so this only
        // sees the wavefront as it was before the expansion.
        let px = ctx.point(x);
        let mut best: Option<(f64, NodeId)> = None;
        for &y in ctx.cached_neighbors(x) {
            if t.is_open(y) {
                let c = t.cost(y).expect("open nodes are visited") + dist(ctx.point(y), px);
                if best.map_or(true, |(bc, _)| c < bc) {
                    best = Some((c, y));
                }
            }
        }
        let (c, y) = best.expect("z is an open neighbor of x");
        if ctx.collision_free(y, x) {
            t.attach(x, y, c);
            added.push(x);
            if let Some(co) = other.and_then(|o| o.cost(x)) {
                if c + co < meet.combined_cost {
                    *meet = MeetState {
                        x_meet: Some(x),
                        combined_cost: c + co,
                    };
                }
            }
        }
    }
    t.close(z);
    for x in added {
        t.open(x);
    }
    Ok(())
}

/// Unidirectional FMT* from `x_init` until `x_goal` joins the tree.
///
/// When the wavefront empties first, fresh samples are drawn as in the
/// bi-directional planner until one connects; the query fails only when the
/// budget runs out.
pub fn fmt_plan(
    w: &World,
    x_init: &Config,
    x_goal: &Config,
    n: usize,
    rp: &RadiusParams,
    budget: &TerminationBudget,
    rng: &mut RngStream,
) -> Result<PlanResult> {
    let started = Instant::now();
    check_query(w, x_init, x_goal)?;
    let r = radius_for(rp, n)?;
    if x_init == x_goal {
        return Ok(PlanResult::trivial(x_init, started, r));
    }
    let samples = sample_set(w, x_init, x_goal, n, rng)?;
    let mut ctx = PlanContext::new(w, &samples, r, budget.clone())?;
    let mut tree = Tree::new(INIT_ID, RootLabel::Init, samples.len());
    let mut meet = MeetState::default();

    let mut z = INIT_ID;
    loop {
        expand_tree_from_node(&mut ctx, &mut tree, None, z, &mut meet)?;
        ctx.stats.iterations += 1;
        if tree.contains(GOAL_ID) {
            let mut ids = tree.path_to_root(GOAL_ID).expect("goal is in the tree");
            ids.reverse();
            let path = ctx.polyline(&ids);
            return Ok(PlanResult::found(path, ctx.stats(), ctx.samples(), r));
        }
        if ctx.exhausted() {
            break;
        }
        if tree.open_is_empty() {
            insert_new_sample(&mut ctx, &mut tree, rng)?;
        }
        match tree.min_open() {
            Some((_, next)) => z = next,
            None => break,
        }
    }
    let mut res = PlanResult::failed(ctx.stats(), ctx.samples(), r);
    res.early_stop = true;
    Ok(res)
}
