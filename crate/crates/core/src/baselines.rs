//! Reference planners: PRM* with eager collision checking and RRT* with goal
//! biasing and a shrinking rewiring ball.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::{
    check_query, radius_for, sample_set, PlanResult, PlanStats, TerminationBudget, GOAL_ID,
    INIT_ID,
};
use crate::geom::{dist, Config, Polyline};
use crate::oracle::{dijkstra_optimum, DiskGraph};
use crate::radius::{connection_radius, RadiusParams};
use crate::world::{RngStream, World};

/// PRM* over `{x_init, x_goal} ∪ sample_free(n)`: every pair closer than
/// `r_n` with a free segment is an edge, and the answer is the shortest
/// roadmap path.
pub fn prm_star_plan(
    w: &World,
    x_init: &Config,
    x_goal: &Config,
    n: usize,
    rp: &RadiusParams,
    budget: &TerminationBudget,
    rng: &mut RngStream,
) -> Result<PlanResult> {
    let started = Instant::now();
    budget.validate()?;
    check_query(w, x_init, x_goal)?;
    let r = radius_for(rp, n)?;
    if x_init == x_goal {
        return Ok(PlanResult::trivial(x_init, started, r));
    }
    let samples = sample_set(w, x_init, x_goal, n, rng)?;
    let mut checks = 0;
    let mut stop = |c: u64| {
        checks = c;
        // Reading the clock on every check would dominate small queries.
        c % 256 == 0 && started.elapsed() >= budget.max_wall_time
    };
    let graph = DiskGraph::build_until(w, &samples, r, &mut stop)?;
    let mut stats = PlanStats {
        collision_checks: checks,
        near_queries: samples.len() as u64,
        iterations: samples.len() as u64,
        ..PlanStats::default()
    };
    let Some(graph) = graph else {
        stats.wall_time = started.elapsed();
        let mut res = PlanResult::failed(stats, samples, r);
        res.early_stop = true;
        return Ok(res);
    };
    let answer = dijkstra_optimum(&graph, INIT_ID, GOAL_ID);
    stats.wall_time = started.elapsed();
    Ok(match answer {
        Some((_, path)) => PlanResult::found(path, stats, samples, r),
        None => PlanResult::failed(stats, samples, r),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RrtStarConfig {
    pub goal_bias: f64,
    /// Maximum extension, as a fraction of the largest side of the bounds.
    pub steer_fraction: f64,
    /// Rewiring-ball constants; `eta` is normally 0.
    pub rewire_radius_params: RadiusParams,
    /// Only the wall-time limit applies; the iteration count is an argument.
    pub max_wall_time: Duration,
}

impl RrtStarConfig {
    /// 5% goal bias, steering 20% of the largest extent.
    pub fn for_world(w: &World) -> Self {
        RrtStarConfig {
            goal_bias: 0.05,
            steer_fraction: 0.2,
            rewire_radius_params: RadiusParams::for_world(w),
            max_wall_time: TerminationBudget::default().max_wall_time,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.goal_bias) {
            return Err(Error::InvalidParameter(format!("goal_bias = {}", self.goal_bias)));
        }
        if !(self.steer_fraction > 0.0 && self.steer_fraction.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "steer_fraction = {}",
                self.steer_fraction
            )));
        }
        self.rewire_radius_params.validate()
    }
}

const NO_PARENT: usize = usize::MAX;

struct RrtTree {
    points: Vec<Config>,
    parent: Vec<usize>,
    cost: Vec<f64>,
    children: Vec<Vec<usize>>,
}

impl RrtTree {
    fn add(&mut self, p: Config, parent: usize, cost: f64) -> usize {
        let id = self.points.len();
        self.points.push(p);
        self.parent.push(parent);
        self.cost.push(cost);
        self.children.push(Vec::new());
        if parent != NO_PARENT {
            self.children[parent].push(id);
        }
        id
    }

    fn nearest(&self, x: &[f64]) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, p) in self.points.iter().enumerate() {
            let d = dist(p, x);
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    fn reparent(&mut self, v: usize, new_parent: usize) {
        let old = self.parent[v];
        self.children[old].retain(|&c| c != v);
        self.children[new_parent].push(v);
        self.parent[v] = new_parent;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            let p = self.parent[u];
            self.cost[u] = self.cost[p] + dist(&self.points[p], &self.points[u]);
            stack.extend(self.children[u].iter().copied());
        }
    }

    fn path_ids(&self, mut id: usize) -> Vec<usize> {
        let mut ids = vec![id];
        while self.parent[id] != NO_PARENT {
            id = self.parent[id];
            ids.push(id);
        }
        ids.reverse();
        ids
    }
}

/// RRT* for a fixed number of iterations; anytime, so the best path to
/// `x_goal` found by the end is returned.
///
/// Random states are drawn uniformly from the bounds (or are `x_goal` with
/// probability `goal_bias`) and need not be free; the extension toward them
/// is what gets checked. The goal joins the tree only when an extension lands
/// exactly on it. The rewiring radius after `k` tree nodes is
/// `min(r_k, steer)` with `r_k` the connection radius.
pub fn rrt_star_plan(
    w: &World,
    x_init: &Config,
    x_goal: &Config,
    iterations: usize,
    cfg: &RrtStarConfig,
    rng: &mut RngStream,
) -> Result<PlanResult> {
    let started = Instant::now();
    cfg.validate()?;
    check_query(w, x_init, x_goal)?;
    let steer = cfg.steer_fraction * w.bounds().max_extent();
    if x_init == x_goal {
        return Ok(PlanResult::trivial(x_init, started, steer));
    }

    let mut tree = RrtTree {
        points: Vec::new(),
        parent: Vec::new(),
        cost: Vec::new(),
        children: Vec::new(),
    };
    tree.add(x_init.clone(), NO_PARENT, 0.0);
    let mut goal: Option<usize> = None;
    let mut stats = PlanStats::default();
    let mut radius = steer;
    let (lo, hi) = (w.bounds().lo(), w.bounds().hi());
    let d = w.dim();

    for _ in 0..iterations {
        if started.elapsed() >= cfg.max_wall_time {
            break;
        }
        stats.iterations += 1;
        let target = if rng.chance(cfg.goal_bias) {
            x_goal.clone()
        } else {
            Config::from_vec_unchecked((0..d).map(|i| rng.uniform(lo[i], hi[i])).collect())
        };
        stats.near_queries += 1;
        let nearest = tree.nearest(&target);
        let gap = dist(&tree.points[nearest], &target);
        if gap == 0.0 {
            continue;
        }
        let x_new = if gap <= steer {
            target
        } else {
            let from = &tree.points[nearest];
            let t = steer / gap;
            Config::from_vec_unchecked(
                from.iter().zip(target.iter()).map(|(a, b)| a + t * (b - a)).collect(),
            )
        };
        let is_goal = x_new == *x_goal;
        if is_goal && goal.is_some() {
            continue;
        }
        stats.collision_checks += 1;
        if !w.point_free_raw(&x_new) || !w.segment_free_raw(&tree.points[nearest], &x_new) {
            continue;
        }

        radius = connection_radius(&cfg.rewire_radius_params, tree.points.len().max(2))?.min(steer);
        stats.near_queries += 1;
        let near: Vec<usize> = (0..tree.points.len())
            .filter(|&i| dist(&tree.points[i], &x_new) < radius)
            .collect();

        let mut candidates: Vec<(f64, usize)> = near
            .iter()
            .map(|&i| (tree.cost[i] + dist(&tree.points[i], &x_new), i))
            .collect();
        candidates.push((tree.cost[nearest] + dist(&tree.points[nearest], &x_new), nearest));
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut parent = nearest;
        for &(_, i) in &candidates {
            if i == nearest {
                break;
            }
            stats.collision_checks += 1;
            if w.segment_free_raw(&tree.points[i], &x_new) {
                parent = i;
                break;
            }
        }
        let c = tree.cost[parent] + dist(&tree.points[parent], &x_new);
        let new_id = tree.add(x_new, parent, c);
        if is_goal {
            goal = Some(new_id);
        }

        for &v in &near {
            if v == parent {
                continue;
            }
            let through = tree.cost[new_id] + dist(&tree.points[new_id], &tree.points[v]);
            if through < tree.cost[v] {
                stats.collision_checks += 1;
                if w.segment_free_raw(&tree.points[new_id], &tree.points[v]) {
                    tree.reparent(v, new_id);
                }
            }
        }
    }

    stats.wall_time = started.elapsed();
    Ok(match goal {
        Some(g) => {
            let ids = tree.path_ids(g);
            let path = Polyline::new(ids.iter().map(|&i| tree.points[i].clone()).collect())?;
            PlanResult::found(path, stats, tree.points, radius)
        }
        None => PlanResult::failed(stats, tree.points, radius),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::DiskGraph;
    use crate::world::Aabb;

    fn c(v: &[f64]) -> Config {
        Config::new(v.to_vec()).unwrap()
    }

    #[test]
    fn prm_matches_oracle() {
        let w = World::new(
            Aabb::unit(2),
            vec![Aabb::new(vec![0.3, 0.3], vec![0.6, 0.6]).unwrap()],
        )
        .unwrap();
        let rp = RadiusParams::for_world(&w);
        for seed in 0..5 {
            let res = prm_star_plan(
                &w,
                &c(&[0.1, 0.1]),
                &c(&[0.9, 0.9]),
                400,
                &rp,
                &TerminationBudget::default(),
                &mut RngStream::new(seed),
            )
            .unwrap();
            assert!(res.succeeded);
            let g = DiskGraph::build(&w, &res.samples, res.radius).unwrap();
            let (opt, _) = dijkstra_optimum(&g, 0, 1).unwrap();
            assert_eq!(res.cost, opt);
        }
    }

    #[test]
    fn prm_tiny_roadmap_fails() {
        let wall = Aabb::new(vec![0.45, 0.0], vec![0.55, 1.0]).unwrap();
        let w = World::new(Aabb::unit(2), vec![wall]).unwrap();
        let rp = RadiusParams::for_world(&w);
        let res = prm_star_plan(
            &w,
            &c(&[0.1, 0.5]),
            &c(&[0.9, 0.5]),
            5,
            &rp,
            &TerminationBudget::default(),
            &mut RngStream::new(0),
        )
        .unwrap();
        assert!(!res.succeeded);
    }

    #[test]
    fn rrt_zero_iterations_fails() {
        let w = World::empty_unit(2);
        let cfg = RrtStarConfig::for_world(&w);
        let res =
            rrt_star_plan(&w, &c(&[0.1, 0.1]), &c(&[0.9, 0.9]), 0, &cfg, &mut RngStream::new(0))
                .unwrap();
        assert!(!res.succeeded);
    }

    #[test]
    fn rrt_full_goal_bias_goes_straight() {
        let w = World::empty_unit(2);
        let cfg = RrtStarConfig {
            goal_bias: 1.0,
            ..RrtStarConfig::for_world(&w)
        };
        let res =
            rrt_star_plan(&w, &c(&[0.1, 0.1]), &c(&[0.9, 0.9]), 10, &cfg, &mut RngStream::new(0))
                .unwrap();
        assert!(res.succeeded);
        assert!((res.cost - 0.8 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn rrt_tree_costs_stay_consistent() {
        let w = World::new(
            Aabb::unit(2),
            vec![Aabb::new(vec![0.4, 0.0], vec![0.5, 0.7]).unwrap()],
        )
        .unwrap();
        let cfg = RrtStarConfig::for_world(&w);
        let res =
            rrt_star_plan(&w, &c(&[0.1, 0.1]), &c(&[0.9, 0.1]), 3000, &cfg, &mut RngStream::new(7))
                .unwrap();
        assert!(res.succeeded);
        let path = res.path.unwrap();
        for (a, b) in path.segments() {
            assert!(w.segment_collision_free(a, b).unwrap());
        }
        assert!(res.cost >= 0.8);
    }
}
