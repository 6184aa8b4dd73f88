//! The Bi-directional Fast Marching Tree.
//!
//! Two trees grow from `x_init` and `x_goal` over one sample set, each with
//! its own unvisited set and wavefront, taking turns (or, under
//! [`ExpansionRule::Balanced`], whichever holds the cheaper wavefront node).
//! The search stops at the first sample the two trees share, or, under
//! [`TerminationRule::Optimality`], once the next node to expand is already
//! interior to the other tree.

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use crate::fmt::MeetState;
use crate::error::Result;
use crate::fmt::{
    check_query, expand_tree_from_node, radius_for, sample_set, PlanContext, PlanResult,
    RootLabel, TerminationBudget, Tree, GOAL_ID, INIT_ID,
};
use crate::geom::{dist, Config};
use crate::nnindex::NodeId;
use crate::radius::RadiusParams;
use crate::world::{RngStream, World};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionRule {
    /// Swap trees after every expansion.
    Alternate,
    /// Expand the globally cheapest wavefront node; ties go to the init tree.
    Balanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationRule {
    FirstMeet,
    Optimality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfmtConfig {
    pub expansion_rule: ExpansionRule,
    pub termination_rule: TerminationRule,
    pub radius_params: RadiusParams,
    pub budget: TerminationBudget,
}

impl BfmtConfig {
    /// Alternating expansion, first-meet termination, default budget.
    pub fn new(radius_params: RadiusParams) -> Self {
        BfmtConfig {
            expansion_rule: ExpansionRule::Alternate,
            termination_rule: TerminationRule::FirstMeet,
            radius_params,
            budget: TerminationBudget::default(),
        }
    }

    pub fn with_rules(mut self, expansion: ExpansionRule, termination: TerminationRule) -> Self {
        self.expansion_rule = expansion;
        self.termination_rule = termination;
        self
    }
}

/// Refills an empty wavefront by drawing free samples until one connects.
///
/// Each draw is joined to the cheapest of its tree neighbors whose edge is
/// collision-free, trying candidates in order of cost through them. Draws
/// with no reachable neighbor are discarded. The new point gets a fresh id
/// but joins only `t`; it never enters another tree's unvisited set.
///
/// Returns whether a sample was added; `false` means the budget ran out.
pub fn insert_new_sample(
    ctx: &mut PlanContext<'_>,
    t: &mut Tree,
    rng: &mut RngStream,
) -> Result<bool> {
    let r = ctx.radius();
    let mut near = Vec::new();
    while t.open_is_empty() {
        if ctx.exhausted() {
            return Ok(false);
        }
        ctx.stats.resamples += 1;
        let s = ctx.world().sample_one(rng)?;
        ctx.stats.near_queries += 1;
        ctx.index().near_where(&s, r, |j| t.contains(j), &mut near);
        let mut candidates: Vec<(f64, NodeId)> = near
            .iter()
            .map(|&j| (t.cost(j).expect("member") + dist(ctx.point(j), &s), j))
            .collect();
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (c, j) in candidates {
            ctx.note_check();
            if ctx.world().segment_free_raw(ctx.point(j), &s) {
                let id = ctx.insert_sample(&s, &[j])?;
                t.attach(id, j, c);
                t.open(id);
                break;
            }
        }
    }
    Ok(true)
}

/// BFMT* over `{x_init, x_goal} ∪ sample_free(n)`.
///
/// The returned path always runs from `x_init` to `x_goal`.
pub fn bfmt_plan(
    w: &World,
    x_init: &Config,
    x_goal: &Config,
    n: usize,
    cfg: &BfmtConfig,
    rng: &mut RngStream,
) -> Result<PlanResult> {
    let started = Instant::now();
    check_query(w, x_init, x_goal)?;
    let r = radius_for(&cfg.radius_params, n)?;
    if x_init == x_goal {
        return Ok(PlanResult::trivial(x_init, started, r));
    }
    let samples = sample_set(w, x_init, x_goal, n, rng)?;
    let mut ctx = PlanContext::new(w, &samples, r, cfg.budget.clone())?;
    // Index 0 always holds the init tree; `cur` tracks the tree to expand.
    let mut trees = [
        Tree::new(INIT_ID, RootLabel::Init, samples.len()),
        Tree::new(GOAL_ID, RootLabel::Goal, samples.len()),
    ];
    let mut meet = MeetState::default();
    let optimality = cfg.termination_rule == TerminationRule::Optimality;

    let mut cur = 0;
    let mut z = INIT_ID;
    let finished = loop {
        {
            let (a, b) = trees.split_at_mut(1);
            let (t, other) = if cur == 0 {
                (&mut a[0], &b[0])
            } else {
                (&mut b[0], &a[0])
            };
            expand_tree_from_node(&mut ctx, t, Some(other), z, &mut meet)?;
        }
        ctx.stats.iterations += 1;
        if !optimality && meet.x_meet.is_some() {
            break true;
        }
        if ctx.exhausted() {
            break false;
        }

        let companion = 1 - cur;
        let next = match cfg.expansion_rule {
            ExpansionRule::Alternate => {
                if trees[companion].open_is_empty() {
                    insert_new_sample(&mut ctx, &mut trees[companion], rng)?;
                }
                trees[companion].min_open().map(|(_, id)| (companion, id))
            }
            ExpansionRule::Balanced => {
                if trees[0].open_is_empty() && trees[1].open_is_empty() {
                    insert_new_sample(&mut ctx, &mut trees[companion], rng)?;
                }
                match (trees[0].min_open(), trees[1].min_open()) {
                    (Some(a), Some(b)) => Some(if b.0 < a.0 { (1, b.1) } else { (0, a.1) }),
                    (Some(a), None) => Some((0, a.1)),
                    (None, Some(b)) => Some((1, b.1)),
                    (None, None) => None,
                }
            }
        };
        let Some((tree, id)) = next else {
            break false;
        };
        cur = tree;
        z = id;
        if optimality && trees[1 - cur].is_closed(z) && meet.x_meet.is_some() {
            break true;
        }
    };

    let Some(x) = meet.x_meet else {
        let mut res = PlanResult::failed(ctx.stats(), ctx.samples(), r);
        res.early_stop = true;
        return Ok(res);
    };
    let mut ids = trees[0].path_to_root(x).expect("meeting point is in both trees");
    ids.reverse();
    ids.extend(&trees[1].path_to_root(x).expect("meeting point is in both trees")[1..]);
    let path = ctx.polyline(&ids);
    let mut res = PlanResult::found(path, ctx.stats(), ctx.samples(), r);
    res.early_stop = !finished;
    Ok(res)
}
