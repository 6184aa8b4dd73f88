use bfmt::baselines::{prm_star_plan, rrt_star_plan};
use bfmt::bfmt::bfmt_plan;
use bfmt::fmt::{fmt_plan, PlanResult};
use bfmt::world::RngStream;
use rayon::prelude::*;

use crate::error::BenchError;
use crate::spec::{PlannerKind, ScenarioSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub planner: PlannerKind,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub succeeded: bool,
    /// `+∞` on failure.
    pub cost: f64,
    pub wall_time_s: f64,
    pub collision_checks: u64,
    pub iterations: u64,
    pub resamples: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub planner: PlannerKind,
    pub n: usize,
    pub success_rate: f64,
    /// Means and standard errors over successful trials only; NaN when there
    /// are none.
    pub mean_cost: f64,
    pub std_mean_cost: f64,
    pub mean_time_s: f64,
    pub std_mean_time_s: f64,
}

/// Runs one planner query. RRT* treats `n` as its iteration count.
pub fn run_trial(
    spec: &ScenarioSpec,
    planner: PlannerKind,
    n: usize,
    trial: usize,
) -> Result<TrialRecord, BenchError> {
    let seed = spec.seed_for(trial);
    let mut rng = RngStream::new(seed);
    let s = &spec.scenario;
    let (w, a, b) = (&s.world, &s.x_init, &s.x_goal);
    let res: PlanResult = match planner {
        PlannerKind::Bfmt => bfmt_plan(w, a, b, n, &spec.bfmt_config()?, &mut rng)?,
        PlannerKind::Fmt => fmt_plan(w, a, b, n, &spec.radius_params()?, &spec.budget, &mut rng)?,
        PlannerKind::Prmstar => {
            prm_star_plan(w, a, b, n, &spec.prm_radius_params()?, &spec.budget, &mut rng)?
        }
        PlannerKind::Rrtstar => rrt_star_plan(w, a, b, n, &spec.rrt_config()?, &mut rng)?,
    };
    Ok(TrialRecord {
        planner,
        n,
        trial,
        seed,
        succeeded: res.succeeded,
        cost: res.cost,
        wall_time_s: res.stats.wall_time.as_secs_f64(),
        collision_checks: res.stats.collision_checks,
        iterations: res.stats.iterations,
        resamples: res.stats.resamples,
    })
}

/// One record per (planner, n, trial), in that nesting order, regardless of
/// the order worker threads finish in.
pub fn run_benchmark(spec: &ScenarioSpec) -> Result<(Vec<TrialRecord>, Vec<SummaryRow>), BenchError> {
    let mut jobs = Vec::new();
    for &p in &spec.table.planners {
        for &n in &spec.sample_counts {
            for t in 0..spec.table.trials {
                jobs.push((p, n, t));
            }
        }
    }
    let records = jobs
        .into_par_iter()
        .map(|(p, n, t)| run_trial(spec, p, n, t))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = summarize(&records);
    Ok((records, summary))
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / k;
    (mean, var.sqrt() / k.sqrt())
}

/// Summary rows per (planner, n), in order of first appearance.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(PlannerKind, usize)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.planner, r.n)) {
            keys.push((r.planner, r.n));
        }
    }
    keys.into_iter()
        .map(|(planner, n)| {
            let group: Vec<&TrialRecord> =
                records.iter().filter(|r| r.planner == planner && r.n == n).collect();
            let ok: Vec<&&TrialRecord> = group.iter().filter(|r| r.succeeded).collect();
            let costs: Vec<f64> = ok.iter().map(|r| r.cost).collect();
            let times: Vec<f64> = ok.iter().map(|r| r.wall_time_s).collect();
            let (mean_cost, std_mean_cost) = mean_and_stderr(&costs);
            let (mean_time_s, std_mean_time_s) = mean_and_stderr(&times);
            SummaryRow {
                planner,
                n,
                success_rate: ok.len() as f64 / group.len() as f64,
                mean_cost,
                std_mean_cost,
                mean_time_s,
                std_mean_time_s,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(planner: PlannerKind, n: usize, ok: bool, cost: f64) -> TrialRecord {
        TrialRecord {
            planner,
            n,
            trial: 0,
            seed: 0,
            succeeded: ok,
            cost: if ok { cost } else { f64::INFINITY },
            wall_time_s: 1.0,
            collision_checks: 0,
            iterations: 0,
            resamples: 0,
        }
    }

    #[test]
    fn summary_excludes_failures() {
        let rs = vec![
            rec(PlannerKind::Fmt, 10, true, 1.0),
            rec(PlannerKind::Fmt, 10, true, 3.0),
            rec(PlannerKind::Fmt, 10, false, 0.0),
            rec(PlannerKind::Fmt, 20, false, 0.0),
        ];
        let s = summarize(&rs);
        assert_eq!(s.len(), 2);
        assert!((s[0].success_rate - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s[0].mean_cost, 2.0);
        assert!((s[0].std_mean_cost - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(s[0].std_mean_time_s, 0.0);
        assert_eq!(s[1].success_rate, 0.0);
        assert!(s[1].mean_cost.is_nan());
    }
}
