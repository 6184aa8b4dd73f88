//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bfmt::baselines::{prm_star_plan, rrt_star_plan, RrtStarConfig};
use bfmt::bfmt::{bfmt_plan, BfmtConfig, ExpansionRule, TerminationRule};
use bfmt::fmt::{fmt_plan, PlanResult, TerminationBudget};
use bfmt::geom::{Config, Polyline};
use bfmt::oracle::{check_trace, dijkstra_optimum, DiskGraph, TraceClause};
use bfmt::radius::{connection_radius, RadiusParams};
use bfmt::world::{generate_hypercube_scenario, sample_free, RngStream, Scenario, World};
use bfmt_bench::output::write_trials;
use bfmt_bench::spec::{BenchmarkTable, PlannerKind, ScenarioSpec};
use bfmt_bench::run_benchmark;
use rayon::prelude::*;

type Outcome = (bool, String);

fn pt(c: &[f64]) -> Config {
    Config::new(c.to_vec()).unwrap()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &mut [u64]) -> f64 {
    xs.sort_unstable();
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2] as f64
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) as f64 / 2.0
    }
}

/// The 2D scenario shared by the decay and variant criteria.
fn scenario_2d() -> Scenario {
    generate_hypercube_scenario(2, 0.3, &mut RngStream::new(7)).unwrap()
}

fn oracle_cost(w: &World, res: &PlanResult) -> Option<f64> {
    let g = DiskGraph::build(w, &res.samples, res.radius).unwrap();
    dijkstra_optimum(&g, 0, 1).map(|(c, _)| c)
}

/// Re-checks a path against the raw obstacle boxes by dense sampling, without
/// going through the planners' segment test.
fn path_is_free(w: &World, path: &Polyline) -> bool {
    const STEP: f64 = 1e-3;
    let inside = |x: &[f64]| {
        !w.bounds().contains(x) || w.obstacles().iter().any(|o| o.interior_contains(x))
    };
    for (a, b) in path.segments() {
        if !w.segment_collision_free(a, b).unwrap() {
            return false;
        }
        let len = bfmt::geom::distance(a, b).unwrap();
        let steps = (len / STEP).ceil().max(1.0) as usize;
        for k in 0..=steps {
            let t = k as f64 / steps as f64;
            let x: Vec<f64> = a
                .coords()
                .iter()
                .zip(b.coords())
                .map(|(p, q)| p + t * (q - p))
                .collect();
            if inside(&x) {
                return false;
            }
        }
    }
    true
}

fn straight_line() -> Outcome {
    let w = World::empty_unit(2);
    let rp = RadiusParams::for_world(&w);
    let (a, g) = (pt(&[0.1, 0.1]), pt(&[0.9, 0.9]));
    let bound = 1.02 * 1.1313708;
    let budget = TerminationBudget::default();
    let runs: Vec<(PlanResult, PlanResult)> = (0..50u64)
        .into_par_iter()
        .map(|s| {
            let b = bfmt_plan(&w, &a, &g, 2000, &BfmtConfig::new(rp.clone()), &mut RngStream::new(s));
            let f = fmt_plan(&w, &a, &g, 2000, &rp, &budget, &mut RngStream::new(s));
            (b.unwrap(), f.unwrap())
        })
        .collect();
    let ok_b = runs.iter().filter(|r| r.0.succeeded).count();
    let ok_f = runs.iter().filter(|r| r.1.succeeded).count();
    let mb = mean(&runs.iter().map(|r| r.0.cost).collect::<Vec<_>>());
    let mf = mean(&runs.iter().map(|r| r.1.cost).collect::<Vec<_>>());
    (
        ok_b == 50 && ok_f == 50 && mb <= bound && mf <= bound,
        format!("bfmt {ok_b}/50 mean {mb:.6}, fmt {ok_f}/50 mean {mf:.6}, bound {bound:.6}"),
    )
}

fn oracle_lower_bound() -> Outcome {
    let jobs: Vec<(u64, usize)> = (0..20u64)
        .flat_map(|world| [250, 1000, 4000].map(|n| (world, n)))
        .collect();
    let failures: Vec<String> = jobs
        .par_iter()
        .flat_map_iter(|&(world, n)| {
            let sc = generate_hypercube_scenario(2, 0.3, &mut RngStream::new(1000 + world)).unwrap();
            let (w, a, g) = (&sc.world, &sc.x_init, &sc.x_goal);
            let rp = RadiusParams::for_world(w);
            let budget = TerminationBudget::default();
            let mut bad = Vec::new();
            let runs = [
                ("bfmt", bfmt_plan(w, a, g, n, &BfmtConfig::new(rp.clone()), &mut RngStream::new(world))),
                ("fmt", fmt_plan(w, a, g, n, &rp, &budget, &mut RngStream::new(world))),
                ("prmstar", prm_star_plan(w, a, g, n, &rp, &budget, &mut RngStream::new(world))),
            ];
            for (name, res) in runs {
                let res = res.unwrap();
                let opt = oracle_cost(w, &res).unwrap_or(f64::INFINITY);
                if res.cost < opt {
                    bad.push(format!("{name} world {world} n {n}: {} < {opt}", res.cost));
                }
                if name == "prmstar" && res.cost != opt {
                    bad.push(format!("prmstar world {world} n {n}: {} != {opt}", res.cost));
                }
            }
            bad
        })
        .collect();
    (
        failures.is_empty(),
        match failures.first() {
            None => format!("{} (world, n) cells, 3 planners each", jobs.len()),
            Some(f) => format!("{} violations, first: {f}", failures.len()),
        },
    )
}

fn lazy_excess_decay() -> Outcome {
    let sc = scenario_2d();
    let rp = RadiusParams::for_world(&sc.world);
    let grid = [250, 1000, 4000];
    let mut means = Vec::new();
    let mut below_oracle = 0;
    for n in grid {
        let excess: Vec<Option<f64>> = (0..50u64)
            .into_par_iter()
            .map(|s| {
                let res = bfmt_plan(
                    &sc.world,
                    &sc.x_init,
                    &sc.x_goal,
                    n,
                    &BfmtConfig::new(rp.clone()),
                    &mut RngStream::new(s),
                )
                .unwrap();
                if !res.succeeded {
                    return None;
                }
                let opt = oracle_cost(&sc.world, &res).unwrap();
                Some((res.cost - opt) / opt)
            })
            .collect();
        let ok: Vec<f64> = excess.into_iter().flatten().collect();
        below_oracle += ok.iter().filter(|&&e| e < 0.0).count();
        means.push(mean(&ok));
    }
    let monotone = means.windows(2).all(|p| p[1] <= p[0]);
    let last = *means.last().unwrap();
    let shown: Vec<String> = grid
        .iter()
        .zip(&means)
        .map(|(n, m)| format!("n={n}: {m:.5}"))
        .collect();
    (
        monotone && last <= 0.05 && below_oracle == 0,
        format!("mean relative excess {}", shown.join(", ")),
    )
}

fn variant_dominance() -> Outcome {
    let sc = scenario_2d();
    let rp = RadiusParams::for_world(&sc.world);
    let plan = |e, t, s| {
        let cfg = BfmtConfig::new(rp.clone()).with_rules(e, t);
        bfmt_plan(&sc.world, &sc.x_init, &sc.x_goal, 1000, &cfg, &mut RngStream::new(s)).unwrap()
    };
    use ExpansionRule::*;
    use TerminationRule::*;
    let rows: Vec<[PlanResult; 4]> = (0..50u64)
        .into_par_iter()
        .map(|s| {
            [
                plan(Alternate, FirstMeet, s),
                plan(Alternate, Optimality, s),
                plan(Balanced, FirstMeet, s),
                plan(Balanced, Optimality, s),
            ]
        })
        .collect();
    let violations = rows
        .iter()
        .filter(|r| r[1].cost > r[0].cost || r[3].cost > r[2].cost)
        .count();
    let succ = |k: usize| rows.iter().filter(|r| r[k].succeeded).count() as f64 / 50.0;
    let (alt, bal) = (succ(0), succ(2));
    (
        violations == 0 && bal >= alt - 0.05,
        format!("{violations} ordering violations, success alternate {alt:.2} balanced {bal:.2}"),
    )
}

fn hypercube_advantage() -> Outcome {
    let sc = generate_hypercube_scenario(5, 0.5, &mut RngStream::new(7)).unwrap();
    let rp = RadiusParams::for_world(&sc.world);
    let budget = TerminationBudget::default();
    let counts: Vec<(u64, u64)> = (0..50u64)
        .into_par_iter()
        .map(|s| {
            let b = bfmt_plan(
                &sc.world,
                &sc.x_init,
                &sc.x_goal,
                2000,
                &BfmtConfig::new(rp.clone()),
                &mut RngStream::new(s),
            )
            .unwrap();
            let f = fmt_plan(&sc.world, &sc.x_init, &sc.x_goal, 2000, &rp, &budget, &mut RngStream::new(s))
                .unwrap();
            (b.stats.collision_checks, f.stats.collision_checks)
        })
        .collect();
    let mut b: Vec<u64> = counts.iter().map(|c| c.0).collect();
    let mut f: Vec<u64> = counts.iter().map(|c| c.1).collect();
    let (mb, mf) = (median(&mut b), median(&mut f));
    (
        mb < mf,
        format!(
            "median collision checks bfmt {mb} fmt {mf}, free measure {:.3}",
            sc.world.free_measure()
        ),
    )
}

fn radius_formula() -> Outcome {
    let r = connection_radius(&RadiusParams::new(2, 1.0).unwrap(), 1000).unwrap();
    let value_ok = (r - 0.132629).abs() <= 1e-6;
    let mut checked = 0;
    let mut bad = 0;
    for d in [2, 3, 4, 5] {
        for mu in [0.2, 0.5, 0.9] {
            for eta in [0.0, 0.5] {
                for n in [100, 1000, 10_000] {
                    if checked == 100 {
                        break;
                    }
                    let p = RadiusParams::new(d, mu).unwrap().with_eta(eta).unwrap();
                    let base = connection_radius(&p, n).unwrap();
                    let more_n = connection_radius(&p, 2 * n).unwrap();
                    let more_eta = connection_radius(&p.clone().with_eta(eta + 0.25).unwrap(), n).unwrap();
                    let more_mu = connection_radius(
                        &RadiusParams::new(d, mu + 0.05).unwrap().with_eta(eta).unwrap(),
                        n,
                    )
                    .unwrap();
                    if !(more_n < base && more_eta > base && more_mu > base) {
                        bad += 1;
                    }
                    checked += 1;
                }
            }
        }
    }
    // 4 * 3 * 2 * 3 = 72 points above; fill the grid with single-dimension
    // n sweeps.
    let p = RadiusParams::new(3, 0.7).unwrap();
    let mut prev = f64::INFINITY;
    for k in 0..(100 - checked) {
        let r = connection_radius(&p, 50 + 97 * k).unwrap();
        if !(r < prev) {
            bad += 1;
        }
        prev = r;
    }
    (
        value_ok && bad == 0,
        format!("r(d=2, mu=1, n=1000) = {r:.7}, {bad} monotonicity failures over 100 grid points"),
    )
}

fn feasibility_fuzz() -> Outcome {
    const CASES: u64 = 250;
    let results: Vec<Vec<String>> = (0..CASES)
        .into_par_iter()
        .map(|case| {
            let mut rng = RngStream::substream(case, 1);
            let dim = 2 + (case % 3) as usize;
            let coverage = rng.uniform(0.0, 0.35);
            let sc = generate_hypercube_scenario(dim, coverage, &mut rng).unwrap();
            let w = &sc.world;
            let q = sample_free(w, &mut rng, 2).unwrap();
            let (a, g) = match case % 10 {
                0 => (q[0].clone(), q[0].clone()),
                1 => (sc.x_init.clone(), sc.x_goal.clone()),
                _ => (q[0].clone(), q[1].clone()),
            };
            let n = 30 + (rng.next_f64() * 270.0) as usize;
            let rp = RadiusParams::for_world(w);
            let budget = TerminationBudget {
                max_wall_time: Duration::from_secs(10),
                max_resample_attempts: 500,
                max_iterations: 1_000_000,
            };
            let mut cfg = BfmtConfig::new(rp.clone());
            cfg.budget = budget.clone();
            let mut bad = Vec::new();
            let runs = [
                ("bfmt", bfmt_plan(w, &a, &g, n, &cfg, &mut RngStream::new(case))),
                ("fmt", fmt_plan(w, &a, &g, n, &rp, &budget, &mut RngStream::new(case))),
                ("prmstar", prm_star_plan(w, &a, &g, n, &rp, &budget, &mut RngStream::new(case))),
                (
                    "rrtstar",
                    rrt_star_plan(w, &a, &g, 4 * n, &RrtStarConfig::for_world(w), &mut RngStream::new(case)),
                ),
            ];
            for (name, res) in runs {
                let res = res.unwrap();
                if a == g && !(res.succeeded && res.cost == 0.0) {
                    bad.push(format!("{name} case {case}: x_init = x_goal gave cost {}", res.cost));
                }
                if !res.succeeded {
                    continue;
                }
                let path = res.path.as_ref().unwrap();
                if path.first() != &a || path.last() != &g {
                    bad.push(format!("{name} case {case}: wrong endpoints"));
                }
                if !path_is_free(w, path) {
                    bad.push(format!("{name} case {case}: path collides"));
                }
            }
            bad
        })
        .collect();
    let bad: Vec<String> = results.into_iter().flatten().collect();
    (
        bad.is_empty(),
        match bad.first() {
            None => format!("{} runs over {CASES} random cases", 4 * CASES),
            Some(f) => format!("{} failures, first: {f}", bad.len()),
        },
    )
}

fn trials_without_time(spec: &ScenarioSpec) -> String {
    let (records, _) = run_benchmark(spec).unwrap();
    let mut buf = Vec::new();
    write_trials(&mut buf, &records).unwrap();
    String::from_utf8(buf)
        .unwrap()
        .lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f.remove(6);
            f.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn determinism() -> Outcome {
    let table = BenchmarkTable {
        planners: PlannerKind::ALL.to_vec(),
        sample_counts: Some(vec![150, 400]),
        trials: 6,
        base_seed: 11,
        ..BenchmarkTable::default()
    };
    let spec = ScenarioSpec::new(scenario_2d(), table).unwrap();
    let first = trials_without_time(&spec);
    let second = trials_without_time(&spec);
    let lines = first.lines().count();
    (
        first == second && lines == 1 + 4 * 2 * 6,
        format!("{lines} CSV lines, identical: {}", first == second),
    )
}

fn trace_checker() -> Outcome {
    let r = connection_radius(&RadiusParams::new(2, 1.0).unwrap(), 1000).unwrap();
    let mut bad = 0;
    for seed in 0..100u64 {
        let mut rng = RngStream::new(seed);
        let k = 3 + (rng.next_f64() * 6.0) as usize;
        // Monotone in x with slopes of magnitude at most 1.
        let mut verts = vec![pt(&[0.05, rng.uniform(0.3, 0.7)])];
        let dx = 0.9 / k as f64;
        for i in 1..=k {
            let prev = verts[i - 1].coords()[1];
            let y = (prev + rng.uniform(-dx, dx)).clamp(0.1, 0.9);
            verts.push(pt(&[0.05 + dx * i as f64, y]));
        }
        let sigma = Polyline::new(verts).unwrap();
        let mut way = sigma.sample_by_arc_length(r / 2.0);
        let step = r / 20.0;
        let clean = check_trace(&way, &sigma, 0.01, r, step).unwrap();
        // A vertical shift of 2r puts the point at least 2r / sqrt(2) from a
        // graph with slopes bounded by 1.
        let j = 1 + (rng.next_f64() * (way.len() - 2) as f64) as usize;
        let mut c = way[j].coords().to_vec();
        c[1] += 2.0 * r;
        way[j] = pt(&c);
        let moved = check_trace(&way, &sigma, 0.01, r, step).unwrap();
        if !clean.holds() || !moved.violates(TraceClause::Deviation) {
            bad += 1;
        }
    }
    (bad == 0, format!("{bad} of 100 paths misjudged at r = {r:.6}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 straight-line convergence", straight_line),
        ("2 oracle lower bound", oracle_lower_bound),
        ("3 lazy-excess decay", lazy_excess_decay),
        ("4 variant dominance", variant_dominance),
        ("5 hypercube bi-directional advantage", hypercube_advantage),
        ("6 radius formula", radius_formula),
        ("7 feasibility fuzz", feasibility_fuzz),
        ("8 determinism", determinism),
        ("9 trace checker", trace_checker),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {detail} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
