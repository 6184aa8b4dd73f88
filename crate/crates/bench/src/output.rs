use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::BenchError;
use crate::run::{SummaryRow, TrialRecord};
use crate::spec::ScenarioSpec;

pub const TRIALS_HEADER: [&str; 10] = [
    "planner",
    "n",
    "trial",
    "seed",
    "succeeded",
    "cost",
    "wall_time_s",
    "collision_checks",
    "iterations",
    "resamples",
];

pub const SUMMARY_HEADER: [&str; 7] = [
    "planner",
    "n",
    "success_rate",
    "mean_cost",
    "std_mean_cost",
    "mean_time_s",
    "std_mean_time_s",
];

pub const TRIALS_FILE: &str = "trials.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const METADATA_FILE: &str = "metadata.toml";

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Formats like C's `%.9g`: nine significant digits, trailing zeros
/// dropped, exponent form below `1e-4` or from `1e9` up. Non-finite values
/// print as `inf`, `-inf` and `nan`.
pub fn format_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (8 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_trials<W: Write>(w: W, records: &[TrialRecord]) -> Result<(), BenchError> {
    let mut out = writer(w);
    out.write_record(TRIALS_HEADER)?;
    for r in records {
        out.write_record([
            r.planner.name().to_string(),
            r.n.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.succeeded.to_string(),
            format_g9(r.cost),
            format_g9(r.wall_time_s),
            r.collision_checks.to_string(),
            r.iterations.to_string(),
            r.resamples.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(w: W, rows: &[SummaryRow]) -> Result<(), BenchError> {
    let mut out = writer(w);
    out.write_record(SUMMARY_HEADER)?;
    for r in rows {
        out.write_record([
            r.planner.name().to_string(),
            r.n.to_string(),
            format_g9(r.success_rate),
            format_g9(r.mean_cost),
            format_g9(r.std_mean_cost),
            format_g9(r.mean_time_s),
            format_g9(r.std_mean_time_s),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `trials.csv` and `summary.csv` into `out_dir`, creating it if
/// needed.
pub fn emit_csv(
    records: &[TrialRecord],
    summary: &[SummaryRow],
    out_dir: impl AsRef<Path>,
) -> Result<(PathBuf, PathBuf), BenchError> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let (tp, sp) = (dir.join(TRIALS_FILE), dir.join(SUMMARY_FILE));
    write_trials(std::fs::File::create(&tp)?, records)?;
    write_summary(std::fs::File::create(&sp)?, summary)?;
    Ok((tp, sp))
}

/// Reads a summary CSV back.
pub fn read_summary(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>, BenchError> {
    let path = path.as_ref();
    let load = |m: String| BenchError::Load(format!("{}: {m}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| load(e.to_string()))?;
    let header = rdr.headers().map_err(|e| load(e.to_string()))?.clone();
    if header.iter().ne(SUMMARY_HEADER) {
        return Err(load(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| load(e.to_string()))?;
        let line = i + 2;
        let num = |k: usize| -> Result<f64, BenchError> {
            rec[k]
                .parse()
                .map_err(|_| load(format!("line {line}: bad number {:?}", &rec[k])))
        };
        rows.push(SummaryRow {
            planner: rec[0].parse().map_err(|e| load(format!("line {line}: {e}")))?,
            n: rec[1]
                .parse()
                .map_err(|_| load(format!("line {line}: bad count {:?}", &rec[1])))?,
            success_rate: num(2)?,
            mean_cost: num(3)?,
            std_mean_cost: num(4)?,
            mean_time_s: num(5)?,
            std_mean_time_s: num(6)?,
        });
    }
    Ok(rows)
}

#[derive(serde::Serialize)]
struct Metadata<'a> {
    planners: Vec<&'static str>,
    sample_counts: &'a [usize],
    sample_grid: String,
    trials: usize,
    base_seed: u64,
    seed_rule: &'static str,
    bfmt_variant: String,
    radius: &'a crate::spec::RadiusSettings,
    prmstar_eta: f64,
    rrtstar: RrtMetadata,
    budget: &'a crate::spec::BudgetSettings,
    nondeterministic_columns: [&'static str; 1],
}

#[derive(serde::Serialize)]
struct RrtMetadata {
    goal_bias: f64,
    steer_fraction: f64,
    iterations: &'static str,
    rewire_radius: &'static str,
    random_states: &'static str,
}

/// Run settings that the CSVs do not carry, as TOML.
pub fn render_metadata(spec: &ScenarioSpec) -> String {
    let t = &spec.table;
    let sample_grid = match &t.sample_counts {
        Some(_) => "explicit".to_string(),
        None => format!(
            "{} log-spaced counts over [{}, {}]",
            t.grid_points, t.sample_range[0], t.sample_range[1]
        ),
    };
    let m = Metadata {
        planners: t.planners.iter().map(|p| p.name()).collect(),
        sample_counts: &spec.sample_counts,
        sample_grid,
        trials: t.trials,
        base_seed: t.base_seed,
        seed_rule: "seed = base_seed + trial, shared by every planner and sample count",
        bfmt_variant: t.variant.to_string(),
        radius: &t.radius,
        prmstar_eta: 0.0,
        rrtstar: RrtMetadata {
            goal_bias: t.rrtstar.goal_bias,
            steer_fraction: t.rrtstar.steer_fraction,
            iterations: "n",
            rewire_radius: "min(connection radius with eta = 0 at the current node count, steer)",
            random_states: "uniform over the bounds, not rejected when inside obstacles",
        },
        budget: &t.budget,
        nondeterministic_columns: ["wall_time_s"],
    };
    toml::to_string(&m).expect("metadata serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::PlannerKind;

    #[test]
    fn g9_matches_printf() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (1.131370849898476, "1.13137085"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (9.9999999999, "10"),
            (-2.5, "-2.5"),
            (1e100, "1e+100"),
            (0.0, "0"),
            (f64::INFINITY, "inf"),
            (f64::NAN, "nan"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g9(x), want, "{x}");
        }
    }

    fn record(ok: bool) -> TrialRecord {
        TrialRecord {
            planner: PlannerKind::Bfmt,
            n: 100,
            trial: 0,
            seed: 5,
            succeeded: ok,
            cost: if ok { 1.25 } else { f64::INFINITY },
            wall_time_s: 0.01,
            collision_checks: 7,
            iterations: 3,
            resamples: 0,
        }
    }

    #[test]
    fn one_record_two_lines() {
        let mut buf = Vec::new();
        write_trials(&mut buf, &[record(false)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "planner,n,trial,seed,succeeded,cost,wall_time_s,collision_checks,iterations,resamples\n\
             bfmt,100,0,5,false,inf,0.01,7,3,0\n"
        );
    }

    #[test]
    fn empty_summary_is_header_only() {
        let mut buf = Vec::new();
        write_summary(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "planner,n,success_rate,mean_cost,std_mean_cost,mean_time_s,std_mean_time_s\n"
        );
    }
}
