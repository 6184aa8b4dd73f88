use std::path::PathBuf;
use std::process::ExitCode;

use bfmt::oracle::{dijkstra_optimum, DiskGraph};
use bfmt::radius::RadiusParams;
use bfmt::world::{generate_hypercube_scenario, RngStream};
use bfmt_bench::output::{read_summary, render_metadata, write_summary, METADATA_FILE};
use bfmt_bench::spec::{BenchmarkTable, PlannerKind, ScenarioSpec, Variant};
use bfmt_bench::{emit_cost_time_svg, emit_csv, format_g9, run_benchmark, BenchError};
use clap::{Args, Parser, Subcommand};

/// Benchmarks for BFMT*, FMT*, PRM* and RRT* on box worlds.
#[derive(Parser)]
#[command(name = "bfmt-bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a cluttered unit-hypercube scenario file.
    Generate {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0.3)]
        coverage: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a benchmark and write trials.csv, summary.csv and metadata.toml.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Comma-separated sample counts.
        #[arg(long, value_delimiter = ',')]
        samples: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        planners: Option<Vec<PlannerKind>>,
        /// `<alternate|balanced>/<first_meet|optimality>`.
        #[arg(long)]
        variant: Option<Variant>,
        #[arg(long, default_value = "bench-out")]
        out_dir: PathBuf,
    },
    /// Print the exact r-disk-graph optimum for `trials` seeded sample sets.
    Oracle {
        scenario: PathBuf,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Plot a summary CSV as cost against time.
    Plot {
        summary: PathBuf,
        #[arg(long, default_value = "cost_time.svg")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Overrides {
    /// Base seed; trial k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Leading radius constant: 4 (default) or the tighter 2.
    #[arg(long, value_parser = parse_factor)]
    radius_factor: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
}

fn parse_factor(s: &str) -> Result<f64, String> {
    match s {
        "4" => Ok(4.0),
        "2" => Ok(2.0),
        _ => Err("radius factor must be 4 or 2".into()),
    }
}

/// Largest sample count the oracle command accepts.
const ORACLE_MAX_N: usize = 5000;

fn load_spec(path: &PathBuf, o: &Overrides) -> Result<ScenarioSpec, BenchError> {
    let spec = ScenarioSpec::load(path)?;
    let mut table = spec.table.clone();
    if let Some(s) = o.seed {
        table.base_seed = s;
    }
    if let Some(t) = o.trials {
        table.trials = t;
    }
    if let Some(f) = o.radius_factor {
        table.radius.constant_factor = f;
    }
    if let Some(e) = o.eta {
        table.radius.eta = e;
    }
    ScenarioSpec::new(spec.scenario, table)
}

fn run(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Generate {
            dim,
            coverage,
            seed,
            out,
        } => {
            let scenario = generate_hypercube_scenario(dim, coverage, &mut RngStream::new(seed))?;
            let spec = ScenarioSpec::new(scenario, BenchmarkTable::default())?;
            std::fs::write(&out, spec.to_toml_string())?;
            eprintln!(
                "wrote {} (free measure {})",
                out.display(),
                format_g9(spec.scenario.world.free_measure())
            );
        }
        Command::Run {
            scenario,
            overrides,
            samples,
            planners,
            variant,
            out_dir,
        } => {
            let spec = load_spec(&scenario, &overrides)?;
            let mut table = spec.table.clone();
            if let Some(s) = samples {
                table.sample_counts = Some(s);
            }
            if let Some(p) = planners {
                table.planners = p;
            }
            if let Some(v) = variant {
                table.variant = v;
            }
            let spec = ScenarioSpec::new(spec.scenario, table)?;
            let (records, summary) = run_benchmark(&spec)?;
            let (tp, sp) = emit_csv(&records, &summary, &out_dir)?;
            std::fs::write(out_dir.join(METADATA_FILE), render_metadata(&spec))?;
            write_summary(std::io::stdout().lock(), &summary)?;
            eprintln!("wrote {} and {}", tp.display(), sp.display());
        }
        Command::Oracle {
            scenario,
            n,
            overrides,
        } => {
            if n > ORACLE_MAX_N {
                return Err(bfmt::Error::InvalidParameter(format!(
                    "oracle is limited to n <= {ORACLE_MAX_N}"
                ))
                .into());
            }
            let spec = load_spec(&scenario, &overrides)?;
            let s = &spec.scenario;
            let rp: RadiusParams = spec.radius_params()?;
            let r = bfmt::radius::connection_radius(&rp, n.max(2))?;
            println!("trial,seed,n,radius,edges,oracle_cost");
            for trial in 0..spec.table.trials {
                let seed = spec.seed_for(trial);
                let mut rng = RngStream::new(seed);
                let mut samples = vec![s.x_init.clone(), s.x_goal.clone()];
                samples.extend(bfmt::world::sample_free(&s.world, &mut rng, n)?);
                let g = DiskGraph::build(&s.world, &samples, r)?;
                let cost = dijkstra_optimum(&g, 0, 1).map_or(f64::INFINITY, |(c, _)| c);
                println!(
                    "{trial},{seed},{n},{},{},{}",
                    format_g9(r),
                    g.edge_count(),
                    format_g9(cost)
                );
            }
        }
        Command::Plot { summary, out } => {
            let rows = read_summary(&summary)?;
            emit_cost_time_svg(&rows, &out)?;
            eprintln!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
