//! Benchmark specifications: a scenario file plus a `[benchmark]` table.
//!
//! ```toml
//! [benchmark]
//! planners = ["bfmt", "fmt", "prmstar", "rrtstar"]
//! sample_range = [200, 2000]   # 8 log-spaced counts unless sample_counts is set
//! trials = 50
//! base_seed = 0
//! variant = "alternate/first_meet"
//!
//! [benchmark.radius]
//! eta = 0.0
//! constant_factor = 4.0
//! user_multiplier = 1.0
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use bfmt::baselines::RrtStarConfig;
use bfmt::bfmt::{BfmtConfig, ExpansionRule, TerminationRule};
use bfmt::fmt::TerminationBudget;
use bfmt::radius::RadiusParams;
use bfmt::world::Scenario;
use serde::{Deserialize, Serialize};

use crate::error::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerKind {
    Bfmt,
    Fmt,
    Prmstar,
    Rrtstar,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 4] = [
        PlannerKind::Bfmt,
        PlannerKind::Fmt,
        PlannerKind::Prmstar,
        PlannerKind::Rrtstar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Bfmt => "bfmt",
            PlannerKind::Fmt => "fmt",
            PlannerKind::Prmstar => "prmstar",
            PlannerKind::Rrtstar => "rrtstar",
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlannerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        PlannerKind::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| format!("unknown planner {s:?} (expected bfmt, fmt, prmstar or rrtstar)"))
    }
}

/// BFMT* expansion and termination rules, written `alternate/first_meet`.
/// `x`, `-`, `:` and `,` are accepted as separators too.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Variant {
    pub expansion: ExpansionRule,
    pub termination: TerminationRule,
}

impl Default for Variant {
    fn default() -> Self {
        Variant {
            expansion: ExpansionRule::Alternate,
            termination: TerminationRule::FirstMeet,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self.expansion {
            ExpansionRule::Alternate => "alternate",
            ExpansionRule::Balanced => "balanced",
        };
        let t = match self.termination {
            TerminationRule::FirstMeet => "first_meet",
            TerminationRule::Optimality => "optimality",
        };
        write!(f, "{e}/{t}")
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (expansion, rest) = if let Some(r) = s.strip_prefix("alternate") {
            (ExpansionRule::Alternate, r)
        } else if let Some(r) = s.strip_prefix("balanced") {
            (ExpansionRule::Balanced, r)
        } else {
            return Err(format!("unknown variant {s:?}"));
        };
        let rest = rest
            .strip_prefix(|c| matches!(c, 'x' | '/' | '-' | ':' | ','))
            .ok_or_else(|| format!("unknown variant {s:?}"))?;
        let termination = match rest {
            "first_meet" => TerminationRule::FirstMeet,
            "optimality" => TerminationRule::Optimality,
            _ => return Err(format!("unknown termination rule {rest:?}")),
        };
        Ok(Variant {
            expansion,
            termination,
        })
    }
}

impl Serialize for Variant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Variant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadiusSettings {
    pub eta: f64,
    pub constant_factor: f64,
    pub user_multiplier: f64,
}

impl Default for RadiusSettings {
    fn default() -> Self {
        RadiusSettings {
            eta: 0.0,
            constant_factor: RadiusParams::DEFAULT_FACTOR,
            user_multiplier: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetSettings {
    pub max_wall_time_s: f64,
    pub max_resample_attempts: u64,
    pub max_iterations: u64,
}

impl Default for BudgetSettings {
    fn default() -> Self {
        let b = TerminationBudget::default();
        BudgetSettings {
            max_wall_time_s: b.max_wall_time.as_secs_f64(),
            max_resample_attempts: b.max_resample_attempts,
            max_iterations: b.max_iterations,
        }
    }
}

impl BudgetSettings {
    pub fn to_budget(&self) -> Result<TerminationBudget, String> {
        let wall = Duration::try_from_secs_f64(self.max_wall_time_s)
            .map_err(|e| format!("max_wall_time_s: {e}"))?;
        let b = TerminationBudget {
            max_wall_time: wall,
            max_resample_attempts: self.max_resample_attempts,
            max_iterations: self.max_iterations,
        };
        b.validate().map_err(|e| e.to_string())?;
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RrtSettings {
    pub goal_bias: f64,
    pub steer_fraction: f64,
}

impl Default for RrtSettings {
    fn default() -> Self {
        RrtSettings {
            goal_bias: 0.05,
            steer_fraction: 0.2,
        }
    }
}

/// The `[benchmark]` table as written in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchmarkTable {
    pub planners: Vec<PlannerKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_counts: Option<Vec<usize>>,
    pub sample_range: [usize; 2],
    pub grid_points: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub variant: Variant,
    pub radius: RadiusSettings,
    pub budget: BudgetSettings,
    pub rrtstar: RrtSettings,
}

impl Default for BenchmarkTable {
    fn default() -> Self {
        BenchmarkTable {
            planners: PlannerKind::ALL.to_vec(),
            sample_counts: None,
            sample_range: [200, 2000],
            grid_points: 8,
            trials: 50,
            base_seed: 0,
            variant: Variant::default(),
            radius: RadiusSettings::default(),
            budget: BudgetSettings::default(),
            rrtstar: RrtSettings::default(),
        }
    }
}

#[derive(Deserialize)]
struct SpecFile {
    #[serde(default)]
    benchmark: BenchmarkTable,
}

#[derive(Serialize)]
struct SpecFileOut<'a> {
    benchmark: &'a BenchmarkTable,
}

/// `k` counts spread geometrically over `[lo, hi]`, rounded and deduplicated.
pub fn log_spaced(lo: usize, hi: usize, k: usize) -> Vec<usize> {
    if k <= 1 || lo == hi {
        return vec![lo];
    }
    let ratio = hi as f64 / lo as f64;
    let mut out: Vec<usize> = (0..k)
        .map(|i| (lo as f64 * ratio.powf(i as f64 / (k - 1) as f64)).round() as usize)
        .collect();
    out.dedup();
    out
}

#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub table: BenchmarkTable,
    /// Resolved, strictly ascending.
    pub sample_counts: Vec<usize>,
    pub budget: TerminationBudget,
}

impl ScenarioSpec {
    pub fn new(scenario: Scenario, table: BenchmarkTable) -> Result<Self, BenchError> {
        let load = BenchError::Load;
        if table.trials == 0 {
            return Err(load("benchmark.trials must be at least 1".into()));
        }
        if table.planners.is_empty() {
            return Err(load("benchmark.planners is empty".into()));
        }
        let sample_counts = match &table.sample_counts {
            Some(c) => c.clone(),
            None => {
                let [lo, hi] = table.sample_range;
                if lo == 0 || hi < lo {
                    return Err(load(format!("bad benchmark.sample_range [{lo}, {hi}]")));
                }
                log_spaced(lo, hi, table.grid_points)
            }
        };
        if sample_counts.is_empty()
            || sample_counts[0] == 0
            || sample_counts.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(load(format!(
                "sample counts must be positive and ascending, got {sample_counts:?}"
            )));
        }
        let budget = table.budget.to_budget().map_err(|e| load(format!("benchmark.budget: {e}")))?;
        let spec = ScenarioSpec {
            scenario,
            table,
            sample_counts,
            budget,
        };
        spec.radius_params().map_err(|e| load(format!("benchmark.radius: {e}")))?;
        spec.rrt_config().map_err(|e| load(format!("benchmark.rrtstar: {e}")))?;
        Ok(spec)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, BenchError> {
        let scenario = Scenario::from_toml_str(text).map_err(|e| BenchError::Load(e.to_string()))?;
        let file: SpecFile = toml::from_str(text).map_err(|e| BenchError::Load(e.to_string()))?;
        ScenarioSpec::new(scenario, file.benchmark)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BenchError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Load(format!("{}: {e}", path.display())))?;
        ScenarioSpec::from_toml_str(&text).map_err(|e| match e {
            BenchError::Load(m) => BenchError::Load(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        let table = toml::to_string(&SpecFileOut {
            benchmark: &self.table,
        })
        .expect("benchmark table serializes");
        format!("{}\n{}", self.scenario.to_toml_string(), table)
    }

    pub fn seed_for(&self, trial: usize) -> u64 {
        self.table.base_seed.wrapping_add(trial as u64)
    }

    /// Radius constants for FMT* and BFMT*.
    pub fn radius_params(&self) -> bfmt::Result<RadiusParams> {
        let r = &self.table.radius;
        RadiusParams::for_world(&self.scenario.world)
            .with_eta(r.eta)?
            .with_factor(r.constant_factor)?
            .with_multiplier(r.user_multiplier)
    }

    /// PRM* uses the same constants with `eta = 0`.
    pub fn prm_radius_params(&self) -> bfmt::Result<RadiusParams> {
        self.radius_params()?.with_eta(0.0)
    }

    pub fn bfmt_config(&self) -> bfmt::Result<BfmtConfig> {
        let mut cfg = BfmtConfig::new(self.radius_params()?)
            .with_rules(self.table.variant.expansion, self.table.variant.termination);
        cfg.budget = self.budget.clone();
        Ok(cfg)
    }

    pub fn rrt_config(&self) -> bfmt::Result<RrtStarConfig> {
        let cfg = RrtStarConfig {
            goal_bias: self.table.rrtstar.goal_bias,
            steer_fraction: self.table.rrtstar.steer_fraction,
            rewire_radius_params: self.prm_radius_params()?,
            max_wall_time: self.budget.max_wall_time,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = r#"
dim = 2
x_init = [0.1, 0.1]
x_goal = [0.9, 0.9]

[bounds]
lo = [0.0, 0.0]
hi = [1.0, 1.0]

[benchmark]
planners = ["bfmt", "prmstar"]
sample_counts = [100, 200]
trials = 3
base_seed = 10
variant = "balanced/optimality"
"#;

    #[test]
    fn parses_benchmark_table() {
        let s = ScenarioSpec::from_toml_str(TEXT).unwrap();
        assert_eq!(s.table.planners, vec![PlannerKind::Bfmt, PlannerKind::Prmstar]);
        assert_eq!(s.sample_counts, vec![100, 200]);
        assert_eq!(s.seed_for(2), 12);
        assert_eq!(s.table.variant.expansion, ExpansionRule::Balanced);
        let back = ScenarioSpec::from_toml_str(&s.to_toml_string()).unwrap();
        assert_eq!(back.table, s.table);
    }

    #[test]
    fn default_grid_is_log_spaced() {
        let text = TEXT.replace("sample_counts = [100, 200]\n", "");
        let s = ScenarioSpec::from_toml_str(&text).unwrap();
        assert_eq!(s.sample_counts.len(), 8);
        assert_eq!(s.sample_counts[0], 200);
        assert_eq!(*s.sample_counts.last().unwrap(), 2000);
        assert_eq!(log_spaced(500, 4000, 4), vec![500, 1000, 2000, 4000]);
    }

    #[test]
    fn rejects_bad_tables() {
        for (from, to) in [
            ("trials = 3", "trials = 0"),
            ("[100, 200]", "[200, 100]"),
            ("\"prmstar\"", "\"sbl\""),
            ("balanced/optimality", "greedy"),
            ("base_seed = 10", "base_seed = 10\nbogus = 1"),
        ] {
            let err = ScenarioSpec::from_toml_str(&TEXT.replace(from, to)).unwrap_err();
            assert!(matches!(err, BenchError::Load(_)), "{from} -> {to}: {err}");
        }
    }

    #[test]
    fn variant_spellings() {
        for s in ["alternatexfirst_meet", "alternate-first_meet", "alternate/first_meet"] {
            assert_eq!(s.parse::<Variant>().unwrap(), Variant::default());
        }
        let v: Variant = "balanced:optimality".parse().unwrap();
        assert_eq!(v.to_string(), "balanced/optimality");
    }
}
