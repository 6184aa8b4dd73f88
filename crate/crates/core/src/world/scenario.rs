//! TOML scenario files.
//!
//! ```toml
//! dim = 2
//! x_init = [0.5, 0.5]
//! x_goal = [1.0, 1.0]
//! free_measure = 0.96      # optional override
//!
//! [bounds]
//! lo = [0.0, 0.0]
//! hi = [1.0, 1.0]
//!
//! [[obstacles]]
//! lo = [0.1, 0.1]
//! hi = [0.3, 0.3]
//!
//! [generator]              # provenance; optional
//! seed = 7
//! coverage = 0.3
//! cell_side = 0.25
//! max_cells = 4096
//! fill_min = 0.5
//! fill_max = 0.95
//! ```
//!
//! When `bounds` is omitted the world is regenerated from the `[generator]`
//! table, and `x_init`/`x_goal` default to the generator's query.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Aabb, GeneratorParams, RngStream, World};
use crate::error::{Error, Result};
use crate::geom::{check_dim, Config};

/// How a generated world was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub seed: u64,
    pub coverage: f64,
    #[serde(default = "defaults::cell_side")]
    pub cell_side: f64,
    #[serde(default = "defaults::max_cells")]
    pub max_cells: usize,
    #[serde(default = "defaults::fill_min")]
    pub fill_min: f64,
    #[serde(default = "defaults::fill_max")]
    pub fill_max: f64,
}

mod defaults {
    use super::GeneratorParams;

    pub(super) fn cell_side() -> f64 {
        GeneratorParams::default().cell_side
    }
    pub(super) fn max_cells() -> usize {
        GeneratorParams::default().max_cells
    }
    pub(super) fn fill_min() -> f64 {
        GeneratorParams::default().fill_min
    }
    pub(super) fn fill_max() -> f64 {
        GeneratorParams::default().fill_max
    }
}

impl GeneratorInfo {
    pub fn params(&self) -> GeneratorParams {
        GeneratorParams {
            cell_side: self.cell_side,
            max_cells: self.max_cells,
            fill_min: self.fill_min,
            fill_max: self.fill_max,
            ..GeneratorParams::default()
        }
    }
}

/// A world together with a planning query.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub world: World,
    pub x_init: Config,
    pub x_goal: Config,
    pub generator: Option<GeneratorInfo>,
}

#[derive(Serialize, Deserialize)]
struct ScenarioFile {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x_init: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x_goal: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    free_measure: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bounds: Option<Aabb>,
    #[serde(default)]
    obstacles: Vec<Aabb>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<GeneratorInfo>,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        let d = file.dim;
        if d == 0 {
            return Err(Error::Scenario("dim must be at least 1".into()));
        }

        let (world, generated_query) = match (file.bounds, &file.generator) {
            (Some(bounds), _) => {
                check_dim(d, bounds.dim()).map_err(|e| Error::Scenario(format!("bounds: {e}")))?;
                (World::new(bounds, file.obstacles)?, None)
            }
            (None, Some(info)) => {
                if !file.obstacles.is_empty() {
                    return Err(Error::Scenario(
                        "obstacles given without bounds".into(),
                    ));
                }
                let s = info.params().generate(d, info.coverage, &mut RngStream::new(info.seed))?;
                (s.world, Some((s.x_init, s.x_goal)))
            }
            (None, None) => {
                return Err(Error::Scenario(
                    "scenario needs either [bounds] or [generator]".into(),
                ))
            }
        };
        let world = match file.free_measure {
            Some(fm) => world.with_free_measure(fm)?,
            None => world,
        };

        let endpoint = |name: &str, given: Option<Vec<f64>>, fallback: Option<Config>| {
            let x = match (given, fallback) {
                (Some(v), _) => Config::new(v).map_err(|e| Error::Scenario(format!("{name}: {e}")))?,
                (None, Some(x)) => x,
                (None, None) => return Err(Error::Scenario(format!("missing {name}"))),
            };
            check_dim(d, x.dim()).map_err(|e| Error::Scenario(format!("{name}: {e}")))?;
            if !world.bounds().contains(&x) {
                return Err(Error::Scenario(format!("{name} lies outside the bounds")));
            }
            Ok(x)
        };
        let (gi, gg) = generated_query.unzip();
        let x_init = endpoint("x_init", file.x_init, gi)?;
        let x_goal = endpoint("x_goal", file.x_goal, gg)?;

        Ok(Scenario {
            world,
            x_init,
            x_goal,
            generator: file.generator,
        })
    }

    /// Writes the scenario with its world inline.
    pub fn to_toml_string(&self) -> String {
        let file = ScenarioFile {
            dim: self.world.dim(),
            x_init: Some(self.x_init.coords().to_vec()),
            x_goal: Some(self.x_goal.coords().to_vec()),
            free_measure: Some(self.world.free_measure()),
            bounds: Some(self.world.bounds().clone()),
            obstacles: self.world.obstacles().to_vec(),
            generator: self.generator.clone(),
        };
        toml::to_string(&file).expect("scenario serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
        Scenario::from_toml_str(&text)
            .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_toml_string())
    }
}
