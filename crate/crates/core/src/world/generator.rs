//! Cluttered unit-hypercube scenarios with the query running from the center
//! of the cube to its all-ones corner.
//!
//! The cube is cut into cells by random axis-aligned splits. Cells are then
//! visited in random order and each receives one randomly sized box that
//! fits inside it, until the covered volume lands in the target band. Boxes
//! in distinct cells cannot overlap, so the free-space measure stays exact,
//! and the empty cells form open chambers that keep free space connected
//! even at high coverage in many dimensions.

use super::{Aabb, GeneratorInfo, RngStream, Scenario, World};
use crate::error::{Error, Result};
use crate::geom::Config;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    /// Target mean cell side; the cube is cut into about `cell_side^-d`
    /// cells.
    pub cell_side: f64,
    /// Upper bound on the number of cells.
    pub max_cells: usize,
    /// Range of box volume as a fraction of its cell's volume. Each axis
    /// draws its side fraction uniformly from `[fill_min^(1/d), fill_max^(1/d)]`.
    pub fill_min: f64,
    pub fill_max: f64,
    /// Accepted band around the target coverage.
    pub tolerance: f64,
    /// Boxes closer than this to either query endpoint are discarded.
    pub endpoint_clearance: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            cell_side: 0.25,
            max_cells: 4096,
            fill_min: 0.5,
            fill_max: 0.95,
            tolerance: 0.02,
            endpoint_clearance: 0.02,
        }
    }
}

/// Generates a `d`-dimensional unit-hypercube world with the given obstacle
/// coverage, using the default [`GeneratorParams`].
pub fn generate_hypercube_scenario(d: usize, coverage: f64, rng: &mut RngStream) -> Result<Scenario> {
    GeneratorParams::default().generate(d, coverage, rng)
}

struct Cell {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Cell {
    fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }
}

impl GeneratorParams {
    pub fn cell_count(&self, d: usize) -> usize {
        let n = self.cell_side.powi(-(d as i32)).round();
        if n.is_finite() {
            (n as usize).clamp(1, self.max_cells)
        } else {
            self.max_cells
        }
    }

    fn validate(&self, d: usize, coverage: f64) -> Result<()> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!(
                "hypercube scenarios need d >= 2, got {d}"
            )));
        }
        if !(0.0..1.0).contains(&coverage) {
            return Err(Error::InvalidParameter(format!(
                "coverage must lie in [0, 1), got {coverage}"
            )));
        }
        if !(0.0 < self.fill_min && self.fill_min <= self.fill_max && self.fill_max < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "bad fill range [{}, {}]",
                self.fill_min, self.fill_max
            )));
        }
        if !(self.cell_side > 0.0 && self.cell_side <= 1.0) || self.max_cells == 0 {
            return Err(Error::InvalidParameter("bad cell size".into()));
        }
        Ok(())
    }

    /// Random draws happen in this order: for each split, one draw for the
    /// split position; then one draw per swap of the cell shuffle; then for
    /// each visited cell, `d` fill fractions followed by `d` offsets.
    pub fn generate(&self, d: usize, coverage: f64, rng: &mut RngStream) -> Result<Scenario> {
        self.validate(d, coverage)?;
        let seed = rng.seed();
        let x_init = Config::splat(d, 0.5)?;
        let x_goal = Config::splat(d, 1.0)?;

        let mut obstacles = Vec::new();
        let mut covered = 0.0;
        if coverage - self.tolerance > 0.0 {
            let mut cells = self.partition(d, rng);
            // Fisher-Yates, back to front.
            for i in (1..cells.len()).rev() {
                let j = ((rng.next_f64() * (i + 1) as f64) as usize).min(i);
                cells.swap(i, j);
            }

            let root = 1.0 / d as f64;
            let (side_min, side_max) = (self.fill_min.powf(root), self.fill_max.powf(root));
            let mut skipped = 0u64;
            for cell in &cells {
                if covered >= coverage - self.tolerance {
                    break;
                }
                let mut sides = vec![0.0; d];
                for (i, s) in sides.iter_mut().enumerate() {
                    *s = rng.uniform(side_min, side_max) * (cell.hi[i] - cell.lo[i]);
                }
                let mut lo = vec![0.0; d];
                for i in 0..d {
                    lo[i] = cell.lo[i] + rng.next_f64() * (cell.hi[i] - cell.lo[i] - sides[i]);
                }
                let hi: Vec<f64> = lo.iter().zip(&sides).map(|(l, s)| l + s).collect();
                let candidate = Aabb::new(lo, hi)?;
                let volume = candidate.volume();
                if covered + volume > coverage + self.tolerance
                    || candidate.distance_to_point(&x_init) < self.endpoint_clearance
                    || candidate.distance_to_point(&x_goal) < self.endpoint_clearance
                {
                    skipped += 1;
                    continue;
                }
                covered += volume;
                obstacles.push(candidate);
            }
            if covered < coverage - self.tolerance {
                return Err(Error::CoverageUnreachable {
                    target: coverage,
                    reached: covered,
                    rejections: skipped,
                });
            }
        }

        let world = World::new(Aabb::unit(d), obstacles)?;
        Ok(Scenario {
            world,
            x_init,
            x_goal,
            generator: Some(GeneratorInfo {
                seed,
                coverage,
                cell_side: self.cell_side,
                max_cells: self.max_cells,
                fill_min: self.fill_min,
                fill_max: self.fill_max,
            }),
        })
    }

    /// Repeatedly halves (at a random position in the middle 40%) the
    /// largest cell along its longest side. Ties go to the lower index.
    fn partition(&self, d: usize, rng: &mut RngStream) -> Vec<Cell> {
        let target = self.cell_count(d);
        let mut cells = vec![Cell {
            lo: vec![0.0; d],
            hi: vec![1.0; d],
        }];
        while cells.len() < target {
            let (idx, _) = cells
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, c)| {
                    let v = c.volume();
                    if v > best.1 {
                        (i, v)
                    } else {
                        best
                    }
                });
            let cell = &cells[idx];
            let axis = (0..d).fold(0, |best, i| {
                if cell.hi[i] - cell.lo[i] > cell.hi[best] - cell.lo[best] {
                    i
                } else {
                    best
                }
            });
            let at = cell.lo[axis] + rng.uniform(0.3, 0.7) * (cell.hi[axis] - cell.lo[axis]);
            let mut upper = Cell {
                lo: cell.lo.clone(),
                hi: cell.hi.clone(),
            };
            upper.lo[axis] = at;
            cells[idx].hi[axis] = at;
            cells.push(upper);
        }
        cells
    }
}
