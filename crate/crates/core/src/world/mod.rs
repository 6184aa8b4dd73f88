//! Box worlds: axis-aligned obstacles inside a bounding box, exact segment
//! collision checks, uniform free-space sampling and clearance.
//!
//! Free space is closed: points on an obstacle face, and segments that only
//! graze one, are collision-free.

mod aabb;
mod bvh;
mod generator;
mod rng;
mod scenario;

pub use aabb::Aabb;
pub use generator::{generate_hypercube_scenario, GeneratorParams};
pub use rng::RngStream;
pub use scenario::{GeneratorInfo, Scenario};

use crate::error::{Error, Result};
use crate::geom::{check_dim, Config, Polyline};
use bvh::ObstacleBvh;

/// Consecutive rejected draws after which free space is declared empty.
pub const MAX_CONSECUTIVE_REJECTIONS: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct World {
    bounds: Aabb,
    obstacles: Vec<Aabb>,
    free_measure: f64,
    bvh: ObstacleBvh,
}

impl World {
    /// Builds a world, checking that every obstacle lies inside `bounds` and
    /// that obstacle interiors are pairwise disjoint. The free-space measure
    /// is the bounding volume minus the obstacle volumes.
    pub fn new(bounds: Aabb, obstacles: Vec<Aabb>) -> Result<Self> {
        let d = bounds.dim();
        for (i, o) in obstacles.iter().enumerate() {
            check_dim(d, o.dim())?;
            if !bounds.contains_box(o) {
                return Err(Error::Scenario(format!(
                    "obstacle {i} is not contained in the bounds"
                )));
            }
        }
        for i in 0..obstacles.len() {
            for j in i + 1..obstacles.len() {
                if obstacles[i].interiors_overlap(&obstacles[j]) {
                    return Err(Error::Scenario(format!(
                        "obstacles {i} and {j} overlap"
                    )));
                }
            }
        }
        let free_measure = bounds.volume() - obstacles.iter().map(Aabb::volume).sum::<f64>();
        if !(free_measure > 0.0) {
            return Err(Error::Scenario("free space has zero measure".into()));
        }
        let bvh = ObstacleBvh::build(&obstacles);
        Ok(World {
            bounds,
            obstacles,
            free_measure,
            bvh,
        })
    }

    /// The obstacle-free unit hypercube.
    pub fn empty_unit(dim: usize) -> Self {
        World::new(Aabb::unit(dim), Vec::new()).expect("unit cube is a valid world")
    }

    /// Replaces the computed free-space measure, e.g. with a value read from a
    /// scenario file.
    pub fn with_free_measure(mut self, free_measure: f64) -> Result<Self> {
        if !(free_measure > 0.0 && free_measure <= self.bounds.volume()) {
            return Err(Error::InvalidParameter(format!(
                "free measure {free_measure} outside (0, {}]",
                self.bounds.volume()
            )));
        }
        self.free_measure = free_measure;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &Aabb {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[Aabb] {
        &self.obstacles
    }

    /// μ(X_free).
    pub fn free_measure(&self) -> f64 {
        self.free_measure
    }

    pub fn point_free(&self, x: &Config) -> Result<bool> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.point_free_raw(x))
    }

    pub(crate) fn point_free_raw(&self, x: &[f64]) -> bool {
        self.bounds.contains(x)
            && !self
                .bvh
                .any_at_point(x, |i| self.obstacles[i].interior_contains(x))
    }

    /// Exact collision check for the straight segment `a → b`. Both endpoints
    /// must lie inside the bounds (the box is convex, so the whole segment
    /// then does too).
    pub fn segment_collision_free(&self, a: &Config, b: &Config) -> Result<bool> {
        check_dim(self.dim(), a.dim())?;
        check_dim(self.dim(), b.dim())?;
        if !self.bounds.contains(a) || !self.bounds.contains(b) {
            return Err(Error::OutOfBounds);
        }
        Ok(self.segment_free_raw(a, b))
    }

    #[inline]
    pub(crate) fn segment_free_raw(&self, a: &[f64], b: &[f64]) -> bool {
        !self
            .bvh
            .any_along_segment(a, b, |i| self.obstacles[i].segment_hits_interior(a, b))
    }

    /// One uniform draw from free space by rejection over the bounds.
    pub(crate) fn sample_one(&self, rng: &mut RngStream) -> Result<Config> {
        let d = self.dim();
        let mut coords = vec![0.0; d];
        for _ in 0..MAX_CONSECUTIVE_REJECTIONS {
            for (i, c) in coords.iter_mut().enumerate() {
                *c = rng.uniform(self.bounds.lo()[i], self.bounds.hi()[i]);
            }
            if self.point_free_raw(&coords) {
                return Ok(Config::from_vec_unchecked(coords));
            }
        }
        Err(Error::SamplingExhausted(MAX_CONSECUTIVE_REJECTIONS))
    }

    /// Distance from `x` to the nearest obstacle or to the boundary of the
    /// bounds.
    pub fn point_clearance(&self, x: &[f64]) -> f64 {
        self.obstacles
            .iter()
            .map(|o| o.distance_to_point(x))
            .fold(self.bounds.distance_to_boundary(x), f64::min)
    }
}

/// `n` i.i.d. uniform samples from free space.
///
/// Each candidate consumes one draw per axis, in axis order; rejected
/// candidates consume the stream as well.
pub fn sample_free(w: &World, rng: &mut RngStream, n: usize) -> Result<Vec<Config>> {
    (0..n).map(|_| w.sample_one(rng)).collect()
}

/// Discretized clearance of a collision-free path: the minimum, over points
/// spaced `step` apart in arc length plus every vertex, of the distance to
/// the nearest obstacle or to the boundary.
pub fn clearance(w: &World, p: &Polyline, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "clearance step must be positive, got {step}"
        )));
    }
    check_dim(w.dim(), p.dim())?;
    Ok(p.sample_by_arc_length(step)
        .iter()
        .map(|x| w.point_clearance(x))
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[f64]) -> Config {
        Config::new(v.to_vec()).unwrap()
    }

    fn square_world(lo: f64, hi: f64) -> World {
        World::new(
            Aabb::unit(2),
            vec![Aabb::new(vec![lo, lo], vec![hi, hi]).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn point_free_examples() {
        let empty = World::empty_unit(2);
        assert!(empty.point_free(&c(&[0.3, 0.7])).unwrap());
        let w = square_world(0.4, 0.6);
        assert!(!w.point_free(&c(&[0.5, 0.5])).unwrap());
        assert!(w.point_free(&c(&[0.4, 0.5])).unwrap());
        assert!(!w.point_free(&c(&[1.5, 0.5])).unwrap());
        assert!(w.point_free(&c(&[0.5])).is_err());
    }

    #[test]
    fn obstacle_corners_are_free() {
        let w = square_world(0.4, 0.6);
        for corner in [[0.4, 0.4], [0.4, 0.6], [0.6, 0.4], [0.6, 0.6]] {
            assert!(w.point_free(&c(&corner)).unwrap());
        }
    }

    #[test]
    fn segment_examples() {
        let empty = World::empty_unit(2);
        assert!(empty
            .segment_collision_free(&c(&[0.0, 0.0]), &c(&[1.0, 1.0]))
            .unwrap());
        let w = square_world(0.4, 0.6);
        assert!(!w
            .segment_collision_free(&c(&[0.0, 0.0]), &c(&[1.0, 1.0]))
            .unwrap());
        assert!(w
            .segment_collision_free(&c(&[0.0, 0.3]), &c(&[1.0, 0.3]))
            .unwrap());
        assert_eq!(
            w.segment_collision_free(&c(&[0.0, 0.3]), &c(&[1.2, 0.3])),
            Err(Error::OutOfBounds)
        );
    }

    #[test]
    fn world_validation() {
        let a = Aabb::new(vec![0.1, 0.1], vec![0.5, 0.5]).unwrap();
        let b = Aabb::new(vec![0.4, 0.4], vec![0.8, 0.8]).unwrap();
        let touching = Aabb::new(vec![0.5, 0.1], vec![0.9, 0.5]).unwrap();
        let outside = Aabb::new(vec![0.5, 0.5], vec![1.5, 0.9]).unwrap();
        assert!(World::new(Aabb::unit(2), vec![a.clone(), b]).is_err());
        assert!(World::new(Aabb::unit(2), vec![outside]).is_err());
        let w = World::new(Aabb::unit(2), vec![a, touching]).unwrap();
        assert!((w.free_measure() - (1.0 - 0.16 - 0.16)).abs() < 1e-15);
        assert!(w.clone().with_free_measure(0.0).is_err());
        assert!(w.clone().with_free_measure(1.5).is_err());
        assert_eq!(w.with_free_measure(0.5).unwrap().free_measure(), 0.5);
    }

    #[test]
    fn sampling_is_deterministic_and_free() {
        let w = square_world(0.2, 0.8);
        assert!(sample_free(&w, &mut RngStream::new(3), 0).unwrap().is_empty());
        let a = sample_free(&w, &mut RngStream::new(3), 500).unwrap();
        let b = sample_free(&w, &mut RngStream::new(3), 500).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|x| w.point_free(x).unwrap()));
    }

    #[test]
    fn sampling_mean_is_central() {
        // Uniform on [0,1] has σ = 1/√12; for 10^5 draws the 3σ band of the
        // mean is ±0.00274, well inside ±0.01.
        let w = World::empty_unit(2);
        let pts = sample_free(&w, &mut RngStream::new(11), 100_000).unwrap();
        for axis in 0..2 {
            let mean = pts.iter().map(|p| p[axis]).sum::<f64>() / pts.len() as f64;
            assert!((0.49..=0.51).contains(&mean), "axis {axis} mean {mean}");
        }
    }

    #[test]
    fn sampling_fails_when_free_space_is_null() {
        // The free region is the measure-zero rim of the square.
        let w = World::new(
            Aabb::unit(2),
            vec![Aabb::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()],
        );
        assert!(w.is_err());
        // A thin free sliver is still reachable by rejection.
        let w = World::new(
            Aabb::unit(1),
            vec![Aabb::new(vec![0.0], vec![0.999]).unwrap()],
        )
        .unwrap();
        let pts = sample_free(&w, &mut RngStream::new(5), 3).unwrap();
        assert!(pts.iter().all(|p| p[0] >= 0.999));
        // A sliver of width 1e-12 is not.
        let w = World::new(
            Aabb::unit(1),
            vec![Aabb::new(vec![0.0], vec![1.0 - 1e-12]).unwrap()],
        )
        .unwrap();
        assert_eq!(
            sample_free(&w, &mut RngStream::new(5), 1),
            Err(Error::SamplingExhausted(MAX_CONSECUTIVE_REJECTIONS))
        );
    }

    #[test]
    fn clearance_examples() {
        let w = World::new(
            Aabb::unit(2),
            vec![Aabb::new(vec![0.6, 0.6], vec![0.8, 0.8]).unwrap()],
        )
        .unwrap();
        let p = Polyline::new(vec![c(&[0.5, 0.5])]).unwrap();
        let cl = clearance(&w, &p, 0.01).unwrap();
        assert!((cl - 0.141_421_356_237_309_5).abs() < 1e-12);

        let empty = World::empty_unit(2);
        assert_eq!(clearance(&empty, &p, 0.01).unwrap(), 0.5);
        assert!(clearance(&empty, &p, 0.0).is_err());
    }

    #[test]
    fn clearance_of_segment_beside_face() {
        // Segment y = 0.35 runs under the face y = 0.4 of [0.4,0.6]²; the
        // analytic clearance is min(0.05, 0.35 to the boundary) = 0.05, and
        // the discretized estimate can only overshoot by at most one step.
        let w = square_world(0.4, 0.6);
        let p = Polyline::new(vec![c(&[0.3, 0.35]), c(&[0.7, 0.35])]).unwrap();
        let step = 1e-3;
        let cl = clearance(&w, &p, step).unwrap();
        assert!((cl - 0.05).abs() <= step, "clearance {cl}");
    }
}
