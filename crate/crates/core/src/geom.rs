//! Configuration-space points, polyline paths and the Euclidean arc-length
//! cost.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the `d`-dimensional configuration space.
///
/// Coordinates are always finite. The dimension is carried on the value and
/// checked wherever two configurations meet.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Config(Vec<f64>);

impl Config {
    pub fn new(coords: impl Into<Vec<f64>>) -> Result<Self> {
        let coords = coords.into();
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Config(coords))
    }

    /// The configuration with every coordinate equal to `value`.
    pub fn splat(dim: usize, value: f64) -> Result<Self> {
        Config::new(vec![value; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Config(coords)
    }
}

impl Deref for Config {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl fmt::Debug for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Config").field(&self.0).finish()
    }
}

impl TryFrom<Vec<f64>> for Config {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Config::new(coords)
    }
}

impl From<Config> for Vec<f64> {
    fn from(c: Config) -> Vec<f64> {
        c.0
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Euclidean distance between two coordinate slices of equal length.
///
/// `dist(a, b)` and `dist(b, a)` are bit-identical.
#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Euclidean distance `‖a − b‖`.
pub fn distance(a: &Config, b: &Config) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    Ok(dist(a, b))
}

/// A piecewise-linear path through one or more vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    vertices: Vec<Config>,
}

impl Polyline {
    pub fn new(vertices: Vec<Config>) -> Result<Self> {
        let first = vertices.first().ok_or(Error::EmptyPolyline)?;
        let d = first.dim();
        for v in &vertices[1..] {
            check_dim(d, v.dim())?;
        }
        Ok(Polyline { vertices })
    }

    pub fn vertices(&self) -> &[Config] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Config> {
        self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn first(&self) -> &Config {
        &self.vertices[0]
    }

    pub fn last(&self) -> &Config {
        self.vertices.last().expect("polyline is never empty")
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Config, &Config)> {
        self.vertices.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Arc length: the segment lengths summed left to right from the first
    /// vertex.
    pub fn cost(&self) -> f64 {
        self.segments().fold(0.0, |acc, (a, b)| acc + dist(a, b))
    }

    /// Points spaced every `step` of arc length, starting at the first vertex,
    /// together with every vertex. The last vertex is always included.
    pub fn sample_by_arc_length(&self, step: f64) -> Vec<Config> {
        assert!(step > 0.0, "arc-length step must be positive");
        let mut out = vec![self.vertices[0].clone()];
        // Arc length still to travel before the next emitted sample.
        let mut until_next = step;
        for (a, b) in self.segments() {
            let len = dist(a, b);
            let mut s = until_next;
            while s < len {
                let t = s / len;
                out.push(Config::from_vec_unchecked(
                    a.iter().zip(b.iter()).map(|(x, y)| x + t * (y - x)).collect(),
                ));
                s += step;
            }
            until_next = s - len;
            out.push(b.clone());
        }
        out
    }
}

/// Path cost as arc length.
pub fn path_cost(p: &Polyline) -> f64 {
    p.cost()
}

/// Joins a root-to-meeting-point path with a path from the other root to
/// the same meeting point. The result runs from the start of `forward` to
/// the start of `backward`, with the shared vertex kept once.
pub fn concatenate(forward: &Polyline, backward: &Polyline) -> Result<Polyline> {
    check_dim(forward.dim(), backward.dim())?;
    if forward.last() != backward.last() {
        return Err(Error::EndpointMismatch);
    }
    let mut vertices = forward.vertices.clone();
    vertices.extend(backward.vertices.iter().rev().skip(1).cloned());
    Ok(Polyline { vertices })
}
