use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{check_dim, Config};

/// Axis-aligned box `[lo_0, hi_0] × … × [lo_{d-1}, hi_{d-1}]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAabb", into = "RawAabb")]
pub struct Aabb {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawAabb {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl TryFrom<RawAabb> for Aabb {
    type Error = Error;

    fn try_from(raw: RawAabb) -> Result<Self> {
        Aabb::new(raw.lo, raw.hi)
    }
}

impl From<Aabb> for RawAabb {
    fn from(b: Aabb) -> RawAabb {
        RawAabb { lo: b.lo, hi: b.hi }
    }
}

impl Aabb {
    pub fn new(lo: impl Into<Vec<f64>>, hi: impl Into<Vec<f64>>) -> Result<Self> {
        let (lo, hi) = (lo.into(), hi.into());
        // Reuse the coordinate validation of `Config`.
        let lo = Config::new(lo)?.into_vec();
        let hi = Config::new(hi)?.into_vec();
        check_dim(lo.len(), hi.len())?;
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(Error::InvalidParameter(format!(
                "box has lo > hi on axis {i} ({} > {})",
                lo[i], hi[i]
            )));
        }
        Ok(Aabb { lo, hi })
    }

    /// The unit hypercube `[0, 1]^dim`.
    pub fn unit(dim: usize) -> Self {
        Aabb {
            lo: vec![0.0; dim],
            hi: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    pub fn diameter(&self) -> f64 {
        crate::geom::dist(&self.lo, &self.hi)
    }

    /// Largest side length.
    pub fn max_extent(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| h - l)
            .fold(0.0, f64::max)
    }

    /// Closed containment.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (l, h))| *l <= *v && *v <= *h)
    }

    /// Strict containment in the open interior.
    pub fn interior_contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (l, h))| *l < *v && *v < *h)
    }

    pub fn contains_box(&self, other: &Aabb) -> bool {
        self.contains(&other.lo) && self.contains(&other.hi)
    }

    /// True when the open interiors of the two boxes intersect.
    pub fn interiors_overlap(&self, other: &Aabb) -> bool {
        (0..self.dim()).all(|i| {
            self.lo[i] < self.hi[i]
                && other.lo[i] < other.hi[i]
                && self.lo[i] < other.hi[i]
                && other.lo[i] < self.hi[i]
        })
    }

    /// Euclidean distance from `x` to the closed box (zero inside).
    pub fn distance_to_point(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(v, (l, h))| {
                let d = (l - v).max(v - h).max(0.0);
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Distance from an interior point to the box boundary.
    pub(crate) fn distance_to_boundary(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(v, (l, h))| (v - l).min(h - v))
            .fold(f64::INFINITY, f64::min)
    }

    /// Exact slab test: does the segment `a + t (b − a)`, `t ∈ [0, 1]`, pass
    /// through the open interior of the box?
    ///
    /// Each axis contributes an open parameter interval; the segment collides
    /// iff the intersection of those intervals meets `[0, 1]`. Touching a face
    /// or running along one yields an empty interval.
    #[inline]
    pub(crate) fn segment_hits_interior(&self, a: &[f64], b: &[f64]) -> bool {
        let mut t_enter = f64::NEG_INFINITY;
        let mut t_exit = f64::INFINITY;
        for i in 0..a.len() {
            let (lo, hi, p) = (self.lo[i], self.hi[i], a[i]);
            let d = b[i] - p;
            if d == 0.0 {
                if !(lo < p && p < hi) {
                    return false;
                }
                continue;
            }
            let (mut t0, mut t1) = ((lo - p) / d, (hi - p) / d);
            if d < 0.0 {
                std::mem::swap(&mut t0, &mut t1);
            }
            t_enter = t_enter.max(t0);
            t_exit = t_exit.min(t1);
            if t_enter >= t_exit || t_enter >= 1.0 || t_exit <= 0.0 {
                return false;
            }
        }
        t_enter < t_exit && t_enter < 1.0 && t_exit > 0.0
    }

    /// Conservative closed-box test used by the broad phase; `margin` widens
    /// the box on every side.
    #[inline]
    pub(crate) fn segment_touches(&self, a: &[f64], b: &[f64], margin: f64) -> bool {
        let mut t_enter = 0.0f64;
        let mut t_exit = 1.0f64;
        for i in 0..a.len() {
            let (lo, hi, p) = (self.lo[i] - margin, self.hi[i] + margin, a[i]);
            let d = b[i] - p;
            if d == 0.0 {
                if p < lo || p > hi {
                    return false;
                }
                continue;
            }
            let (mut t0, mut t1) = ((lo - p) / d, (hi - p) / d);
            if d < 0.0 {
                std::mem::swap(&mut t0, &mut t1);
            }
            t_enter = t_enter.max(t0);
            t_exit = t_exit.min(t1);
            if t_enter > t_exit {
                return false;
            }
        }
        true
    }

    pub(crate) fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.min(*b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.max(*b)).collect(),
        }
    }
}
