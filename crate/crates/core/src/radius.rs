//! Connection radius for disk-connected sample graphs:
//!
//! ```text
//! r_n = γ (1 + η)^(1/d) (1/d)^(1/d) (μ(X_free) / ζ_d)^(1/d) (log n / n)^(1/d)
//! ```
//!
//! with `γ = 4` by default (`γ = 2` is the tighter constant that is still
//! sufficient) and `ζ_d` the volume of the unit `d`-ball.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::world::World;

/// Volume of the `d`-dimensional Euclidean unit ball, `π^(d/2) / Γ(d/2 + 1)`.
///
/// Evaluated with the recurrence `ζ_d = (2π / d) ζ_{d-2}` from `ζ_0 = 1`,
/// `ζ_1 = 2`, which avoids the gamma function entirely.
pub fn unit_ball_volume(d: usize) -> f64 {
    let (mut v, start) = if d % 2 == 0 { (1.0, 2) } else { (2.0, 3) };
    let mut k = start;
    while k <= d {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusParams {
    pub dim: usize,
    /// μ(X_free).
    pub mu_free: f64,
    pub eta: f64,
    /// Leading constant γ.
    pub constant_factor: f64,
    /// Extra multiplier, e.g. to compensate for non-uniform sampling density.
    pub user_multiplier: f64,
}

impl RadiusParams {
    pub const DEFAULT_FACTOR: f64 = 4.0;
    pub const TIGHT_FACTOR: f64 = 2.0;

    /// `η = 0`, `γ = 4`, multiplier 1.
    pub fn new(dim: usize, mu_free: f64) -> Result<Self> {
        let p = RadiusParams {
            dim,
            mu_free,
            eta: 0.0,
            constant_factor: Self::DEFAULT_FACTOR,
            user_multiplier: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn for_world(w: &World) -> Self {
        RadiusParams::new(w.dim(), w.free_measure()).expect("worlds have positive free measure")
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        self.eta = eta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_factor(mut self, factor: f64) -> Result<Self> {
        self.constant_factor = factor;
        self.validate()?;
        Ok(self)
    }

    pub fn with_multiplier(mut self, multiplier: f64) -> Result<Self> {
        self.user_multiplier = multiplier;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            Err(Error::InvalidParameter(format!("radius parameter {what} = {v}")))
        };
        if self.dim == 0 {
            return bad("dim", 0.0);
        }
        if !(self.mu_free > 0.0 && self.mu_free.is_finite()) {
            return bad("mu_free", self.mu_free);
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return bad("eta", self.eta);
        }
        if !(self.constant_factor > 0.0 && self.constant_factor.is_finite()) {
            return bad("constant_factor", self.constant_factor);
        }
        if !(self.user_multiplier > 0.0 && self.user_multiplier.is_finite()) {
            return bad("user_multiplier", self.user_multiplier);
        }
        Ok(())
    }
}

/// The connection radius for `n` samples. Requires `n >= 2` so that
/// `log n > 0`.
pub fn connection_radius(p: &RadiusParams, n: usize) -> Result<f64> {
    p.validate()?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "connection radius needs n >= 2, got {n}"
        )));
    }
    let d = p.dim as f64;
    let n = n as f64;
    let inner = (1.0 + p.eta) / d * (p.mu_free / unit_ball_volume(p.dim)) * (n.ln() / n);
    Ok(p.constant_factor * inner.powf(1.0 / d) * p.user_multiplier)
}
