//! Sampling-based shortest-path planning among axis-aligned boxes: FMT*,
//! bi-directional FMT* (BFMT*), and PRM*/RRT* baselines, plus an exact
//! r-disk-graph oracle for checking them.
//!
//! ```
//! use bfmt::fmt::{fmt_plan, TerminationBudget};
//! use bfmt::geom::Config;
//! use bfmt::radius::RadiusParams;
//! use bfmt::world::{RngStream, World};
//!
//! let world = World::empty_unit(2);
//! let rp = RadiusParams::for_world(&world);
//! let (a, b) = (Config::new(vec![0.2, 0.2])?, Config::new(vec![0.8, 0.2])?);
//! let res = fmt_plan(&world, &a, &b, 300, &rp, &TerminationBudget::default(), &mut RngStream::new(0))?;
//! assert!(res.succeeded && res.cost >= 0.6);
//! # Ok::<(), bfmt::Error>(())
//! ```

pub mod baselines;
pub mod bfmt;
pub mod error;
pub mod fmt;
pub mod geom;
pub mod nnindex;
pub mod oracle;
pub mod radius;
pub mod world;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/worlds.md")]
    mod worlds {}
    #[doc = include_str!("../../../book/src/radius.md")]
    mod radius {}
    #[doc = include_str!("../../../book/src/planners.md")]
    mod planners {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
