//! Rate regions for the cognitive Z-interference channel.
//!
//! Gaussian inner bounds (`gaussian`), outer bounds (`bounds`), convex-hull
//! machinery shared by both (`geometry`), exact finite-alphabet evaluation
//! (`dmc`) and the command-line front end (`cli`).

pub mod bounds;
pub mod cli;
pub mod dmc;
pub mod error;
pub mod gaussian;
pub mod geometry;
pub mod model;

pub use error::{Error, Result};
pub use geometry::ConvexRegion;
pub use model::{ChannelParams, Grids, Pentagon, RatePair};
