//! A deterministic, seedable simulation engine for a multi-agent "virtual
//! plasmodium": a population of simple coupled particles on a 2D diffusive
//! lattice whose collective shape adapts, coheres and shrinks like a blob of
//! slime mould.
//!
//! On top of the engine sit three experiment harnesses that read statistical
//! properties out of the blob's morphology:
//!
//! * [`experiments::run_centroid`] — shrink a blob patterned as a 2D shape
//!   down to a point and compare its resting position with the shape's exact
//!   centroid.
//! * [`experiments::run_mean`] — inoculate the blob on a polyline encoding a
//!   1D data series and read the arithmetic mean off the final blob height.
//! * [`experiments::run_tracking`] — use an oscillatory, amoeboid blob to
//!   track a moving target from noise-contaminated attractant or repellent
//!   stimuli.
//!
//! Every run is a pure function of `(config, seed)`: identical inputs produce
//! bit-identical trajectories and output files.

pub mod agent;
pub mod batch;
pub mod config;
pub mod error;
pub mod experiments;
pub mod field;
pub mod geometry;
pub mod metrics;
pub mod occupancy;
pub mod population;
pub mod raster;
pub mod shapes;
pub mod stimulus;
pub mod world;

pub use error::{Error, Result};
pub use field::{IlluminationMask, TrailField};
pub use geometry::{DataSeries, SeriesEncoding, ShapeMask, Vec2};
pub use occupancy::OccupancyGrid;
pub use world::{World, WorldConfig};

/// Cell coordinate on the lattice. May be out of bounds; reads outside the
/// lattice yield zero concentration and writes are contract violations.
pub type Cell = (i32, i32);
