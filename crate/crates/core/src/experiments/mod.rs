//! End-to-end experiment harnesses: initialization, stimulus programs,
//! stepping, halting, and per-run result capture.

mod centroid;
mod mean;
mod tracking;

pub use centroid::{run_centroid, CentroidResult, CentroidRunConfig, CentroidSim, ShrinkSchedule};
pub use mean::{run_mean, MeanResult, MeanRunConfig, MeanSim, SeriesSource};
pub use tracking::{
    run_tracking, SpiralParams, StimulusMode, TrackingResult, TrackingRunConfig, TrackingSim,
};

use crate::geometry::Vec2;
use crate::metrics::RunMetrics;
use crate::world::World;
use rand::Rng;

/// A stepping experiment run; lets callers drive a run incrementally for
/// frame dumps or external bindings.
pub trait Sim {
    /// Advance one scheduler step. Returns false once the run has halted.
    fn step(&mut self) -> bool;
    fn is_done(&self) -> bool;
    fn world(&self) -> &World;
    fn metrics(&self) -> &RunMetrics;
}

/// Type-erased experiment run.
pub enum AnySim {
    Centroid(CentroidSim),
    Mean(MeanSim),
    Tracking(TrackingSim),
}

impl Sim for AnySim {
    fn step(&mut self) -> bool {
        match self {
            AnySim::Centroid(s) => s.step(),
            AnySim::Mean(s) => s.step(),
            AnySim::Tracking(s) => s.step(),
        }
    }

    fn is_done(&self) -> bool {
        match self {
            AnySim::Centroid(s) => s.is_done(),
            AnySim::Mean(s) => s.is_done(),
            AnySim::Tracking(s) => s.is_done(),
        }
    }

    fn world(&self) -> &World {
        match self {
            AnySim::Centroid(s) => s.world(),
            AnySim::Mean(s) => s.world(),
            AnySim::Tracking(s) => s.world(),
        }
    }

    fn metrics(&self) -> &RunMetrics {
        match self {
            AnySim::Centroid(s) => s.metrics(),
            AnySim::Mean(s) => s.metrics(),
            AnySim::Tracking(s) => s.metrics(),
        }
    }
}

/// One standard-normal pair (Box-Muller); consumes exactly two uniforms.
pub fn gaussian_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // in (0, 1], keeps ln finite
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Contaminate a position with independent zero-mean Gaussian noise per
/// axis, clamped to the arena `[0, width) x [0, height)`.
pub fn add_noise<R: Rng>(pos: Vec2, sigma: f64, width: f64, height: f64, rng: &mut R) -> Vec2 {
    let (gx, gy) = gaussian_pair(rng);
    Vec2::new(
        (pos.x + sigma * gx).clamp(0.0, width - 1.0),
        (pos.y + sigma * gy).clamp(0.0, height - 1.0),
    )
}
