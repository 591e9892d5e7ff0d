//! Centroid approximation: pattern a blob as a 2D shape, hold it briefly,
//! then let cohesion and random particle removal shrink it to a point whose
//! resting position estimates the shape's centroid.

use crate::agent::{MotorMode, SensorParams};
use crate::error::{Error, Result};
use crate::geometry::{image_centroid, ShapeMask, Vec2};
use crate::metrics::{RunMetrics, StepRecord};
use crate::population::ShrinkPolicy;
use crate::stimulus::{StimulusEvent, StimulusKind};
use crate::world::{StageOrder, World, WorldConfig};
use crate::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShrinkSchedule {
    /// Removal starts with adaptation.
    Immediate,
    /// Shape adaptation only until the given step, then removal.
    Delayed(u64),
}

#[derive(Debug, Clone)]
pub struct CentroidRunConfig {
    pub mask: ShapeMask,
    /// Steps the original pattern is projected to pin the blob.
    pub hold_steps: u64,
    pub schedule: ShrinkSchedule,
    pub p_remove: f64,
    /// Run halts when the population drops below this.
    pub halt_population: usize,
    pub sensors: SensorParams,
    pub damping: f64,
    /// Concentration per site per step while the pattern is held.
    pub projection_magnitude: f64,
    /// Fraction of inside cells seeded with a particle.
    pub density: f64,
    /// Blank border added around the mask; at least twice the sensor offset.
    pub margin: usize,
    pub stage_order: StageOrder,
    /// Hard step cap in case the population never drains.
    pub max_steps: u64,
    pub seed: u64,
}

impl CentroidRunConfig {
    pub fn new(mask: ShapeMask) -> Self {
        let sensors = SensorParams::default();
        CentroidRunConfig {
            mask,
            hold_steps: 50,
            schedule: ShrinkSchedule::Immediate,
            p_remove: 0.0005,
            halt_population: 50,
            margin: (2.0 * sensors.offset).ceil() as usize,
            sensors,
            damping: 0.9,
            projection_magnitude: 10.0,
            density: 1.0,
            stage_order: StageOrder::default(),
            max_steps: 60_000,
            seed: 0,
        }
    }
}

pub struct CentroidSim {
    world: World,
    reference: Vec2,
    halt_population: usize,
    max_steps: u64,
    shrink_start: u64,
    metrics: RunMetrics,
    done: bool,
}

impl CentroidSim {
    pub fn new(cfg: &CentroidRunConfig) -> Result<Self> {
        if cfg.mask.count() < cfg.halt_population {
            return Err(Error::input(
                "mask has fewer cells than the halt threshold",
            ));
        }
        if cfg.halt_population < 1 {
            return Err(Error::config("halt threshold must be at least 1"));
        }
        let margin = cfg.margin as i32;
        let width = cfg.mask.width() + 2 * cfg.margin;
        let height = cfg.mask.height() + 2 * cfg.margin;

        let mut wc = WorldConfig::new(width, height);
        wc.damping = cfg.damping;
        wc.sensors = cfg.sensors;
        wc.motor = MotorMode::Fluid;
        wc.stage_order = cfg.stage_order;
        wc.shrink = Some(match cfg.schedule {
            ShrinkSchedule::Immediate => ShrinkPolicy::immediate(cfg.p_remove),
            ShrinkSchedule::Delayed(start) => ShrinkPolicy::delayed(cfg.p_remove, start),
        });
        let mut world = World::new(wc, cfg.seed)?;

        let sites: Vec<Cell> = cfg
            .mask
            .cells()
            .into_iter()
            .map(|(x, y)| (x + margin, y + margin))
            .collect();
        world.seed_on_cells(&sites, cfg.density)?;
        if cfg.hold_steps > 0 {
            world.stimuli_mut().push(StimulusEvent {
                start: 0,
                duration: cfg.hold_steps,
                kind: StimulusKind::AttractantPattern(sites),
                magnitude: cfg.projection_magnitude,
            })?;
        }

        let reference = image_centroid(&cfg.mask)?.add(Vec2::new(margin as f64, margin as f64));
        let mut metrics = RunMetrics::new("centroid", cfg.seed);
        let c0 = world.centroid()?;
        metrics.push(StepRecord {
            step: 0,
            centroid: c0,
            population: world.population(),
            error: c0.dist(reference),
            target: None,
            noisy: None,
        });

        Ok(CentroidSim {
            world,
            reference,
            halt_population: cfg.halt_population,
            max_steps: cfg.max_steps,
            shrink_start: match cfg.schedule {
                ShrinkSchedule::Immediate => 0,
                ShrinkSchedule::Delayed(start) => start,
            },
            metrics,
            done: false,
        })
    }

    pub fn step(&mut self) -> bool {
        if self.done {
            return false;
        }
        self.world.scheduler_step();
        if self.world.population() == 0 {
            self.done = true;
            return false;
        }
        let c = self.world.centroid().expect("population checked nonzero");
        self.metrics.push(StepRecord {
            step: self.world.step_count(),
            centroid: c,
            population: self.world.population(),
            error: c.dist(self.reference),
            target: None,
            noisy: None,
        });
        if self.world.population() < self.halt_population
            || self.world.step_count() >= self.max_steps
        {
            self.done = true;
        }
        !self.done
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn metrics(&self) -> &RunMetrics {
        &self.metrics
    }

    pub fn reference(&self) -> Vec2 {
        self.reference
    }

    pub fn finish(self) -> CentroidResult {
        let final_centroid = self
            .metrics
            .records
            .last()
            .map(|r| r.centroid)
            .unwrap_or_default();
        let halt = self.metrics.halt_step();
        let window_start = self.shrink_start + (halt.saturating_sub(self.shrink_start)) / 2;
        let plateau: Vec<f64> = self
            .metrics
            .records
            .iter()
            .filter(|r| r.step >= window_start)
            .map(|r| r.error)
            .collect();
        let shrink_plateau_error = plateau.iter().sum::<f64>() / plateau.len().max(1) as f64;
        CentroidResult {
            final_error: self.metrics.final_error(),
            shrink_plateau_error,
            reference: self.reference,
            final_centroid,
            metrics: self.metrics,
        }
    }
}

impl super::Sim for CentroidSim {
    fn step(&mut self) -> bool {
        CentroidSim::step(self)
    }

    fn is_done(&self) -> bool {
        CentroidSim::is_done(self)
    }

    fn world(&self) -> &World {
        CentroidSim::world(self)
    }

    fn metrics(&self) -> &RunMetrics {
        CentroidSim::metrics(self)
    }
}

#[derive(Debug, Clone)]
pub struct CentroidResult {
    pub metrics: RunMetrics,
    /// Exact centroid of the input mask, arena coordinates.
    pub reference: Vec2,
    pub final_centroid: Vec2,
    /// Euclidean distance between the final blob centroid and the
    /// reference, pixels.
    pub final_error: f64,
    /// Mean error over the second half of the shrink phase: the stabilized
    /// tracking level of the run, less noisy than the single final
    /// snapshot.
    pub shrink_plateau_error: f64,
}

/// Run a centroid experiment to completion.
pub fn run_centroid(cfg: &CentroidRunConfig) -> Result<CentroidResult> {
    let mut sim = CentroidSim::new(cfg)?;
    while sim.step() {}
    Ok(sim.finish())
}
