//! Noisy moving-target tracking: an oscillatory, amoeboid blob follows a
//! spiralling target from attractant points, repellent illumination, or an
//! alternation of both, with optional Gaussian noise on every reading.

use crate::agent::{MotorMode, SensorParams};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::metrics::{RunMetrics, StepRecord};
use crate::stimulus::{StimulusEvent, StimulusKind};
use crate::world::{StageOrder, World, WorldConfig};

/// Stimulus condition driving the blob.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StimulusMode {
    /// Point attractant projected at each reading (+ve).
    Positive,
    /// Illumination everywhere except a square around each reading (-ve).
    Negative,
    /// +ve and -ve alternating in fixed-length blocks.
    Alternating,
}

/// Archimedean spiral parameters; the per-update displacement is
/// non-decreasing in the update index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralParams {
    /// Radial growth, pixels per radian.
    pub radial_growth: f64,
    /// Angle advanced per target update, radians.
    pub angular_step: f64,
}

impl Default for SpiralParams {
    fn default() -> Self {
        SpiralParams {
            radial_growth: 36.0,
            angular_step: 0.0042,
        }
    }
}

/// Target position at update `k` on an outward spiral from `center`.
pub fn spiral_target(k: u64, params: &SpiralParams, center: Vec2) -> Vec2 {
    let theta = k as f64 * params.angular_step;
    let r = params.radial_growth * theta;
    center.add(Vec2::new(r * theta.cos(), r * theta.sin()))
}

#[derive(Debug, Clone)]
pub struct TrackingRunConfig {
    pub population: usize,
    /// Side of the centered square window the blob is seeded in.
    pub init_window: usize,
    pub mode: StimulusMode,
    /// Gaussian noise sigma per axis on each target reading, pixels.
    pub noise_sigma: f64,
    /// Steps between target updates.
    pub update_period: u64,
    /// Steps each scheduled stimulus stays active.
    pub projection_steps: u64,
    /// Side of the unilluminated square centered on the reading.
    pub mask_size: i32,
    pub illumination_weight: f64,
    /// Oscillatory-mode reset probability.
    pub reset_probability: f64,
    pub damping: f64,
    /// Square arena side, pixels.
    pub arena: usize,
    pub spiral: SpiralParams,
    /// Steps allowed for the seeded particles to coalesce before the target
    /// starts moving; scoring starts here too.
    pub coalescence_steps: u64,
    /// Concentration per step of a projected point attractant.
    pub point_magnitude: f64,
    pub sensors: SensorParams,
    pub stage_order: StageOrder,
    pub max_steps: u64,
    pub seed: u64,
}

impl TrackingRunConfig {
    pub fn new(mode: StimulusMode) -> Self {
        // tracking needs point sources strong enough to stay visible at
        // sensor range through the blob's own trail pool
        TrackingRunConfig {
            population: 1500,
            init_window: 80,
            mode,
            noise_sigma: 0.0,
            update_period: 25,
            projection_steps: 10,
            mask_size: 50,
            illumination_weight: 0.1,
            reset_probability: 0.05,
            damping: 0.93,
            arena: 400,
            spiral: SpiralParams::default(),
            coalescence_steps: 250,
            point_magnitude: 200.0,
            sensors: SensorParams::default(),
            stage_order: StageOrder::default(),
            max_steps: 40_000,
            seed: 0,
        }
    }
}

pub struct TrackingSim {
    world: World,
    cfg: TrackingRunConfig,
    center: Vec2,
    target: Vec2,
    noisy: Vec2,
    /// Spiral stops advancing within this distance of an edge.
    edge_margin: f64,
    metrics: RunMetrics,
    done: bool,
}

impl TrackingSim {
    pub fn new(cfg: &TrackingRunConfig) -> Result<Self> {
        for (name, v) in [
            ("update period", cfg.update_period),
            ("projection steps", cfg.projection_steps),
        ] {
            if v < 1 {
                return Err(Error::config(format!("{name} must be at least 1")));
            }
        }
        if cfg.mask_size < 1 || cfg.mask_size as usize > cfg.arena {
            return Err(Error::config("illumination mask must fit the arena"));
        }
        let edge_margin = 2.0 * cfg.sensors.offset;
        if cfg.arena as f64 <= 2.0 * edge_margin {
            return Err(Error::config("arena too small for the spiral"));
        }

        let mut wc = WorldConfig::new(cfg.arena, cfg.arena);
        wc.damping = cfg.damping;
        wc.sensors = cfg.sensors;
        wc.motor = MotorMode::Oscillatory {
            reset_probability: cfg.reset_probability,
        };
        wc.stage_order = cfg.stage_order;
        wc.illumination_weight = cfg.illumination_weight;
        let mut world = World::new(wc, cfg.seed)?;
        world.seed_window(cfg.population, cfg.init_window)?;

        let center = Vec2::new(cfg.arena as f64 / 2.0, cfg.arena as f64 / 2.0);
        Ok(TrackingSim {
            world,
            cfg: cfg.clone(),
            center,
            target: center,
            noisy: center,
            edge_margin,
            metrics: RunMetrics::new("track", cfg.seed),
            done: false,
        })
    }

    /// Target position for scheduler step `s`: held at the arena center
    /// through coalescence, then advanced along the spiral every update
    /// period.
    fn target_at(&self, s: u64) -> Vec2 {
        let k = if s <= self.cfg.coalescence_steps {
            0
        } else {
            (s - self.cfg.coalescence_steps) / self.cfg.update_period
        };
        spiral_target(k, &self.cfg.spiral, self.center)
    }

    fn near_edge(&self, p: Vec2) -> bool {
        let lo = self.edge_margin;
        let hi = self.cfg.arena as f64 - 1.0 - self.edge_margin;
        p.x < lo || p.x > hi || p.y < lo || p.y > hi
    }

    fn schedule_stimuli(&mut self, s: u64) -> Result<()> {
        // fresh reading at every target update
        if s % self.cfg.update_period == 0 {
            self.target = self.target_at(s);
            let arena = self.cfg.arena as f64;
            self.noisy = super::add_noise(
                self.target,
                self.cfg.noise_sigma,
                arena,
                arena,
                self.world.rng_mut(),
            );
            match self.cfg.mode {
                StimulusMode::Positive => self.push_point_event(s, self.cfg.projection_steps)?,
                StimulusMode::Negative => self.push_mask_event(s, self.cfg.projection_steps)?,
                // successive projections alternate kind at equal duty
                StimulusMode::Alternating => {
                    if (s / self.cfg.update_period) % 2 == 0 {
                        self.push_point_event(s, self.cfg.projection_steps)?
                    } else {
                        self.push_mask_event(s, self.cfg.projection_steps)?
                    }
                }
            }
        }
        Ok(())
    }

    fn push_point_event(&mut self, start: u64, duration: u64) -> Result<()> {
        let site = self.noisy.cell();
        let magnitude = self.cfg.point_magnitude;
        self.world.stimuli_mut().push(StimulusEvent {
            start,
            duration,
            kind: StimulusKind::AttractantPoints(vec![site]),
            magnitude,
        })?;
        Ok(())
    }

    fn push_mask_event(&mut self, start: u64, duration: u64) -> Result<()> {
        let (cx, cy) = self.noisy.cell();
        let half = self.cfg.mask_size / 2;
        self.world.stimuli_mut().push(StimulusEvent {
            start,
            duration,
            kind: StimulusKind::Illumination {
                x0: cx - half,
                y0: cy - half,
                x1: cx - half + self.cfg.mask_size,
                y1: cy - half + self.cfg.mask_size,
            },
            magnitude: 0.0,
        })?;
        Ok(())
    }

    pub fn step(&mut self) -> bool {
        if self.done {
            return false;
        }
        let s = self.world.step_count();
        // the run ends when the spiral would leave the scored arena
        if self.near_edge(self.target_at(s)) || s >= self.cfg.max_steps {
            self.done = true;
            return false;
        }
        self.schedule_stimuli(s).expect("events pushed in step order");
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
            error: c.dist(self.target),
            target: Some(self.target),
            noisy: Some(self.noisy),
        });
        true
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

    pub fn finish(self) -> TrackingResult {
        let score_start = self.cfg.coalescence_steps;
        let scored: Vec<f64> = self
            .metrics
            .records
            .iter()
            .filter(|r| r.step >= score_start)
            .map(|r| r.error)
            .collect();
        let n = scored.len().max(1) as f64;
        TrackingResult {
            mean_error: scored.iter().sum::<f64>() / n,
            max_error: scored.iter().fold(0.0, |a: f64, &b| a.max(b)),
            score_start,
            metrics: self.metrics,
        }
    }
}

impl super::Sim for TrackingSim {
    fn step(&mut self) -> bool {
        TrackingSim::step(self)
    }

    fn is_done(&self) -> bool {
        TrackingSim::is_done(self)
    }

    fn world(&self) -> &World {
        TrackingSim::world(self)
    }

    fn metrics(&self) -> &RunMetrics {
        TrackingSim::metrics(self)
    }
}

#[derive(Debug, Clone)]
pub struct TrackingResult {
    pub metrics: RunMetrics,
    /// Time-averaged |target - blob| over the scored window, pixels.
    pub mean_error: f64,
    pub max_error: f64,
    /// First scored step (end of coalescence).
    pub score_start: u64,
}

/// Run a tracking experiment to completion.
pub fn run_tracking(cfg: &TrackingRunConfig) -> Result<TrackingResult> {
    let mut sim = TrackingSim::new(cfg)?;
    while sim.step() {}
    Ok(sim.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spiral_starts_at_center_and_accelerates() {
        let params = SpiralParams::default();
        let center = Vec2::new(200.0, 200.0);
        assert_eq!(spiral_target(0, &params, center), center);

        let mut prev_disp = 0.0;
        for k in 0..60 {
            let a = spiral_target(k, &params, center);
            let b = spiral_target(k + 1, &params, center);
            let disp = a.dist(b);
            assert!(
                disp + 1e-9 >= prev_disp,
                "displacement decreased at k={k}: {disp} < {prev_disp}"
            );
            prev_disp = disp;
        }
    }

    #[test]
    fn default_spiral_spans_at_least_forty_updates() {
        let cfg = TrackingRunConfig::new(StimulusMode::Positive);
        let center = Vec2::new(cfg.arena as f64 / 2.0, cfg.arena as f64 / 2.0);
        let margin = 2.0 * cfg.sensors.offset;
        let mut k = 0;
        loop {
            let p = spiral_target(k, &cfg.spiral, center);
            let lo = margin;
            let hi = cfg.arena as f64 - 1.0 - margin;
            if p.x < lo || p.x > hi || p.y < lo || p.y > hi {
                break;
            }
            k += 1;
        }
        assert!(k >= 40, "spiral exits after only {k} updates");
    }

    #[test]
    fn blob_coalesces_and_stays_bound_to_a_stationary_attractant() {
        // degenerate spiral: the target never leaves the center
        let mut cfg = TrackingRunConfig::new(StimulusMode::Positive);
        cfg.population = 400;
        cfg.init_window = 40;
        cfg.arena = 160;
        cfg.spiral = SpiralParams {
            radial_growth: 0.0,
            angular_step: 0.1,
        };
        cfg.coalescence_steps = 200;
        cfg.max_steps = 700;
        cfg.seed = 4;
        let result = run_tracking(&cfg).unwrap();
        assert!(result.mean_error <= 10.0, "drifted {} px", result.mean_error);
    }

    #[test]
    fn oscillatory_blob_exhibits_net_drift_without_stimuli() {
        use crate::world::{World, WorldConfig};
        let mut wc = WorldConfig::new(200, 200);
        wc.damping = 0.93;
        wc.motor = MotorMode::oscillatory_default();
        let mut w = World::new(wc, 21).unwrap();
        w.seed_window(1500, 80).unwrap();
        for _ in 0..250 {
            w.scheduler_step();
        }
        let start = w.centroid().unwrap();
        for _ in 0..100 {
            w.scheduler_step();
        }
        let drift = w.centroid().unwrap().dist(start);
        assert!(drift > 0.0, "no amoeboid drift");
    }

    #[test]
    fn negative_mode_activates_illumination() {
        let mut cfg = TrackingRunConfig::new(StimulusMode::Negative);
        cfg.population = 100;
        cfg.init_window = 30;
        cfg.arena = 120;
        cfg.seed = 1;
        let mut sim = TrackingSim::new(&cfg).unwrap();
        sim.step();
        assert!(sim.world().illumination().active);
        // the square around the (noise-free) center reading is shaded
        assert!(!sim.world().illumination().is_exposed((60, 60)));
        assert!(sim.world().illumination().is_exposed((10, 10)));
    }
}
