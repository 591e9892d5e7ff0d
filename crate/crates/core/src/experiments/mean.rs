//! Arithmetic-mean approximation: inoculate the blob on a polyline encoding
//! a 1D series, let turnover-driven adaptation smooth and shrink it, and
//! read the final blob height back in value units.

use crate::agent::{MotorMode, SensorParams};
use crate::error::{Error, Result};
use crate::geometry::{
    arithmetic_mean, encode_series, gen_skewed_series, gen_uniform_series, DataSeries,
    SeriesEncoding,
};
use crate::metrics::{RunMetrics, StepRecord};
use crate::population::TurnoverPolicy;
use crate::stimulus::{StimulusEvent, StimulusKind};
use crate::world::{StageOrder, World, WorldConfig};
use crate::Cell;

/// Where the run's data series comes from.
#[derive(Debug, Clone)]
pub enum SeriesSource {
    /// Fixed values with their domain.
    Values { values: Vec<f64>, lo: f64, hi: f64 },
    /// Fresh uniform draws per run.
    Uniform { n: usize, lo: f64, hi: f64 },
    /// Fresh heavily top-biased draws per run (domain [0, 100]).
    Skewed { n: usize },
}

#[derive(Debug, Clone)]
pub struct MeanRunConfig {
    pub source: SeriesSource,
    /// Sort the series before encoding.
    pub sorted: bool,
    /// Sort descending instead of ascending.
    pub sort_descending: bool,
    pub encoding: SeriesEncoding,
    pub hold_steps: u64,
    pub turnover: TurnoverPolicy,
    pub halt_population: usize,
    pub sensors: SensorParams,
    pub damping: f64,
    pub projection_magnitude: f64,
    /// Blank border added around the encoded mask.
    pub margin: usize,
    pub stage_order: StageOrder,
    pub max_steps: u64,
    pub seed: u64,
}

impl MeanRunConfig {
    pub fn new(source: SeriesSource) -> Self {
        let sensors = SensorParams::default();
        MeanRunConfig {
            source,
            sorted: false,
            sort_descending: false,
            encoding: SeriesEncoding::default(),
            hold_steps: 20,
            turnover: TurnoverPolicy::default(),
            halt_population: 50,
            margin: (2.0 * sensors.offset).ceil() as usize,
            sensors,
            damping: 0.9,
            projection_magnitude: 10.0,
            stage_order: StageOrder::default(),
            max_steps: 60_000,
            seed: 0,
        }
    }
}

pub struct MeanSim {
    world: World,
    series: DataSeries,
    true_mean: f64,
    /// Arena row corresponding to the true mean.
    reference_row: f64,
    encoding: SeriesEncoding,
    margin: f64,
    halt_population: usize,
    max_steps: u64,
    metrics: RunMetrics,
    done: bool,
}

impl MeanSim {
    pub fn new(cfg: &MeanRunConfig) -> Result<Self> {
        // series dimensions fix the arena before any random draw
        let (n, lo, hi) = match &cfg.source {
            SeriesSource::Values { values, lo, hi } => (values.len(), *lo, *hi),
            SeriesSource::Uniform { n, lo, hi } => (*n, *lo, *hi),
            SeriesSource::Skewed { n } => (*n, 0.0, 100.0),
        };
        if n < 2 {
            return Err(Error::input("series needs at least two values"));
        }
        let probe = DataSeries::new(vec![lo; n.max(2)], lo, hi)?;
        let (mask_w, mask_h) = cfg.encoding.canvas_size(&probe);
        let width = mask_w + 2 * cfg.margin;
        let height = mask_h + 2 * cfg.margin;

        let mut wc = WorldConfig::new(width, height);
        wc.damping = cfg.damping;
        wc.sensors = cfg.sensors;
        wc.motor = MotorMode::Fluid;
        wc.stage_order = cfg.stage_order;
        wc.turnover = Some(cfg.turnover);
        let mut world = World::new(wc, cfg.seed)?;

        let mut series = match &cfg.source {
            SeriesSource::Values { values, lo, hi } => DataSeries::new(values.clone(), *lo, *hi)?,
            SeriesSource::Uniform { n, lo, hi } => {
                gen_uniform_series(*n, *lo, *hi, world.rng_mut())?
            }
            SeriesSource::Skewed { n } => gen_skewed_series(*n, world.rng_mut())?,
        };
        if cfg.sorted {
            series.sort();
            if cfg.sort_descending {
                series.values.reverse();
            }
        }

        let mask = encode_series(&series, &cfg.encoding)?;
        if !mask.is_four_connected() {
            return Err(Error::input("encoded series is not a connected path"));
        }
        if mask.count() < cfg.halt_population {
            return Err(Error::input(
                "encoded path has fewer cells than the halt threshold",
            ));
        }

        let margin = cfg.margin as i32;
        let sites: Vec<Cell> = mask
            .cells()
            .into_iter()
            .map(|(x, y)| (x + margin, y + margin))
            .collect();
        world.seed_on_cells(&sites, 1.0)?;
        if cfg.hold_steps > 0 {
            world.stimuli_mut().push(StimulusEvent {
                start: 0,
                duration: cfg.hold_steps,
                kind: StimulusKind::AttractantPattern(sites),
                magnitude: cfg.projection_magnitude,
            })?;
        }

        let true_mean = arithmetic_mean(&series);
        let reference_row = cfg.encoding.value_to_row(true_mean, series.hi) + margin as f64;

        let mut metrics = RunMetrics::new("mean", cfg.seed);
        let c0 = world.centroid()?;
        metrics.push(StepRecord {
            step: 0,
            centroid: c0,
            population: world.population(),
            error: (c0.y - reference_row).abs(),
            target: None,
            noisy: None,
        });

        Ok(MeanSim {
            world,
            series,
            true_mean,
            reference_row,
            encoding: cfg.encoding.clone(),
            margin: cfg.margin as f64,
            halt_population: cfg.halt_population,
            max_steps: cfg.max_steps,
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
            error: (c.y - self.reference_row).abs(),
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

    pub fn finish(self) -> MeanResult {
        let final_row = self
            .metrics
            .records
            .last()
            .map(|r| r.centroid.y)
            .unwrap_or(f64::NAN);
        let final_value = self
            .encoding
            .row_to_value(final_row - self.margin, self.series.hi);
        MeanResult {
            error: (final_value - self.true_mean).abs() * self.encoding.px_per_unit,
            signed_error: (final_value - self.true_mean) * self.encoding.px_per_unit,
            final_value,
            true_mean: self.true_mean,
            series_sigma: self.series.std_dev(),
            series: self.series,
            metrics: self.metrics,
        }
    }
}

impl super::Sim for MeanSim {
    fn step(&mut self) -> bool {
        MeanSim::step(self)
    }

    fn is_done(&self) -> bool {
        MeanSim::is_done(self)
    }

    fn world(&self) -> &World {
        MeanSim::world(self)
    }

    fn metrics(&self) -> &RunMetrics {
        MeanSim::metrics(self)
    }
}

#[derive(Debug, Clone)]
pub struct MeanResult {
    pub metrics: RunMetrics,
    pub series: DataSeries,
    pub true_mean: f64,
    /// Final blob height mapped back to value units.
    pub final_value: f64,
    /// |final value - true mean| in pixels.
    pub error: f64,
    /// Positive when the final value overshoots the true mean.
    pub signed_error: f64,
    /// Population standard deviation of the series values (correlation
    /// covariate).
    pub series_sigma: f64,
}

/// Run an arithmetic-mean experiment to completion.
pub fn run_mean(cfg: &MeanRunConfig) -> Result<MeanResult> {
    let mut sim = MeanSim::new(cfg)?;
    while sim.step() {}
    Ok(sim.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_reads_back_its_value() {
        let mut cfg = MeanRunConfig::new(SeriesSource::Values {
            values: vec![60.0; 8],
            lo: 0.0,
            hi: 100.0,
        });
        cfg.seed = 1;
        let result = run_mean(&cfg).unwrap();
        // a straight band shrinks along itself; the blob height barely moves
        assert!(
            result.error <= 2.0,
            "constant series error {} (value {})",
            result.error,
            result.final_value
        );
    }

    #[test]
    fn explicit_series_is_used_verbatim() {
        let cfg = MeanRunConfig::new(SeriesSource::Values {
            values: vec![10.0, 30.0, 50.0],
            lo: 0.0,
            hi: 100.0,
        });
        let sim = MeanSim::new(&cfg).unwrap();
        assert_eq!(sim.series.values, vec![10.0, 30.0, 50.0]);
        assert_eq!(sim.true_mean, 30.0);
    }

    #[test]
    fn sorted_flag_sorts_before_encoding() {
        let mut cfg = MeanRunConfig::new(SeriesSource::Values {
            values: vec![50.0, 10.0, 30.0],
            lo: 0.0,
            hi: 100.0,
        });
        cfg.sorted = true;
        let sim = MeanSim::new(&cfg).unwrap();
        assert_eq!(sim.series.values, vec![10.0, 30.0, 50.0]);
    }

    #[test]
    fn generated_series_is_seed_deterministic() {
        let mut cfg = MeanRunConfig::new(SeriesSource::Uniform {
            n: 20,
            lo: 0.0,
            hi: 100.0,
        });
        cfg.seed = 5;
        let a = MeanSim::new(&cfg).unwrap();
        let b = MeanSim::new(&cfg).unwrap();
        assert_eq!(a.series.values, b.series.values);
    }
}
