//! Experiment config files: one TOML document per experiment listing every
//! tunable with its default. Unknown keys are rejected so every acceptance
//! run is fully auditable from its config.

use crate::agent::SensorParams;
use crate::batch::ExperimentSpec;
use crate::error::{Error, Result};
use crate::experiments::{
    CentroidRunConfig, MeanRunConfig, SeriesSource, ShrinkSchedule, SpiralParams, StimulusMode,
    TrackingRunConfig,
};
use crate::geometry::{load_shape_mask, SeriesEncoding, ShapeMask};
use crate::population::TurnoverPolicy;
use crate::raster::GreyImage;
use crate::shapes::builtin_mask;
use crate::world::StageOrder;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    /// "centroid", "mean" or "track".
    pub experiment: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// "motor-first" (default) or "sensory-first".
    #[serde(default = "default_stage_order")]
    pub stage_order: String,
    #[serde(default)]
    pub sensors: SensorsSection,
    pub centroid: Option<CentroidSection>,
    pub mean: Option<MeanSection>,
    pub track: Option<TrackSection>,
}

fn default_runs() -> usize {
    10
}

fn default_stage_order() -> String {
    "motor-first".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorsSection {
    #[serde(default = "d_offset")]
    pub offset: f64,
    #[serde(default = "d_angle")]
    pub angle: f64,
    #[serde(default = "d_rotation")]
    pub rotation: f64,
    #[serde(default)]
    pub resolution: f64,
}

impl Default for SensorsSection {
    fn default() -> Self {
        SensorsSection {
            offset: d_offset(),
            angle: d_angle(),
            rotation: d_rotation(),
            resolution: 0.0,
        }
    }
}

fn d_offset() -> f64 {
    9.0
}
fn d_angle() -> f64 {
    90.0
}
fn d_rotation() -> f64 {
    45.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentroidSection {
    /// `builtin:<name>` or a PGM path (relative to the config file).
    pub mask: String,
    #[serde(default = "d_threshold")]
    pub threshold: u8,
    #[serde(default = "d_hold_centroid")]
    pub hold_steps: u64,
    /// "immediate" or "delayed".
    #[serde(default = "d_schedule")]
    pub shrink: String,
    #[serde(default = "d_shrink_delay")]
    pub shrink_delay: u64,
    #[serde(default = "d_p_remove")]
    pub p_remove: f64,
    #[serde(default = "d_halt")]
    pub halt_population: usize,
    #[serde(default = "d_damping")]
    pub damping: f64,
    #[serde(default = "d_projection")]
    pub projection_magnitude: f64,
    #[serde(default = "d_density")]
    pub density: f64,
    /// Defaults to twice the sensor offset.
    pub margin: Option<usize>,
    #[serde(default = "d_max_steps")]
    pub max_steps: u64,
}

fn d_threshold() -> u8 {
    128
}
fn d_hold_centroid() -> u64 {
    50
}
fn d_schedule() -> String {
    "immediate".into()
}
fn d_shrink_delay() -> u64 {
    5000
}
fn d_p_remove() -> f64 {
    0.0005
}
fn d_halt() -> usize {
    50
}
fn d_damping() -> f64 {
    0.9
}
fn d_projection() -> f64 {
    10.0
}
fn d_density() -> f64 {
    1.0
}
fn d_max_steps() -> u64 {
    60_000
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanSection {
    /// "uniform", "skewed" or "values".
    #[serde(default = "d_source")]
    pub source: String,
    #[serde(default)]
    pub values: Vec<f64>,
    #[serde(default = "d_n")]
    pub n: usize,
    #[serde(default)]
    pub lo: f64,
    #[serde(default = "d_hi")]
    pub hi: f64,
    #[serde(default)]
    pub sorted: bool,
    #[serde(default = "d_hold_mean")]
    pub hold_steps: u64,
    #[serde(default = "d_halt")]
    pub halt_population: usize,
    #[serde(default = "d_damping")]
    pub damping: f64,
    #[serde(default = "d_projection")]
    pub projection_magnitude: f64,
    #[serde(default = "d_x_spacing")]
    pub x_spacing: usize,
    #[serde(default = "d_stroke")]
    pub stroke_width: f64,
    #[serde(default = "d_px_per_unit")]
    pub px_per_unit: f64,
    #[serde(default = "d_encoding_margin")]
    pub encoding_margin: usize,
    #[serde(default = "d_turnover_frequency")]
    pub turnover_frequency: u64,
    pub margin: Option<usize>,
    #[serde(default = "d_max_steps")]
    pub max_steps: u64,
}

fn d_source() -> String {
    "uniform".into()
}
fn d_n() -> usize {
    20
}
fn d_hi() -> f64 {
    100.0
}
fn d_hold_mean() -> u64 {
    20
}
fn d_x_spacing() -> usize {
    20
}
fn d_stroke() -> f64 {
    6.0
}
fn d_px_per_unit() -> f64 {
    1.0
}
fn d_encoding_margin() -> usize {
    20
}
fn d_turnover_frequency() -> u64 {
    2
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackSection {
    /// "+ve", "-ve" or "+-ve".
    pub mode: String,
    #[serde(default = "d_population")]
    pub population: usize,
    #[serde(default = "d_init_window")]
    pub init_window: usize,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default = "d_update_period")]
    pub update_period: u64,
    #[serde(default = "d_projection_steps")]
    pub projection_steps: u64,
    #[serde(default = "d_mask_size")]
    pub mask_size: i32,
    #[serde(default = "d_illumination_weight")]
    pub illumination_weight: f64,
    #[serde(default = "d_reset_probability")]
    pub reset_probability: f64,
    #[serde(default = "d_damping_track")]
    pub damping: f64,
    #[serde(default = "d_arena")]
    pub arena: usize,
    #[serde(default = "d_spiral_growth")]
    pub spiral_growth: f64,
    #[serde(default = "d_spiral_step")]
    pub spiral_step: f64,
    #[serde(default = "d_coalescence")]
    pub coalescence_steps: u64,
    #[serde(default = "d_point_magnitude")]
    pub point_magnitude: f64,
    /// Sensor resolution override for tracking runs.
    #[serde(default = "d_sensor_resolution")]
    pub sensor_resolution: f64,
    #[serde(default = "d_max_steps")]
    pub max_steps: u64,
}

fn d_sensor_resolution() -> f64 {
    0.0
}

fn d_population() -> usize {
    1500
}
fn d_init_window() -> usize {
    80
}
fn d_update_period() -> u64 {
    25
}
fn d_projection_steps() -> u64 {
    10
}
fn d_mask_size() -> i32 {
    50
}
fn d_illumination_weight() -> f64 {
    0.1
}
fn d_reset_probability() -> f64 {
    0.05
}
fn d_damping_track() -> f64 {
    0.93
}
fn d_arena() -> usize {
    400
}
fn d_spiral_growth() -> f64 {
    36.0
}
fn d_spiral_step() -> f64 {
    0.0042
}
fn d_coalescence() -> u64 {
    250
}
fn d_point_magnitude() -> f64 {
    200.0
}

impl ExperimentFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn sensors(&self) -> SensorParams {
        SensorParams {
            offset: self.sensors.offset,
            angle_deg: self.sensors.angle,
            rotation_deg: self.sensors.rotation,
            resolution: self.sensors.resolution,
        }
    }

    fn stage_order(&self) -> Result<StageOrder> {
        match self.stage_order.as_str() {
            "motor-first" => Ok(StageOrder::MotorThenSensory),
            "sensory-first" => Ok(StageOrder::SensoryThenMotor),
            other => Err(Error::config(format!("unknown stage order '{other}'"))),
        }
    }

    /// Resolve to a runnable spec; `base_dir` anchors relative mask paths.
    pub fn resolve(&self, base_dir: &Path) -> Result<ExperimentSpec> {
        let sensors = self.sensors();
        let stage_order = self.stage_order()?;
        match self.experiment.as_str() {
            "centroid" => {
                let section = self
                    .centroid
                    .as_ref()
                    .ok_or_else(|| Error::config("missing [centroid] section"))?;
                let mask = resolve_mask(&section.mask, section.threshold, base_dir)?;
                let mut cfg = CentroidRunConfig::new(mask);
                cfg.hold_steps = section.hold_steps;
                cfg.schedule = match section.shrink.as_str() {
                    "immediate" => ShrinkSchedule::Immediate,
                    "delayed" => ShrinkSchedule::Delayed(section.shrink_delay),
                    other => {
                        return Err(Error::config(format!("unknown shrink schedule '{other}'")))
                    }
                };
                cfg.p_remove = section.p_remove;
                cfg.halt_population = section.halt_population;
                cfg.damping = section.damping;
                cfg.projection_magnitude = section.projection_magnitude;
                cfg.density = section.density;
                cfg.margin = section
                    .margin
                    .unwrap_or((2.0 * sensors.offset).ceil() as usize);
                cfg.sensors = sensors;
                cfg.stage_order = stage_order;
                cfg.max_steps = section.max_steps;
                cfg.seed = self.seed;
                Ok(ExperimentSpec::Centroid(cfg))
            }
            "mean" => {
                let section = self
                    .mean
                    .as_ref()
                    .ok_or_else(|| Error::config("missing [mean] section"))?;
                let source = match section.source.as_str() {
                    "uniform" => SeriesSource::Uniform {
                        n: section.n,
                        lo: section.lo,
                        hi: section.hi,
                    },
                    "skewed" => SeriesSource::Skewed { n: section.n },
                    "values" => SeriesSource::Values {
                        values: section.values.clone(),
                        lo: section.lo,
                        hi: section.hi,
                    },
                    other => return Err(Error::config(format!("unknown series source '{other}'"))),
                };
                let mut cfg = MeanRunConfig::new(source);
                cfg.sorted = section.sorted;
                cfg.encoding = SeriesEncoding {
                    x_spacing: section.x_spacing,
                    stroke_width: section.stroke_width,
                    px_per_unit: section.px_per_unit,
                    margin: section.encoding_margin,
                };
                cfg.hold_steps = section.hold_steps;
                cfg.turnover = TurnoverPolicy {
                    frequency: section.turnover_frequency,
                    ..TurnoverPolicy::default()
                };
                cfg.halt_population = section.halt_population;
                cfg.damping = section.damping;
                cfg.projection_magnitude = section.projection_magnitude;
                cfg.margin = section
                    .margin
                    .unwrap_or((2.0 * sensors.offset).ceil() as usize);
                cfg.sensors = sensors;
                cfg.stage_order = stage_order;
                cfg.max_steps = section.max_steps;
                cfg.seed = self.seed;
                Ok(ExperimentSpec::Mean(cfg))
            }
            "track" => {
                let section = self
                    .track
                    .as_ref()
                    .ok_or_else(|| Error::config("missing [track] section"))?;
                let mode = match section.mode.as_str() {
                    "+ve" | "positive" => StimulusMode::Positive,
                    "-ve" | "negative" => StimulusMode::Negative,
                    "+-ve" | "alternating" => StimulusMode::Alternating,
                    other => return Err(Error::config(format!("unknown stimulus mode '{other}'"))),
                };
                let mut cfg = TrackingRunConfig::new(mode);
                cfg.sensors = sensors;
                cfg.sensors.resolution = section.sensor_resolution;
                cfg.population = section.population;
                cfg.init_window = section.init_window;
                cfg.noise_sigma = section.noise_sigma;
                cfg.update_period = section.update_period;
                cfg.projection_steps = section.projection_steps;
                cfg.mask_size = section.mask_size;
                cfg.illumination_weight = section.illumination_weight;
                cfg.reset_probability = section.reset_probability;
                cfg.damping = section.damping;
                cfg.arena = section.arena;
                cfg.spiral = SpiralParams {
                    radial_growth: section.spiral_growth,
                    angular_step: section.spiral_step,
                };
                cfg.coalescence_steps = section.coalescence_steps;
                cfg.point_magnitude = section.point_magnitude;
                cfg.stage_order = stage_order;
                cfg.max_steps = section.max_steps;
                cfg.seed = self.seed;
                Ok(ExperimentSpec::Tracking(cfg))
            }
            other => Err(Error::config(format!("unknown experiment '{other}'"))),
        }
    }
}

fn resolve_mask(spec: &str, threshold: u8, base_dir: &Path) -> Result<ShapeMask> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_mask(name);
    }
    let mut path = PathBuf::from(spec);
    if path.is_relative() {
        path = base_dir.join(path);
    }
    let image = GreyImage::read_pgm_file(&path)?;
    load_shape_mask(&image, threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_centroid_config_resolves_with_defaults() {
        let text = r#"
experiment = "centroid"
seed = 7

[centroid]
mask = "builtin:circle"
"#;
        let file = ExperimentFile::parse(text).unwrap();
        let spec = file.resolve(Path::new(".")).unwrap();
        match spec {
            ExperimentSpec::Centroid(c) => {
                assert_eq!(c.hold_steps, 50);
                assert_eq!(c.p_remove, 0.0005);
                assert_eq!(c.halt_population, 50);
                assert_eq!(c.margin, 18);
                assert_eq!(c.seed, 7);
            }
            _ => panic!("wrong spec kind"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"
experiment = "centroid"
bogus = 1

[centroid]
mask = "builtin:circle"
"#;
        assert!(ExperimentFile::parse(text).is_err());

        let nested = r#"
experiment = "centroid"

[centroid]
mask = "builtin:circle"
not_a_key = true
"#;
        assert!(ExperimentFile::parse(nested).is_err());
    }

    #[test]
    fn track_modes_parse() {
        for (text_mode, want) in [
            ("+ve", StimulusMode::Positive),
            ("-ve", StimulusMode::Negative),
            ("+-ve", StimulusMode::Alternating),
        ] {
            let text = format!(
                "experiment = \"track\"\n[track]\nmode = \"{text_mode}\"\n"
            );
            let file = ExperimentFile::parse(&text).unwrap();
            match file.resolve(Path::new(".")).unwrap() {
                ExperimentSpec::Tracking(c) => assert_eq!(c.mode, want),
                _ => panic!("wrong spec kind"),
            }
        }
    }

    #[test]
    fn mean_defaults_follow_the_experiment_setup() {
        let text = "experiment = \"mean\"\n[mean]\nsorted = true\n";
        let file = ExperimentFile::parse(text).unwrap();
        match file.resolve(Path::new(".")).unwrap() {
            ExperimentSpec::Mean(c) => {
                assert!(c.sorted);
                assert_eq!(c.encoding.x_spacing, 20);
                assert_eq!(c.encoding.stroke_width, 6.0);
                assert_eq!(c.hold_steps, 20);
                assert_eq!(c.turnover.frequency, 2);
            }
            _ => panic!("wrong spec kind"),
        }
    }

    #[test]
    fn section_must_match_experiment() {
        let text = "experiment = \"mean\"\n";
        let file = ExperimentFile::parse(text).unwrap();
        assert!(file.resolve(Path::new(".")).is_err());
    }
}
