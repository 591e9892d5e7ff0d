//! Seeded batch execution over independent runs, with CSV emission and
//! aggregation. Run `i` of a batch uses seed `base_seed + i`; a batch is
//! exactly the multiset of its runs executed separately.

use crate::error::Result;
use crate::experiments::{
    run_centroid, run_mean, run_tracking, AnySim, CentroidRunConfig, CentroidSim, MeanRunConfig,
    MeanSim, TrackingRunConfig, TrackingSim,
};
use crate::metrics::{aggregate_errors, pearson, BatchSummary, RunMetrics};
use rayon::prelude::*;
use std::path::Path;

/// A resolved experiment, ready to run at any seed.
#[derive(Debug, Clone)]
pub enum ExperimentSpec {
    Centroid(CentroidRunConfig),
    Mean(MeanRunConfig),
    Tracking(TrackingRunConfig),
}

/// Everything a single run reports to the batch layer.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub seed: u64,
    pub metrics: RunMetrics,
    /// Scored error of the run: final distance for centroid/mean,
    /// time-averaged tracking error for tracking.
    pub error: f64,
    /// Signed (value - truth) for mean runs.
    pub signed_error: Option<f64>,
    /// Correlation covariate (series sigma for mean runs).
    pub covariate: Option<f64>,
}

impl ExperimentSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentSpec::Centroid(_) => "centroid",
            ExperimentSpec::Mean(_) => "mean",
            ExperimentSpec::Tracking(_) => "track",
        }
    }

    pub fn with_seed(&self, seed: u64) -> ExperimentSpec {
        let mut spec = self.clone();
        match &mut spec {
            ExperimentSpec::Centroid(c) => c.seed = seed,
            ExperimentSpec::Mean(c) => c.seed = seed,
            ExperimentSpec::Tracking(c) => c.seed = seed,
        }
        spec
    }

    pub fn seed(&self) -> u64 {
        match self {
            ExperimentSpec::Centroid(c) => c.seed,
            ExperimentSpec::Mean(c) => c.seed,
            ExperimentSpec::Tracking(c) => c.seed,
        }
    }

    /// Build a stepping sim for this spec (frame dumps, bindings).
    pub fn make_sim(&self) -> Result<AnySim> {
        Ok(match self {
            ExperimentSpec::Centroid(c) => AnySim::Centroid(CentroidSim::new(c)?),
            ExperimentSpec::Mean(c) => AnySim::Mean(MeanSim::new(c)?),
            ExperimentSpec::Tracking(c) => AnySim::Tracking(TrackingSim::new(c)?),
        })
    }

    /// Run to completion at the spec's own seed.
    pub fn run(&self) -> Result<RunOutcome> {
        match self {
            ExperimentSpec::Centroid(c) => {
                let r = run_centroid(c)?;
                Ok(RunOutcome {
                    seed: c.seed,
                    error: r.final_error,
                    signed_error: None,
                    covariate: None,
                    metrics: r.metrics,
                })
            }
            ExperimentSpec::Mean(c) => {
                let r = run_mean(c)?;
                Ok(RunOutcome {
                    seed: c.seed,
                    error: r.error,
                    signed_error: Some(r.signed_error),
                    covariate: Some(r.series_sigma),
                    metrics: r.metrics,
                })
            }
            ExperimentSpec::Tracking(c) => {
                let r = run_tracking(c)?;
                Ok(RunOutcome {
                    seed: c.seed,
                    error: r.mean_error,
                    signed_error: None,
                    covariate: None,
                    metrics: r.metrics,
                })
            }
        }
    }
}

/// Turn a completed stepping sim into the outcome `run()` would produce.
pub fn finish_sim(sim: AnySim) -> RunOutcome {
    match sim {
        AnySim::Centroid(s) => {
            let r = s.finish();
            RunOutcome {
                seed: r.metrics.seed,
                error: r.final_error,
                signed_error: None,
                covariate: None,
                metrics: r.metrics,
            }
        }
        AnySim::Mean(s) => {
            let r = s.finish();
            RunOutcome {
                seed: r.metrics.seed,
                error: r.error,
                signed_error: Some(r.signed_error),
                covariate: Some(r.series_sigma),
                metrics: r.metrics,
            }
        }
        AnySim::Tracking(s) => {
            let r = s.finish();
            RunOutcome {
                seed: r.metrics.seed,
                error: r.mean_error,
                signed_error: None,
                covariate: None,
                metrics: r.metrics,
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct BatchOutcome {
    pub runs: Vec<RunOutcome>,
    pub summary: BatchSummary,
}

/// Execute `runs` seeded runs (seed `base_seed + i`) on a worker pool and
/// aggregate. Outcomes keep run-index order regardless of scheduling.
pub fn run_batch(spec: &ExperimentSpec, runs: usize, base_seed: u64) -> Result<BatchOutcome> {
    if runs == 0 {
        return Err(crate::Error::config("batch needs at least one run"));
    }
    let outcomes: Vec<Result<RunOutcome>> = (0..runs)
        .into_par_iter()
        .map(|i| spec.with_seed(base_seed + i as u64).run())
        .collect();
    let runs: Vec<RunOutcome> = outcomes.into_iter().collect::<Result<_>>()?;
    let summary = summarize(&runs)?;
    Ok(BatchOutcome { runs, summary })
}

/// MAE/sigma over run errors plus, when every run carried a covariate, the
/// Pearson correlation of covariate against error.
pub fn summarize(runs: &[RunOutcome]) -> Result<BatchSummary> {
    let errors: Vec<f64> = runs.iter().map(|r| r.error.abs()).collect();
    let mut summary = aggregate_errors(&errors)?;
    let covariates: Vec<f64> = runs.iter().filter_map(|r| r.covariate).collect();
    if covariates.len() == runs.len() && runs.len() >= 2 {
        summary.pearson = pearson(&covariates, &errors).ok();
    }
    Ok(summary)
}

/// Write per-run traces and the batch summary under `dir`.
///
/// Layout: `<kind>_run<index>_seed<seed>.csv` per run plus `summary.csv`.
/// The sigma column is the population (divide by n) standard deviation.
pub fn write_outputs(dir: &Path, kind: &str, outcome: &BatchOutcome) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (i, run) in outcome.runs.iter().enumerate() {
        let path = dir.join(format!("{kind}_run{i:03}_seed{}.csv", run.seed));
        let file = std::fs::File::create(path)?;
        run.metrics.write_csv(std::io::BufWriter::new(file))?;
    }
    let s = &outcome.summary;
    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    w.write_record(["experiment", "n_runs", "mae", "sigma_population", "pearson"])?;
    w.write_record([
        kind.to_string(),
        s.n.to_string(),
        s.mae.to_string(),
        s.sigma.to_string(),
        s.pearson.map(|p| p.to_string()).unwrap_or_default(),
    ])?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ShapeMask, Vec2};

    fn quick_spec() -> ExperimentSpec {
        let mut mask = ShapeMask::new(40, 40);
        crate::shapes::fill_circle(&mut mask, Vec2::new(20.0, 20.0), 12.0);
        let mut cfg = CentroidRunConfig::new(mask);
        cfg.hold_steps = 5;
        cfg.p_remove = 0.02;
        ExperimentSpec::Centroid(cfg)
    }

    #[test]
    fn batch_equals_runs_executed_separately() {
        let spec = quick_spec();
        let batch = run_batch(&spec, 3, 100).unwrap();
        for (i, run) in batch.runs.iter().enumerate() {
            let solo = spec.with_seed(100 + i as u64).run().unwrap();
            assert_eq!(run.seed, solo.seed);
            assert_eq!(run.error, solo.error);
            assert_eq!(run.metrics.records.len(), solo.metrics.records.len());
        }
    }

    #[test]
    fn outputs_land_on_disk() {
        let dir = std::env::temp_dir().join(format!("plasmo_batch_{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let batch = run_batch(&quick_spec(), 2, 7).unwrap();
        write_outputs(&dir, "centroid", &batch).unwrap();
        assert!(dir.join("centroid_run000_seed7.csv").exists());
        assert!(dir.join("centroid_run001_seed8.csv").exists());
        let summary = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
        assert!(summary.starts_with("experiment,n_runs,mae,sigma_population,pearson"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
