//! Per-run traces and batch aggregation (MAE, sigma, Pearson correlation).

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use std::io::Write;

/// One recorded scheduler step.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub step: u64,
    pub centroid: Vec2,
    pub population: usize,
    /// Distance to the reference quantity, pixels.
    pub error: f64,
    /// True target position (tracking runs).
    pub target: Option<Vec2>,
    /// Noise-contaminated stimulus position (tracking runs).
    pub noisy: Option<Vec2>,
}

/// Full trace of one seeded run.
#[derive(Debug, Clone)]
pub struct RunMetrics {
    pub experiment: String,
    pub seed: u64,
    pub records: Vec<StepRecord>,
}

impl RunMetrics {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        RunMetrics {
            experiment: experiment.into(),
            seed,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: StepRecord) {
        debug_assert!(record.error >= 0.0, "negative error");
        if let Some(last) = self.records.last() {
            debug_assert!(record.step > last.step, "steps must strictly increase");
        }
        self.records.push(record);
    }

    pub fn final_error(&self) -> f64 {
        self.records.last().map(|r| r.error).unwrap_or(f64::NAN)
    }

    pub fn halt_step(&self) -> u64 {
        self.records.last().map(|r| r.step).unwrap_or(0)
    }

    fn has_target_columns(&self) -> bool {
        self.records.iter().any(|r| r.target.is_some())
    }

    /// Write the trace as CSV: header plus one row per recorded step.
    /// Float fields use shortest round-trip formatting, so traces from
    /// equal-seed runs are byte-identical.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let tracking = self.has_target_columns();
        if tracking {
            w.write_record([
                "step", "x", "y", "population", "error", "target_x", "target_y", "noisy_x",
                "noisy_y",
            ])?;
        } else {
            w.write_record(["step", "x", "y", "population", "error"])?;
        }
        for r in &self.records {
            let mut row = vec![
                r.step.to_string(),
                r.centroid.x.to_string(),
                r.centroid.y.to_string(),
                r.population.to_string(),
                r.error.to_string(),
            ];
            if tracking {
                let t = r.target.unwrap_or_default();
                let n = r.noisy.unwrap_or_default();
                row.extend([
                    t.x.to_string(),
                    t.y.to_string(),
                    n.x.to_string(),
                    n.y.to_string(),
                ]);
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|_| Error::input("csv was not utf-8"))
    }
}

/// Aggregate statistics over a batch of runs.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub n: usize,
    /// Mean of per-run final absolute errors, pixels.
    pub mae: f64,
    /// Population (divide by n) standard deviation of the same.
    pub sigma: f64,
    /// Correlation of final error against a per-run covariate, when one
    /// was recorded.
    pub pearson: Option<f64>,
}

/// MAE and population sigma of the runs' final errors.
pub fn aggregate(runs: &[RunMetrics]) -> Result<BatchSummary> {
    let errors: Vec<f64> = runs.iter().map(|r| r.final_error().abs()).collect();
    aggregate_errors(&errors)
}

pub fn aggregate_errors(errors: &[f64]) -> Result<BatchSummary> {
    if errors.is_empty() {
        return Err(Error::input("aggregate of an empty batch"));
    }
    let n = errors.len() as f64;
    let mae = errors.iter().sum::<f64>() / n;
    let var = errors.iter().map(|e| (e - mae).powi(2)).sum::<f64>() / n;
    Ok(BatchSummary {
        n: errors.len(),
        mae,
        sigma: var.sqrt(),
        pearson: None,
    })
}

/// Sample Pearson correlation, computational (single-pass sums) form.
/// Errors on mismatched lengths, fewer than two points, or constant input.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::input("pearson needs two equal-length samples"));
    }
    let n = xs.len() as f64;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    let cov = n * sxy - sx * sy;
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx <= 0.0 || vy <= 0.0 {
        return Err(Error::Estimation(
            "correlation undefined for constant input".into(),
        ));
    }
    Ok((cov / (vx.sqrt() * vy.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_with_final_error(e: f64) -> RunMetrics {
        let mut m = RunMetrics::new("test", 0);
        m.push(StepRecord {
            step: 1,
            centroid: Vec2::new(0.0, 0.0),
            population: 10,
            error: e,
            target: None,
            noisy: None,
        });
        m
    }

    #[test]
    fn aggregate_basics() {
        let runs: Vec<RunMetrics> = [3.0, 3.0, 3.0].iter().map(|&e| run_with_final_error(e)).collect();
        let s = aggregate(&runs).unwrap();
        assert_eq!((s.mae, s.sigma), (3.0, 0.0));

        let runs: Vec<RunMetrics> = [0.0, 4.0].iter().map(|&e| run_with_final_error(e)).collect();
        let s = aggregate(&runs).unwrap();
        assert_eq!((s.mae, s.sigma), (2.0, 2.0));

        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn aggregate_is_permutation_invariant() {
        let a = aggregate_errors(&[1.0, 5.0, 2.5, 0.25]).unwrap();
        let b = aggregate_errors(&[0.25, 2.5, 5.0, 1.0]).unwrap();
        assert!((a.mae - b.mae).abs() < 1e-12);
        assert!((a.sigma - b.sigma).abs() < 1e-12);
    }

    #[test]
    fn pearson_exact_lines() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        assert!((pearson(&xs, &ys).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_null_on_independent_draws() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>()).collect();
        let ys: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>()).collect();
        let rho = pearson(&xs, &ys).unwrap();
        assert!(rho.abs() < 0.05, "rho {rho}");
    }

    #[test]
    fn pearson_error_cases() {
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
        assert!(pearson(&[2.0, 2.0], &[1.0, 3.0]).is_err());
    }

    #[test]
    fn csv_shape() {
        let m = RunMetrics::new("x", 3);
        let s = m.to_csv_string().unwrap();
        assert_eq!(s, "step,x,y,population,error\n");

        let mut m = run_with_final_error(1.5);
        m.push(StepRecord {
            step: 2,
            centroid: Vec2::new(1.25, 2.5),
            population: 9,
            error: 0.5,
            target: None,
            noisy: None,
        });
        let s = m.to_csv_string().unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], "2,1.25,2.5,9,0.5");
        // round-trip parse equals source
        let mut rdr = csv::Reader::from_reader(s.as_bytes());
        let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(&rows[1][4], "0.5");
    }
}
