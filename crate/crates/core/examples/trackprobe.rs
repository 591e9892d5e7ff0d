// Temporary calibration probe for the tracking experiment.
use plasmo::experiments::{run_tracking, StimulusMode, TrackingRunConfig};
use rayon::prelude::*;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let sigma: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let growth: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(8.0);
    let step: f64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let magnitude: f64 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(10.0);

    let modes = [
        ("pos", StimulusMode::Positive),
        ("neg", StimulusMode::Negative),
        ("alt", StimulusMode::Alternating),
    ];
    let results: Vec<_> = modes
        .par_iter()
        .map(|(name, mode)| {
            let mut cfg = TrackingRunConfig::new(*mode);
            cfg.noise_sigma = sigma;
            cfg.seed = seed;
            cfg.spiral.radial_growth = growth;
            cfg.spiral.angular_step = step;
            cfg.point_magnitude = magnitude;
            let r = run_tracking(&cfg).unwrap();
            (name, r)
        })
        .collect();

    let half_diag = (2.0f64 * 400.0 * 400.0).sqrt() / 2.0;
    for (name, r) in &results {
        let len = r.metrics.records.len();
        println!(
            "{name}: steps {len} mean_err {:7.2} max_err {:7.2} (half-diag {half_diag:.0}) final_pop {}",
            r.mean_error,
            r.max_error,
            r.metrics.records.last().map(|x| x.population).unwrap_or(0)
        );
    }
}
