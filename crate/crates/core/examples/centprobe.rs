// Temporary calibration probe for the centroid experiment.
use plasmo::experiments::{run_centroid, CentroidRunConfig, ShrinkSchedule};
use plasmo::shapes::builtin_mask;
use rayon::prelude::*;

fn batch(shape: &str, schedule: ShrinkSchedule, base: u64, runs: u64) -> (f64, f64, f64) {
    let results: Vec<_> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut cfg = CentroidRunConfig::new(builtin_mask(shape).unwrap());
            cfg.schedule = schedule;
            cfg.seed = base + i;
            run_centroid(&cfg).unwrap()
        })
        .collect();
    let n = runs as f64;
    let plateau = results.iter().map(|r| r.shrink_plateau_error).sum::<f64>() / n;
    let fin = results.iter().map(|r| r.final_error).sum::<f64>() / n;
    let var = results
        .iter()
        .map(|r| (r.shrink_plateau_error - plateau).powi(2))
        .sum::<f64>()
        / n;
    (plateau, var.sqrt(), fin)
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let shape = args.get(1).cloned().unwrap_or_else(|| "lizard".into());
    let runs: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10);
    for base in [10u64, 300, 7000] {
        let (pi, si, fi) = batch(&shape, ShrinkSchedule::Immediate, base, runs);
        let (pd, sd, fd) = batch(&shape, ShrinkSchedule::Delayed(5000), base, runs);
        let ok = if pd >= pi { "ordering OK" } else { "ordering FLIP" };
        println!(
            "base {base:5}: imm plateau {pi:.2} (s {si:.2}, final {fi:.2}) | del plateau {pd:.2} (s {sd:.2}, final {fd:.2}) {ok}"
        );
    }
}
