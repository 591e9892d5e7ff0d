// Temporary calibration probe for the mean experiment.
use plasmo::experiments::{run_mean, MeanRunConfig, SeriesSource};
use rayon::prelude::*;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let kind = args.get(1).map(String::as_str).unwrap_or("skewed");
    let runs: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10);
    let base: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(200);

    let results: Vec<_> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut cfg = match kind {
                "skewed" => {
                    let mut c = MeanRunConfig::new(SeriesSource::Skewed { n: 20 });
                    c.sorted = true;
                    c
                }
                "skewed_desc" => {
                    let mut c = MeanRunConfig::new(SeriesSource::Skewed { n: 20 });
                    c.sorted = true;
                    c.sort_descending = true;
                    c
                }
                "uniform" => MeanRunConfig::new(SeriesSource::Uniform {
                    n: 20,
                    lo: 0.0,
                    hi: 100.0,
                }),
                "uniform_sorted" => {
                    let mut c = MeanRunConfig::new(SeriesSource::Uniform {
                        n: 20,
                        lo: 0.0,
                        hi: 100.0,
                    });
                    c.sorted = true;
                    c
                }
                _ => panic!("kind?"),
            };
            cfg.seed = base + i;
            run_mean(&cfg).unwrap()
        })
        .collect();

    let mut above = 0;
    for (i, r) in results.iter().enumerate() {
        if r.signed_error > 0.0 {
            above += 1;
        }
        let fx = r.metrics.records.last().map(|rec| rec.centroid.x).unwrap_or(0.0);
        println!(
            "run {i:2} seed {} mean {:7.3} final {:7.3} signed {:+7.3} halt {} xpos {:.1}",
            base + i as u64,
            r.true_mean,
            r.final_value,
            r.signed_error,
            r.metrics.halt_step(),
            (fx - 38.0) / 20.0
        );
    }
    let mae = results.iter().map(|r| r.error).sum::<f64>() / runs as f64;
    let sigmas: Vec<f64> = results.iter().map(|r| r.series_sigma).collect();
    let errs: Vec<f64> = results.iter().map(|r| r.error).collect();
    let rho = plasmo::metrics::pearson(&sigmas, &errs).unwrap_or(f64::NAN);
    println!("MAE {mae:.3}  above-true-mean {above}/{runs}  pearson {rho:.3}");
}
