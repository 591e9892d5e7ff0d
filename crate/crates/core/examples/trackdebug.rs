// Temporary: watch engagement during a tracking run.
use plasmo::experiments::{StimulusMode, TrackingRunConfig, TrackingSim};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = match args.get(1).map(String::as_str) {
        Some("pos") => StimulusMode::Positive,
        Some("alt") => StimulusMode::Alternating,
        _ => StimulusMode::Negative,
    };
    let mut cfg = TrackingRunConfig::new(mode);
    cfg.seed = 1;
    let mut sim = TrackingSim::new(&cfg).unwrap();
    while sim.step() {
        let s = sim.world().step_count();
        if s % 2000 == 0 {
            let r = sim.metrics().records.last().unwrap();
            let t = r.target.unwrap();
            let b = r.centroid;
            println!(
                "step {s:6} target ({:5.1},{:5.1}) blob ({:5.1},{:5.1}) err {:6.2} field@target {:7.2}",
                t.x, t.y, b.x, b.y, r.error,
                sim.world().field().sample((t.x as i32, t.y as i32)),
            );
        }
    }
}
