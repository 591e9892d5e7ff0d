// Temporary probe: systematic centroid drift of an unstimulated blob.
use plasmo::world::{World, WorldConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let steps: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    for seed in [1u64, 2, 3] {
        let mut wc = WorldConfig::new(200, 200);
        wc.damping = 0.9;
        let mut w = World::new(wc, seed).unwrap();
        let mut sites = Vec::new();
        for y in 70..130 {
            for x in 70..130 {
                let dx = x as f64 - 99.5;
                let dy = y as f64 - 99.5;
                if dx * dx + dy * dy <= 30.0 * 30.0 {
                    sites.push((x, y));
                }
            }
        }
        w.seed_on_cells(&sites, 1.0).unwrap();
        let c0 = w.centroid().unwrap();
        for s in 1..=steps {
            w.scheduler_step();
            if s % 2000 == 0 {
                let c = w.centroid().unwrap();
                println!(
                    "seed {seed} step {s:6} drift ({:+.3}, {:+.3})",
                    c.x - c0.x,
                    c.y - c0.y
                );
            }
        }
    }
}
