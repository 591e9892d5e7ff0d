// Temporary probe: free amoeboid locomotion of an oscillatory blob.
use plasmo::agent::MotorMode;
use plasmo::world::{World, WorldConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let p_reset: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let damping: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.93);
    for seed in [3u64, 4, 5] {
        let mut wc = WorldConfig::new(300, 300);
        wc.damping = damping;
        wc.motor = MotorMode::Oscillatory {
            reset_probability: p_reset,
        };
        let mut w = World::new(wc, seed).unwrap();
        w.seed_window(1500, 80).unwrap();
        for _ in 0..250 {
            w.scheduler_step();
        }
        let mut prev = w.centroid().unwrap();
        let mut path_len = 0.0;
        let mut max_from_start = 0.0f64;
        let start = prev;
        for s in 1..=3000u64 {
            w.scheduler_step();
            if s % 100 == 0 {
                let c = w.centroid().unwrap();
                path_len += c.dist(prev);
                max_from_start = max_from_start.max(c.dist(start));
                prev = c;
            }
        }
        let mover = w.particles().iter().filter(|p| p.moved).count() as f64
            / w.population() as f64;
        let mean5: f64 = w
            .particles()
            .iter()
            .map(|p| w.occupancy().count_window(p.pos.cell(), 2) as f64)
            .sum::<f64>()
            / w.population() as f64;
        println!(
            "seed {seed}: path(100-step hops) {path_len:6.1} px, max excursion {max_from_start:6.1} px, speed {:.3} px/step, mover {mover:.2} mean5x5 {mean5:.1}",
            path_len / 3000.0
        );
    }
}
