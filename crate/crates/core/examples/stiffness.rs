// Temporary probe: centroid diffusivity and density of a small fluid blob.
use plasmo::world::{StageOrder, World, WorldConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let order = match args.get(1).map(String::as_str) {
        Some("sensory") => StageOrder::SensoryThenMotor,
        _ => StageOrder::MotorThenSensory,
    };
    let n_target: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(200);

    let mut disp2_sum = 0.0;
    let mut seeds = 0.0;
    for seed in 1..=4u64 {
        let mut wc = WorldConfig::new(120, 120);
        wc.damping = 0.9;
        wc.stage_order = order;
        let mut w = World::new(wc, seed).unwrap();
        let r = (n_target as f64 / std::f64::consts::PI).sqrt();
        let mut sites = Vec::new();
        for y in 0..120 {
            for x in 0..120 {
                let dx = x as f64 - 60.0;
                let dy = y as f64 - 60.0;
                if dx * dx + dy * dy <= r * r {
                    sites.push((x, y));
                }
            }
        }
        w.seed_on_cells(&sites, 1.0).unwrap();
        for _ in 0..500 {
            w.scheduler_step(); // settle
        }
        let c0 = w.centroid().unwrap();
        let mut movers = 0usize;
        let mut steps = 0usize;
        for _ in 0..4000 {
            w.scheduler_step();
            movers += w.particles().iter().filter(|p| p.moved).count();
            steps += w.population();
        }
        let c1 = w.centroid().unwrap();
        let d2 = (c1.x - c0.x).powi(2) + (c1.y - c0.y).powi(2);
        let mean5: f64 = w
            .particles()
            .iter()
            .map(|p| w.occupancy().count_window(p.pos.cell(), 2) as f64)
            .sum::<f64>()
            / w.population() as f64;
        println!(
            "seed {seed}: pop {} disp2 {:7.2} mover_frac {:.2} mean5x5 {:.1}",
            w.population(),
            d2,
            movers as f64 / steps as f64,
            mean5
        );
        disp2_sum += d2;
        seeds += 1.0;
    }
    println!("mean squared displacement over 4000 steps: {:.2}", disp2_sum / seeds);
}
