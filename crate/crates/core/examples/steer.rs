// Temporary probe: steered blob speed under a constantly retreating
// stimulus, by mode and reset probability.
use plasmo::agent::MotorMode;
use plasmo::stimulus::{StimulusEvent, StimulusKind};
use plasmo::world::{World, WorldConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).cloned().unwrap_or_else(|| "neg".into());
    let p_reset: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.05);
    let magnitude: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(200.0);
    let lead: i32 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(20);
    let duty: u64 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(10);

    let mut wc = WorldConfig::new(600, 160);
    wc.damping = 0.93;
    wc.sensors.resolution = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(0.0);
    wc.motor = if p_reset >= 1.5 {
        MotorMode::Fluid
    } else {
        MotorMode::Oscillatory { reset_probability: p_reset }
    };
    let mut w = World::new(wc, 5).unwrap();
    // seed at the left end
    {
        use rand::Rng;
        let mut placed = 0;
        while placed < 1500 {
            let x = w.rng_mut().gen_range(40..120);
            let y = w.rng_mut().gen_range(40..120);
            if w.occupancy().is_free((x, y)) {
                let h = w.rng_mut().gen_range(0.0..360.0);
                w.add_particle(plasmo::geometry::Vec2::new(x as f64, y as f64), h).unwrap();
                placed += 1;
            }
        }
    }
    for _ in 0..250 {
        w.scheduler_step();
    }
    let noise: f64 = args.get(7).and_then(|v| v.parse().ok()).unwrap_or(0.0);
    // every 25 steps, stimulus placed `lead` px right of the blob centroid
    let mut last_report = w.centroid().unwrap();
    for s in 0..6000u64 {
        let step = w.step_count();
        if step % 25 == 0 {
            let c = w.centroid().unwrap();
            let noisy = plasmo::experiments::add_noise(
                plasmo::geometry::Vec2::new(c.x + lead as f64, c.y),
                noise,
                590.0,
                150.0,
                w.rng_mut(),
            );
            let sx = (noisy.x as i32).min(580);
            let sy = noisy.y as i32;
            let ev = match mode.as_str() {
                "pos" => StimulusEvent {
                    start: step,
                    duration: duty,
                    kind: StimulusKind::AttractantPoints(vec![(sx, sy)]),
                    magnitude,
                },
                _ => StimulusEvent {
                    start: step,
                    duration: duty,
                    kind: StimulusKind::Illumination {
                        x0: sx - 25,
                        y0: sy - 25,
                        x1: sx + 25,
                        y1: sy + 25,
                    },
                    magnitude: 0.0,
                },
            };
            w.stimuli_mut().push(ev).unwrap();
        }
        w.scheduler_step();
        if s % 1000 == 999 {
            let c = w.centroid().unwrap();
            println!(
                "step +{:4}: centroid x {:6.1} (dx {:+5.1}, speed {:.4} px/step)",
                s + 1,
                c.x,
                c.x - last_report.x,
                (c.x - last_report.x) / 1000.0
            );
            last_report = c;
        }
    }
}
