// Temporary probe: blob response to a strong persistent point attractant
// just outside its rim.
use plasmo::agent::MotorMode;
use plasmo::stimulus::{StimulusEvent, StimulusKind};
use plasmo::world::{World, WorldConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let magnitude: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(200.0);
    let offset: i32 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(40);
    let p_reset: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0.05);

    let mut wc = WorldConfig::new(200, 200);
    wc.damping = 0.93;
    wc.motor = MotorMode::Oscillatory {
        reset_probability: p_reset,
    };
    let mut w = World::new(wc, 5).unwrap();
    w.seed_window(1500, 80).unwrap();
    for _ in 0..250 {
        w.scheduler_step();
    }
    let c0 = w.centroid().unwrap();
    let site = ((100 + offset) as i32, 100i32);
    let start = w.step_count();
    w.stimuli_mut()
        .push(StimulusEvent {
            start,
            duration: 100_000,
            kind: StimulusKind::AttractantPoints(vec![site]),
            magnitude,
        })
        .unwrap();
    for s in 0..1200u64 {
        w.scheduler_step();
        if s % 200 == 199 {
            let c = w.centroid().unwrap();
            let peak = w.field().sample(site);
            let mid = w.field().sample((site.0 - 12, site.1));
            let pool = w.field().sample((c.x as i32, c.y as i32));
            println!(
                "step +{:4}: centroid ({:6.1},{:6.1}) moved {:+6.1} | field: site {:8.1} mid(-12px) {:6.2} pool {:6.2}",
                s + 1, c.x, c.y, c.x - c0.x, peak, mid, pool
            );
        }
    }
}
